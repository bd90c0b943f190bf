#include "swe/error.hpp"

namespace swe {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SymmetryViolation: return "SymmetryViolation";
        case ErrorCode::DimensionError: return "DimensionError";
        case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::AssumptionViolated: return "AssumptionViolated";
        case ErrorCode::NonPositiveVariation: return "NonPositiveVariation";
        case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::SingularSystem: return "SingularSystem";
    }
    return "Error";
}

bool is_numerical(ErrorCode c) {
    return c == ErrorCode::ToleranceNotMet || c == ErrorCode::NotPSD ||
           c == ErrorCode::SingularSystem;
}

}  // namespace swe
