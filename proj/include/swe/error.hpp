#pragma once

#include <stdexcept>
#include <string>

namespace swe {

enum class ErrorCode {
    InvalidArgument,
    SymmetryViolation,
    DimensionError,
    SizeCapExceeded,
    ShapeMismatch,
    TooShort,
    AssumptionViolated,
    NonPositiveVariation,
    ToleranceNotMet,
    NotPSD,
    SingularSystem,
};

const char* error_name(ErrorCode c);

// True for failures of the numerics (as opposed to bad input).
bool is_numerical(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, const std::string& what,
                    ErrorCode code = ErrorCode::InvalidArgument) {
    if (!cond) throw Error(code, what);
}

}  // namespace swe
