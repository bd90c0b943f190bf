#include "swe/increments.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>

#include "swe/error.hpp"

namespace swe {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double inc_p(const Fn1& f, int p, double z) {
    require(p >= 1, "increment order must be >= 1");
    require(p <= 60, "increment order too large for exact binomial weights");
    double acc = 0.0;
    if (p % 2 == 0) {
        const double base = z - p / 2;
        for (int q = 0; q <= p; ++q) {
            const double w = static_cast<double>(binomial(p, q)) * (((p - q) % 2) ? -1.0 : 1.0);
            acc += w * f(base + q);
        }
    } else {
        const int h = (p - 1) / 2;
        for (int q = 0; q <= p - 1; ++q) {
            const double w = static_cast<double>(binomial(p - 1, q)) * ((q % 2) ? -1.0 : 1.0);
            acc += w * (f(z + q + 1 - h) - f(z + q - 1 - h));
        }
    }
    return acc;
}

double inc2_2d(const Fn2& h, double q, double z) {
    return 4.0 * h(q, z) + h(q + 1, z + 1) + h(q + 1, z - 1) + h(q - 1, z + 1) +
           h(q - 1, z - 1) - 2.0 * (h(q, z + 1) + h(q, z - 1) + h(q - 1, z) + h(q + 1, z));
}

namespace {

// cos(x + k pi/2) and sin(x + k pi/2) without rounding pi.
double cos_shift(double x, int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return std::cos(x);
        case 1: return -std::sin(x);
        case 2: return -std::cos(x);
        default: return std::sin(x);
    }
}

double sin_shift(double x, int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
    }
}

}  // namespace

double trig_inc(TrigKind kind, int p, double r, double z) {
    require(p >= 1, "increment order must be >= 1");
    const double s = std::sin(r / 2.0);
    if (p % 2 == 0) {
        const double amp = std::pow(2.0 * s, p);
        return kind == TrigKind::Cos ? amp * cos_shift(z * r, p) : amp * sin_shift(z * r, p);
    }
    const double amp = std::pow(2.0, p) * std::sin(r) * std::pow(s, p - 1);
    return kind == TrigKind::Cos ? -amp * sin_shift(z * r, p - 1) : amp * cos_shift(z * r, p - 1);
}

bool looks_symmetric(const Fn1& f, double tol) {
    for (int k = 1; k <= 3; ++k) {
        const double a = f(k), b = f(-k);
        if (std::abs(a - b) > tol * std::max(1.0, std::max(std::abs(a), std::abs(b)))) return false;
    }
    return true;
}

double inc2_structured(StructuredForm form, const Fn1& f, int q, int z) {
    switch (form) {
        case StructuredForm::Sum: return inc_p(f, 4, q + z);
        case StructuredForm::Diff: return inc_p(f, 4, q - z);
        case StructuredForm::Product: return q * inc_p(f, 4, q - z) + inc_p(f, 3, q - z);
        case StructuredForm::Min: {
            if (!looks_symmetric(f))
                throw Error(ErrorCode::SymmetryViolation, "min-form requires a symmetric f");
            const int g = std::abs(q - z);
            double v = std::min(q, z) * inc_p(f, 4, g) - inc_p(f, 3, g);
            if (g == 0) v += 4.0 * f(1) - 2.0 * f(2);
            if (g == 1) v -= f(1);
            return v;
        }
        case StructuredForm::Abs: {
            const int g = std::abs(q - z);
            if (g == 0) return 6.0 * f(0) - 8.0 * f(1) + 2.0 * f(2);
            if (g == 1) return 7.0 * f(1) + f(3) - 4.0 * f(2) - 4.0 * f(0);
            return inc_p(f, 4, g);
        }
    }
    return 0.0;
}

Fn2 assemble_structured(StructuredForm form, const Fn1& f) {
    switch (form) {
        case StructuredForm::Sum: return [f](double q, double z) { return f(q + z); };
        case StructuredForm::Diff: return [f](double q, double z) { return f(q - z); };
        case StructuredForm::Product: return [f](double q, double z) { return q * f(q - z); };
        case StructuredForm::Min:
            return [f](double q, double z) { return std::min(q, z) * f(q - z); };
        case StructuredForm::Abs: return [f](double q, double z) { return f(std::abs(q - z)); };
    }
    return {};
}

Fn1 sequence_fn(std::vector<double> data, int origin) {
    auto d = std::make_shared<const std::vector<double>>(std::move(data));
    return [d, origin](double x) {
        const long long k = std::llround(x) - origin;
        if (k < 0 || k >= static_cast<long long>(d->size()))
            throw Error(ErrorCode::ShapeMismatch, "sequence index " + std::to_string(k) + " out of range");
        return (*d)[static_cast<size_t>(k)];
    };
}

}  // namespace swe
