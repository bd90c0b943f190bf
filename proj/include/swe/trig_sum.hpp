#pragma once

#include <vector>

namespace swe {

// (c cos(freq r) + s sin(freq r)) r^power, freq >= 0.
struct TrigTerm {
    double c = 0.0;
    double s = 0.0;
    double freq = 0.0;
    double power = 0.0;
};

// Finite sum of trigonometric-power terms. Used as the exact (or
// asymptotic) expansion of an integrand away from the origin.
class TrigSum {
public:
    TrigSum() = default;
    explicit TrigSum(std::vector<TrigTerm> t) : terms_(std::move(t)) {}

    static TrigSum constant(double c) { return cos_term(c, 0.0, 0.0); }
    static TrigSum cos_term(double coef, double freq, double power = 0.0);
    static TrigSum sin_term(double coef, double freq, double power = 0.0);
    // sin^4(a r / 2) = 3/8 - cos(a r)/2 + cos(2 a r)/8
    static TrigSum sin4_half(double a);
    // sin^2(a r / 2) = 1/2 - cos(a r)/2
    static TrigSum sin2_half(double a);

    TrigSum& operator+=(const TrigSum& o);
    TrigSum& operator*=(double k);
    friend TrigSum operator+(TrigSum a, const TrigSum& b) { return a += b; }
    friend TrigSum operator*(TrigSum a, double k) { return a *= k; }
    friend TrigSum operator*(double k, TrigSum a) { return a *= k; }
    friend TrigSum operator*(const TrigSum& a, const TrigSum& b);

    // Multiply by r^p.
    TrigSum times_power(double p) const;
    // Substitute r -> a r (a > 0).
    TrigSum rescaled(double a) const;
    // Merge terms sharing (freq, power) and drop zeros.
    TrigSum normalized() const;

    double operator()(double r) const;
    double max_freq() const;
    bool empty() const { return terms_.empty(); }
    const std::vector<TrigTerm>& terms() const { return terms_; }

private:
    std::vector<TrigTerm> terms_;
};

}  // namespace swe
