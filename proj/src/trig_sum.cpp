#include "swe/trig_sum.hpp"

#include <algorithm>
#include <cmath>

namespace swe {

TrigSum TrigSum::cos_term(double coef, double freq, double power) {
    TrigTerm t;
    t.c = coef;
    t.freq = std::abs(freq);
    t.power = power;
    return TrigSum({t});
}

TrigSum TrigSum::sin_term(double coef, double freq, double power) {
    TrigTerm t;
    t.s = freq < 0 ? -coef : coef;
    t.freq = std::abs(freq);
    t.power = power;
    if (t.freq == 0.0) t.s = 0.0;
    return TrigSum({t});
}

TrigSum TrigSum::sin4_half(double a) {
    return constant(3.0 / 8.0) + cos_term(-0.5, a) + cos_term(0.125, 2.0 * a);
}

TrigSum TrigSum::sin2_half(double a) { return constant(0.5) + cos_term(-0.5, a); }

TrigSum& TrigSum::operator+=(const TrigSum& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
}

TrigSum& TrigSum::operator*=(double k) {
    for (auto& t : terms_) {
        t.c *= k;
        t.s *= k;
    }
    return *this;
}

namespace {

// Append (c cos(f r) + s sin(f r)) r^p, folding negative frequencies.
void push(std::vector<TrigTerm>& out, double c, double s, double f, double p) {
    if (f < 0) {
        f = -f;
        s = -s;
    }
    if (f == 0.0) s = 0.0;
    if (c == 0.0 && s == 0.0) return;
    out.push_back({c, s, f, p});
}

}  // namespace

TrigSum operator*(const TrigSum& a, const TrigSum& b) {
    std::vector<TrigTerm> out;
    out.reserve(2 * a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            const double p = x.power + y.power;
            const double fp = x.freq + y.freq, fm = x.freq - y.freq;
            // cos cos, sin sin, sin cos, cos sin
            push(out, 0.5 * (x.c * y.c - x.s * y.s), 0.5 * (x.s * y.c + x.c * y.s), fp, p);
            push(out, 0.5 * (x.c * y.c + x.s * y.s), 0.5 * (x.s * y.c - x.c * y.s), fm, p);
        }
    }
    return TrigSum(std::move(out)).normalized();
}

TrigSum TrigSum::times_power(double p) const {
    TrigSum r = *this;
    for (auto& t : r.terms_) t.power += p;
    return r;
}

TrigSum TrigSum::rescaled(double a) const {
    TrigSum r = *this;
    for (auto& t : r.terms_) {
        const double k = std::pow(a, t.power);
        t.c *= k;
        t.s *= k;
        t.freq *= a;
    }
    return r;
}

TrigSum TrigSum::normalized() const {
    std::vector<TrigTerm> v = terms_;
    std::stable_sort(v.begin(), v.end(), [](const TrigTerm& x, const TrigTerm& y) {
        if (x.power != y.power) return x.power < y.power;
        return x.freq < y.freq;
    });
    std::vector<TrigTerm> out;
    for (const auto& t : v) {
        if (!out.empty()) {
            auto& b = out.back();
            const double tol = 1e-13 * std::max(1.0, std::max(b.freq, t.freq));
            if (b.power == t.power && std::abs(b.freq - t.freq) <= tol) {
                b.c += t.c;
                b.s += t.s;
                continue;
            }
        }
        out.push_back(t);
    }
    std::vector<TrigTerm> kept;
    for (auto& t : out) {
        if (t.freq == 0.0) t.s = 0.0;
        if (t.c != 0.0 || t.s != 0.0) kept.push_back(t);
    }
    return TrigSum(std::move(kept));
}

double TrigSum::operator()(double r) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
        double v = t.c * std::cos(t.freq * r);
        if (t.s != 0.0) v += t.s * std::sin(t.freq * r);
        acc += v * std::pow(r, t.power);
    }
    return acc;
}

double TrigSum::max_freq() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, t.freq);
    return m;
}

}  // namespace swe
