#include "swe/specfun.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>

#include "swe/error.hpp"

namespace swe {

namespace {
constexpr double kPi = std::numbers::pi;

void validate_loose(const NoiseProfile& p) {
    require(p.d >= 1, "dimension d must be >= 1", ErrorCode::DimensionError);
    require(p.beta > 0.0 && p.beta < 2.0, "beta must lie in (0, 2)");
}
}  // namespace

void validate(const NoiseProfile& p) {
    validate_loose(p);
    // Space-time white noise (beta = d = 1) is admitted alongside the open range.
    const bool white = p.d == 1 && p.beta == 1.0;
    require(white || p.beta < std::min(2.0, static_cast<double>(p.d)),
            "beta must lie in (0, min(2, d)) or beta = d = 1");
}

double sphere_area(int k) {
    require(k >= 0, "sphere dimension must be >= 0");
    const double h = 0.5 * (k + 1);
    return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double c_beta(double beta) {
    const double e = beta - 1.0;
    if (std::abs(e) < 1e-6) return 0.5 * kPi * (1.0 - std::numbers::egamma_v<double> * e);
    // Gamma(e) via log-Gamma; Gamma is negative on (-1, 0).
    const double g = std::exp(std::lgamma(e)) * (e < 0 ? -1.0 : 1.0);
    return g * std::sin(0.5 * kPi * e);
}

double c_beta_d(const NoiseProfile& p) {
    return sphere_area(p.d - 1) * c_beta(p.beta) /
           (std::pow(2.0 * kPi, p.d) * 2.0 * (2.0 - p.beta));
}

double beta_reduction_factor(const NoiseProfile& p) {
    if (p.d == 1) return 1.0;
    return sphere_area(p.d - 2) * 0.5 * boost::math::beta(0.5 * (p.d - 1), 0.5 * (3.0 - p.beta));
}

double sphere_cos_average(int d, double z) {
    z = std::abs(z);
    if (d == 1) return std::cos(z);
    if (z < 1e-4) return 1.0 - z * z / (2.0 * d) + z * z * z * z / (8.0 * d * (d + 2.0));
    if (d == 3) return std::sin(z) / z;
    const double nu = 0.5 * d - 1.0;
    return std::tgamma(0.5 * d) * std::pow(2.0 / z, nu) * std::cyl_bessel_j(nu, z);
}

double hankel_threshold() { return 35.0; }

TrigSum sphere_cos_expansion(int d, double q) {
    q = std::abs(q);
    if (q == 0.0) return TrigSum::constant(1.0);
    if (d == 1) return TrigSum::cos_term(1.0, q);
    const double nu = 0.5 * d - 1.0;
    const double base = -nu - 0.5;
    const double pref = std::tgamma(0.5 * d) * std::pow(2.0, nu) * std::sqrt(2.0 / kPi) * std::pow(q, base);
    // theta0 = (d-1) pi / 4
    static const double r = std::sqrt(0.5);
    static const double cs[8] = {1, r, 0, -r, -1, -r, 0, r};
    static const double sn[8] = {0, r, 1, r, 0, -r, -1, -r};
    const double c0 = cs[(d - 1) % 8], s0 = sn[(d - 1) % 8];
    std::vector<TrigTerm> terms;
    double a = 1.0;
    const double z0 = hankel_threshold();
    for (int m = 0; m < 80; ++m) {
        if (m > 0) a *= (4.0 * nu * nu - (2.0 * m - 1) * (2.0 * m - 1)) / (8.0 * m);
        if (a == 0.0) break;
        if (m > 0 && std::abs(a) * std::pow(z0, -m) < 1e-19) break;
        const double k = pref * a * std::pow(q, -m);
        const double sign = ((m / 2) % 2) ? -1.0 : 1.0;
        if (m % 2 == 0) {
            // (-1)^{m/2} a_m z^{-m} cos(chi)
            terms.push_back({sign * k * c0, sign * k * s0, q, base - m});
        } else {
            // -(-1)^{(m-1)/2} a_m z^{-m} sin(chi)
            terms.push_back({sign * k * s0, -sign * k * c0, q, base - m});
        }
    }
    return TrigSum(std::move(terms));
}

namespace kernels {

RadialKernel one() { return {[](double) { return 1.0; }, TrigSum::constant(1.0), 0.0}; }

RadialKernel sin4_cos(double h) {
    RadialKernel k;
    k.eval = [h](double x) {
        const double s = std::sin(0.5 * x);
        const double s2 = s * s;
        return s2 * s2 * std::cos(h * x);
    };
    k.expansion = TrigSum::sin4_half(1.0) * TrigSum::cos_term(1.0, h);
    k.origin_order = 4.0;
    return k;
}

RadialKernel sin4_sin_over(double a) {
    RadialKernel k;
    if (a == 0.0) {
        k.eval = [](double) { return 0.0; };
        return k;
    }
    k.eval = [a](double x) {
        if (x == 0.0) return 0.0;
        const double s = std::sin(0.5 * x);
        const double s2 = s * s;
        return s2 * s2 * std::sin(a * x) / x;
    };
    k.expansion = TrigSum::sin4_half(1.0) * TrigSum::sin_term(1.0, a, -1.0);
    k.origin_order = 4.0;
    return k;
}

RadialKernel cos_sinc(std::vector<std::pair<double, double>> cos_terms,
                      std::vector<std::pair<double, double>> sinc_terms, double origin_order) {
    RadialKernel k;
    double fmax = 0.0;
    for (auto& [al, b] : cos_terms) {
        k.expansion += TrigSum::cos_term(al, b);
        fmax = std::max(fmax, std::abs(b));
    }
    for (auto& [ga, c] : sinc_terms) {
        if (c == 0.0)
            k.expansion += TrigSum::constant(ga);
        else
            k.expansion += TrigSum::sin_term(ga / c, c, -1.0);
        fmax = std::max(fmax, std::abs(c));
    }
    k.expansion = k.expansion.normalized();
    k.origin_order = origin_order;
    k.eval = [cos_terms, sinc_terms, fmax](double x) {
        if (x * fmax < 1.0) {
            // Taylor series in x^2.
            std::vector<double> cp(cos_terms.size(), 0.0), sp(sinc_terms.size(), 0.0);
            for (size_t i = 0; i < cos_terms.size(); ++i) cp[i] = cos_terms[i].first;
            for (size_t i = 0; i < sinc_terms.size(); ++i) sp[i] = sinc_terms[i].first;
            const double x2 = x * x;
            double xp = 1.0, acc = 0.0;
            for (int n = 0; n < 18; ++n) {
                double c = 0.0;
                for (double v : cp) c += v;
                for (double v : sp) c += v;
                acc += ((n % 2) ? -c : c) * xp;
                xp *= x2;
                for (size_t i = 0; i < cp.size(); ++i) {
                    const double b = cos_terms[i].second;
                    cp[i] *= b * b / ((2.0 * n + 1) * (2.0 * n + 2));
                }
                for (size_t i = 0; i < sp.size(); ++i) {
                    const double c2 = sinc_terms[i].second;
                    sp[i] *= c2 * c2 / ((2.0 * n + 2) * (2.0 * n + 3));
                }
            }
            return acc;
        }
        double acc = 0.0;
        for (auto& [al, b] : cos_terms) acc += al * std::cos(b * x);
        for (auto& [ga, c] : sinc_terms) acc += (c == 0.0) ? ga : ga * std::sin(c * x) / (c * x);
        return acc;
    };
    return k;
}

RadialKernel sinc() { return cos_sinc({}, {{1.0, 1.0}}, 0.0); }

RadialKernel one_minus_sinc() { return cos_sinc({{1.0, 0.0}}, {{-1.0, 1.0}}, 2.0); }

RadialKernel r2(int gap) {
    gap = std::abs(gap);
    if (gap == 0) return cos_sinc({{4.0, 1.0}, {-2.0, 2.0}}, {{-4.0, 1.0}, {2.0, 2.0}}, 2.0);
    if (gap == 1) return cos_sinc({{-1.0, 1.0}}, {{3.5, 1.0}, {1.5, 3.0}, {-4.0, 2.0}}, 2.0);
    RadialKernel k;
    k.eval = [](double) { return 0.0; };
    return k;
}

RadialKernel r3(int gap) {
    gap = std::abs(gap);
    RadialKernel k;
    if (gap == 0) {
        k.eval = [](double) { return 0.0; };
        return k;
    }
    const double h = gap;
    k.eval = [h](double x) {
        const double s = std::sin(0.5 * x);
        return -8.0 * std::sin(x) * s * s * std::sin(h * x);
    };
    k.expansion = (TrigSum::sin_term(-8.0, 1.0) * TrigSum::sin2_half(1.0)) * TrigSum::sin_term(1.0, h);
    k.origin_order = 4.0;
    return k;
}

}  // namespace kernels

namespace {

// (coefficient, frequency) of the angular factor as a sum of cos(q s).
std::vector<std::pair<double, double>> angular_terms(const AngularFactor& a) {
    switch (a.kind) {
        case AngularKind::None: return {{1.0, 0.0}};
        case AngularKind::Plain: return {{1.0, std::abs(a.g) * a.kappa}};
        case AngularKind::Sin4: {
            std::vector<std::pair<double, double>> t;
            const double c[5] = {1.0 / 16, -0.25, 3.0 / 8, -0.25, 1.0 / 16};
            for (int z = -2; z <= 2; ++z) {
                const double q = std::abs(a.g + z) * a.kappa;
                bool merged = false;
                for (auto& e : t)
                    if (e.second == q) {
                        e.first += c[z + 2];
                        merged = true;
                    }
                if (!merged) t.push_back({c[z + 2], q});
            }
            return t;
        }
    }
    return {};
}

}  // namespace

double angular_average(int d, const AngularFactor& a, double r) {
    const double y = a.kappa * r;
    switch (a.kind) {
        case AngularKind::None: return 1.0;
        case AngularKind::Plain: return sphere_cos_average(d, a.g * y);
        case AngularKind::Sin4: {
            if (d == 1) {
                const double s = std::sin(0.5 * y);
                const double s2 = s * s;
                return std::cos(a.g * y) * s2 * s2;
            }
            if (y >= 0.5) {
                double acc = 0.0;
                for (auto& [c, q] : angular_terms(a)) acc += c * sphere_cos_average(d, q * r);
                return acc;
            }
            // Direct average over the polar angle avoids cancellation.
            const double g = a.g;
            auto f = [g, y, d](double phi) {
                const double s = y * std::cos(phi);
                const double h = std::sin(0.5 * s);
                const double h2 = h * h;
                return std::cos(g * s) * h2 * h2 * std::pow(std::sin(phi), d - 2);
            };
            const int panels = 1 + static_cast<int>(std::abs(g) * y / 2.0);
            double acc = 0.0;
            const double w = kPi / panels;
            for (int i = 0; i < panels; ++i)
                acc += boost::math::quadrature::gauss<double, 20>::integrate(f, i * w, (i + 1) * w);
            return acc * sphere_area(d - 2) / sphere_area(d - 1);
        }
    }
    return 0.0;
}

QuadResult wave_integral(const NoiseProfile& p, const AngularFactor& a, const RadialKernel& phi,
                         double scale, const QuadratureSpec& spec) {
    validate_loose(p);
    require(scale > 0.0, "radial scale must be positive");
    require(a.kappa > 0.0, "angular scale must be positive");
    if (phi.expansion.empty()) return {};
    const int d = p.d;
    const double b3 = p.beta - 3.0;
    const TrigSum rad = phi.expansion.rescaled(scale).times_power(b3);

    OscIntegrand f;
    f.core = [&a, &phi, scale, b3, d](double r) {
        if (r <= 0.0) return 0.0;
        return std::pow(r, b3) * phi.eval(scale * r) * angular_average(d, a, r);
    };
    f.origin_power = b3 + phi.origin_order + (a.kind == AngularKind::Sin4 ? 4.0 : 0.0);

    const auto ang = angular_terms(a);
    if (d % 2 == 1) {
        TrigSum A;
        for (auto& [c, q] : ang) A += c * sphere_cos_expansion(d, q);
        f.pieces.push_back({A.normalized() * rad, 0.0, {}});
    } else {
        for (auto& [c, q] : ang) {
            TailPiece pc;
            pc.expansion = (c * sphere_cos_expansion(d, q)) * rad;
            if (q > 0.0) {
                pc.valid_from = hankel_threshold() / q;
                const double cc = c, qq = q;
                pc.eval = [&phi, cc, qq, d, b3, scale](double r) {
                    return cc * sphere_cos_average(d, qq * r) * std::pow(r, b3) * phi.eval(scale * r);
                };
            }
            f.pieces.push_back(std::move(pc));
        }
    }
    QuadResult res = integrate_half_line(f, spec);
    const double sd = sphere_area(d - 1);
    res.value *= sd;
    res.error *= sd;
    res.l1 *= sd;
    return res;
}

QuadResult radial_reduce(const RadialIntegrand& f, int d, const QuadratureSpec& spec) {
    require(d >= 1, "dimension d must be >= 1", ErrorCode::DimensionError);
    validate(spec);
    auto g = [&f, d](double r) { return r <= 0.0 ? 0.0 : f.f(r) * std::pow(r, d - 1); };
    QuadResult res;
    if (f.expansion) {
        OscIntegrand o;
        o.core = g;
        o.pieces.push_back({*f.expansion, 0.0, {}});
        o.origin_power = f.origin_power;
        res = integrate_half_line(o, spec);
    } else {
        res = integrate_truncated(g, spec.truncation_radius, f.origin_power, 1.0, spec);
    }
    const double sd = sphere_area(d - 1);
    res.value *= sd;
    res.error *= sd;
    res.l1 *= sd;
    return res;
}

RadialIntegrand gte_profile(const NoiseProfile& p) {
    validate(p);
    RadialIntegrand r;
    const double e = p.beta - p.d - 2.0;
    r.f = [e](double x) {
        const double s = std::sin(0.5 * x);
        const double s2 = s * s;
        return s2 * s2 * std::pow(x, e);
    };
    r.expansion = TrigSum::sin4_half(1.0).times_power(p.beta - 3.0);
    r.origin_power = p.beta + 1.0;
    return r;
}

QuadResult mixed_reduce(const MixedIntegrand& f, const NoiseProfile& p, const QuadratureSpec& spec) {
    require(p.d >= 2, "mixed reduction needs d >= 2; use direct 1D quadrature for d = 1",
            ErrorCode::DimensionError);
    validate(p);
    validate(spec);
    const double b3 = p.beta - 3.0;
    if (f.phi_s) {
        const double K = beta_reduction_factor(p);
        auto g = [&f, b3](double s) { return s <= 0.0 ? 0.0 : f.phi_s(s) * std::pow(s, b3); };
        QuadResult res;
        if (f.phi_expansion) {
            // phi is even when it has a pure cosine expansion; the integral over R doubles.
            OscIntegrand o;
            o.core = g;
            o.pieces.push_back({f.phi_expansion->times_power(b3), 0.0, {}});
            o.origin_power = b3 + f.phi_origin_order;
            res = integrate_half_line(o, spec);
            res.value *= 2.0;
        } else {
            auto gm = [&f, b3](double s) { return s <= 0.0 ? 0.0 : f.phi_s(-s) * std::pow(s, b3); };
            QuadResult a = integrate_truncated(g, spec.truncation_radius, b3 + f.phi_origin_order, 1.0, spec);
            QuadResult b = integrate_truncated(gm, spec.truncation_radius, b3 + f.phi_origin_order, 1.0, spec);
            res = {a.value + b.value, a.error + b.error, a.l1 + b.l1};
        }
        res.value *= K;
        res.error *= K;
        return res;
    }
    const int d = p.d;
    QuadratureSpec inner = spec;
    auto shell = [&f, d, &inner](double v) {
        if (v <= 0.0) return 0.0;
        auto h = [&f, v, d](double phi) { return f.F(v * std::cos(phi), v) * std::pow(std::sin(phi), d - 2); };
        const int panels = 2 + static_cast<int>(std::ceil(v / kPi));
        return gk_panels(h, 0.0, kPi, panels, inner).value * std::pow(v, d - 1);
    };
    QuadResult res;
    if (f.shell_expansion) {
        OscIntegrand o;
        o.core = shell;
        o.pieces.push_back({*f.shell_expansion, 0.0, {}});
        o.origin_power = f.shell_origin_power;
        res = integrate_half_line(o, spec);
    } else {
        res = integrate_truncated(shell, spec.truncation_radius, f.shell_origin_power, 1.0, spec);
    }
    const double s = sphere_area(d - 2);
    res.value *= s;
    res.error *= s;
    res.l1 *= s;
    return res;
}

double half_line_sin4(double k, double beta, const QuadratureSpec& spec) {
    AngularFactor a{AngularKind::Sin4, k, 1.0};
    return 0.5 * wave_integral(NoiseProfile{beta, 1}, a, kernels::one(), 1.0, spec).value;
}

double cos_transform_gsp(double k, const NoiseProfile& p, const QuadratureSpec& spec) {
    validate(p);
    return beta_reduction_factor(p) * 2.0 * half_line_sin4(k, p.beta, spec);
}

double cos_transform_gte(double j, const NoiseProfile& p, const QuadratureSpec& spec) {
    validate(p);
    return wave_integral(p, AngularFactor{}, kernels::sin4_cos(j), 1.0, spec).value;
}

double fejer_sp(double x, int n) {
    require(n >= 1, "fejer_sp needs n >= 1");
    const double y = std::remainder(x, 2.0 * kPi);
    if (std::abs(y) < 1e-6) return n * (1.0 - (static_cast<double>(n) * n - 1.0) * y * y / 12.0);
    const double a = std::sin(0.5 * n * y), b = std::sin(0.5 * y);
    return a * a / (n * b * b);
}

double fejer_sp_weight(int k, int n) {
    k = std::abs(k);
    return k < n ? 1.0 - static_cast<double>(k) / n : 0.0;
}

std::vector<double> fejer_sp_weights(int n) {
    require(n >= 1, "fejer_sp_weights needs n >= 1");
    std::vector<double> w(2 * n - 1);
    for (int k = -(n - 1); k <= n - 1; ++k) w[k + n - 1] = fejer_sp_weight(k, n);
    return w;
}

double fejer_te_weight(int j, int m) {
    const double mt = m - std::abs(j);
    if (mt <= 0) return 0.0;
    const double md = m;
    return mt * (mt + 1.0) * (2.0 * mt + 1.0) / (6.0 * md * md * md);
}

std::vector<double> fejer_te_weights(int m) {
    require(m >= 1, "fejer_te_weights needs m >= 1");
    std::vector<double> w(2 * m - 1);
    for (int j = -(m - 1); j <= m - 1; ++j) w[j + m - 1] = fejer_te_weight(j, m);
    return w;
}

double fejer_te(double x, int m) {
    require(m >= 1, "fejer_te needs m >= 1");
    double acc = fejer_te_weight(0, m);
    for (int j = 1; j < m; ++j) acc += 2.0 * fejer_te_weight(j, m) * std::cos(j * x);
    return acc;
}

ConstantsTable constants_table(const NoiseProfile& p, const QuadratureSpec& spec, int series_cap) {
    validate(p);
    validate(spec);
    require(series_cap >= 16, "series_cap must be >= 16");
    ConstantsTable t;
    t.beta = p.beta;
    t.d = p.d;
    t.series_truncation = series_cap;
    const double nd = std::pow(2.0 * kPi, p.d);
    const double K = beta_reduction_factor(p);
    const double sd = sphere_area(p.d - 1);
    // Both transforms are multiples of J(k), the half-line sin^4 cosine transform.
    std::vector<double> J(series_cap + 1);
    for (int k = 0; k <= series_cap; ++k) J[k] = half_line_sin4(k, p.beta, spec);
    const double gsp0 = 2.0 * K * J[0], gte0 = sd * J[0];
    double ssp = 0.0, ste = 0.0;
    for (int k = series_cap; k >= 1; --k) {
        ssp += 2.0 * std::pow(2.0 * K * J[k], 2);
        ste += 2.0 * std::pow(sd * J[k], 2);
    }
    ssp += gsp0 * gsp0;
    ste += gte0 * gte0;
    const double tail_sp = 2.0 * std::pow(2.0 * K * J[series_cap], 2) * series_cap;
    const double tail_te = 2.0 * std::pow(sd * J[series_cap], 2) * series_cap;

    t.c_sp_E = 8.0 / nd * gsp0;
    t.c_te_E = 4.0 / nd * gte0;
    t.c_box_sp_E = 24.0 / nd * gsp0;
    t.c_box_te_E = 24.0 / nd * gte0;
    t.c_sp_V = 128.0 / (nd * nd) * ssp;
    t.c_te_V = 128.0 / (3.0 * nd * nd) * ste;
    t.c_box_sp_V = 256.0 * 35.0 / (3.0 * nd * nd) * ssp;
    t.c_box_te_V = 256.0 * 35.0 / (3.0 * nd * nd) * ste;
    t.error_estimate = std::max(tail_sp / ssp, tail_te / ste) + 10.0 * spec.rel_tol;
    return t;
}

}  // namespace swe
