#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <gsl/gsl_sf_expint.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "oracles.hpp"
#include "swe/error.hpp"
#include "swe/specfun.hpp"

using namespace swe;

namespace {

// Integral over (0, inf) of cos(k r) sin^4(r/2) r^{beta-3}: sin^4(r/2) cos(k r)
// expands to (1/16) times a fourth difference of cos((k + j) r), and
// integral cos(a r) r^{beta-3} = G |a|^{2-beta} with G = Gamma(beta-2) cos(pi (beta-2)/2).
double J(double k, double beta) {
    const double G = beta == 1.0 ? -M_PI / 2.0 : std::tgamma(beta - 2.0) * std::cos(M_PI * (beta - 2.0) / 2.0);
    const double h = 2.0 - beta;
    auto P = [h](double x) { return std::pow(std::abs(x), h); };
    return G / 16.0 * (P(k + 2) - 4 * P(k + 1) + 6 * P(k) - 4 * P(k - 1) + P(k - 2));
}

// Integral over R^{d-1} of (1 + |y|^2)^{(beta-d-2)/2} dy.
double K(double beta, int d) {
    if (d == 1) return 1.0;
    return oracle::sphere_area(d - 2) * 0.5 * std::beta(0.5 * (d - 1), 0.5 * (3.0 - beta));
}

double gk(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 8, 1e-13);
}

const QuadratureSpec spec;

}  // namespace

TEST_CASE("trig sums") {
    const TrigSum s = TrigSum::sin4_half(1.3);
    const TrigSum c = TrigSum::sin2_half(0.4);
    for (double r : {0.0, 0.7, 5.0, 40.0}) {
        CHECK(s(r) == doctest::Approx(std::pow(std::sin(0.65 * r), 4)).scale(1.0).epsilon(1e-14));
        CHECK(c(r) == doctest::Approx(std::pow(std::sin(0.2 * r), 2)).scale(1.0).epsilon(1e-14));
        CHECK((s * c)(r) == doctest::Approx(s(r) * c(r)).scale(1.0).epsilon(1e-14));
        CHECK((s + c)(r) == doctest::Approx(s(r) + c(r)).scale(1.0).epsilon(1e-14));
        CHECK(s.rescaled(2.0)(r) == doctest::Approx(s(2 * r)).scale(1.0).epsilon(1e-13));
        CHECK(s.normalized()(r) == doctest::Approx(s(r)).scale(1.0).epsilon(1e-14));
    }
    CHECK(s.times_power(-2.0)(3.0) == doctest::Approx(s(3.0) / 9.0));
    CHECK(s.max_freq() == doctest::Approx(2.6));
    CHECK((s + s * -1.0).normalized().empty());
}

TEST_CASE("quadrature primitives") {
    CHECK(gk_panels([](double x) { return x * x; }, 0, 3, 4, spec).value == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(gk_origin([](double r) { return 1.0 / std::sqrt(r); }, 1.0, -0.5, spec).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    // Integral over [X, inf) of e^{ix}/x = -Ci(X) + i (pi/2 - Si(X)).
    for (double X : {0.5, 3.0, 40.0}) {
        const auto t = osc_power_tail(-1.0, X);
        CHECK(t.real() == doctest::Approx(-gsl_sf_Ci(X)).epsilon(1e-11));
        CHECK(t.imag() == doctest::Approx(M_PI / 2 - gsl_sf_Si(X)).epsilon(1e-11));
        // Integration by parts: T(p) = i e^{iX} X^p + i p T(p - 1).
        const std::complex<double> I(0, 1);
        const auto lhs = osc_power_tail(-1.5, X);
        const auto rhs = I * std::exp(I * X) * std::pow(X, -1.5) + I * -1.5 * osc_power_tail(-2.5, X);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs) + 1e-15);
    }
    // Tail of a one-term expansion equals the direct tail.
    const TrigSum e = TrigSum::cos_term(2.0, 1.0, -1.0);
    CHECK(tail_integral(e, 3.0).value == doctest::Approx(2.0 * osc_power_tail(-1.0, 3.0).real()).epsilon(1e-12));
    // Half-line integral of sin^4(r/2)/r^2 is pi/8.
    OscIntegrand o;
    o.core = [](double r) { return r == 0.0 ? 0.0 : std::pow(std::sin(r / 2), 4) / (r * r); };
    o.pieces.push_back({TrigSum::sin4_half(1.0).times_power(-2.0), 0.0, {}});
    o.origin_power = 2.0;
    CHECK(integrate_half_line(o, spec).value == doctest::Approx(M_PI / 8).epsilon(1e-11));
    QuadratureSpec bad;
    bad.rel_tol = 0;
    CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("profile validation") {
    CHECK_NOTHROW(validate(NoiseProfile{1.0, 1}));
    CHECK_NOTHROW(validate(NoiseProfile{0.5, 1}));
    CHECK_NOTHROW(validate(NoiseProfile{1.9, 3}));
    CHECK_THROWS_AS(validate(NoiseProfile{1.2, 1}), Error);
    CHECK_THROWS_AS(validate(NoiseProfile{2.0, 3}), Error);
    CHECK_THROWS_AS(validate(NoiseProfile{0.0, 2}), Error);
    CHECK_THROWS_AS(validate(NoiseProfile{0.5, 0}), Error);
}

TEST_CASE("gamma-based constants") {
    CHECK(sphere_area(0) == doctest::Approx(2.0));
    CHECK(sphere_area(1) == doctest::Approx(2 * M_PI));
    CHECK(sphere_area(2) == doctest::Approx(4 * M_PI));
    for (double b : {0.3, 0.5, 0.999, 0.9999999, 1.0, 1.0000001, 1.5, 1.9}) {
        CHECK(c_beta(b) == doctest::Approx(oracle::c_beta(b)).epsilon(1e-9));
        CHECK(c_beta(b) > 0);
    }
    // Direct integral of sin(w) w^{beta-2}: tanh-sinh near the origin, panels
    // up to X = N pi, then the tail cos(X) X^{beta-2} from integration by parts.
    for (double b : {0.5, 1.5}) {
        auto f = [b](double w) { return w == 0.0 ? 0.0 : std::sin(w) / w * std::pow(w, b - 1); };
        double s = boost::math::quadrature::tanh_sinh<double>().integrate(f, 0.0, M_PI);
        const int periods = 2000;
        for (int k = 1; k < periods; ++k) s += gk(f, k * M_PI, (k + 1) * M_PI);
        const double X = periods * M_PI;
        s += std::cos(X) * std::pow(X, b - 2);
        CHECK(s == doctest::Approx(c_beta(b)).epsilon(1e-6));
    }
    for (int d : {2, 3, 4})
        for (double b : {0.5, 1.0, 1.5})
            CHECK(beta_reduction_factor({b, d}) == doctest::Approx(K(b, d)).epsilon(1e-12));
    CHECK(beta_reduction_factor({0.5, 1}) == 1.0);
    for (int d : {1, 2, 3})
        CHECK(c_beta_d({d == 1 ? 1.0 : 1.5, d}) ==
              doctest::Approx(oracle::sphere_area(d - 1) * oracle::c_beta(d == 1 ? 1.0 : 1.5) /
                              (std::pow(2 * M_PI, d) * 2 * (2 - (d == 1 ? 1.0 : 1.5))))
                  .epsilon(1e-12));
}

TEST_CASE("sphere cosine averages") {
    CHECK(sphere_cos_average(1, 0.7) == doctest::Approx(std::cos(0.7)));
    CHECK(sphere_cos_average(3, 2.0) == doctest::Approx(std::sin(2.0) / 2.0));
    CHECK(sphere_cos_average(2, 3.0) == doctest::Approx(std::cyl_bessel_j(0.0, 3.0)));
    CHECK(sphere_cos_average(4, 0.0) == 1.0);
    for (int d : {2, 4})
        for (double z : {40.0, 100.0, 1000.0})
            CHECK(sphere_cos_expansion(d, 1.0)(z) == doctest::Approx(sphere_cos_average(d, z)).epsilon(1e-12).scale(1e-3));
    for (int d : {1, 3, 5})
        CHECK(sphere_cos_expansion(d, 2.0)(1.3) == doctest::Approx(sphere_cos_average(d, 2.6)).epsilon(1e-12));
}

TEST_CASE("radial reductions") {
    CHECK(radial_reduce(gte_profile({1.0, 1}), 1, spec).value == doctest::Approx(M_PI / 4).epsilon(1e-10));
    // Golden beta = 1.5, d = 2: 2 pi times the half-line closed form.
    CHECK(radial_reduce(gte_profile({1.5, 2}), 2, spec).value == doctest::Approx(2 * M_PI * J(0, 1.5)).epsilon(1e-8));
    RadialIntegrand zero{[](double) { return 0.0; }, std::nullopt, 0.0};
    CHECK(radial_reduce(zero, 3, spec).value == 0.0);
}

TEST_CASE("mixed reduction consistency") {
    for (int d : {2, 3, 4})
        for (double b : {0.5, 1.5}) {
            const NoiseProfile p{b, d};
            MixedIntegrand radial;
            radial.F = [b, d](double, double v) { return std::pow(std::sin(v / 2), 4) * std::pow(v, b - d - 2); };
            // integral over (0, pi) of sin^{d-2} is B(1/2, (d-1)/2)
            radial.shell_expansion = TrigSum::sin4_half(1.0).times_power(b - 3) * std::beta(0.5, 0.5 * (d - 1));
            radial.shell_origin_power = b + 1;
            const double ref = radial_reduce(gte_profile(p), d, spec).value;
            CHECK(mixed_reduce(radial, p, spec).value == doctest::Approx(ref).epsilon(1e-8));

            MixedIntegrand beta_path;
            beta_path.phi_s = [](double s) { return std::pow(std::sin(s / 2), 4); };
            beta_path.phi_expansion = TrigSum::sin4_half(1.0);
            beta_path.phi_origin_order = 4.0;
            CHECK(mixed_reduce(beta_path, p, spec).value == doctest::Approx(K(b, d) * 2 * J(0, b)).epsilon(1e-8));
        }
    // Generic path without expansion on a Gaussian: integral of e^{-|w|^2}(1 + (rho.w)^2) is 1.5 pi^{d/2}.
    QuadratureSpec short_spec;
    short_spec.truncation_radius = 40.0;
    for (int d : {2, 3}) {
        MixedIntegrand gauss;
        gauss.F = [](double s, double v) { return std::exp(-v * v) * (1 + s * s); };
        gauss.shell_origin_power = d - 1;
        CHECK(mixed_reduce(gauss, {1.0, d}, short_spec).value == doctest::Approx(1.5 * std::pow(M_PI, 0.5 * d)).epsilon(1e-10));
    }
    MixedIntegrand zero;
    zero.F = [](double, double) { return 0.0; };
    CHECK(mixed_reduce(zero, {1.0, 3}, short_spec).value == 0.0);
    CHECK_THROWS_AS(mixed_reduce(zero, {0.5, 1}, spec), Error);
    // g_sp over R^3 at beta = 1 in closed form: pi^2 / 4.
    CHECK(cos_transform_gsp(0, {1.0, 3}, spec) == doctest::Approx(M_PI * M_PI / 4).epsilon(1e-9));
}

TEST_CASE("cosine transforms") {
    CHECK(cos_transform_gsp(0, {1.0, 1}, spec) == doctest::Approx(M_PI / 4).epsilon(1e-10));
    CHECK(cos_transform_gte(0, {1.0, 1}, spec) == doctest::Approx(M_PI / 4).epsilon(1e-10));
    for (int d : {1, 2, 3})
        for (double b : {0.5, 1.0, 1.5}) {
            if (!(b < std::min(2, d) || (b == 1.0 && d == 1))) continue;
            for (int k : {0, 1, 2, 3, 7, 20}) {
                CHECK(cos_transform_gsp(k, {b, d}, spec) == doctest::Approx(K(b, d) * 2 * J(k, b)).epsilon(1e-8).scale(1e-6));
                CHECK(cos_transform_gsp(-k, {b, d}, spec) == cos_transform_gsp(k, {b, d}, spec));
                CHECK(cos_transform_gte(k, {b, d}, spec) ==
                      doctest::Approx(oracle::sphere_area(d - 1) * J(k, b)).epsilon(1e-8).scale(1e-6));
                CHECK(cos_transform_gte(-k, {b, d}, spec) == doctest::Approx(cos_transform_gte(k, {b, d}, spec)));
            }
        }
    CHECK(cos_transform_gte(3, {0.5, 1}, spec) == doctest::Approx(2 * J(3, 0.5)).epsilon(1e-8));
    double C = 0.0;
    for (int k = 1; k <= 8; ++k) C = std::max(C, k * std::abs(cos_transform_gsp(k, {1.0, 1}, spec)));
    CHECK(std::abs(cos_transform_gsp(64, {1.0, 1}, spec)) <= C / 64);
}

TEST_CASE("property: temporal cosine transform decays like 1/j") {
    for (double b : {0.5, 1.0}) {
        double bound = 0.0;
        for (int j = 1; j <= 1000; j += (j < 50 ? 1 : 37))
            bound = std::max(bound, j * std::abs(cos_transform_gte(j, {b, 1}, spec)));
        CHECK(bound < 10.0);
    }
}

TEST_CASE("Fejer kernels: examples") {
    for (int n : {1, 3, 10}) CHECK(fejer_sp(0.0, n) == n);
    CHECK(fejer_sp(2 * M_PI, 5) == doctest::Approx(5.0));
    CHECK(std::abs(fejer_sp(M_PI, 2)) < 1e-15);
    CHECK(fejer_te_weight(0, 2) == 5.0 / 8);
    CHECK(fejer_te_weight(1, 2) == 1.0 / 8);
    CHECK(fejer_te_weight(-1, 2) == 1.0 / 8);
    CHECK(fejer_te(0.0, 2) == doctest::Approx(7.0 / 8));
    CHECK(fejer_te_weight(0, 10000) == doctest::Approx(1.0 / 3).epsilon(2e-4 * 3));
    CHECK(std::abs(fejer_te_weight(0, 10000) - 1.0 / 3) < 2e-4);
    const std::vector<double> w3{1.0 / 3, 2.0 / 3, 1.0, 2.0 / 3, 1.0 / 3};
    REQUIRE(fejer_sp_weights(3).size() == 5);
    for (int k = 0; k < 5; ++k) CHECK(fejer_sp_weights(3)[k] == doctest::Approx(w3[k]).epsilon(1e-15));
}

TEST_CASE("property: Fejer representations agree") {
    oracle::Gen g(31);
    double worst = 0.0;
    for (int c = 0; c < 1000; ++c) {
        const int n = g.integer(1, 50);
        const double x = c % 10 == 0 ? 2 * M_PI * g.integer(-3, 3) + g.uniform(-1e-7, 1e-7) : g.uniform(-10, 10);
        double dbl = 0.0;
        for (int k = 1; k <= n; ++k)
            for (int l = 1; l <= n; ++l) dbl += std::cos((k - l) * x);
        dbl /= n;
        const auto w = fejer_sp_weights(n);
        double ser = 0.0;
        for (int k = -(n - 1); k <= n - 1; ++k) ser += w[k + n - 1] * std::cos(k * x);
        const double v = fejer_sp(x, n);
        worst = std::max({worst, std::abs(v - dbl), std::abs(v - ser), std::abs(v - oracle::fejer_closed(x, n))});
        CHECK(v >= 0.0);
    }
    CHECK(worst < 1e-10);
    for (int m = 1; m <= 30; ++m) {
        const double x = g.uniform(-4, 4);
        double dbl = 0.0;
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j) dbl += std::pow(std::min(i, j), 2) * std::cos((i - j) * x);
        dbl /= std::pow(m, 3);
        CHECK(std::abs(fejer_te(x, m) - dbl) < 1e-10);
        const auto w = fejer_te_weights(m);
        for (int j = -(m - 1); j < m; ++j) {
            double direct = 0.0;
            for (int i = 1; i <= m - std::abs(j); ++i) direct += double(i) * i;
            CHECK(w[j + m - 1] == doctest::Approx(direct / std::pow(m, 3)).epsilon(1e-14));
        }
    }
    for (int n : {1, 4, 17})
        CHECK(gk([n](double x) { return fejer_sp(x, n); }, -M_PI, M_PI) == doctest::Approx(2 * M_PI).epsilon(1e-8));
}

TEST_CASE("constants table") {
    const double I = oracle::sin4_over_x2(gk);
    CHECK(I == doctest::Approx(M_PI / 4).epsilon(1e-10));
    const ConstantsTable t = constants_table({1.0, 1}, spec);
    CHECK(std::abs(t.c_sp_E - 8 / (2 * M_PI) * I) < 1e-8);
    CHECK(std::abs(t.c_te_E - 4 / (2 * M_PI) * I) < 1e-8);
    CHECK(t.c_box_sp_E / t.c_sp_E == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(t.c_box_te_E / t.c_te_E == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(t.error_estimate > 0);
    CHECK(t.error_estimate < 1e-3);
    const ConstantsTable t64 = constants_table({1.0, 1}, spec, 64);
    CHECK(t64.c_sp_V == doctest::Approx(t.c_sp_V).epsilon(1e-6));
    CHECK(t64.c_te_V == doctest::Approx(t.c_te_V).epsilon(1e-6));
    // Spatial variance constant from its definition: 128/(2 pi)^2 sum_k F_c(g_sp)(k)^2.
    double s = 0.0;
    for (int k = -256; k <= 256; ++k) s += std::pow(2 * J(k, 1.0), 2);
    CHECK(t.c_sp_V == doctest::Approx(128 / std::pow(2 * M_PI, 2) * s).epsilon(1e-8));
    CHECK_THROWS_AS(constants_table({1.0, 1}, spec, 8), Error);
}

TEST_CASE("property: constants positive with exact box ratios") {
    for (int d : {1, 2, 3})
        for (double b : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75}) {
            if (!(b < std::min(2, d) || (b == 1.0 && d == 1))) continue;
            const ConstantsTable t = constants_table({b, d}, spec, 64);
            for (double c : {t.c_sp_E, t.c_sp_V, t.c_te_E, t.c_te_V, t.c_box_sp_E, t.c_box_sp_V, t.c_box_te_E,
                             t.c_box_te_V})
                CHECK(c > 0);
            CHECK(t.c_box_sp_E == doctest::Approx(3 * t.c_sp_E).epsilon(1e-15));
            CHECK(t.c_box_te_E == doctest::Approx(6 * t.c_te_E).epsilon(1e-15));
        }
}
