#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "swe/covariance.hpp"
#include "swe/error.hpp"

using namespace swe;

namespace {

const QuadratureSpec spec;

bool valid(double b, int d) { return b < std::min(2, d) || (b == 1.0 && d == 1); }

// Box increment oracle: both second differences of the light-cone covariance.
double box_oracle(int i, int j, int k, int l, const SamplingDesign& bd, double vartheta) {
    const double w[3] = {1, -2, 1};
    double o = 0.0;
    for (int a1 = 0; a1 < 3; ++a1)
        for (int b1 = 0; b1 < 3; ++b1)
            for (int a2 = 0; a2 < 3; ++a2)
                for (int b2 = 0; b2 < 3; ++b2)
                    o += w[a1] * w[b1] * w[a2] * w[b2] *
                         oracle::light_cone(bd.delta * (i - 1 + a1), bd.lambda * (k - 1 + b1), bd.delta * (j - 1 + a2),
                                            bd.lambda * (l - 1 + b2), vartheta);
    return o;
}

}  // namespace

TEST_CASE("validation") {
    CHECK_THROWS_AS(validate(ModelParams{0.0, {1.0, 1}}), Error);
    CHECK_THROWS_AS(validate(ModelParams{1.0, {1.5, 1}}), Error);
    CHECK_NOTHROW(validate(ModelParams{2.0, {1.0, 1}}));
    CHECK_THROWS_AS(validate(SamplingDesign{DesignKind::Spatial, 0.0, 0.1, 4, 0, 0}), Error);
    CHECK_THROWS_AS(validate(SamplingDesign{DesignKind::Temporal, 1.0, 0, 0, 0.1, 0}), Error);
    CHECK_THROWS_AS(validate(SamplingDesign{DesignKind::SpaceTime, 1.0, 0.0, 2, 0.1, 2}), Error);
    SamplingDesign bd{DesignKind::SpaceTime, 1.0, 0.1, 3, 0.4, 5};
    CHECK(bd.alpha() == doctest::Approx(4.0));
    CHECK(bd.size() == 15);
    CHECK(std::string(design_kind_name(DesignKind::Temporal)) == "temporal");
}

TEST_CASE("temporal u covariance") {
    const ModelParams p{1.0, {1.0, 1}};
    CHECK(temporal_cov_u(0.0, 3.0, p) == 0.0);
    CHECK(temporal_cov_u(2.0, 0.0, p) == 0.0);
    for (double s : {0.3, 1.0, 2.5}) CHECK(temporal_cov_u(s, 3.0, p) == doctest::Approx(s * s / 4).epsilon(1e-14));
    oracle::Gen g(8);
    for (int c = 0; c < 200; ++c) {
        const int d = g.integer(1, 3);
        const double b = d == 1 ? (c % 2 ? 1.0 : 0.5) : g.uniform(0.1, 1.9);
        const ModelParams q{g.uniform(0.2, 4), {b, d}};
        const double t = g.uniform(0, 5), s = g.uniform(0, 5);
        CHECK(temporal_cov_u(t, s, q) == temporal_cov_u(s, t, q));
        CHECK(temporal_cov_u(t, s, q) == doctest::Approx(oracle::temporal_u(t, s, q.vartheta, b, d)).epsilon(1e-12));
    }
}

TEST_CASE("white-noise light cone") {
    CHECK(whitenoise_cov_u(2, 0, 1, 0, 1) == doctest::Approx(0.25));
    CHECK(whitenoise_cov_u(1, 0, 1, 10, 1) == 0.0);
    CHECK(whitenoise_cov_u(1, 0, 1, 1, 1) == doctest::Approx(1.0 / 16));
    oracle::Gen g(9);
    for (int c = 0; c < 500; ++c) {
        const double t = g.uniform(0, 3), s = g.uniform(0, 3), x = g.uniform(-3, 3), y = g.uniform(-3, 3);
        const double th = g.uniform(0.1, 4);
        CHECK(whitenoise_cov_u(t, x, s, y, th) == doctest::Approx(oracle::light_cone(t, x, s, y, th)).epsilon(1e-13).scale(1e-3));
        CHECK(whitenoise_cov_u(t, x, s, x, th) == doctest::Approx(temporal_cov_u(t, s, {th, {1.0, 1}})).epsilon(1e-13));
    }
}

TEST_CASE("spatial covariances") {
    const SamplingDesign sd{DesignKind::Spatial, 1.0, 0.01, 10, 0, 0};
    const ModelParams p{1.0, {1.0, 1}};
    const double lt = sd.lambda * sd.t;
    CHECK(cov_inc_spatial(0, sd, p, spec) == doctest::Approx(lt).epsilon(1e-8));
    CHECK(cov_inc_spatial(1, sd, p, spec) == doctest::Approx(-lt / 2).epsilon(1e-8));
    CHECK(std::abs(cov_inc_spatial(2, sd, p, spec)) < 1e-8 * lt);
    CHECK(std::abs(cov_inc_spatial(3, sd, p, spec)) < 1e-8 * lt);
    CHECK(cov_inc_spatial(-1, sd, p, spec) == cov_inc_spatial(1, sd, p, spec));
    CHECK(spatial_cov_u(3, 1, sd, p, spec) == doctest::Approx(spatial_cov_u(5, 3, sd, p, spec)).epsilon(1e-13));
    CHECK(spatial_cov_u(1, 3, sd, p, spec) == doctest::Approx(spatial_cov_u(3, 1, sd, p, spec)).epsilon(1e-13));

    // Increment of the u covariance equals the increment covariance.
    struct Case {
        ModelParams p;
        SamplingDesign d;
    };
    const Case cases[] = {{{1.0, {1.0, 1}}, sd},
                          {{0.7, {0.5, 1}}, {DesignKind::Spatial, 1.3, 0.05, 10, 0, 0}},
                          {{1.7, {1.5, 2}}, {DesignKind::Spatial, 0.8, 0.05, 10, 0, 0}}};
    for (const auto& c : cases)
        for (int gap = 0; gap < 4; ++gap) {
            const oracle::F2 h = [&](double k, double l) {
                return spatial_cov_u(static_cast<int>(k), static_cast<int>(l), c.d, c.p, spec);
            };
            const double o = oracle::inc2(h, gap + 1, 1);
            const double scale = cov_inc_spatial(0, c.d, c.p, spec);
            CHECK(std::abs(cov_inc_spatial(gap, c.d, c.p, spec) - o) < 1e-7 * scale);
        }
    // Finite at two tolerances.
    QuadratureSpec loose;
    loose.rel_tol = 1e-8;
    const ModelParams p3{1.0, {1.5, 3}};
    const SamplingDesign s3{DesignKind::Spatial, 2.0, 0.2, 4, 0, 0};
    const double a = spatial_cov_u(1, 0, s3, p3, spec), b = spatial_cov_u(1, 0, s3, p3, loose);
    CHECK(std::isfinite(a));
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
}

TEST_CASE("temporal increment covariance") {
    const ModelParams p{1.0, {1.0, 1}};
    CHECK(cov_inc_temporal(1, 1, p, spec) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cov_inc_temporal(5, 5, p, spec) - cov_inc_temporal(1, 1, p, spec) ==
          doctest::Approx(4 * 8 / (2 * M_PI) * cos_transform_gte(0, p.profile, spec)).epsilon(1e-12));
    CHECK(cov_inc_temporal(2, 7, p, spec) == cov_inc_temporal(7, 2, p, spec));
    const ModelParams q{1.3, {0.5, 1}};
    CHECK(cov_inc_temporal(3, 4, q, spec) == doctest::Approx(cov_inc_temporal(4, 3, q, spec)).epsilon(1e-14));
}

TEST_CASE("property: temporal increments equal the differenced closed form") {
    for (int d : {1, 2, 3})
        for (double b : {0.5, 1.0, 1.5}) {
            if (!valid(b, d)) continue;
            const ModelParams p{1.3, {b, d}};
            const TemporalTables T(8, p, spec, 1);
            double diag = 0.0;
            for (int i = 1; i <= 8; ++i) diag = std::max(diag, std::abs(T(i, i)));
            for (int i = 1; i <= 8; ++i)
                for (int j = 1; j <= 8; ++j) {
                    const oracle::F2 h = [&](double a, double c) { return oracle::temporal_u(a, c, p.vartheta, b, d); };
                    const double o = oracle::inc2(h, i, j);
                    CHECK(std::abs(T(i, j) - o) < 1e-6 * std::max(std::abs(o), 1e-6 * diag));
                }
            CHECK(cov_inc_temporal(3, 6, p, spec) == doctest::Approx(T(3, 6)).epsilon(1e-13));
        }
}

TEST_CASE("diagonal remainder is constant only for white noise") {
    auto R = [](const ModelParams& p, int i) {
        const double nd = std::pow(2 * M_PI, p.profile.d);
        return cov_inc_temporal(i, i, p, spec) - i * 8 / nd * std::pow(p.vartheta, -0.5 * p.profile.beta) *
                                                     cos_transform_gte(0, p.profile, spec);
    };
    const ModelParams w{1.0, {1.0, 1}};
    for (int i = 1; i <= 6; ++i) CHECK(std::abs(R(w, i)) < 1e-12);
    const ModelParams p{1.0, {0.5, 1}};
    // Increases with i and settles: differences shrink.
    double prev = R(p, 2), step = 1.0;
    for (int i = 3; i <= 8; ++i) {
        const double r = R(p, i);
        CHECK(r > prev);
        CHECK(r - prev < step);
        step = r - prev;
        prev = r;
    }
    CHECK(R(p, 8) - R(p, 2) > 1e-3);
}

TEST_CASE("box covariance: forms, light cone, symmetry") {
    oracle::Gen g(4);
    for (double al : {0.1, 10.0}) {
        const SamplingDesign bd{DesignKind::SpaceTime, 1.0, 0.05, 3, 0.05 * al, 3};
        for (const ModelParams& p : {ModelParams{1.0, {1.0, 1}}, ModelParams{0.7, {0.5, 1}}}) {
            double diag = 0.0;
            for (int i = 1; i <= 3; ++i) diag = std::max(diag, cov_inc_box(i, i, 1, 1, bd, p, spec, BoxForm::Spatial));
            for (int c = 0; c < 12; ++c) {
                const int i = g.integer(1, 3), j = g.integer(1, 3), k = g.integer(1, 3), l = g.integer(1, 3);
                const double a = cov_inc_box(i, j, k, l, bd, p, spec, BoxForm::Spatial);
                const double b = cov_inc_box(i, j, k, l, bd, p, spec, BoxForm::Temporal);
                CHECK(std::abs(a - b) < 1e-6 * std::max(std::abs(a), 1e-6 * diag));
                CHECK(a == doctest::Approx(cov_inc_box(j, i, l, k, bd, p, spec, BoxForm::Spatial)).epsilon(1e-13));
                if (p.profile.beta == 1.0) CHECK(std::abs(a - box_oracle(i, j, k, l, bd, p.vartheta)) < 1e-9 * diag);
            }
        }
    }
    std::vector<std::string> warnings;
    const SamplingDesign bd{DesignKind::SpaceTime, 1.0, 0.05, 3, 0.5, 3};
    cov_inc_box(1, 1, 1, 1, bd, {1.0, {1.0, 1}}, spec, BoxForm::Temporal, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("RegimeWarning") == 0);
    cov_inc_box(1, 1, 1, 1, bd, {1.0, {1.0, 1}}, spec, BoxForm::Spatial, &warnings);
    CHECK(warnings.size() == 1);
}

TEST_CASE("assembly") {
    const ModelParams p{1.0, {1.0, 1}};
    const Assembled sp = assemble_cov({DesignKind::Spatial, 1.0, 0.05, 8, 0, 0}, p, spec);
    REQUIRE(std::holds_alternative<ToeplitzRow>(sp));
    CHECK(std::get<ToeplitzRow>(sp).values.size() == 8);
    const Eigen::MatrixXd T = to_dense(sp);
    CHECK(T.rows() == 8);
    CHECK(T(2, 5) == std::get<ToeplitzRow>(sp).values[3]);

    const ModelParams q{1.4, {0.5, 1}};
    const SamplingDesign td{DesignKind::Temporal, 1.0, 0, 0, 0.1, 8};
    const Eigen::MatrixXd M = to_dense(assemble_cov(td, q, spec));
    REQUIRE(M.rows() == 8);
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j)
            CHECK(M(i - 1, j - 1) ==
                  doctest::Approx(std::pow(0.1, 2.5) * cov_inc_temporal(i, j, q, spec)).epsilon(1e-13));

    const SamplingDesign bd{DesignKind::SpaceTime, 1.0, 0.05, 4, 0.5, 4};
    const Eigen::MatrixXd B = to_dense(assemble_cov(bd, p, spec));
    REQUIRE(B.rows() == 16);
    CHECK((B - B.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * B.cwiseAbs().maxCoeff());
    // Time-major layout.
    CHECK(B(1 * 4 + 2, 3 * 4 + 0) ==
          doctest::Approx(cov_inc_box(2, 4, 3, 1, bd, p, spec, BoxForm::Spatial)).epsilon(1e-12).scale(1e-6));
    for (const Eigen::MatrixXd* A : {&T, &M, &B}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*A);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * A->trace());
    }
    AssembleOptions small;
    small.size_cap = 10;
    try {
        assemble_cov(bd, p, spec, small);
        FAIL("expected SizeCapExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SizeCapExceeded);
    }
    CHECK(toeplitz_dense(ToeplitzRow{{2, 1}}) == (Eigen::MatrixXd(2, 2) << 2, 1, 1, 2).finished());
}
