#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swe/error.hpp"
#include "swe/sampler.hpp"

using namespace swe;

namespace {

const QuadratureSpec spec;

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

Eigen::MatrixXd sample_cov(const Eigen::MatrixXd& x) {
    return x.transpose() * x / static_cast<double>(x.rows());
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    CHECK(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms and normals") {
    double lo = 1, hi = 0, sum = 0;
    for (std::uint64_t k = 0; k < 20000; ++k) {
        const double u = uniform01(3, 1, k);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.01));
    CHECK(uniform01(3, 1, 17) == uniform01(3, 1, 17));
    CHECK(uniform01(3, 1, 17) != uniform01(3, 2, 17));
    CHECK(uniform01(3, 1, 17) != uniform01(4, 1, 17));

    std::vector<double> z(100000);
    standard_normals(42, 0, z.data(), z.size());
    double m = 0, v = 0, k4 = 0;
    for (double x : z) m += x;
    m /= z.size();
    for (double x : z) {
        v += (x - m) * (x - m);
        k4 += std::pow(x - m, 4);
    }
    v /= z.size();
    k4 /= z.size();
    CHECK(std::abs(m) < 5 / std::sqrt(1e5));
    CHECK(std::abs(v - 1) < 5 * std::sqrt(2 / 1e5));
    CHECK(std::abs(k4 - 3) < 5 * std::sqrt(96 / 1e5));
    // Prefix stability: the first values do not depend on how many are requested.
    std::vector<double> few(10);
    standard_normals(42, 0, few.data(), few.size());
    for (int i = 0; i < 10; ++i) CHECK(few[i] == z[i]);
}

TEST_CASE("factorize examples") {
    const CholFactor id = factorize(Eigen::MatrixXd::Identity(5, 5));
    CHECK(id.L == Eigen::MatrixXd::Identity(5, 5));
    CHECK(id.jitter_used == 0.0);
    Eigen::MatrixXd a(2, 2);
    a << 1, 1, 1, 4;
    const CholFactor f = factorize(a);
    CHECK(f.L(0, 0) == doctest::Approx(1));
    CHECK(f.L(1, 0) == doctest::Approx(1));
    CHECK(f.L(1, 1) == doctest::Approx(std::sqrt(3.0)));
    CHECK(f.L(0, 1) == 0.0);
    Eigen::MatrixXd r(2, 2);
    r << 1, 1, 1, 1;
    const CholFactor fr = factorize(r);
    CHECK(fr.jitter_used > 0.0);
    CHECK((fr.L * fr.L.transpose() - r).cwiseAbs().maxCoeff() <= 1e-10 * 2);
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK(code_of([&] { factorize(bad); }) == ErrorCode::NotPSD);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0.5, 0.4, 1;
    CHECK(code_of([&] { factorize(asym); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { factorize(Eigen::MatrixXd(2, 3)); }) == ErrorCode::ShapeMismatch);
    const CholFactor ft = factorize(Assembled{ToeplitzRow{{2, -1, 0}}});
    CHECK(ft.L.rows() == 3);
    CHECK((ft.L * ft.L.transpose() - toeplitz_dense(ToeplitzRow{{2, -1, 0}})).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sampling: moments, determinism, replicate independence") {
    const CholFactor id = factorize(Eigen::MatrixXd::Identity(3, 3));
    const Eigen::MatrixXd x = sample(id, 9, 100000);
    for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(x.col(c).mean()) < 0.02);
        const double var = x.col(c).squaredNorm() / x.rows();
        CHECK(var > 0.97);
        CHECK(var < 1.03);
    }
    CHECK(sample(id, 9, 50) == sample(id, 9, 50));
    CHECK(sample(id, 9, 70).topRows(40) == sample(id, 9, 40));
    CHECK(sample(id, 9, 70, 1) == sample(id, 9, 70, 3));
    CHECK(sample(id, 9, 5) != sample(id, 10, 5));
}

TEST_CASE("temporal design: sample covariance within 3 standard errors") {
    const ModelParams p{1.0, {1.0, 1}};
    const SamplingDesign td{DesignKind::Temporal, 1.0, 0, 0, 0.2, 6};
    const Eigen::MatrixXd S = to_dense(assemble_cov(td, p, spec));
    const int N = 20000;
    const Eigen::MatrixXd C = sample_cov(sample(factorize(S), 5, N));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const double se = std::sqrt((S(i, i) * S(j, j) + S(i, j) * S(i, j)) / N);
            CHECK(std::abs(C(i, j) - S(i, j)) < 3 * se);
        }
}

TEST_CASE("property: empirical covariance error shrinks like 1/sqrt(count)") {
    const ModelParams p{1.0, {0.5, 1}};
    const Eigen::MatrixXd S = to_dense(assemble_cov({DesignKind::Temporal, 1.0, 0, 0, 0.5, 5}, p, spec));
    const CholFactor f = factorize(S);
    auto err = [&](int n, std::uint64_t seed) { return (sample_cov(sample(f, seed, n)) - S).norm() / S.norm(); };
    double small = 0, large = 0;
    for (std::uint64_t s = 1; s <= 6; ++s) {
        small += err(1000, s);
        large += err(16000, 100 + s);
    }
    // Expected ratio 4; allow Monte Carlo slack.
    CHECK(small / large > 2.5);
    CHECK(small / large < 6.5);
}

TEST_CASE("temporal u-paths") {
    const ModelParams p1{1.0, {1.0, 1}};
    const SamplingDesign td{DesignKind::Temporal, 1.0, 0, 0, 1.0, 4};
    const Eigen::MatrixXd u = sample_temporal_u_path(td, p1, 3, 10000);
    REQUIRE(u.cols() == 6);
    CHECK(u.col(0).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd i1 = u.col(2) - 2 * u.col(1) + u.col(0);
    CHECK(i1.squaredNorm() / i1.size() == doctest::Approx(1.0).epsilon(0.05));
    // Scale identity under a shared seed.
    for (double b : {0.5, 1.0}) {
        const ModelParams q1{1.0, {b, 1}}, q{3.0, {b, 1}};
        const Eigen::MatrixXd a = sample_temporal_u_path(td, q1, 8, 20);
        const Eigen::MatrixXd c = sample_temporal_u_path(td, q, 8, 20);
        CHECK((c - std::pow(3.0, -b / 4) * a).cwiseAbs().maxCoeff() < 1e-14 * a.cwiseAbs().maxCoeff());
    }
    // Delta scaling and the precomputed factor overload.
    const SamplingDesign td2{DesignKind::Temporal, 1.0, 0, 0, 0.25, 4};
    const CholFactor unit = temporal_unit_factor(4, p1.profile);
    CHECK(sample_temporal_u_path(unit, td2, p1, 8, 20) == sample_temporal_u_path(td2, p1, 8, 20));
    CHECK((sample_temporal_u_path(td2, p1, 8, 20) - std::pow(0.25, 1.0) * sample_temporal_u_path(td, p1, 8, 20))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK(code_of([&] { sample_temporal_u_path({DesignKind::Spatial, 1, 0.1, 4, 0, 0}, p1, 1, 1); }) ==
          ErrorCode::InvalidArgument);
}
