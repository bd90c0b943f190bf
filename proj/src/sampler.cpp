#include "swe/sampler.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "swe/error.hpp"
#include "swe/parallel.hpp"

namespace swe {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    constexpr std::uint64_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = M0 * c[0], p1 = M1 * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

namespace {

std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream, std::uint64_t b) {
    return philox4x32({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
                      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

// 53 random bits mapped to the midpoint grid (j + 1/2) / 2^53, strictly inside (0, 1).
double to_unit(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t j = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
    return (static_cast<double>(j) + 0.5) * 0x1.0p-53;
}

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
    const auto w = block(seed, stream, k / 2);
    return (k % 2 == 0) ? to_unit(w[0], w[1]) : to_unit(w[2], w[3]);
}

void standard_normals(std::uint64_t seed, std::uint64_t stream, double* out, std::size_t n) {
    const boost::math::normal_distribution<double> N;
    for (std::size_t b = 0; 2 * b < n; ++b) {
        const auto w = block(seed, stream, b);
        out[2 * b] = boost::math::quantile(N, to_unit(w[0], w[1]));
        if (2 * b + 1 < n) out[2 * b + 1] = boost::math::quantile(N, to_unit(w[2], w[3]));
    }
}

CholFactor factorize(const Eigen::MatrixXd& cov) {
    require(cov.rows() == cov.cols(), "covariance must be square", ErrorCode::ShapeMismatch);
    require(cov.rows() >= 1, "covariance must be non-empty", ErrorCode::ShapeMismatch);
    require(cov.rows() <= kSampleSizeCap, "covariance dimension above the cap of 4096", ErrorCode::SizeCapExceeded);
    const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
    require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "covariance must be symmetric");
    require(cov.allFinite(), "covariance must be finite");
    const double base = cov.trace() / static_cast<double>(cov.rows());
    for (double eps : {0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10}) {
        Eigen::MatrixXd a = cov;
        const double j = eps * base;
        a.diagonal().array() += j;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() == Eigen::Success) {
            CholFactor f;
            f.L = llt.matrixL();
            if (f.L.allFinite()) {
                f.jitter_used = j;
                return f;
            }
        }
    }
    throw Error(ErrorCode::NotPSD, "covariance is not positive semi-definite within jitter 1e-10 * trace / dim");
}

CholFactor factorize(const Assembled& cov) { return factorize(to_dense(cov)); }

Eigen::MatrixXd sample(const CholFactor& f, std::uint64_t seed, int count, int threads) {
    require(count >= 1, "count must be >= 1");
    const Eigen::Index dim = f.L.rows();
    // Replicates go through L in fixed blocks of kBlock columns (zero-padded),
    // so the arithmetic for a replicate is the same for every count.
    constexpr int kBlock = 32;
    const int blocks = (count + kBlock - 1) / kBlock;
    Eigen::MatrixXd out(count, dim);
    parallel_for(
        static_cast<std::size_t>(blocks),
        [&](std::size_t b) {
            Eigen::MatrixXd z = Eigen::MatrixXd::Zero(dim, kBlock);
            const int first = static_cast<int>(b) * kBlock;
            const int cols = std::min(kBlock, count - first);
            for (int c = 0; c < cols; ++c)
                standard_normals(seed, static_cast<std::uint64_t>(first + c), z.col(c).data(),
                                 static_cast<std::size_t>(dim));
            const Eigen::MatrixXd x = f.L.triangularView<Eigen::Lower>() * z;
            out.middleRows(first, cols) = x.leftCols(cols).transpose();
        },
        threads);
    return out;
}

CholFactor temporal_unit_factor(int m, const NoiseProfile& profile) {
    require(m >= 1, "m must be >= 1");
    require(m + 1 <= kSampleSizeCap, "path length above the cap of 4096", ErrorCode::SizeCapExceeded);
    const ModelParams unit{1.0, profile};
    Eigen::MatrixXd K(m + 1, m + 1);
    for (int i = 1; i <= m + 1; ++i)
        for (int j = 1; j <= i; ++j) K(i - 1, j - 1) = K(j - 1, i - 1) = temporal_cov_u(i, j, unit);
    return factorize(K);
}

Eigen::MatrixXd sample_temporal_u_path(const CholFactor& unit, const SamplingDesign& design, const ModelParams& p,
                                       std::uint64_t seed, int count, int threads) {
    validate(design);
    validate(p);
    require(design.kind == DesignKind::Temporal, "u-path sampling needs a temporal design");
    require(unit.L.rows() == design.m + 1, "unit factor does not match m", ErrorCode::ShapeMismatch);
    const Eigen::MatrixXd z = sample(unit, seed, count, threads);
    const double s = std::pow(design.delta, 0.5 * (3.0 - p.profile.beta)) * std::pow(p.vartheta, -0.25 * p.profile.beta);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(count, design.m + 2);
    out.rightCols(design.m + 1) = s * z;
    return out;
}

Eigen::MatrixXd sample_temporal_u_path(const SamplingDesign& design, const ModelParams& p, std::uint64_t seed,
                                       int count, int threads) {
    validate(design);
    return sample_temporal_u_path(temporal_unit_factor(design.m, p.profile), design, p, seed, count, threads);
}

}  // namespace swe
