#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "swe/covariance.hpp"

namespace swe {

// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// The k-th uniform on the open interval (0, 1) of stream `stream` under
// `seed`. Each Philox block yields two 53-bit uniforms.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);

// Standard normals by the inverse normal CDF applied to uniform01.
void standard_normals(std::uint64_t seed, std::uint64_t stream, double* out, std::size_t n);

struct CholFactor {
    Eigen::MatrixXd L;
    double jitter_used = 0.0;
};

constexpr long long kSampleSizeCap = 4096;

// Cholesky with jitter eps * trace / dim on the diagonal, eps escalating
// 0, 1e-14, ..., 1e-10. Throws NotPSD beyond that.
CholFactor factorize(const Eigen::MatrixXd& cov);
CholFactor factorize(const Assembled& cov);

// count x dim matrix; row r is L z with z the normals of stream r, so a
// replicate's draw does not depend on `count`.
Eigen::MatrixXd sample(const CholFactor& f, std::uint64_t seed, int count, int threads = 0);

// Draws of (u(t_0), ..., u(t_{m+1})) at one spatial point; column 0 is zero.
// The factor is built at delta = vartheta = 1 and the draws are scaled by
// delta^{(3-beta)/2} vartheta^{-beta/4}.
Eigen::MatrixXd sample_temporal_u_path(const SamplingDesign& design, const ModelParams& p, std::uint64_t seed,
                                       int count, int threads = 0);
// As above with a precomputed unit factor (from temporal_unit_factor).
Eigen::MatrixXd sample_temporal_u_path(const CholFactor& unit, const SamplingDesign& design, const ModelParams& p,
                                       std::uint64_t seed, int count, int threads = 0);
// Factor of [temporal_cov_u(i, j)] for i, j = 1..m+1 at delta = vartheta = 1.
CholFactor temporal_unit_factor(int m, const NoiseProfile& profile);

}  // namespace swe
