#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "swe/covariance.hpp"
#include "swe/specfun.hpp"

namespace swe {

// Sum in index order by recursive halving; fixed association for any thread count.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum_squares(const double* x, std::size_t n);

// x_{k+1} - 2 x_k + x_{k-1}, k = 1..len-2.
std::vector<double> second_diff(const std::vector<double>& series);
// Box increments of a grid with time along rows and space along columns;
// result is (rows-2) x (cols-2).
Eigen::MatrixXd box_diff(const Eigen::MatrixXd& grid);
// Same, differencing time first.
Eigen::MatrixXd box_diff_time_first(const Eigen::MatrixXd& grid);

enum class VariationKind { Sp, Te, BoxSp, BoxTe };

const char* variation_kind_name(VariationKind k);
VariationKind parse_variation_kind(const std::string& s);

struct VariationResult {
    double raw = 0.0;
    double rescaled = 0.0;
    VariationKind kind = VariationKind::Te;
};

// Rescaling of V: sp lambda^{beta-2} V / n, te delta^{beta-3} V / m^2,
// box-sp delta^{-1} lambda^{beta-2} V / (n m^2), box-te delta^{beta-3} V / (n m^2).
double rescaling_factor(VariationKind kind, const SamplingDesign& design, const NoiseProfile& profile);

// increments must have design.size() entries (box: time-major).
VariationResult variation(VariationKind kind, const double* increments, std::size_t count,
                          const SamplingDesign& design, const NoiseProfile& profile);
VariationResult variation(VariationKind kind, const std::vector<double>& increments, const SamplingDesign& design,
                          const NoiseProfile& profile);

// Limit of the rescaled variation and of the variance of rate * (rescaled - mean).
struct LimitLaw {
    double mean = 0.0;
    double variance = 0.0;
    double rate = 1.0;
};
LimitLaw limit_law(VariationKind kind, const ConstantsTable& c, const SamplingDesign& design, double vartheta);

struct EstimateWithCI {
    double estimate = 0.0;
    double level = 0.95;
    double lower = 0.0;
    double upper = 0.0;
    double rate_factor = 1.0;
};

// Two-sided standard normal critical value for `level`.
double normal_critical(double level);

EstimateWithCI estimate(VariationKind kind, const VariationResult& v, const ConstantsTable& c,
                        const SamplingDesign& design, double level = 0.95);

// beta = d = 1 maximum likelihood from U = (u(t_1), ..., u(t_m)).
struct MleResult {
    double estimate = 0.0;
    double q_direct = 0.0;
    double q_weighted = 0.0;
};
// Q by direct solve of A y = U with A = [min(i, j)^2].
double mle_q_direct(const std::vector<double>& u);
// The weighted quadratic variation with the extra boundary term u_m^2/(2m+1).
double mle_q_weighted(const std::vector<double>& u);
MleResult mle_whitenoise(const std::vector<double>& u, double delta);

double hellinger_sq(double theta0, double theta1, double beta, int m);

}  // namespace swe
