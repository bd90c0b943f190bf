#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swe/covariance.hpp"
#include "swe/inference.hpp"
#include "swe/quadrature.hpp"
#include "swe/specfun.hpp"

namespace swe {

struct Tolerances {
    // Mean check: |mean - target| <= mean_se * MC standard error + bias_allowance.
    double mean_se = 4.0;
    double bias_allowance = 0.0;
    // Variance check: |empirical / target - 1| <= var_rel.
    double var_rel = 0.2;
    // KS check: distance < ks_factor * 1.36 / sqrt(R).
    double ks_factor = 2.0;
    // Coverage band.
    double coverage_lo = 0.92;
    double coverage_hi = 0.98;
};

struct AssumptionLimits {
    // lambda n^{1/4} at most this (finite-n reading of lambda = o(n^{-1/4})).
    double lambda_n_quarter_max = 1.0;
    // n / m at most this (finite-n reading of n / m -> 0).
    double n_over_m_max = 0.25;
};

struct ExperimentConfig {
    VariationKind statistic = VariationKind::Te;
    SamplingDesign design;
    ModelParams params;
    int replicates = 100;
    std::uint64_t seed = 1;
    double level = 0.95;
    int threads = 0;
    QuadratureSpec quad;
    Tolerances tol;
    AssumptionLimits limits;
    // Sweep only: alpha values; lambda = delta / alpha with design.delta, n, m fixed.
    std::vector<double> alphas;
    std::string name;
};

void validate(const ExperimentConfig& c);

// Throws AssumptionViolated naming the failed inequality.
void check_assumptions(const ExperimentConfig& c);

struct MCReport {
    std::string name;
    std::string experiment;  // clt, coverage, sweep, mle
    VariationKind statistic = VariationKind::Te;
    SamplingDesign design;
    ModelParams params;
    int replicates = 0;
    std::uint64_t seed = 0;
    ConstantsTable constants;

    std::vector<double> stats;  // rescaled statistic per replicate
    std::vector<double> standardized;
    std::vector<EstimateWithCI> estimates;

    double mean = 0.0, variance = 0.0, mc_se = 0.0;
    double target_mean = 0.0, target_variance = 0.0, rate = 1.0;
    double scaled_variance = 0.0;  // variance of rate * (stat - target)
    double ks = 0.0, ks_critical = 0.0;
    double coverage = -1.0;        // fraction of CIs containing vartheta, or -1
    double estimate_mean = 0.0, estimate_se = 0.0;

    // Sweep extras: the other normalization and the ratio identity.
    std::optional<double> other_mean;
    std::optional<double> ratio_identity_error;
    double alpha = 0.0;
    // MLE only: max over replicates of |(Q_weighted - Q_direct) - u_m^2/(2m+1)|.
    std::optional<double> boundary_term_error;

    double jitter = 0.0;
    std::vector<std::string> warnings;
    bool mean_ok = false, variance_ok = false, ks_ok = false, coverage_ok = true;
    double runtime_seconds = 0.0;  // excluded from the deterministic report
};

MCReport run_clt_experiment(const ExperimentConfig& c);
MCReport run_coverage_experiment(const ExperimentConfig& c);
std::vector<MCReport> run_regime_sweep(const ExperimentConfig& c);
// beta = d = 1 maximum likelihood on simulated u-paths (temporal design).
MCReport run_mle_experiment(const ExperimentConfig& c);

// Kolmogorov-Smirnov distance of a sample to the standard normal.
double ks_normal(std::vector<double> z);

// Serialization. Reports are deterministic unless include_timing is set.
std::string report_json(const MCReport& r, bool include_timing = false);
std::string reports_json(const std::vector<MCReport>& r, bool include_timing = false);
std::string replicates_csv(const MCReport& r);
std::string qq_csv(const MCReport& r);

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& c);

// Formats a double with 17 significant digits.
std::string fmt17(double x);

}  // namespace swe
