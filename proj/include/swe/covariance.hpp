#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "swe/quadrature.hpp"
#include "swe/specfun.hpp"

namespace swe {

// Wave speed and noise profile. The direction rho only enters through the
// reductions, so it is not stored.
struct ModelParams {
    double vartheta = 1.0;
    NoiseProfile profile;
};

void validate(const ModelParams& p);

enum class DesignKind { Spatial, Temporal, SpaceTime };

const char* design_kind_name(DesignKind k);

// Spatial: n increments at time t on x_k = lambda k rho.
// Temporal: m increments at t_i = delta i.
// SpaceTime: n x m box increments, alpha = delta / lambda.
struct SamplingDesign {
    DesignKind kind = DesignKind::Temporal;
    double t = 1.0;
    double lambda = 0.0;
    int n = 0;
    double delta = 0.0;
    int m = 0;

    double alpha() const { return delta / lambda; }
    // Number of increments in the observation vector.
    long long size() const;
};

void validate(const SamplingDesign& d);

// u-level covariances.
double temporal_cov_u(double ti, double tj, const ModelParams& p);
// beta = d = 1 light-cone formula.
double whitenoise_cov_u(double t, double x, double s, double y, double vartheta);
double spatial_cov_u(int k, int l, const SamplingDesign& design, const ModelParams& p,
                     const QuadratureSpec& spec);

// Increment covariances.
double cov_inc_spatial(int gap, const SamplingDesign& design, const ModelParams& p,
                       const QuadratureSpec& spec);
// Covariance of second-order temporal increments at delta = 1; multiply by
// delta^{3-beta} for a general step.
double cov_inc_temporal(int i, int j, const ModelParams& p, const QuadratureSpec& spec);

enum class BoxForm { Spatial, Temporal };

// Box increment covariance. If `warnings` is given, a RegimeWarning entry is
// appended when the temporal form is requested with alpha > 1.
double cov_inc_box(int i, int j, int k, int l, const SamplingDesign& design, const ModelParams& p,
                   const QuadratureSpec& spec, BoxForm form, std::vector<std::string>* warnings = nullptr);

// Precomputed unit-scale integrals for temporal increments up to index m.
class TemporalTables {
public:
    TemporalTables(int m, const ModelParams& p, const QuadratureSpec& spec, int threads = 0);
    // Unit-step covariance of increments i, j in [1, m].
    double operator()(int i, int j) const;
    int m() const { return m_; }

private:
    int m_;
    double scale_;
    std::vector<double> main_, sv_, r2_, r3_;
};

// Precomputed integrals for box increments on an n x m design.
class BoxTables {
public:
    BoxTables(const SamplingDesign& design, const ModelParams& p, const QuadratureSpec& spec, BoxForm form,
              int threads = 0);
    // i, j in [1, m]; k, l in [1, n].
    double operator()(int i, int j, int k, int l) const;

private:
    int n_, m_;
    double pref_;
    // Indexed [a * n + |g|].
    std::vector<double> main_, u_, r2_, r3_;
};

struct ToeplitzRow {
    std::vector<double> values;
};

struct CovMatrix {
    Eigen::MatrixXd m;
    std::string label;
};

using Assembled = std::variant<ToeplitzRow, CovMatrix>;

struct AssembleOptions {
    long long size_cap = 4096;
    // Box only; defaults to the spatial form for alpha >= 1.
    std::optional<BoxForm> box_form;
    int threads = 0;
    std::vector<std::string>* warnings = nullptr;
};

// Spatial designs give a Toeplitz row; temporal and space-time designs give
// a dense matrix. Temporal entries include the delta^{3-beta} factor. Box
// increments are ordered time-major: index (i-1) n + (k-1).
Assembled assemble_cov(const SamplingDesign& design, const ModelParams& p, const QuadratureSpec& spec,
                       const AssembleOptions& opts = {});

Eigen::MatrixXd to_dense(const Assembled& a);
Eigen::MatrixXd toeplitz_dense(const ToeplitzRow& r);

}  // namespace swe
