#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "swe/quadrature.hpp"
#include "swe/trig_sum.hpp"

namespace swe {

// Riesz noise exponent beta in (0, min(2, d)) and spatial dimension d.
struct NoiseProfile {
    double beta = 1.0;
    int d = 1;
};

void validate(const NoiseProfile& p);

// Surface area of the unit sphere S^k in R^{k+1}; S^0 = {-1, 1} has area 2.
double sphere_area(int k);

// c_beta = integral over (0, inf) of sin(w) w^{beta-2}, as Gamma(beta-1) sin(pi(beta-1)/2).
double c_beta(double beta);

// Temporal covariance constant C_{beta,d} = S_{d-1} c_beta / ((2 pi)^d 2 (2 - beta)).
double c_beta_d(const NoiseProfile& p);

// Integrating out the d-1 directions orthogonal to rho:
// integral over R^{d-1} of (s^2+|y|^2)^{(beta-d-2)/2} dy = K |s|^{beta-3}.
// K = 1 for d = 1.
double beta_reduction_factor(const NoiseProfile& p);

// Average of cos(z theta_1) over the unit sphere in R^d:
// Gamma(d/2) (2/z)^{d/2-1} J_{d/2-1}(z); cos z for d = 1.
double sphere_cos_average(int d, double z);

// Large-argument expansion of sphere_cos_average(d, q r) in r. Exact for
// odd d; for even d accurate to double precision once q r >= hankel_threshold().
TrigSum sphere_cos_expansion(int d, double q);
double hankel_threshold();

// phi(xi) with an expansion exact for xi > 0 and its order of vanishing at 0.
struct RadialKernel {
    std::function<double(double)> eval;
    TrigSum expansion;
    double origin_order = 0.0;
};

namespace kernels {
RadialKernel one();
// sin^4(xi/2) cos(h xi)
RadialKernel sin4_cos(double h);
// sin^4(xi/2) sin(a xi) / xi
RadialKernel sin4_sin_over(double a);
// sum_i alpha_i cos(b_i xi) + sum_i gamma_i sinc(c_i xi), series-guarded at 0
RadialKernel cos_sinc(std::vector<std::pair<double, double>> cos_terms,
                      std::vector<std::pair<double, double>> sinc_terms, double origin_order);
RadialKernel sinc();
RadialKernel one_minus_sinc();
// Temporal remainder kernels, total over all gaps h = |i-j| >= 0.
RadialKernel r2(int gap);
RadialKernel r3(int gap);
}  // namespace kernels

enum class AngularKind { None, Plain, Sin4 };

// Angular factor evaluated at s = kappa * (rho . omega):
//   None:  1
//   Plain: cos(g s)
//   Sin4:  cos(g s) sin^4(s/2)
struct AngularFactor {
    AngularKind kind = AngularKind::None;
    double g = 0.0;
    double kappa = 1.0;
};

// Integral over R^d of A(rho . omega) phi(scale |omega|) |omega|^{beta-d-2},
// reduced to S_{d-1} times a half-line integral in |omega|.
QuadResult wave_integral(const NoiseProfile& p, const AngularFactor& a, const RadialKernel& phi,
                         double scale, const QuadratureSpec& spec);

// Sphere average of the angular factor at |omega| = r, i.e. at y = kappa r (stable near 0).
double angular_average(int d, const AngularFactor& a, double r);

// S_{d-1} times the integral over (0, inf) of integrand(r) r^{d-1}. If an
// expansion of integrand(r) r^{d-1} is supplied the tail is exact; otherwise
// the integral is truncated at spec.truncation_radius.
struct RadialIntegrand {
    std::function<double(double)> f;
    std::optional<TrigSum> expansion;  // of f(r) r^{d-1}
    double origin_power = 0.0;         // of f(r) r^{d-1}
};
QuadResult radial_reduce(const RadialIntegrand& f, int d, const QuadratureSpec& spec);

// g_te(omega) = sin^4(|omega|/2)|omega|^{beta-d-2} as a radial integrand.
RadialIntegrand gte_profile(const NoiseProfile& p);

// Integral over R^d of F(rho . omega, |omega|), d >= 2.
struct MixedIntegrand {
    std::function<double(double, double)> F;
    // If set, F(s, v) = phi(s) v^{beta-d-2} and the Beta reduction is used.
    std::function<double(double)> phi_s;
    std::optional<TrigSum> phi_expansion;
    double phi_origin_order = 0.0;
    // Generic path: large-v expansion of the shell function
    // S(v) = v^{d-1} integral over (0, pi) of F(v cos a, v) sin^{d-2} a da,
    // and its power at the origin. Without it the v-integral is truncated at
    // spec.truncation_radius, at a cost growing like its square.
    std::optional<TrigSum> shell_expansion;
    double shell_origin_power = 0.0;
};
QuadResult mixed_reduce(const MixedIntegrand& f, const NoiseProfile& p, const QuadratureSpec& spec);

// F_c(g_sp)(k rho) and F_c^+(g_te)(j).
double cos_transform_gsp(double k, const NoiseProfile& p, const QuadratureSpec& spec);
double cos_transform_gte(double j, const NoiseProfile& p, const QuadratureSpec& spec);

// Integral over (0, inf) of cos(k r) sin^4(r/2) r^{beta-3}, valid for beta in (0, 2).
double half_line_sin4(double k, double beta, const QuadratureSpec& spec);

double fejer_sp(double x, int n);
double fejer_sp_weight(int k, int n);
std::vector<double> fejer_sp_weights(int n);  // index k + n - 1 for |k| < n
double fejer_te(double x, int m);
double fejer_te_weight(int j, int m);
std::vector<double> fejer_te_weights(int m);  // index j + m - 1 for |j| < m

struct ConstantsTable {
    double beta = 1.0;
    int d = 1;
    double c_sp_E = 0, c_sp_V = 0, c_te_E = 0, c_te_V = 0;
    double c_box_sp_E = 0, c_box_sp_V = 0, c_box_te_E = 0, c_box_te_V = 0;
    int series_truncation = 0;
    double error_estimate = 0.0;
};

ConstantsTable constants_table(const NoiseProfile& p, const QuadratureSpec& spec, int series_cap = 256);

}  // namespace swe
