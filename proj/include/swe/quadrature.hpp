#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "swe/trig_sum.hpp"

namespace swe {

struct QuadratureSpec {
    double rel_tol = 1e-11;
    double abs_tol = 1e-15;
    // Truncation radius for integrands without a tail expansion.
    double truncation_radius = 1e4;
    // Maximum bisection depth of the adaptive rule on each panel.
    int max_subdivisions = 30;
};

void validate(const QuadratureSpec& spec);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (21 points) over `panels` equal sub-intervals,
// summed left to right.
QuadResult gk_panels(const Fn& f, double a, double b, int panels, const QuadratureSpec& spec);

// Integral over [0, a] of a function behaving like r^origin_power at 0
// (origin_power > -1); the substitution r = a u^k removes the endpoint
// singularity before the adaptive rule is applied.
QuadResult gk_origin(const Fn& f, double a, double origin_power, const QuadratureSpec& spec);

// Integral over [X, inf) of e^{ix} x^p, p < 0, X > 0.
std::complex<double> osc_power_tail(double p, double X);

// Integral over [T, inf) of an expansion, term by term in closed or
// tabulated form.
QuadResult tail_integral(const TrigSum& expansion, double T);

// A piece of the integrand together with its expansion, which is exact
// (or asymptotically accurate to double precision) for r >= valid_from.
struct TailPiece {
    TrigSum expansion;
    double valid_from = 0.0;
    Fn eval;  // needed only when valid_from exceeds the split point
};

// Integrand on (0, inf). `core` must evaluate the full integrand stably;
// the pieces must add up to `core` pointwise.
struct OscIntegrand {
    Fn core;
    std::vector<TailPiece> pieces;
    double origin_power = 0.0;
};

// Integral over (0, inf): adaptive quadrature of `core` on [0, T0] with T0
// a few oscillation periods, then each piece's tail handled analytically
// (after numerical integration up to its valid_from where needed).
// Throws ToleranceNotMet if the reported error exceeds the tolerance.
QuadResult integrate_half_line(const OscIntegrand& f, const QuadratureSpec& spec);

// Plain truncated integral over [0, T] for integrands without expansion.
QuadResult integrate_truncated(const Fn& f, double T, double origin_power, double panel_width,
                               const QuadratureSpec& spec);

}  // namespace swe
