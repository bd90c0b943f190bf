#pragma once

#include <functional>
#include <vector>

namespace swe {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

// Symmetric increment of order p at z. Even p is the centred forward
// difference; odd p is the (p-1)-th even increment of f(z+1)-f(z-1).
double inc_p(const Fn1& f, int p, double z);

// Second-order increment in two variables (3x3 stencil).
double inc2_2d(const Fn2& h, double q, double z);

enum class TrigKind { Cos, Sin };

// Closed form of inc_p applied to cos(. r) or sin(. r).
double trig_inc(TrigKind kind, int p, double r, double z);

enum class StructuredForm { Sum, Diff, Product, Min, Abs };

// Closed-form right-hand sides for inc2_2d applied to
//   Sum:     h(q,z) = f(q+z)
//   Diff:    h(q,z) = f(q-z)
//   Product: h(q,z) = q f(q-z)
//   Min:     h(q,z) = min(q,z) f(q-z), f symmetric
//   Abs:     h(q,z) = f(|q-z|)
// Throws SymmetryViolation for the Min form if f(k) != f(-k) at k = 1,2,3.
double inc2_structured(StructuredForm form, const Fn1& f, int q, int z);

// The h assembled from f for a given form, for comparisons against inc2_2d.
Fn2 assemble_structured(StructuredForm form, const Fn1& f);

// Heuristic symmetry test used by the Min form (three sample points).
bool looks_symmetric(const Fn1& f, double tol = 1e-10);

// Adapter turning observed values into a grid function: f(k) = data[k - origin].
Fn1 sequence_fn(std::vector<double> data, int origin = 0);

long long binomial(int n, int k);

}  // namespace swe
