#include "swe/selftest.hpp"

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "swe/covariance.hpp"
#include "swe/increments.hpp"
#include "swe/inference.hpp"
#include "swe/sampler.hpp"
#include "swe/specfun.hpp"

namespace swe {

using ojson = nlohmann::ordered_json;

namespace {

struct Stream {
    std::uint64_t seed, stream, k = 0;
    double u() { return uniform01(seed, stream, k++); }
    double in(double a, double b) { return a + (b - a) * u(); }
    int pick(int a, int b) { return a + static_cast<int>(std::floor(u() * (b - a + 1))); }
};

double stencil_l1(const Fn2& h, double q, double z) {
    double s = 0.0;
    const double w[3] = {1.0, -2.0, 1.0};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += std::abs(w[a] * w[b] * h(q - 1 + a, z - 1 + b));
    return s;
}

double inc_l1(const Fn1& f, int p, double z) {
    double s = 0.0;
    for (int k = -p; k <= p; ++k) s += std::abs(f(z + k));
    return s * std::pow(2.0, p);
}

}  // namespace

IdentityCheck check_increment_identities(int cases, std::uint64_t seed, double tol) {
    IdentityCheck out;
    Stream rng{seed, 0};
    auto note = [&](double err, double scale) {
        const double e = err / std::max(1.0, scale);
        out.max_error = std::max(out.max_error, e);
        if (!(e <= tol)) ++out.failures;
        ++out.cases;
    };
    for (int c = 0; c < cases; ++c) {
        const int which = c % 6;
        if (which == 0) {
            const TrigKind k = rng.u() < 0.5 ? TrigKind::Cos : TrigKind::Sin;
            const int p = rng.pick(1, 8);
            const double r = rng.in(0.01, 3.0), z = rng.in(-6.0, 6.0);
            const Fn1 f = [k, r](double x) { return k == TrigKind::Cos ? std::cos(r * x) : std::sin(r * x); };
            note(std::abs(trig_inc(k, p, r, z) - inc_p(f, p, z)), inc_l1(f, p, z));
            continue;
        }
        const double a = rng.in(-2, 2), b = rng.in(0.1, 2), cc = rng.in(-1, 1), e = rng.in(-0.3, 0.3);
        const StructuredForm form = static_cast<StructuredForm>(which - 1);
        // Symmetric f for the min form, otherwise with an odd part.
        const double odd = form == StructuredForm::Min ? 0.0 : e;
        const Fn1 f = [a, b, cc, odd](double x) { return a * std::cos(b * x) + cc * x * x + odd * x * x * x; };
        const int q = rng.pick(1, 9);
        // Boundary gaps 0 and 1 are hit a third of the time each.
        const int r = rng.pick(0, 2);
        int z = r == 0 ? q : (r == 1 ? q + (rng.u() < 0.5 ? 1 : -1) : rng.pick(1, 12));
        if (z < 1) z = q + 1;
        const Fn2 h = assemble_structured(form, f);
        note(std::abs(inc2_structured(form, f, q, z) - inc2_2d(h, q, z)), stencil_l1(h, q, z));
    }
    return out;
}

SelftestResult run_selftest(int threads) {
    ojson j;
    bool ok = true;
    QuadratureSpec spec;
    auto check = [&](const char* name, double value, double target, double tol) {
        const double err = std::abs(value - target);
        const bool pass = err <= tol;
        ok = ok && pass;
        j["checks"].push_back({{"name", name}, {"value", value}, {"target", target}, {"tol", tol}, {"pass", pass}});
    };

    const IdentityCheck ic = check_increment_identities(600, 20240611);
    check("increment identities max scaled error", ic.max_error, 0.0, 1e-12);

    const ConstantsTable c = constants_table({1.0, 1}, spec);
    check("c_sp_E at beta=d=1", c.c_sp_E, 1.0, 1e-8);
    check("c_te_E at beta=d=1", c.c_te_E, 0.5, 1e-8);
    check("c_sp_V at beta=d=1", c.c_sp_V, 3.0, 1e-8);
    check("c_te_V at beta=d=1", c.c_te_V, 1.0, 1e-8);
    check("c_box_sp_E / c_sp_E", c.c_box_sp_E / c.c_sp_E, 3.0, 1e-15);
    check("c_box_te_E / c_te_E", c.c_box_te_E / c.c_te_E, 6.0, 1e-15);

    double fe = 0.0;
    for (int n : {1, 4, 9}) {
        const auto w = fejer_sp_weights(n);
        for (double x : {0.3, 1.7, 2.9}) {
            double s = 0.0;
            for (int k = -(n - 1); k <= n - 1; ++k) s += w[k + n - 1] * std::cos(k * x);
            fe = std::max(fe, std::abs(s - fejer_sp(x, n)));
        }
    }
    check("Fejer kernel representation", fe, 0.0, 1e-10);
    check("w_te,0 at m=10^4", fejer_te_weight(0, 10000), 1.0 / 3.0, 2e-4);

    // Temporal covariance against second differences of the closed form.
    double worst = 0.0;
    for (double beta : {0.5, 1.0}) {
        const ModelParams p{1.3, {beta, 1}};
        const TemporalTables t(6, p, spec, threads);
        for (int a = 1; a <= 6; ++a)
            for (int b = 1; b <= 6; ++b) {
                const double o = inc2_2d([&](double x, double y) { return temporal_cov_u(x, y, p); }, a, b);
                worst = std::max(worst, std::abs(t(a, b) - o) / std::max(1e-3, std::abs(o)));
            }
    }
    check("temporal increment covariance vs closed form", worst, 0.0, 1e-6);

    const SamplingDesign sd{DesignKind::Spatial, 1.0, 0.01, 4, 0.0, 0};
    const ModelParams wn{1.0, {1.0, 1}};
    check("spatial band gap 0", cov_inc_spatial(0, sd, wn, spec) / 0.01, 1.0, 1e-6);
    check("spatial band gap 1", cov_inc_spatial(1, sd, wn, spec) / 0.01, -0.5, 1e-6);
    check("spatial band gap 2", cov_inc_spatial(2, sd, wn, spec) / 0.01, 0.0, 1e-6);

    const SamplingDesign bd{DesignKind::SpaceTime, 1.0, 0.1, 2, 0.05, 2};
    double bw = 0.0, lc = 0.0;
    const double w[3] = {1.0, -2.0, 1.0};
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int k = 1; k <= 2; ++k)
                for (int l = 1; l <= 2; ++l) {
                    const double s = cov_inc_box(a, b, k, l, bd, wn, spec, BoxForm::Spatial);
                    const double t = cov_inc_box(a, b, k, l, bd, wn, spec, BoxForm::Temporal);
                    double o = 0.0;
                    for (int p1 = 0; p1 < 3; ++p1)
                        for (int q1 = 0; q1 < 3; ++q1)
                            for (int p2 = 0; p2 < 3; ++p2)
                                for (int q2 = 0; q2 < 3; ++q2)
                                    o += w[p1] * w[q1] * w[p2] * w[q2] *
                                         whitenoise_cov_u(bd.delta * (a - 1 + p1), bd.lambda * (k - 1 + q1),
                                                          bd.delta * (b - 1 + p2), bd.lambda * (l - 1 + q2), 1.0);
                    bw = std::max(bw, std::abs(s - t));
                    lc = std::max(lc, std::abs(s - o));
                }
    const double scale = std::abs(cov_inc_box(1, 1, 1, 1, bd, wn, spec, BoxForm::Spatial));
    check("box forms agree (relative to diagonal)", bw / scale, 0.0, 1e-6);
    check("box vs light-cone oracle (relative to diagonal)", lc / scale, 0.0, 1e-6);

    const auto kat = philox4x32({0, 0, 0, 0}, {0, 0});
    check("Philox known answer", static_cast<double>(kat[0]), static_cast<double>(0x6627e8d5u), 0.0);

    double mle = 0.0;
    for (int m = 2; m <= 10; ++m) {
        std::vector<double> u(m);
        for (int k = 0; k < m; ++k) u[k] = std::sin(1.0 + 0.7 * k) * (k + 1);
        const double gap = mle_q_weighted(u) - mle_q_direct(u);
        mle = std::max(mle, std::abs(gap - u[m - 1] * u[m - 1] / (2.0 * m + 1.0)));
    }
    check("MLE weighted minus direct equals boundary term", mle, 0.0, 1e-12);
    check("Hellinger example", hellinger_sq(1.0, 4.0, 1.0, 2),
          1.0 / 9.0, 1e-15);

    j["increment_cases"] = ic.cases;
    j["ok"] = ok;
    return {j.dump(2) + "\n", ok};
}

}  // namespace swe
