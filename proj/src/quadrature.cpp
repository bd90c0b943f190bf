#include "swe/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <string>

#include "swe/error.hpp"

namespace swe {

namespace bq = boost::math::quadrature;

void validate(const QuadratureSpec& spec) {
    require(spec.rel_tol > 0 && spec.abs_tol > 0, "quadrature tolerances must be positive");
    require(spec.truncation_radius > 0, "truncation radius must be positive");
    require(spec.max_subdivisions >= 1, "max_subdivisions must be >= 1");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a, b, value, error;
};

// One Gauss-Kronrod 21 / Gauss 10 application with the QUADPACK error heuristic.
template <class F>
Panel gk21(const F& f, double a, double b, double* l1) {
    const auto& x = bq::gauss_kronrod<double, 21>::abscissa();
    const auto& wk = bq::gauss_kronrod<double, 21>::weights();
    const auto& wg = bq::gauss<double, 10>::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double f0 = f(c);
    double k = wk[0] * f0, g = 0.0, abs_k = std::abs(k);
    double fv[21];
    fv[0] = f0;
    for (size_t i = 1; i < x.size(); ++i) {
        const double f1 = f(c - h * x[i]), f2 = f(c + h * x[i]);
        fv[2 * i - 1] = f1;
        fv[2 * i] = f2;
        k += wk[i] * (f1 + f2);
        abs_k += wk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) g += wg[(i - 1) / 2] * (f1 + f2);
    }
    const double mean = 0.5 * k;
    double asc = wk[0] * std::abs(f0 - mean);
    for (size_t i = 1; i < x.size(); ++i)
        asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    double err = std::abs((k - g) * h);
    const double resasc = asc * std::abs(h), resabs = abs_k * std::abs(h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50 * kEps))
        err = std::max(50 * kEps * resabs, err);
    if (l1) *l1 = resabs;
    return {a, b, k * h, err};
}

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    }
};

template <class F>
QuadResult adaptive(const F& f, double a, double b, int panels, const QuadratureSpec& spec) {
    QuadResult out;
    if (!(b > a)) return out;
    panels = std::max(1, panels);
    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    double total = 0.0, err = 0.0, l1 = 0.0;
    const double w = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * w, hi = (i + 1 == panels) ? b : a + (i + 1) * w;
        double pl1 = 0.0;
        Panel p = gk21(f, lo, hi, &pl1);
        l1 += pl1;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int splits = 0;
    const int cap = spec.max_subdivisions * panels + 64;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) && splits < cap) {
        Panel p = heap.top();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) break;
        heap.pop();
        double l1a = 0.0, l1b = 0.0;
        Panel left = gk21(f, p.a, mid, &l1a), right = gk21(f, mid, p.b, &l1b);
        total += left.value + right.value - p.value;
        err += left.error + right.error - p.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // Re-sum in positional order so the result does not depend on heap history.
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double v = 0.0, e = 0.0, l1s = 0.0;
    for (const auto& p : all) {
        v += p.value;
        e += p.error;
    }
    l1s = l1;
    out.value = v;
    out.error = e;
    out.l1 = l1s;
    return out;
}

}  // namespace

QuadResult gk_panels(const Fn& f, double a, double b, int panels, const QuadratureSpec& spec) {
    return adaptive(f, a, b, panels, spec);
}

QuadResult gk_origin(const Fn& f, double a, double origin_power, const QuadratureSpec& spec) {
    const double e = std::max(origin_power, -0.999);
    const int k = std::clamp(static_cast<int>(std::ceil(4.0 / (e + 1.0))), 1, 24);
    if (k == 1) return adaptive(f, 0.0, a, 1, spec);
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double uk1 = std::pow(u, k - 1);
        return f(a * uk1 * u) * a * k * uk1;
    };
    return adaptive(g, 0.0, 1.0, 2, spec);
}

namespace {

// i e^{iX} sum_k i^k p(p-1)...(p-k+1) X^{p-k}; error = smallest term used.
std::complex<double> asymptotic_tail(double p, double X, double* err) {
    const std::complex<double> I(0.0, 1.0);
    std::complex<double> sum = 0.0;
    std::complex<double> ik = 1.0;
    double coef = std::pow(X, p);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        const double mag = std::abs(coef);
        if (mag > prev) break;
        sum += ik * coef;
        prev = mag;
        if (mag <= 1e-19 * std::abs(sum)) break;
        coef *= (p - k) / X;
        ik *= I;
    }
    if (err) *err = prev;
    return I * std::exp(I * X) * sum;
}

struct PowerTable {
    int xa = 40;
    // a[k] = integral over [k, inf) of e^{ix} x^p for k = 1..xa
    std::vector<std::complex<double>> a;
};

const PowerTable& power_table(double p) {
    thread_local std::map<double, PowerTable> cache;
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    PowerTable t;
    t.xa = 40 + static_cast<int>(std::ceil(2.0 * std::abs(p)));
    t.a.assign(t.xa + 1, 0.0);
    t.a[t.xa] = asymptotic_tail(p, t.xa, nullptr);
    QuadratureSpec fine;
    fine.rel_tol = 1e-15;
    fine.abs_tol = 1e-300;
    fine.max_subdivisions = 60;
    for (int k = t.xa - 1; k >= 1; --k) {
        const double re =
            adaptive([p](double x) { return std::cos(x) * std::pow(x, p); }, k, k + 1.0, 1, fine).value;
        const double im =
            adaptive([p](double x) { return std::sin(x) * std::pow(x, p); }, k, k + 1.0, 1, fine).value;
        t.a[k] = t.a[k + 1] + std::complex<double>(re, im);
    }
    return cache.emplace(p, std::move(t)).first->second;
}

// integral over [X, 1] of x^q
double power_integral(double q, double X) {
    const double e = q + 1.0;
    const double lx = std::log(X);
    if (e == 0.0) return -lx;
    return -std::expm1(e * lx) / e;
}

}  // namespace

std::complex<double> osc_power_tail(double p, double X) {
    require(p < 0.0, "oscillatory tail requires a negative power");
    require(X > 0.0, "oscillatory tail requires X > 0");
    const PowerTable& t = power_table(p);
    if (X >= t.xa) return asymptotic_tail(p, X, nullptr);
    if (X >= 1.0) {
        const double k = std::ceil(X);
        std::complex<double> v = t.a[static_cast<size_t>(k)];
        if (k > X) {
            // e^{ix} x^p is analytic on a disc of radius >= 1 around [X, k], a
            // segment of length <= 1; 20-point Gauss-Legendre is exact to rounding.
            const auto& xs = bq::gauss<double, 20>::abscissa();
            const auto& ws = bq::gauss<double, 20>::weights();
            const double c = 0.5 * (X + k), h = 0.5 * (k - X);
            double re = 0.0, im = 0.0;
            for (std::size_t q = 0; q < xs.size(); ++q) {
                for (double sgn : {-1.0, 1.0}) {
                    const double x = c + sgn * h * xs[q];
                    const double w = ws[q] * std::pow(x, p);
                    re += w * std::cos(x);
                    im += w * std::sin(x);
                }
            }
            v += std::complex<double>(re * h, im * h);
        }
        return v;
    }
    // Power series of e^{ix} on [X, 1].
    std::complex<double> s = 0.0, ik = 1.0;
    double fact = 1.0;
    for (int n = 0; n < 32; ++n) {
        if (n > 0) fact *= n;
        s += ik * (power_integral(p + n, X) / fact);
        ik *= std::complex<double>(0.0, 1.0);
    }
    return t.a[1] + s;
}

QuadResult tail_integral(const TrigSum& expansion, double T) {
    QuadResult out;
    for (const auto& t : expansion.terms()) {
        double v;
        if (t.freq == 0.0) {
            require(t.power < -1.0, "non-oscillatory tail term with power >= -1 diverges");
            v = t.c * std::pow(T, t.power + 1.0) / (-(t.power + 1.0));
        } else {
            require(t.power < 0.0, "oscillatory tail term with power >= 0 does not converge");
            const std::complex<double> e = osc_power_tail(t.power, t.freq * T);
            v = std::pow(t.freq, -t.power - 1.0) * (t.c * e.real() + t.s * e.imag());
        }
        out.value += v;
        out.l1 += std::abs(v);
    }
    out.error = 1e-15 * out.l1;
    return out;
}

QuadResult integrate_half_line(const OscIntegrand& f, const QuadratureSpec& spec) {
    constexpr double pi = std::numbers::pi;
    double fmax = 0.0;
    for (const auto& pc : f.pieces) fmax = std::max(fmax, pc.expansion.max_freq());
    const double T0 = std::min(4.0 * pi, 16.0 * pi / std::max(fmax, 1e-300));
    const double wl = pi / std::max(fmax, 1e-300);
    const int panels = std::max(1, static_cast<int>(std::ceil(T0 / wl - 1e-9)));
    const double first = T0 / panels;

    QuadResult out;
    QuadResult head = gk_origin(f.core, first, f.origin_power, spec);
    QuadResult body = adaptive(f.core, first, T0, panels - 1, spec);
    out.value = head.value + body.value;
    out.error = head.error + body.error;
    out.l1 = head.l1 + body.l1;

    for (const auto& pc : f.pieces) {
        double start = T0;
        if (pc.valid_from > T0) {
            require(static_cast<bool>(pc.eval), "tail piece valid beyond the split point needs eval");
            const double w = pi / std::max(pc.expansion.max_freq(), 1e-300);
            const int n = std::max(1, static_cast<int>(std::ceil((pc.valid_from - T0) / w)));
            QuadResult mid = adaptive(pc.eval, T0, pc.valid_from, n, spec);
            out.value += mid.value;
            out.error += mid.error;
            out.l1 += mid.l1;
            start = pc.valid_from;
        }
        QuadResult tl = tail_integral(pc.expansion, start);
        out.value += tl.value;
        out.error += tl.error;
        out.l1 += tl.l1;
    }
    const double tol = std::max(spec.abs_tol, spec.rel_tol * out.l1);
    if (!(out.error <= 100.0 * tol) || !std::isfinite(out.value))
        throw Error(ErrorCode::ToleranceNotMet,
                    "half-line quadrature error " + std::to_string(out.error) + " exceeds " +
                        std::to_string(tol));
    return out;
}

QuadResult integrate_truncated(const Fn& f, double T, double origin_power, double panel_width,
                               const QuadratureSpec& spec) {
    require(T > 0, "truncation radius must be positive");
    const double w = std::min(T, panel_width > 0 ? panel_width : T);
    QuadResult head = gk_origin(f, w, origin_power, spec);
    const int n = std::max(1, static_cast<int>(std::ceil((T - w) / w - 1e-9)));
    QuadResult body = T > w ? adaptive(f, w, T, n, spec) : QuadResult{};
    QuadResult out{head.value + body.value, head.error + body.error, head.l1 + body.l1};
    const double tol = std::max(spec.abs_tol, spec.rel_tol * out.l1);
    if (!(out.error <= 100.0 * tol) || !std::isfinite(out.value))
        throw Error(ErrorCode::ToleranceNotMet, "truncated quadrature did not converge");
    return out;
}

}  // namespace swe
