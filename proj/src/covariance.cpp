#include "swe/covariance.hpp"

#include <cmath>
#include <numbers>

#include "swe/error.hpp"
#include "swe/parallel.hpp"

namespace swe {

namespace {

constexpr double kPi = std::numbers::pi;

double two_pi_d(int d) { return std::pow(2.0 * kPi, d); }

double radial(const ModelParams& p, const RadialKernel& k, const QuadratureSpec& spec) {
    return wave_integral(p.profile, AngularFactor{}, k, 1.0, spec).value;
}

}  // namespace

void validate(const ModelParams& p) {
    require(std::isfinite(p.vartheta) && p.vartheta > 0.0, "vartheta must be positive");
    validate(p.profile);
}

const char* design_kind_name(DesignKind k) {
    switch (k) {
        case DesignKind::Spatial: return "spatial";
        case DesignKind::Temporal: return "temporal";
        case DesignKind::SpaceTime: return "spacetime";
    }
    return "?";
}

long long SamplingDesign::size() const {
    switch (kind) {
        case DesignKind::Spatial: return n;
        case DesignKind::Temporal: return m;
        case DesignKind::SpaceTime: return static_cast<long long>(n) * m;
    }
    return 0;
}

void validate(const SamplingDesign& d) {
    switch (d.kind) {
        case DesignKind::Spatial:
            require(d.t > 0.0, "spatial design needs t > 0");
            require(d.lambda > 0.0, "spatial design needs lambda > 0");
            require(d.n >= 1, "spatial design needs n >= 1");
            break;
        case DesignKind::Temporal:
            require(d.delta > 0.0, "temporal design needs delta > 0");
            require(d.m >= 1, "temporal design needs m >= 1");
            break;
        case DesignKind::SpaceTime:
            require(d.lambda > 0.0 && d.delta > 0.0, "space-time design needs lambda, delta > 0");
            require(d.n >= 1 && d.m >= 1, "space-time design needs n, m >= 1");
            break;
    }
}

double temporal_cov_u(double ti, double tj, const ModelParams& p) {
    validate(p);
    require(ti >= 0.0 && tj >= 0.0, "times must be nonnegative");
    const double b = p.profile.beta;
    const double s = std::min(ti, tj), gap = std::abs(ti - tj);
    const double bracket = (std::pow(ti + tj, 3.0 - b) - std::pow(gap, 3.0 - b)) / (2.0 * (3.0 - b)) -
                           s * std::pow(gap, 2.0 - b);
    return c_beta_d(p.profile) * std::pow(p.vartheta, -0.5 * b) * bracket;
}

double whitenoise_cov_u(double t, double x, double s, double y, double vartheta) {
    require(vartheta > 0.0, "vartheta must be positive");
    require(t >= 0.0 && s >= 0.0, "times must be nonnegative");
    const double sq = std::sqrt(vartheta);
    const double a = std::abs(x - y) / sq;
    const double gap = std::abs(t - s);
    if (gap > a) return std::min(t, s) * std::min(t, s) / (4.0 * sq);
    if (a < t + s) return (t + s - a) * (t + s - a) / (16.0 * sq);
    return 0.0;
}

double spatial_cov_u(int k, int l, const SamplingDesign& design, const ModelParams& p,
                     const QuadratureSpec& spec) {
    validate(p);
    validate(design);
    require(design.kind == DesignKind::Spatial, "spatial_cov_u needs a spatial design");
    const double b = p.profile.beta;
    const double c = 2.0 * design.t * std::sqrt(p.vartheta) / design.lambda;
    const double pref = design.t * std::pow(design.lambda, 2.0 - b) / (2.0 * two_pi_d(p.profile.d) * p.vartheta);
    AngularFactor a{AngularKind::Plain, static_cast<double>(k - l), 1.0};
    return pref * wave_integral(p.profile, a, kernels::one_minus_sinc(), c, spec).value;
}

double cov_inc_spatial(int gap, const SamplingDesign& design, const ModelParams& p, const QuadratureSpec& spec) {
    validate(p);
    validate(design);
    require(design.kind == DesignKind::Spatial, "cov_inc_spatial needs a spatial design");
    require(std::abs(gap) <= design.n - 1, "gap must satisfy |gap| <= n - 1");
    const double b = p.profile.beta;
    const double c = 2.0 * design.t * std::sqrt(p.vartheta) / design.lambda;
    const double pref = 8.0 * design.t * std::pow(design.lambda, 2.0 - b) / (two_pi_d(p.profile.d) * p.vartheta);
    AngularFactor a{AngularKind::Sin4, static_cast<double>(std::abs(gap)), 1.0};
    return pref * wave_integral(p.profile, a, kernels::one_minus_sinc(), c, spec).value;
}

// Unit-step temporal increment covariance:
//   (i^j) 8/(2pi)^d F(h)
//   + 4/(2pi)^d [1{h>=2} S(h) - S(i+j)]            (r1 remainder)
//   + (W(r2_h) + W(r3_h)) / (2 (2pi)^d)             (r2, r3 remainders)
// where W is the radial integral against |w|^{beta-d-2} and
// S(a) = W(sin^4(r/2) sin(a r)/r), all times vartheta^{-beta/2}.
double cov_inc_temporal(int i, int j, const ModelParams& p, const QuadratureSpec& spec) {
    validate(p);
    require(i >= 1 && j >= 1, "temporal increment indices must be >= 1");
    const int h = std::abs(i - j);
    const double nd = two_pi_d(p.profile.d);
    double v = std::min(i, j) * 8.0 / nd * radial(p, kernels::sin4_cos(h), spec);
    double r1 = -radial(p, kernels::sin4_sin_over(i + j), spec);
    if (h >= 2) r1 += radial(p, kernels::sin4_sin_over(h), spec);
    v += 4.0 / nd * r1;
    v += (radial(p, kernels::r2(h), spec) + radial(p, kernels::r3(h), spec)) / (2.0 * nd);
    return v * std::pow(p.vartheta, -0.5 * p.profile.beta);
}

TemporalTables::TemporalTables(int m, const ModelParams& p, const QuadratureSpec& spec, int threads) : m_(m) {
    validate(p);
    require(m >= 1, "m must be >= 1");
    const double nd = two_pi_d(p.profile.d);
    scale_ = std::pow(p.vartheta, -0.5 * p.profile.beta);
    main_.assign(m, 0.0);
    sv_.assign(2 * m + 1, 0.0);
    r2_.assign(2, 0.0);
    r3_.assign(m, 0.0);
    // Job list: main (m), S (2m - 1 entries from a = 2), r2 (2), r3 (m - 1).
    struct Job {
        int kind, idx;
    };
    std::vector<Job> jobs;
    for (int h = 0; h < m; ++h) jobs.push_back({0, h});
    for (int a = 2; a <= 2 * m; ++a) jobs.push_back({1, a});
    for (int c = 0; c < 2; ++c) jobs.push_back({2, c});
    for (int h = 1; h < m; ++h) jobs.push_back({3, h});
    std::vector<double> out(jobs.size());
    parallel_for(
        jobs.size(),
        [&](std::size_t q) {
            const Job& jb = jobs[q];
            switch (jb.kind) {
                case 0: out[q] = 8.0 / nd * radial(p, kernels::sin4_cos(jb.idx), spec); break;
                case 1: out[q] = 4.0 / nd * radial(p, kernels::sin4_sin_over(jb.idx), spec); break;
                case 2: out[q] = radial(p, kernels::r2(jb.idx), spec) / (2.0 * nd); break;
                default: out[q] = radial(p, kernels::r3(jb.idx), spec) / (2.0 * nd); break;
            }
        },
        threads);
    for (std::size_t q = 0; q < jobs.size(); ++q) {
        const Job& jb = jobs[q];
        switch (jb.kind) {
            case 0: main_[jb.idx] = out[q]; break;
            case 1: sv_[jb.idx] = out[q]; break;
            case 2: r2_[jb.idx] = out[q]; break;
            default: r3_[jb.idx] = out[q]; break;
        }
    }
}

double TemporalTables::operator()(int i, int j) const {
    require(i >= 1 && j >= 1 && i <= m_ && j <= m_, "temporal index out of range");
    const int h = std::abs(i - j);
    double v = std::min(i, j) * main_[h] - sv_[i + j] + r3_[h];
    if (h >= 2) v += sv_[h];
    if (h < 2) v += r2_[h];
    return v * scale_;
}

namespace {

struct BoxSetup {
    double pref, scale, kappa;
};

BoxSetup box_setup(const SamplingDesign& design, const ModelParams& p, BoxForm form) {
    const double b = p.profile.beta;
    const double nd = two_pi_d(p.profile.d);
    const double c = std::sqrt(p.vartheta) * design.alpha();
    if (form == BoxForm::Spatial)
        return {design.delta * std::pow(design.lambda, 2.0 - b) / (nd * p.vartheta), c, 1.0};
    return {std::pow(design.delta, 3.0 - b) / (nd * std::pow(p.vartheta, 0.5 * b)), 1.0, 1.0 / c};
}

double box_w(const ModelParams& p, const BoxSetup& s, int g, const RadialKernel& k, const QuadratureSpec& spec) {
    AngularFactor a{AngularKind::Sin4, static_cast<double>(std::abs(g)), s.kappa};
    return wave_integral(p.profile, a, k, s.scale, spec).value;
}

void check_box(const SamplingDesign& design, const ModelParams& p) {
    validate(p);
    validate(design);
    require(design.kind == DesignKind::SpaceTime, "box covariance needs a space-time design");
}

void regime_note(const SamplingDesign& design, BoxForm form, std::vector<std::string>* warnings) {
    if (warnings && form == BoxForm::Temporal && design.alpha() > 1.0)
        warnings->push_back("RegimeWarning: temporal form requested with alpha = " + std::to_string(design.alpha()) +
                            " > 1");
}

}  // namespace

// Spatial form: delta lambda^{2-beta} / ((2pi)^d vartheta) times integrals with
// angular factor sin^4(rho.w/2) cos(g rho.w) and radial kernels at xi = sqrt(vartheta) alpha |w|.
// Temporal form: the substitution w -> w / (sqrt(vartheta) alpha).
double cov_inc_box(int i, int j, int k, int l, const SamplingDesign& design, const ModelParams& p,
                   const QuadratureSpec& spec, BoxForm form, std::vector<std::string>* warnings) {
    check_box(design, p);
    require(i >= 1 && j >= 1 && i <= design.m && j <= design.m, "time indices must lie in [1, m]");
    require(k >= 1 && l >= 1 && k <= design.n && l <= design.n, "space indices must lie in [1, n]");
    regime_note(design, form, warnings);
    const BoxSetup s = box_setup(design, p, form);
    const int g = k - l, h = std::abs(i - j);
    double v = 128.0 * std::min(i, j) * box_w(p, s, g, kernels::sin4_cos(h), spec);
    v -= 64.0 * box_w(p, s, g, kernels::sin4_sin_over(i + j), spec);
    if (h >= 2) v += 64.0 * box_w(p, s, g, kernels::sin4_sin_over(h), spec);
    if (h < 2) v += 8.0 * box_w(p, s, g, kernels::r2(h), spec);
    if (h >= 1) v += 8.0 * box_w(p, s, g, kernels::r3(h), spec);
    return s.pref * v;
}

BoxTables::BoxTables(const SamplingDesign& design, const ModelParams& p, const QuadratureSpec& spec, BoxForm form,
                     int threads)
    : n_(design.n), m_(design.m) {
    check_box(design, p);
    const BoxSetup s = box_setup(design, p, form);
    pref_ = s.pref;
    main_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
    u_.assign(static_cast<std::size_t>(2 * m_ + 1) * n_, 0.0);
    r2_.assign(static_cast<std::size_t>(2) * n_, 0.0);
    r3_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
    struct Job {
        int kind, a, g;
    };
    std::vector<Job> jobs;
    for (int g = 0; g < n_; ++g) {
        for (int h = 0; h < m_; ++h) jobs.push_back({0, h, g});
        for (int a = 2; a <= 2 * m_; ++a) jobs.push_back({1, a, g});
        for (int c = 0; c < 2; ++c) jobs.push_back({2, c, g});
        for (int h = 1; h < m_; ++h) jobs.push_back({3, h, g});
    }
    std::vector<double> out(jobs.size());
    parallel_for(
        jobs.size(),
        [&](std::size_t q) {
            const Job& jb = jobs[q];
            switch (jb.kind) {
                case 0: out[q] = 128.0 * box_w(p, s, jb.g, kernels::sin4_cos(jb.a), spec); break;
                case 1: out[q] = 64.0 * box_w(p, s, jb.g, kernels::sin4_sin_over(jb.a), spec); break;
                case 2: out[q] = 8.0 * box_w(p, s, jb.g, kernels::r2(jb.a), spec); break;
                default: out[q] = 8.0 * box_w(p, s, jb.g, kernels::r3(jb.a), spec); break;
            }
        },
        threads);
    for (std::size_t q = 0; q < jobs.size(); ++q) {
        const Job& jb = jobs[q];
        const std::size_t at = static_cast<std::size_t>(jb.a) * n_ + jb.g;
        switch (jb.kind) {
            case 0: main_[at] = out[q]; break;
            case 1: u_[at] = out[q]; break;
            case 2: r2_[at] = out[q]; break;
            default: r3_[at] = out[q]; break;
        }
    }
}

double BoxTables::operator()(int i, int j, int k, int l) const {
    const int g = std::abs(k - l), h = std::abs(i - j);
    auto at = [this, g](int a) { return static_cast<std::size_t>(a) * n_ + g; };
    double v = std::min(i, j) * main_[at(h)] - u_[at(i + j)] + r3_[at(h)];
    if (h >= 2) v += u_[at(h)];
    if (h < 2) v += r2_[at(h)];
    return pref_ * v;
}

Eigen::MatrixXd toeplitz_dense(const ToeplitzRow& r) {
    const Eigen::Index n = static_cast<Eigen::Index>(r.values.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = r.values[static_cast<std::size_t>(std::abs(i - j))];
    return a;
}

Eigen::MatrixXd to_dense(const Assembled& a) {
    if (const auto* r = std::get_if<ToeplitzRow>(&a)) return toeplitz_dense(*r);
    return std::get<CovMatrix>(a).m;
}

Assembled assemble_cov(const SamplingDesign& design, const ModelParams& p, const QuadratureSpec& spec,
                       const AssembleOptions& opts) {
    validate(p);
    validate(design);
    validate(spec);
    require(design.size() <= opts.size_cap,
            "design has " + std::to_string(design.size()) + " increments, above the cap of " +
                std::to_string(opts.size_cap),
            ErrorCode::SizeCapExceeded);
    switch (design.kind) {
        case DesignKind::Spatial: {
            ToeplitzRow row;
            row.values.assign(design.n, 0.0);
            parallel_for(
                static_cast<std::size_t>(design.n),
                [&](std::size_t g) { row.values[g] = cov_inc_spatial(static_cast<int>(g), design, p, spec); },
                opts.threads);
            return row;
        }
        case DesignKind::Temporal: {
            TemporalTables t(design.m, p, spec, opts.threads);
            const double sc = std::pow(design.delta, 3.0 - p.profile.beta);
            CovMatrix c{Eigen::MatrixXd(design.m, design.m), "temporal"};
            for (int i = 1; i <= design.m; ++i)
                for (int j = 1; j <= i; ++j) c.m(i - 1, j - 1) = c.m(j - 1, i - 1) = sc * t(i, j);
            return c;
        }
        case DesignKind::SpaceTime: {
            const BoxForm form = opts.box_form.value_or(design.alpha() >= 1.0 ? BoxForm::Spatial : BoxForm::Temporal);
            regime_note(design, form, opts.warnings);
            BoxTables t(design, p, spec, form, opts.threads);
            const int n = design.n, m = design.m;
            CovMatrix c{Eigen::MatrixXd(n * m, n * m), "spacetime"};
            for (int i = 1; i <= m; ++i)
                for (int k = 1; k <= n; ++k) {
                    const int r = (i - 1) * n + (k - 1);
                    for (int j = 1; j <= m; ++j)
                        for (int l = 1; l <= n; ++l) {
                            const int s = (j - 1) * n + (l - 1);
                            if (s > r) continue;
                            c.m(r, s) = c.m(s, r) = t(i, j, k, l);
                        }
                }
            return c;
        }
    }
    return ToeplitzRow{};
}

}  // namespace swe
