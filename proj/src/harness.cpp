#include "swe/harness.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <json.hpp>
#include <sstream>
#include <tuple>

#include "swe/error.hpp"
#include "swe/sampler.hpp"

namespace swe {

using ojson = nlohmann::ordered_json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

DesignKind needed_design(VariationKind k) {
    switch (k) {
        case VariationKind::Sp: return DesignKind::Spatial;
        case VariationKind::Te: return DesignKind::Temporal;
        default: return DesignKind::SpaceTime;
    }
}

// The unit temporal factor does not depend on vartheta or delta; coverage runs
// over several vartheta reuse it.
std::shared_ptr<const CholFactor> cached_unit_factor(int m, const NoiseProfile& p) {
    static std::mutex mu;
    static std::map<std::tuple<int, double, int>, std::shared_ptr<const CholFactor>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(m, p.beta, p.d);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (cache.size() >= 4) cache.clear();
    auto f = std::make_shared<const CholFactor>(temporal_unit_factor(m, p));
    cache[key] = f;
    return f;
}

struct Draws {
    Eigen::MatrixXd inc;  // replicates x increments
    Eigen::MatrixXd paths;  // temporal only: replicates x (m + 2)
    double jitter = 0.0;
};

Draws simulate(const ExperimentConfig& c, const SamplingDesign& design, VariationKind stat, std::uint64_t seed,
               std::vector<std::string>& warnings) {
    Draws d;
    if (stat == VariationKind::Te) {
        auto f = cached_unit_factor(design.m, c.params.profile);
        d.jitter = f->jitter_used;
        d.paths = sample_temporal_u_path(*f, design, c.params, seed, c.replicates, c.threads);
        const int m = design.m;
        d.inc = d.paths.middleCols(2, m) - 2.0 * d.paths.middleCols(1, m) + d.paths.leftCols(m);
        return d;
    }
    AssembleOptions opts;
    opts.threads = c.threads;
    opts.warnings = &warnings;
    if (stat == VariationKind::BoxSp) opts.box_form = BoxForm::Spatial;
    if (stat == VariationKind::BoxTe) opts.box_form = BoxForm::Temporal;
    const Assembled cov = assemble_cov(design, c.params, c.quad, opts);
    const CholFactor f = factorize(cov);
    d.jitter = f.jitter_used;
    d.inc = sample(f, seed, c.replicates, c.threads);
    return d;
}

double mean_of(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()) / x.size(); }

double var_of(const std::vector<double>& x, double mean) {
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = x[i] - mean;
    return pairwise_sum_squares(dev.data(), dev.size()) / static_cast<double>(x.size() - 1);
}

void summarize(MCReport& r, const Tolerances& tol) {
    const double R = r.replicates;
    r.mean = mean_of(r.stats);
    r.variance = var_of(r.stats, r.mean);
    r.mc_se = std::sqrt(r.variance / R);
    r.scaled_variance = r.rate * r.rate * r.variance;
    r.standardized.resize(r.stats.size());
    const double sd = std::sqrt(r.target_variance);
    for (std::size_t i = 0; i < r.stats.size(); ++i)
        r.standardized[i] = sd > 0 ? r.rate * (r.stats[i] - r.target_mean) / sd : 0.0;
    r.ks = ks_normal(r.standardized);
    r.ks_critical = 1.36 / std::sqrt(R);
    r.mean_ok = std::abs(r.mean - r.target_mean) <= tol.mean_se * r.mc_se + tol.bias_allowance;
    r.variance_ok = r.target_variance > 0 && std::abs(r.scaled_variance / r.target_variance - 1.0) <= tol.var_rel;
    r.ks_ok = r.ks < tol.ks_factor * r.ks_critical;
}

void fill_estimates(MCReport& r, const ExperimentConfig& c, const std::vector<VariationResult>& vr) {
    int covered = 0;
    std::vector<double> est;
    for (const auto& v : vr) {
        EstimateWithCI e = estimate(r.statistic, v, r.constants, r.design, c.level);
        if (e.lower <= c.params.vartheta && c.params.vartheta <= e.upper) ++covered;
        est.push_back(e.estimate);
        r.estimates.push_back(e);
    }
    r.coverage = static_cast<double>(covered) / static_cast<double>(vr.size());
    r.estimate_mean = mean_of(est);
    r.estimate_se = std::sqrt(var_of(est, r.estimate_mean) / static_cast<double>(est.size()));
}

MCReport base_report(const ExperimentConfig& c, const char* experiment) {
    MCReport r;
    r.name = c.name;
    r.experiment = experiment;
    r.statistic = c.statistic;
    r.design = c.design;
    r.params = c.params;
    r.replicates = c.replicates;
    r.seed = c.seed;
    r.constants = constants_table(c.params.profile, c.quad);
    return r;
}

MCReport run_statistic(const ExperimentConfig& c, const char* experiment) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(c);
    check_assumptions(c);
    MCReport r = base_report(c, experiment);
    if (c.design.kind == DesignKind::SpaceTime) r.alpha = c.design.alpha();
    const Draws d = simulate(c, c.design, c.statistic, c.seed, r.warnings);
    r.jitter = d.jitter;
    std::vector<VariationResult> vr;
    for (Eigen::Index i = 0; i < d.inc.rows(); ++i) {
        const Eigen::VectorXd row = d.inc.row(i);
        vr.push_back(variation(c.statistic, row.data(), static_cast<std::size_t>(row.size()), c.design,
                               c.params.profile));
        r.stats.push_back(vr.back().rescaled);
    }
    const LimitLaw law = limit_law(c.statistic, r.constants, c.design, c.params.vartheta);
    r.target_mean = law.mean;
    r.target_variance = law.variance;
    r.rate = law.rate;
    summarize(r, c.tol);
    fill_estimates(r, c, vr);
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

void validate(const ExperimentConfig& c) {
    require(c.replicates >= 2, "replicates must be >= 2");
    require(c.level > 0.0 && c.level < 1.0, "level must lie in (0, 1)");
    validate(c.params);
    validate(c.design);
    validate(c.quad);
    require(c.design.kind == needed_design(c.statistic),
            std::string("statistic ") + variation_kind_name(c.statistic) + " needs a " +
                design_kind_name(needed_design(c.statistic)) + " design");
}

void check_assumptions(const ExperimentConfig& c) {
    const SamplingDesign& d = c.design;
    const double th = c.params.vartheta;
    auto fail = [](const std::string& s) { throw Error(ErrorCode::AssumptionViolated, s); };
    switch (c.statistic) {
        case VariationKind::Sp: {
            const double v = d.lambda * std::pow(d.n, 0.25);
            if (v > c.limits.lambda_n_quarter_max)
                fail("lambda = o(n^{-1/4}) read as lambda n^{1/4} <= " + fmt17(c.limits.lambda_n_quarter_max) +
                     "; got " + fmt17(v));
            break;
        }
        case VariationKind::Te: break;
        case VariationKind::BoxSp:
        case VariationKind::BoxTe: {
            const double r = static_cast<double>(d.n) / d.m;
            if (r > c.limits.n_over_m_max)
                fail("n/m -> 0 read as n/m <= " + fmt17(c.limits.n_over_m_max) + "; got " + fmt17(r));
            if (c.params.profile.d == 1) {
                const double a = std::sqrt(th) * d.alpha();
                if (c.statistic == VariationKind::BoxSp && a / 2.0 < d.n)
                    fail("d = 1 spatial regime needs sqrt(vartheta) alpha / 2 >= n; got " + fmt17(a / 2.0) +
                         " < " + std::to_string(d.n));
                if (c.statistic == VariationKind::BoxTe && 1.0 / (2.0 * a) < d.m)
                    fail("d = 1 temporal regime needs 1 / (2 sqrt(vartheta) alpha) >= m; got " +
                         fmt17(1.0 / (2.0 * a)) + " < " + std::to_string(d.m));
            }
            break;
        }
    }
}

double ks_normal(std::vector<double> z) {
    if (z.empty()) return 0.0;
    std::sort(z.begin(), z.end());
    const boost::math::normal_distribution<double> N;
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double F = boost::math::cdf(N, z[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    return d;
}

MCReport run_clt_experiment(const ExperimentConfig& c) { return run_statistic(c, "clt"); }

MCReport run_coverage_experiment(const ExperimentConfig& c) {
    MCReport r = run_statistic(c, "coverage");
    r.coverage_ok = r.coverage >= c.tol.coverage_lo && r.coverage <= c.tol.coverage_hi;
    return r;
}

std::vector<MCReport> run_regime_sweep(const ExperimentConfig& c) {
    require(!c.alphas.empty(), "sweep needs at least one alpha");
    require(c.design.kind == DesignKind::SpaceTime, "sweep needs a space-time design");
    std::vector<MCReport> out;
    for (std::size_t k = 0; k < c.alphas.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        const double a = c.alphas[k];
        require(a > 0.0, "alpha must be positive");
        ExperimentConfig pc = c;
        pc.design.lambda = c.design.delta / a;
        pc.statistic = a >= 1.0 ? VariationKind::BoxSp : VariationKind::BoxTe;
        pc.seed = c.seed + k;
        validate(pc);
        check_assumptions(pc);
        MCReport r = base_report(pc, "sweep");
        r.alpha = a;
        const Draws d = simulate(pc, pc.design, pc.statistic, pc.seed, r.warnings);
        r.jitter = d.jitter;
        const VariationKind other = pc.statistic == VariationKind::BoxSp ? VariationKind::BoxTe : VariationKind::BoxSp;
        const double expo = std::pow(a, 2.0 - c.params.profile.beta);
        std::vector<double> others;
        double worst = 0.0;
        std::vector<VariationResult> vr;
        for (Eigen::Index i = 0; i < d.inc.rows(); ++i) {
            const Eigen::VectorXd row = d.inc.row(i);
            const auto n = static_cast<std::size_t>(row.size());
            vr.push_back(variation(pc.statistic, row.data(), n, pc.design, c.params.profile));
            const VariationResult o = variation(other, row.data(), n, pc.design, c.params.profile);
            r.stats.push_back(vr.back().rescaled);
            others.push_back(o.rescaled);
            const double sp = pc.statistic == VariationKind::BoxSp ? vr.back().rescaled : o.rescaled;
            const double te = pc.statistic == VariationKind::BoxSp ? o.rescaled : vr.back().rescaled;
            worst = std::max(worst, std::abs(sp / te - expo) / expo);
        }
        r.other_mean = mean_of(others);
        r.ratio_identity_error = worst;
        const LimitLaw law = limit_law(pc.statistic, r.constants, pc.design, c.params.vartheta);
        r.target_mean = law.mean;
        r.target_variance = law.variance;
        r.rate = law.rate;
        summarize(r, c.tol);
        fill_estimates(r, pc, vr);
        r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

MCReport run_mle_experiment(const ExperimentConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(c);
    require(c.params.profile.beta == 1.0 && c.params.profile.d == 1, "the MLE needs beta = d = 1",
            ErrorCode::AssumptionViolated);
    MCReport r = base_report(c, "mle");
    const Draws d = simulate(c, c.design, VariationKind::Te, c.seed, r.warnings);
    r.jitter = d.jitter;
    const int m = c.design.m;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < d.paths.rows(); ++i) {
        std::vector<double> u(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) u[k] = d.paths(i, k + 1);
        const MleResult e = mle_whitenoise(u, c.design.delta);
        r.stats.push_back(e.estimate);
        const double bt = u[m - 1] * u[m - 1] / (2.0 * m + 1.0);
        worst = std::max(worst, std::abs((e.q_weighted - e.q_direct) - bt) / std::max(e.q_direct, 1e-300));
    }
    r.boundary_term_error = worst;
    // Fisher information for vartheta from N(0, delta^2 / (4 sqrt(vartheta)) A_m).
    r.target_mean = c.params.vartheta;
    r.target_variance = 8.0 * c.params.vartheta * c.params.vartheta;
    r.rate = std::sqrt(static_cast<double>(m));
    summarize(r, c.tol);
    r.estimate_mean = r.mean;
    r.estimate_se = r.mc_se;
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace {

ojson design_json(const SamplingDesign& d) {
    ojson j;
    j["kind"] = design_kind_name(d.kind);
    switch (d.kind) {
        case DesignKind::Spatial:
            j["t"] = d.t;
            j["lambda"] = d.lambda;
            j["n"] = d.n;
            break;
        case DesignKind::Temporal:
            j["delta"] = d.delta;
            j["m"] = d.m;
            break;
        case DesignKind::SpaceTime:
            j["lambda"] = d.lambda;
            j["n"] = d.n;
            j["delta"] = d.delta;
            j["m"] = d.m;
            break;
    }
    return j;
}

ojson report_obj(const MCReport& r, bool timing) {
    ojson j;
    j["name"] = r.name;
    j["experiment"] = r.experiment;
    j["statistic"] = variation_kind_name(r.statistic);
    j["design"] = design_json(r.design);
    j["params"] = {{"vartheta", r.params.vartheta}, {"beta", r.params.profile.beta}, {"d", r.params.profile.d}};
    j["replicates"] = r.replicates;
    j["seed"] = r.seed;
    if (r.design.kind == DesignKind::SpaceTime) j["alpha"] = r.alpha;
    const ConstantsTable& c = r.constants;
    j["constants"] = {{"c_sp_E", c.c_sp_E},         {"c_sp_V", c.c_sp_V},         {"c_te_E", c.c_te_E},
                      {"c_te_V", c.c_te_V},         {"c_box_sp_E", c.c_box_sp_E}, {"c_box_sp_V", c.c_box_sp_V},
                      {"c_box_te_E", c.c_box_te_E}, {"c_box_te_V", c.c_box_te_V}};
    j["mean"] = r.mean;
    j["variance"] = r.variance;
    j["mc_se"] = r.mc_se;
    j["target_mean"] = r.target_mean;
    j["target_variance"] = r.target_variance;
    j["rate"] = r.rate;
    j["scaled_variance"] = r.scaled_variance;
    j["ks"] = r.ks;
    j["ks_critical"] = r.ks_critical;
    if (r.coverage >= 0) j["coverage"] = r.coverage;
    j["estimate_mean"] = r.estimate_mean;
    j["estimate_se"] = r.estimate_se;
    if (r.other_mean) j["other_normalization_mean"] = *r.other_mean;
    if (r.ratio_identity_error) j["ratio_identity_error"] = *r.ratio_identity_error;
    if (r.boundary_term_error) j["boundary_term_error"] = *r.boundary_term_error;
    j["jitter"] = r.jitter;
    j["checks"] = {{"mean", r.mean_ok}, {"variance", r.variance_ok}, {"ks", r.ks_ok}, {"coverage", r.coverage_ok}};
    j["warnings"] = r.warnings;
    if (timing) j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

}  // namespace

std::string report_json(const MCReport& r, bool include_timing) { return report_obj(r, include_timing).dump(2) + "\n"; }

std::string reports_json(const std::vector<MCReport>& rs, bool include_timing) {
    ojson a = ojson::array();
    for (const auto& r : rs) a.push_back(report_obj(r, include_timing));
    return a.dump(2) + "\n";
}

std::string replicates_csv(const MCReport& r) {
    std::ostringstream o;
    o << "replicate,statistic,standardized";
    const bool est = !r.estimates.empty();
    if (est) o << ",estimate,lower,upper,covered";
    o << "\n";
    for (std::size_t i = 0; i < r.stats.size(); ++i) {
        o << i << ',' << fmt17(r.stats[i]) << ',' << fmt17(r.standardized[i]);
        if (est) {
            const auto& e = r.estimates[i];
            const bool cov = e.lower <= r.params.vartheta && r.params.vartheta <= e.upper;
            o << ',' << fmt17(e.estimate) << ',' << fmt17(e.lower) << ',' << fmt17(e.upper) << ',' << (cov ? 1 : 0);
        }
        o << "\n";
    }
    return o.str();
}

std::string qq_csv(const MCReport& r) {
    std::vector<double> z = r.standardized;
    std::sort(z.begin(), z.end());
    const boost::math::normal_distribution<double> N;
    std::ostringstream o;
    o << "rank,standardized,normal_quantile\n";
    const double n = static_cast<double>(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        o << i + 1 << ',' << fmt17(z[i]) << ',' << fmt17(boost::math::quantile(N, (i + 0.5) / n)) << "\n";
    return o.str();
}

namespace {

template <class T>
void get_if(const ojson& j, const char* k, T& out) {
    if (j.contains(k)) out = j.at(k).get<T>();
}

DesignKind parse_design_kind(const std::string& s) {
    if (s == "spatial") return DesignKind::Spatial;
    if (s == "temporal") return DesignKind::Temporal;
    if (s == "spacetime" || s == "space-time") return DesignKind::SpaceTime;
    throw Error(ErrorCode::InvalidArgument, "unknown design kind '" + s + "'");
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (j.contains("statistic")) c.statistic = parse_variation_kind(j.at("statistic").get<std::string>());
        if (j.contains("design")) {
            const ojson& d = j.at("design");
            c.design.kind = parse_design_kind(d.at("kind").get<std::string>());
            get_if(d, "t", c.design.t);
            get_if(d, "lambda", c.design.lambda);
            get_if(d, "n", c.design.n);
            get_if(d, "delta", c.design.delta);
            get_if(d, "m", c.design.m);
        }
        if (j.contains("params")) {
            const ojson& p = j.at("params");
            get_if(p, "vartheta", c.params.vartheta);
            get_if(p, "beta", c.params.profile.beta);
            get_if(p, "d", c.params.profile.d);
        }
        get_if(j, "replicates", c.replicates);
        get_if(j, "seed", c.seed);
        get_if(j, "level", c.level);
        get_if(j, "threads", c.threads);
        get_if(j, "name", c.name);
        get_if(j, "alphas", c.alphas);
        if (j.contains("tolerances")) {
            const ojson& t = j.at("tolerances");
            get_if(t, "mean_se", c.tol.mean_se);
            get_if(t, "bias_allowance", c.tol.bias_allowance);
            get_if(t, "var_rel", c.tol.var_rel);
            get_if(t, "ks_factor", c.tol.ks_factor);
            get_if(t, "coverage_lo", c.tol.coverage_lo);
            get_if(t, "coverage_hi", c.tol.coverage_hi);
        }
        if (j.contains("assumptions")) {
            const ojson& a = j.at("assumptions");
            get_if(a, "lambda_n_quarter_max", c.limits.lambda_n_quarter_max);
            get_if(a, "n_over_m_max", c.limits.n_over_m_max);
        }
        if (j.contains("quadrature")) {
            const ojson& q = j.at("quadrature");
            get_if(q, "rel_tol", c.quad.rel_tol);
            get_if(q, "abs_tol", c.quad.abs_tol);
            get_if(q, "truncation_radius", c.quad.truncation_radius);
            get_if(q, "max_subdivisions", c.quad.max_subdivisions);
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad config field: ") + e.what());
    }
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    ojson j;
    j["name"] = c.name;
    j["statistic"] = variation_kind_name(c.statistic);
    j["design"] = design_json(c.design);
    j["params"] = {{"vartheta", c.params.vartheta}, {"beta", c.params.profile.beta}, {"d", c.params.profile.d}};
    j["replicates"] = c.replicates;
    j["seed"] = c.seed;
    j["level"] = c.level;
    if (!c.alphas.empty()) j["alphas"] = c.alphas;
    j["tolerances"] = {{"mean_se", c.tol.mean_se},         {"bias_allowance", c.tol.bias_allowance},
                       {"var_rel", c.tol.var_rel},         {"ks_factor", c.tol.ks_factor},
                       {"coverage_lo", c.tol.coverage_lo}, {"coverage_hi", c.tol.coverage_hi}};
    j["assumptions"] = {{"lambda_n_quarter_max", c.limits.lambda_n_quarter_max},
                        {"n_over_m_max", c.limits.n_over_m_max}};
    j["quadrature"] = {{"rel_tol", c.quad.rel_tol},
                       {"abs_tol", c.quad.abs_tol},
                       {"truncation_radius", c.quad.truncation_radius},
                       {"max_subdivisions", c.quad.max_subdivisions}};
    if (c.threads != 0) j["threads"] = c.threads;
    return j.dump(2) + "\n";
}

}  // namespace swe
