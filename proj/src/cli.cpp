#include "swe/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "swe/covariance.hpp"
#include "swe/error.hpp"
#include "swe/harness.hpp"
#include "swe/inference.hpp"
#include "swe/parallel.hpp"
#include "swe/sampler.hpp"
#include "swe/selftest.hpp"
#include "swe/specfun.hpp"

namespace swe {

using ojson = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << text;
}

ojson parse_json(const std::string& text, const std::string& what) {
    try {
        return ojson::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidArgument, what + " is not valid JSON: " + e.what());
    }
}

SamplingDesign design_from_file(const std::string& path) {
    ojson j = parse_json(read_file(path), "design file");
    // Reuse the experiment config parser, which understands a "design" object.
    ojson wrap;
    wrap["design"] = j.contains("design") ? j["design"] : j;
    const ExperimentConfig c = config_from_json(wrap.dump());
    validate(c.design);
    return c.design;
}

ModelParams params_from_file(const std::string& path) {
    ojson j = parse_json(read_file(path), "params file");
    ojson wrap;
    wrap["params"] = j.contains("params") ? j["params"] : j;
    const ExperimentConfig c = config_from_json(wrap.dump());
    validate(c.params);
    return c.params;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
    std::ostringstream o;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) o << ',';
            o << fmt17(m(i, j));
        }
        o << "\n";
    }
    return o.str();
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidArgument, "non-numeric CSV cell '" + cell + "' in " + path);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::ShapeMismatch, "no data rows in " + path);
    return rows;
}

std::string suffixed(const std::string& path, std::size_t k) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_" + std::to_string(k);
    return path.substr(0, dot) + "_" + std::to_string(k) + path.substr(dot);
}

ojson constants_obj(const ConstantsTable& c) {
    return {{"beta", c.beta},
            {"d", c.d},
            {"c_sp_E", c.c_sp_E},
            {"c_sp_V", c.c_sp_V},
            {"c_te_E", c.c_te_E},
            {"c_te_V", c.c_te_V},
            {"c_box_sp_E", c.c_box_sp_E},
            {"c_box_sp_V", c.c_box_sp_V},
            {"c_box_te_E", c.c_box_te_E},
            {"c_box_te_V", c.c_box_te_V},
            {"series_truncation", c.series_truncation},
            {"error_estimate", c.error_estimate}};
}

}  // namespace

int parse_and_dispatch(int argc, char** argv) {
    CLI::App app{"Wave speed estimation from discretely observed stochastic wave equations"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: SWE_THREADS or hardware concurrency)")
        ->check(CLI::NonNegativeNumber);

    // constants
    auto* c_const = app.add_subcommand("constants", "Print the asymptotic constants");
    double beta = 1.0;
    int dim = 1, cap = 256;
    bool as_json = false, as_csv = false;
    c_const->add_option("--beta", beta, "Noise exponent beta")->required();
    c_const->add_option("--d", dim, "Spatial dimension")->required();
    c_const->add_option("--cap", cap, "Series truncation");
    c_const->add_flag("--json", as_json, "JSON output");
    c_const->add_flag("--csv", as_csv, "CSV output (name,value)")->excludes("--json");

    // cov
    auto* c_cov = app.add_subcommand("cov", "Assemble an increment covariance");
    std::string design_path, params_path, out_path, box_form;
    c_cov->add_option("--design", design_path, "Design JSON file")->required();
    c_cov->add_option("--params", params_path, "Params JSON file")->required();
    c_cov->add_option("--out", out_path, "Output CSV (default stdout)");
    c_cov->add_option("--box-form", box_form, "spatial or temporal (space-time designs)")
        ->check(CLI::IsMember({"spatial", "temporal"}));

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "Draw increment vectors (or temporal u-paths)");
    std::uint64_t seed = 1;
    int reps = 1;
    bool paths = false;
    c_sim->add_option("--design", design_path, "Design JSON file")->required();
    c_sim->add_option("--params", params_path, "Params JSON file")->required();
    c_sim->add_option("--seed", seed, "Seed");
    c_sim->add_option("--reps", reps, "Replicates")->check(CLI::PositiveNumber);
    c_sim->add_option("--out", out_path, "Output CSV (default stdout)");
    c_sim->add_flag("--paths", paths, "Temporal designs: emit u(t_0..t_{m+1}) instead of increments");

    // estimate
    auto* c_est = app.add_subcommand("estimate", "Estimate the wave speed from data rows");
    std::string kind, data_path;
    double level = 0.95;
    c_est->add_option("--kind", kind, "sp, te, box-sp, box-te or mle")
        ->required()
        ->check(CLI::IsMember({"sp", "te", "box-sp", "box-te", "mle"}));
    c_est->add_option("--data", data_path, "CSV, one replicate per row")->required();
    c_est->add_option("--design", design_path, "Design JSON file")->required();
    c_est->add_option("--params", params_path, "Params JSON file (beta, d)")->required();
    c_est->add_option("--level", level, "Confidence level");
    c_est->add_flag("--json", as_json, "JSON output");

    // experiments
    std::string config_path, rep_csv, qq_path;
    bool timing = false;
    auto add_exp = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "Experiment JSON config")->required();
        s->add_option("--out", out_path, "Report JSON (default stdout)");
        s->add_option("--replicates-csv", rep_csv, "Per-replicate CSV");
        s->add_option("--qq-csv", qq_path, "QQ-plot CSV");
        s->add_flag("--timing", timing, "Include runtime in the report (breaks byte-identity)");
        return s;
    };
    auto* c_clt = add_exp("clt", "Monte Carlo CLT check");
    auto* c_cover = add_exp("coverage", "Monte Carlo CI coverage");
    auto* c_sweep = add_exp("sweep", "Space-time regime sweep over alpha");
    auto* c_mle = add_exp("mle", "Monte Carlo check of the white-noise MLE");

    auto* c_self = app.add_subcommand("selftest", "Run the oracle suites");
    c_self->add_option("--out", out_path, "Report JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (threads > 0) set_default_threads(threads);
        QuadratureSpec spec;

        if (*c_const) {
            const ConstantsTable t = constants_table({beta, dim}, spec, cap);
            if (as_json) {
                std::cout << constants_obj(t).dump(2) << "\n";
            } else if (as_csv) {
                const ojson obj = constants_obj(t);
                std::cout << "name,value\n";
                for (const auto& [k, v] : obj.items())
                    std::cout << k << "," << (v.is_number_float() ? fmt17(v.get<double>()) : v.dump()) << "\n";
            } else {
                const ojson obj = constants_obj(t);
                for (const auto& [k, v] : obj.items()) std::cout << k << " " << v.dump() << "\n";
            }
            return 0;
        }
        if (*c_cov) {
            const SamplingDesign d = design_from_file(design_path);
            const ModelParams p = params_from_file(params_path);
            AssembleOptions opts;
            std::vector<std::string> warnings;
            opts.warnings = &warnings;
            if (box_form == "spatial") opts.box_form = BoxForm::Spatial;
            if (box_form == "temporal") opts.box_form = BoxForm::Temporal;
            const Assembled a = assemble_cov(d, p, spec, opts);
            for (const auto& w : warnings) std::cerr << w << "\n";
            if (const auto* r = std::get_if<ToeplitzRow>(&a)) {
                Eigen::MatrixXd row(1, static_cast<Eigen::Index>(r->values.size()));
                for (std::size_t i = 0; i < r->values.size(); ++i) row(0, static_cast<Eigen::Index>(i)) = r->values[i];
                write_out(out_path, matrix_csv(row));
            } else {
                write_out(out_path, matrix_csv(std::get<CovMatrix>(a).m));
            }
            return 0;
        }
        if (*c_sim) {
            const SamplingDesign d = design_from_file(design_path);
            const ModelParams p = params_from_file(params_path);
            Eigen::MatrixXd draws;
            if (d.kind == DesignKind::Temporal) {
                const Eigen::MatrixXd u = sample_temporal_u_path(d, p, seed, reps);
                if (paths)
                    draws = u;
                else
                    draws = u.middleCols(2, d.m) - 2.0 * u.middleCols(1, d.m) + u.leftCols(d.m);
            } else {
                require(!paths, "--paths needs a temporal design");
                draws = sample(factorize(assemble_cov(d, p, spec)), seed, reps);
            }
            write_out(out_path, matrix_csv(draws));
            return 0;
        }
        if (*c_est) {
            const SamplingDesign d = design_from_file(design_path);
            const ModelParams p = params_from_file(params_path);
            const auto rows = read_csv(data_path);
            ojson out = ojson::array();
            if (kind == "mle") {
                require(d.kind == DesignKind::Temporal, "mle needs a temporal design");
                for (const auto& row : rows) {
                    std::vector<double> u;
                    if (static_cast<int>(row.size()) == d.m + 2)
                        u.assign(row.begin() + 1, row.begin() + 1 + d.m);
                    else if (static_cast<int>(row.size()) == d.m)
                        u = row;
                    else
                        throw Error(ErrorCode::ShapeMismatch, "mle rows need m or m + 2 values");
                    const MleResult r = mle_whitenoise(u, d.delta);
                    out.push_back({{"estimate", r.estimate}, {"q_direct", r.q_direct}, {"q_weighted", r.q_weighted}});
                }
            } else {
                const VariationKind vk = parse_variation_kind(kind);
                const ConstantsTable t = constants_table(p.profile, spec);
                for (const auto& row : rows) {
                    const VariationResult v = variation(vk, row, d, p.profile);
                    const EstimateWithCI e = estimate(vk, v, t, d, level);
                    // The d = 1 regime conditions involve vartheta; only the plug-in value is available here.
                    if (p.profile.d == 1 && (vk == VariationKind::BoxSp || vk == VariationKind::BoxTe)) {
                        const double a = std::sqrt(e.estimate) * d.alpha();
                        if (vk == VariationKind::BoxSp && a / 2.0 < d.n)
                            std::cerr << "AssumptionWarning: sqrt(theta_hat) alpha / 2 = " << fmt17(a / 2.0)
                                      << " < n = " << d.n << "\n";
                        if (vk == VariationKind::BoxTe && 1.0 / (2.0 * a) < d.m)
                            std::cerr << "AssumptionWarning: 1 / (2 sqrt(theta_hat) alpha) = " << fmt17(1.0 / (2.0 * a))
                                      << " < m = " << d.m << "\n";
                    }
                    out.push_back({{"raw", v.raw},
                                   {"rescaled", v.rescaled},
                                   {"estimate", e.estimate},
                                   {"level", e.level},
                                   {"lower", e.lower},
                                   {"upper", e.upper},
                                   {"rate_factor", e.rate_factor}});
                }
            }
            if (as_json) {
                std::cout << out.dump(2) << "\n";
            } else {
                for (const auto& r : out) {
                    std::cout << fmt17(r["estimate"].get<double>());
                    if (r.contains("lower"))
                        std::cout << " [" << fmt17(r["lower"].get<double>()) << ", " << fmt17(r["upper"].get<double>())
                                  << "]";
                    std::cout << "\n";
                }
            }
            return 0;
        }
        if (*c_clt || *c_cover || *c_mle) {
            ExperimentConfig cfg = config_from_json(read_file(config_path));
            if (threads > 0) cfg.threads = threads;
            const MCReport r = *c_clt ? run_clt_experiment(cfg)
                               : *c_cover ? run_coverage_experiment(cfg)
                                          : run_mle_experiment(cfg);
            write_out(out_path, report_json(r, timing));
            if (!rep_csv.empty()) write_out(rep_csv, replicates_csv(r));
            if (!qq_path.empty()) write_out(qq_path, qq_csv(r));
            std::cerr << "runtime " << r.runtime_seconds << " s\n";
            return 0;
        }
        if (*c_sweep) {
            ExperimentConfig cfg = config_from_json(read_file(config_path));
            if (threads > 0) cfg.threads = threads;
            const auto rs = run_regime_sweep(cfg);
            write_out(out_path, reports_json(rs, timing));
            for (std::size_t k = 0; k < rs.size(); ++k) {
                if (!rep_csv.empty()) write_out(suffixed(rep_csv, k), replicates_csv(rs[k]));
                if (!qq_path.empty()) write_out(suffixed(qq_path, k), qq_csv(rs[k]));
            }
            return 0;
        }
        if (*c_self) {
            const SelftestResult r = run_selftest();
            write_out(out_path, r.json);
            return r.ok ? 0 : 2;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_numerical(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace swe
