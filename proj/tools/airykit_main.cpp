#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "airykit/distributions.hpp"
#include "airykit/io.hpp"
#include "airykit/painleve.hpp"
#include "airykit/simulate.hpp"
#include "airykit/validate.hpp"

namespace {

using airykit::EngineOptions;

struct RunConfig {
    double grid_min = 0.0, grid_max = 0.0, grid_step = 0.0;
    int order = 96;
    int mesh = 64;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    std::string config_path;
};

// flag > config file > default
template <typename T>
T pick(const CLI::Option* opt, T flag_value, const nlohmann::json& cfg, const char* key,
       T fallback)
{
    if (opt && opt->count() > 0) return flag_value;
    if (cfg.contains(key)) return cfg[key].get<T>();
    return fallback;
}

nlohmann::json load_config(const std::string& path)
{
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

EngineOptions engine_options(const RunConfig& rc)
{
    EngineOptions o;
    o.order = rc.order;
    return o;
}

std::vector<double> make_grid(double lo, double hi, double step)
{
    std::vector<double> g;
    if (!(step > 0.0) || hi < lo) return g;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) g.push_back(lo + i * step);
    return g;
}

std::vector<std::string> config_comments(const RunConfig& rc)
{
    return {
        "grid_min=" + airykit::format_g17(rc.grid_min),
        "grid_max=" + airykit::format_g17(rc.grid_max),
        "grid_step=" + airykit::format_g17(rc.grid_step),
        "order=" + std::to_string(rc.order),
        "mesh=" + std::to_string(rc.mesh),
        "seed=" + std::to_string(rc.seed),
        "format=" + rc.format,
    };
}

int cmd_tw_table(const RunConfig& rc)
{
    const std::vector<double> grid = make_grid(rc.grid_min, rc.grid_max, rc.grid_step);
    if (grid.empty()) {
        std::cerr << "tw-table: empty grid\n";
        return 2;
    }
    const EngineOptions opts = engine_options(rc);
    const airykit::HastingsMcLeodSolution hm = airykit::hastings_mcleod();
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    for (double s : grid) {
        const double fg = airykit::f_gue(s, opts);
        const double fo = airykit::f_goe(s, opts);
        const double fgp = s >= -12.0 ? airykit::f_gue_painleve(s, hm) : 0.0;
        const double fop = s >= -12.0 ? airykit::f_goe_painleve(s, hm) : 0.0;
        const double disc = std::max(std::abs(fg - fgp), std::abs(fo - fop));
        worst = std::max(worst, disc);
        rows.push_back({s, fg, fo, fgp, fop, disc});
    }
    const std::string csv = airykit::make_table(
        rc.format,
        config_comments(rc),
        {"s", "F_GUE", "F_GOE", "F_GUE_painleve", "F_GOE_painleve", "max_route_discrepancy"},
        rows);
    airykit::write_file_atomic(rc.out.empty() ? "tw_table.csv" : rc.out, csv);
    if (worst > 1e-5) {
        std::cerr << "tw-table: route discrepancy " << worst << " exceeds 1e-5\n";
        return 1;
    }
    return 0;
}

int cmd_endpoint(const RunConfig& rc)
{
    // minimum coverage contract: t in [-3.5, 3.5], m in [-6, 4]
    const double tmax = rc.grid_max > 0 ? rc.grid_max : 3.45;
    const double tstep = rc.grid_step > 0 ? rc.grid_step : 0.1;
    const std::vector<double> t_grid = make_grid(-tmax, tmax, tstep);
    const std::vector<double> m_grid = make_grid(-5.95, 3.95, 0.1);
    if (t_grid.size() < 2) {
        std::cerr << "endpoint: empty t grid\n";
        return 2;
    }
    const EngineOptions opts = engine_options(rc);
    airykit::EndpointDensityGrid g;
    try {
        g = airykit::endpoint_marginals(t_grid, m_grid, opts);
    } catch (const std::runtime_error& e) {
        // the boundary-density coverage gate lives in the library
        std::cerr << "endpoint: " << e.what() << "\n";
        return 3;
    }
    const std::string base = rc.out.empty() ? "endpoint" : rc.out;
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            for (std::size_t j = 0; j < m_grid.size(); ++j)
                rows.push_back({t_grid[i], m_grid[j], g.f_values(i, j)});
        airykit::write_file_atomic(
            base + "_joint.csv",
            airykit::make_csv(config_comments(rc), {"t", "m", "f"}, rows));
    }
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            rows.push_back({t_grid[i], g.marginal_t[i]});
        airykit::write_file_atomic(base + "_marginal.csv",
                                   airykit::make_csv(config_comments(rc), {"t", "f_end"}, rows));
    }
    nlohmann::json stats;
    stats["mass"] = g.mass;
    stats["variance"] = g.variance_t;
    stats["excess_kurtosis"] = g.excess_kurtosis_t;
    airykit::write_file_atomic(base + "_stats.json", stats.dump(2) + "\n");
    return 0;
}

int cmd_persistence(const RunConfig& rc)
{
    std::vector<double> l_grid = make_grid(rc.grid_min, rc.grid_max, rc.grid_step);
    if (l_grid.empty()) l_grid = {1.0, 1.5, 2.0, 2.5};
    if (l_grid.size() < 3) {
        std::cerr << "persistence: L grid needs at least 3 points\n";
        return 2;
    }
    const EngineOptions opts = engine_options(rc);
    const double m = airykit::airy1_marginal_mean(opts);
    const airykit::PersistenceFit fit = airykit::persistence_rate(m, l_grid, opts);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < fit.L.size(); ++i)
        rows.push_back({fit.L[i], std::exp(fit.log_p[i]), fit.log_p[i]});
    std::vector<std::string> comments = config_comments(rc);
    comments.push_back("barrier_m=" + airykit::format_g17(m));
    comments.push_back("kappa=" + airykit::format_g17(fit.kappa));
    comments.push_back("fit_residual=" + airykit::format_g17(fit.max_residual));
    airykit::write_file_atomic(rc.out.empty() ? "persistence.csv" : rc.out,
                               airykit::make_table(rc.format, comments, {"L", "P", "log_P"}, rows));
    for (std::size_t i = 1; i < fit.log_p.size(); ++i)
        if (!(fit.log_p[i] < fit.log_p[i - 1])) {
            std::cerr << "persistence: log P not strictly decreasing\n";
            return 1;
        }
    if (fit.max_residual > 0.02) {
        std::cerr << "persistence: fit residual " << fit.max_residual << " exceeds 0.02\n";
        return 1;
    }
    std::cout << "kappa = " << fit.kappa << " (residual " << fit.max_residual << ")\n";
    return 0;
}

int cmd_validate(const RunConfig& rc)
{
    const EngineOptions opts = engine_options(rc);
    const std::vector<airykit::CheckResult> results = airykit::run_validation_checks(opts);
    const std::string report = airykit::validation_report_json(results);
    if (!rc.out.empty())
        airykit::write_file_atomic(rc.out, report);
    else
        std::cout << report;
    for (const airykit::CheckResult& c : results)
        if (!c.pass) {
            std::cerr << "validate: check failed: " << c.name << " (discrepancy "
                      << c.discrepancy << " > " << c.tolerance << ")\n";
            return 1;
        }
    return 0;
}

int cmd_sample(const RunConfig& rc, const std::string& what, int n, int n_samples)
{
    std::vector<double> raw;
    if (what == "gue" || what == "goe") {
        raw = airykit::sample_matrix_edge(
            what == "gue" ? airykit::Ensemble::gue : airykit::Ensemble::goe, n, n_samples,
            rc.seed);
    } else if (what == "lpp-line" || what == "lpp-endpoint") {
        const auto ls = airykit::lpp_line_samples(n, 0.5, n_samples, rc.seed);
        for (const auto& s : ls)
            raw.push_back(what == "lpp-line" ? static_cast<double>(s.line_max)
                                             : static_cast<double>(s.kappa));
    } else {
        std::cerr << "sample: unknown target " << what << "\n";
        return 2;
    }
    std::vector<double> standardized = raw;
    airykit::standardize(standardized);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < raw.size(); ++i)
        rows.push_back({static_cast<double>(rc.seed), raw[i], standardized[i]});
    airykit::write_file_atomic(
        rc.out.empty() ? what + "_samples.csv" : rc.out,
        airykit::make_table(rc.format, config_comments(rc), {"seed", "raw", "standardized"}, rows));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Airy process distributions via Fredholm determinants"};
    app.require_subcommand(1);

    RunConfig rc;
    double flag_min = 0, flag_max = 0, flag_step = 0;
    int flag_order = 96, flag_mesh = 64;
    std::uint64_t flag_seed = 1;
    std::string flag_out, flag_format = "csv", flag_config;
    std::string sample_what = "gue";
    int sample_n = 200, sample_count = 200;

    app.add_option("--config", flag_config, "JSON config file (flags take precedence)");
    auto* o_min = app.add_option("--grid-min", flag_min, "grid lower end");
    auto* o_max = app.add_option("--grid-max", flag_max, "grid upper end");
    auto* o_step = app.add_option("--grid-step", flag_step, "grid step");
    auto* o_order = app.add_option("--order", flag_order, "quadrature node budget");
    auto* o_mesh = app.add_option("--mesh", flag_mesh, "barrier mesh size");
    auto* o_seed = app.add_option("--seed", flag_seed, "random seed");
    auto* o_out = app.add_option("--out", flag_out, "output path");
    auto* o_format = app.add_option("--format", flag_format, "csv or json");

    CLI::App* tw = app.add_subcommand("tw-table", "tabulate Tracy-Widom laws by both routes");
    CLI::App* ep = app.add_subcommand("endpoint", "polymer endpoint density grids");
    CLI::App* pe = app.add_subcommand("persistence", "Airy_1 persistence probabilities and rate");
    CLI::App* va = app.add_subcommand("validate", "run every dual-route and oracle check");
    CLI::App* sa = app.add_subcommand("sample", "Monte-Carlo sample dumps");
    for (CLI::App* sub : {tw, ep, pe, va, sa}) sub->fallthrough();
    sa->add_option("--what", sample_what, "gue | goe | lpp-line | lpp-endpoint");
    sa->add_option("--n", sample_n, "matrix size or LPP size");
    sa->add_option("--count", sample_count, "number of samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const nlohmann::json cfg = load_config(flag_config);
        rc.order = pick(o_order, flag_order, cfg, "order", 96);
        rc.mesh = pick(o_mesh, flag_mesh, cfg, "mesh", 64);
        rc.seed = pick<std::uint64_t>(o_seed, flag_seed, cfg, "seed", 1);
        rc.out = pick<std::string>(o_out, flag_out, cfg, "out", "");
        rc.format = pick<std::string>(o_format, flag_format, cfg, "format", "csv");
        if (rc.order < 8) {
            std::cerr << "order must be >= 8\n";
            return 2;
        }

        if (tw->parsed()) {
            rc.grid_min = pick(o_min, flag_min, cfg, "grid_min", -6.0);
            rc.grid_max = pick(o_max, flag_max, cfg, "grid_max", 4.0);
            rc.grid_step = pick(o_step, flag_step, cfg, "grid_step", 0.1);
            return cmd_tw_table(rc);
        }
        if (ep->parsed()) {
            rc.grid_min = pick(o_min, flag_min, cfg, "grid_min", -3.45);
            rc.grid_max = pick(o_max, flag_max, cfg, "grid_max", 3.45);
            rc.grid_step = pick(o_step, flag_step, cfg, "grid_step", 0.1);
            return cmd_endpoint(rc);
        }
        if (pe->parsed()) {
            rc.grid_min = pick(o_min, flag_min, cfg, "grid_min", 1.0);
            rc.grid_max = pick(o_max, flag_max, cfg, "grid_max", 2.5);
            rc.grid_step = pick(o_step, flag_step, cfg, "grid_step", 0.5);
            return cmd_persistence(rc);
        }
        if (va->parsed()) return cmd_validate(rc);
        if (sa->parsed()) return cmd_sample(rc, sample_what, sample_n, sample_count);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
