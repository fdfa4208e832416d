#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "factornet/config.hpp"
#include "factornet/error.hpp"
#include "factornet/netinfer.hpp"
#include "factornet/parallel.hpp"
#include "factornet/pipeline.hpp"
#include "factornet/report.hpp"
#include "factornet/stats.hpp"
#include "factornet/synth.hpp"
#include "factornet/var.hpp"

using namespace factornet;

namespace {

struct Common {
    std::string config;
    std::string factors;
    std::string vix;
    std::string yields;
    std::optional<double> scale;
    std::optional<int> window_months;
    std::optional<int> step_months;
    std::optional<int> max_lag;
    std::optional<int> replicates;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::string scheme;
    std::string output;
    std::size_t threads = 0;
    bool quiet = false;
};

RunConfig resolve_config(const Common& c) {
    RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
    if (!c.factors.empty()) cfg.factors = c.factors;
    if (!c.vix.empty()) cfg.vix = c.vix;
    if (!c.yields.empty()) cfg.yields = c.yields;
    if (c.scale) cfg.factor_scale = *c.scale;
    if (c.window_months) cfg.window_months = *c.window_months;
    if (c.step_months) cfg.step_months = *c.step_months;
    if (c.max_lag) cfg.max_lag = *c.max_lag;
    if (c.replicates) cfg.replicates = *c.replicates;
    if (c.alpha) cfg.alpha = *c.alpha;
    if (c.seed) cfg.seed = *c.seed;
    if (!c.scheme.empty()) cfg.scheme = parse_resample_scheme(c.scheme);
    if (!c.output.empty()) cfg.output_dir = c.output;
    return cfg;
}

std::size_t threads_of(const Common& c) { return c.threads > 0 ? c.threads : default_threads(); }

ReturnPanel load_factors(const RunConfig& cfg) {
    if (cfg.factors.empty()) throw InputError("--factors is required");
    PanelLoad load = load_panel(cfg.factors, cfg.factor_date_column, cfg.factor_columns, cfg.factor_scale);
    if (load.dropped_rows > 0) std::cerr << "dropped " << load.dropped_rows << " incomplete rows\n";
    return load.panel;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        write_file(path, content);
    }
}

void print_manifest(const RunManifest& m) {
    std::cout << "status: " << m.status << "\n"
              << "config hash: " << m.config_hash << "\n"
              << "windows: " << m.windows << " (" << m.computed << " computed, " << m.reused << " reused)\n";
    for (const auto& [stage, seconds] : m.timings) std::printf("  %-10s %8.2f s\n", stage.c_str(), seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal and correlation networks of risk factors over sliding windows"};
    app.set_version_flag("--version", FACTORNET_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Common c;
    app.add_option("--config", c.config, "TOML run configuration");
    app.add_option("--factors", c.factors, "Daily factor returns (CSV/TSV)");
    app.add_option("--vix", c.vix, "VIX open/close history");
    app.add_option("--yields", c.yields, "10Y-3M Treasury spread history");
    app.add_option("--scale", c.scale, "Multiplier turning factor file values into decimal returns");
    app.add_option("--window-months", c.window_months, "Window length in months");
    app.add_option("--step-months", c.step_months, "Window step in months");
    app.add_option("--max-lag", c.max_lag, "Largest VAR lag considered by BIC");
    app.add_option("--replicates", c.replicates, "Resampling replicates per window");
    app.add_option("--alpha", c.alpha, "Significance level");
    app.add_option("--seed", c.seed, "Random seed");
    app.add_option("--scheme", c.scheme, "Resampling scheme: residual, rows, block or permutation");
    app.add_option("--output,-o", c.output, "Output directory or file");
    app.add_option("--threads", c.threads, "Worker threads (default: FACTORNET_THREADS or all cores)");
    app.add_flag("--quiet,-q", c.quiet, "Suppress progress messages");

    auto* run = app.add_subcommand("run", "Full pipeline: networks, analytics, indicators and GLM tables");
    auto* networks = app.add_subcommand("networks", "Estimate (or resume) the per-window networks only");
    auto* regress = app.add_subcommand("regress", "Analytics and GLM tables from networks already on disk");
    auto* report = app.add_subcommand("report", "Print the GLM tables and manifest of an output directory");

    auto* stats = app.add_subcommand("stats", "Descriptive statistics");
    stats->require_subcommand(1);
    auto* summary = stats->add_subcommand("summary", "Per-factor summary statistics (CSV)");
    auto* ccf_cmd = stats->add_subcommand("ccf", "Cross-correlation function of two factors (CSV)");
    std::string pair;
    int ccf_lag = 10;
    ccf_cmd->add_option("--pair", pair, "Two factor names, comma separated")->required();
    ccf_cmd->add_option("--max-lag", ccf_lag, "Largest lead/lag");
    auto* indicators = stats->add_subcommand("indicators", "Windowed expected shortfall and z-scores (CSV)");

    auto* infer = app.add_subcommand("infer", "Network of a single period (JSON)");
    std::string kind = "causal", start_s, end_s;
    std::optional<int> fixed_lag;
    infer->add_option("--kind", kind, "causal or correlation");
    infer->add_option("--start", start_s, "First date")->required();
    infer->add_option("--end", end_s, "Last date")->required();
    infer->add_option("--lags", fixed_lag, "VAR lag (default: BIC choice)");

    auto* simulate = app.add_subcommand("simulate", "Random structural VAR panel with known ground truth");
    int sim_n = 5, sim_lags = 1, sim_t = 5000;
    double density = 0.3, df = 5.0, sim_scale = 1.0;
    std::string noise = "laplace", truth_path;
    simulate->add_option("--n", sim_n, "Number of factors");
    simulate->add_option("--lags", sim_lags, "Number of lags");
    simulate->add_option("--t", sim_t, "Observations");
    simulate->add_option("--density", density, "Edge density");
    simulate->add_option("--noise", noise, "laplace, uniform, student_t or gaussian");
    simulate->add_option("--df", df, "Student t degrees of freedom");
    simulate->add_option("--unit", sim_scale, "Written values are returns divided by this (0.01 gives percent)");
    simulate->add_option("--truth", truth_path, "Write the true weights as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    auto log = [&](const std::string& msg) {
        if (!c.quiet) std::cerr << msg << "\n";
    };

    try {
        if (*run || *networks || *regress) {
            RunConfig cfg = resolve_config(c);
            PipelineOptions po;
            po.threads = threads_of(c);
            po.networks_only = networks->parsed();
            po.require_existing = regress->parsed();
            po.log = log;
            print_manifest(run_pipeline(cfg, po));
        } else if (*report) {
            const std::filesystem::path dir = c.output.empty() ? resolve_config(c).output_dir : std::filesystem::path(c.output);
            const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
            std::cout << "status: " << manifest.at("status").get<std::string>() << "\n"
                      << "config hash: " << manifest.at("config_hash").get<std::string>() << "\n"
                      << "windows: " << manifest.at("windows").get<std::size_t>() << "\n";
            for (const auto& table : manifest.at("glm_tables")) {
                std::cout << "\n" << read_file(dir / ("glm_" + table.get<std::string>() + ".txt"));
            }
        } else if (*stats) {
            const RunConfig cfg = resolve_config(c);
            const ReturnPanel panel = load_factors(cfg);
            if (*summary) {
                std::vector<SummaryStats> rows;
                for (std::size_t i = 0; i < panel.n_factors(); ++i) rows.push_back(summary_stats(panel.series(i)));
                emit(c.output, summary_stats_csv(panel.names(), rows));
            } else if (*ccf_cmd) {
                const auto comma = pair.find(',');
                if (comma == std::string::npos) throw InputError("--pair expects NAME,NAME");
                const std::string a = pair.substr(0, comma), b = pair.substr(comma + 1);
                const auto values = ccf(panel.series(panel.index_of(a)), panel.series(panel.index_of(b)), ccf_lag);
                emit(c.output, ccf_csv_header() + ccf_csv_rows(a, b, values, ccf_lag));
            } else {
                const auto windows = make_windows(panel.dates().front(), panel.dates().back(), cfg.window_months,
                                                  cfg.step_months);
                if (windows.empty()) throw InputError("the data span is shorter than one window");
                if (cfg.vix.empty() || cfg.yields.empty()) throw InputError("--vix and --yields are required");
                const auto v = load_indicator(cfg.vix, cfg.vix_date_column, cfg.vix_open_column, cfg.vix_close_column);
                const auto y = load_indicator(cfg.yields, cfg.yields_date_column, cfg.yields_column, cfg.yields_column,
                                              cfg.yields_scale);
                emit(c.output, zscores_csv(windows, indicator_zscores(v.series, windows, IndicatorKind::Fear, cfg.zscore),
                                           indicator_zscores(y.series, windows, IndicatorKind::BusinessCycle,
                                                             cfg.zscore)));
            }
        } else if (*infer) {
            const RunConfig cfg = resolve_config(c);
            const ReturnPanel panel = load_factors(cfg);
            const auto start = parse_date(start_s);
            const auto end = parse_date(end_s);
            if (!start || !end) throw InputError("bad --start or --end date");
            const WindowSpec w{0, *start, *end, cfg.window_months, cfg.step_months};
            const ReturnPanel s = slice(panel, w, cfg.min_obs);
            const ResampleOptions ro = cfg.resample_options(threads_of(c));
            FactorNetwork net;
            if (parse_network_kind(kind) == NetworkKind::Causal) {
                const int lags = fixed_lag ? *fixed_lag : select_lag(s, cfg.max_lag);
                net = causal_network(s, lags, ro, w);
            } else {
                net = correlation_network(s, ro, w);
            }
            emit(c.output, to_json(net).dump(1) + "\n");
        } else if (*simulate) {
            const std::uint64_t seed = c.seed.value_or(42);
            const SvarSpec spec =
                random_svar_spec(sim_n, sim_lags, sim_t, density, NoiseSpec{parse_noise_kind(noise), df}, seed);
            const Simulation sim = generate(spec);
            emit(c.output, panel_csv(sim.panel, sim_scale));
            if (!truth_path.empty()) {
                nlohmann::json t;
                t["factors"] = sim.panel.names();
                auto rows = [](const Eigen::MatrixXd& m) {
                    std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
                    for (Eigen::Index i = 0; i < m.rows(); ++i) {
                        for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(m(i, j));
                    }
                    return out;
                };
                t["w0"] = rows(sim.truth.w0);
                t["lagged"] = nlohmann::json::array();
                for (const auto& m : sim.truth.lagged) t["lagged"].push_back(rows(m));
                t["seed"] = seed;
                t["noise"] = noise;
                write_file(truth_path, t.dump(1) + "\n");
            }
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
