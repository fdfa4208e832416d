#include "factornet/pipeline.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <set>

#include "factornet/error.hpp"
#include "factornet/parallel.hpp"
#include "factornet/report.hpp"
#include "factornet/rng.hpp"
#include "factornet/var.hpp"

#ifndef FACTORNET_VERSION
#define FACTORNET_VERSION "dev"
#endif

namespace factornet {

namespace fs = std::filesystem;

std::uint64_t window_seed(std::uint64_t seed, int window_index, NetworkKind kind) {
    const std::uint64_t salt = kind == NetworkKind::Causal ? 0x1ULL : 0x2ULL;
    return splitmix64(splitmix64(seed) ^ (static_cast<std::uint64_t>(window_index) << 2 | salt));
}

std::vector<WindowAnalytics> network_analytics(const std::vector<FactorNetwork>& networks,
                                               const std::string& market_factor, TimeAnchor anchor,
                                               std::size_t rolling) {
    std::vector<WindowAnalytics> rows;
    if (networks.empty()) return rows;
    for (const auto& net : networks) {
        if (!net.window) throw InputError("network_analytics: network without a window");
    }
    const Date origin = networks.front().window->start;
    std::vector<double> jaccards;
    std::set<EdgeKey> previous;
    for (std::size_t k = 0; k < networks.size(); ++k) {
        const FactorNetwork& net = networks[k];
        WindowAnalytics row;
        row.window = *net.window;
        row.time_days = days_between(origin, anchor == TimeAnchor::Start ? row.window.start : row.window.end);
        row.lags = net.lags;
        row.counts = edge_counts(net);
        std::set<EdgeKey> current = edge_set(net);
        if (k > 0) {
            const JaccardScore js = jaccard(previous, current);
            row.jaccard = js.value;
            row.both_empty = js.both_empty;
            jaccards.push_back(js.value);
            if (jaccards.size() >= rolling) {
                double sum = 0.0;
                for (std::size_t i = jaccards.size() - rolling; i < jaccards.size(); ++i) sum += jaccards[i];
                row.jaccard_rolling = sum / static_cast<double>(rolling);
            }
        }
        if (net.kind == NetworkKind::Causal) {
            row.market_out_degree = out_degree(net, market_factor, false);
            row.market_out_degree_distinct = out_degree(net, market_factor, true);
        }
        previous = std::move(current);
        rows.push_back(row);
    }
    return rows;
}

std::string analytics_csv(const std::vector<WindowAnalytics>& rows) {
    auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    std::string out = "window,start,end,time_days,lags,jaccard,both_empty,jaccard_rolling,total,instantaneous,lagged,"
                      "market_out_degree,market_out_degree_distinct\n";
    for (const auto& r : rows) {
        out += std::to_string(r.window.index) + "," + format_date(r.window.start) + "," + format_date(r.window.end) +
               "," + std::to_string(r.time_days) + "," + std::to_string(r.lags) + "," + format_number(r.jaccard) +
               "," + (r.jaccard ? (r.both_empty ? "1" : "0") : "") + "," + format_number(r.jaccard_rolling) + "," +
               std::to_string(r.counts.total) + "," + std::to_string(r.counts.instantaneous) + "," +
               std::to_string(r.counts.lagged) + "," + opt_int(r.market_out_degree) + "," +
               opt_int(r.market_out_degree_distinct) + "\n";
    }
    return out;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["status"] = status;
    j["failure_stage"] = failure_stage.empty() ? nlohmann::json() : nlohmann::json(failure_stage);
    j["failure_message"] = failure_message.empty() ? nlohmann::json() : nlohmann::json(failure_message);
    j["windows"] = windows;
    j["windows_computed"] = computed;
    j["windows_reused"] = reused;
    j["selected_lags"] = selected_lags;
    j["factors"] = factors;
    j["glm_tables"] = glm_tables;
    auto t = nlohmann::json::object();
    for (const auto& [stage, seconds] : timings) t[stage] = seconds;
    j["timings_seconds"] = t;
    j["versions"] = {{"factornet", FACTORNET_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", __VERSION__},
                     {"rng", "mt19937_64 + splitmix64 streams"}};
    j["config"] = config;
    return j;
}

namespace {

fs::path network_path(const fs::path& dir, NetworkKind kind, int index) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_w%03d.json", to_string(kind).c_str(), index);
    return dir / "networks" / name;
}

std::optional<FactorNetwork> load_cached(const fs::path& path, const std::string& hash) {
    if (!fs::exists(path)) return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(read_file(path));
        if (j.value("config_hash", std::string()) != hash) return std::nullopt;
        return network_from_json(j);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void save_network(const fs::path& path, const FactorNetwork& net, const std::string& hash, std::size_t n_obs) {
    auto j = to_json(net);
    j["config_hash"] = hash;
    j["n_obs"] = n_obs;
    write_file(path, j.dump(1) + "\n");
}

// Rethrows `e` with `prefix` while keeping its exit-code category.
[[noreturn]] void rethrow_with(const std::string& prefix, std::exception_ptr e) {
    try {
        std::rethrow_exception(e);
    } catch (const NumericalError& ex) {
        throw NumericalError(prefix + ex.what());
    } catch (const InputError& ex) {
        throw InputError(prefix + ex.what());
    } catch (const std::exception& ex) {
        throw Error(prefix + ex.what());
    }
}

ZScoreSeries empty_series(IndicatorKind kind, const std::vector<WindowSpec>& windows) {
    ZScoreSeries s;
    s.kind = kind;
    for (const auto& w : windows) s.window_index.push_back(w.index);
    s.es_value.assign(windows.size(), std::nullopt);
    s.zscore.assign(windows.size(), std::nullopt);
    return s;
}

GlmResult fit_table_row(const std::string& response, const std::vector<int>& counts, const Covariates& cov) {
    try {
        return GlmResult{response, regress_counts(response, counts, cov), ""};
    } catch (const Error& e) {
        return GlmResult{response, std::nullopt, e.what()};
    }
}

}  // namespace

RunManifest run_pipeline(const RunConfig& cfg, const PipelineOptions& options) {
    validate(cfg);
    auto log = [&](const std::string& msg) {
        if (options.log) options.log(msg);
    };

    RunManifest manifest;
    manifest.config_hash = config_hash(cfg);
    manifest.seed = cfg.seed;
    manifest.config = to_json(cfg);
    const fs::path out = cfg.output_dir;
    fs::create_directories(out / "networks");

    auto write_manifest = [&] { write_file(out / "manifest.json", manifest.to_json().dump(2) + "\n"); };
    std::string current_stage;
    auto stage = [&](const std::string& name, const auto& fn) {
        current_stage = name;
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        manifest.timings.emplace_back(name,
                                      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    };

    try {
        std::optional<ReturnPanel> panel;
        stage("load", [&] {
            PanelLoad load = load_panel(cfg.factors, cfg.factor_date_column, cfg.factor_columns, cfg.factor_scale);
            if (load.dropped_rows > 0) log("dropped " + std::to_string(load.dropped_rows) + " incomplete factor rows");
            std::vector<Date> keep;
            for (const auto& d : load.panel.dates()) {
                if ((!cfg.start || *cfg.start <= d) && (!cfg.end || d <= *cfg.end)) keep.push_back(d);
            }
            if (keep.empty()) throw InputError("no factor observations inside the configured period");
            panel = restrict_dates(load.panel, keep);
            manifest.factors = panel->names();
            log("loaded " + std::to_string(panel->n_factors()) + " factors, " + std::to_string(panel->n_obs()) +
                " days");
        });

        std::vector<WindowSpec> windows;
        stage("windows", [&] {
            windows = make_windows(panel->dates().front(), panel->dates().back(), cfg.window_months, cfg.step_months);
            if (windows.empty()) throw InputError("the data span is shorter than one window");
            manifest.windows = windows.size();
            log(std::to_string(windows.size()) + " windows");
        });

        stage("summary", [&] {
            std::vector<SummaryStats> stats;
            for (std::size_t i = 0; i < panel->n_factors(); ++i) {
                stats.push_back(summary_stats(panel->series(i), 252, cfg.quantile));
            }
            write_file(out / "summary_stats.csv", summary_stats_csv(panel->names(), stats));
            std::string ccf_out = ccf_csv_header();
            for (std::size_t i = 0; i < panel->n_factors(); ++i) {
                const auto x = panel->series(i);
                for (std::size_t j = i + 1; j < panel->n_factors(); ++j) {
                    ccf_out += ccf_csv_rows(panel->names()[i], panel->names()[j], ccf(x, panel->series(j), cfg.ccf_max_lag),
                                            cfg.ccf_max_lag);
                }
            }
            write_file(out / "ccf.csv", ccf_out);
        });

        std::vector<FactorNetwork> causal(windows.size()), correlation(windows.size());
        stage("networks", [&] {
            std::vector<char> reused(windows.size(), 0);
            std::vector<std::exception_ptr> errors(windows.size());
            parallel_for(windows.size(), std::max<std::size_t>(1, options.threads), [&](std::size_t k) {
                const WindowSpec& w = windows[k];
                const fs::path cpath = network_path(out, NetworkKind::Causal, w.index);
                const fs::path rpath = network_path(out, NetworkKind::Correlation, w.index);
                try {
                    auto c = load_cached(cpath, manifest.config_hash);
                    auto r = load_cached(rpath, manifest.config_hash);
                    if (c && r) {
                        causal[k] = std::move(*c);
                        correlation[k] = std::move(*r);
                        reused[k] = 1;
                        return;
                    }
                    if (options.require_existing) throw InputError("networks missing; run the networks stage first");
                    const ReturnPanel s = slice(*panel, w, cfg.min_obs);
                    const int lags = select_lag(s, cfg.max_lag);
                    ResampleOptions ro = cfg.resample_options(1);
                    ro.seed = window_seed(cfg.seed, w.index, NetworkKind::Causal);
                    causal[k] = causal_network(s, lags, ro, w);
                    ro.seed = window_seed(cfg.seed, w.index, NetworkKind::Correlation);
                    correlation[k] = correlation_network(s, ro, w);
                    save_network(cpath, causal[k], manifest.config_hash, s.n_obs());
                    save_network(rpath, correlation[k], manifest.config_hash, s.n_obs());
                    log("window " + std::to_string(w.index) + " " + format_date(w.start) + ".." + format_date(w.end) +
                        ": L=" + std::to_string(lags) + ", " + std::to_string(edge_counts(causal[k]).total) +
                        " causal / " + std::to_string(edge_counts(correlation[k]).total) + " correlation edges");
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
            for (std::size_t k = 0; k < windows.size(); ++k) {
                if (errors[k]) rethrow_with("window " + std::to_string(windows[k].index) + ": ", errors[k]);
            }
            manifest.reused = static_cast<std::size_t>(std::count(reused.begin(), reused.end(), 1));
            manifest.computed = windows.size() - manifest.reused;
            for (const auto& net : causal) manifest.selected_lags.push_back(net.lags);

            std::string causal_edges = edge_csv_header(), corr_edges = edge_csv_header();
            for (std::size_t k = 0; k < windows.size(); ++k) {
                causal_edges += edge_csv_rows(causal[k]);
                corr_edges += edge_csv_rows(correlation[k]);
            }
            write_file(out / "edges_causal.csv", causal_edges);
            write_file(out / "edges_correlation.csv", corr_edges);
        });

        if (!options.networks_only) {
            ZScoreSeries fear = empty_series(IndicatorKind::Fear, windows);
            ZScoreSeries bc = empty_series(IndicatorKind::BusinessCycle, windows);
            stage("indicators", [&] {
                ZScoreOptions zo = cfg.zscore;
                zo.method = cfg.quantile;
                if (!cfg.vix.empty()) {
                    const auto load = load_indicator(cfg.vix, cfg.vix_date_column, cfg.vix_open_column,
                                                     cfg.vix_close_column, 1.0);
                    fear = indicator_zscores(load.series, windows, IndicatorKind::Fear, zo);
                }
                if (!cfg.yields.empty()) {
                    const auto load = load_indicator(cfg.yields, cfg.yields_date_column, cfg.yields_column,
                                                     cfg.yields_column, cfg.yields_scale);
                    bc = indicator_zscores(load.series, windows, IndicatorKind::BusinessCycle, zo);
                }
                write_file(out / "zscores.csv", zscores_csv(windows, fear, bc));
            });

            std::string market = cfg.market_factor;
            std::vector<WindowAnalytics> causal_rows, corr_rows;
            stage("analytics", [&] {
                const auto& names = manifest.factors;
                if (std::find(names.begin(), names.end(), market) == names.end()) {
                    log("market factor '" + market + "' not found; using '" + names.front() + "'");
                    market = names.front();
                }
                causal_rows = network_analytics(causal, market, cfg.time_anchor, cfg.rolling_jaccard);
                corr_rows = network_analytics(correlation, market, cfg.time_anchor, cfg.rolling_jaccard);
                write_file(out / "analytics_causal.csv", analytics_csv(causal_rows));
                write_file(out / "analytics_correlation.csv", analytics_csv(corr_rows));
            });

            stage("glm", [&] {
                Covariates cov;
                std::vector<double> time;
                for (const auto& r : causal_rows) time.push_back(static_cast<double>(r.time_days));
                cov.add("time", time);
                if (!cfg.vix.empty()) cov.add("f_zscore", fear.zscore);
                if (!cfg.yields.empty()) cov.add("bc_zscore", bc.zscore);

                auto density = [&](const std::vector<WindowAnalytics>& rows) {
                    std::vector<int> total, inst, lagged;
                    for (const auto& r : rows) {
                        total.push_back(r.counts.total);
                        inst.push_back(r.counts.instantaneous);
                        lagged.push_back(r.counts.lagged);
                    }
                    return std::vector<GlmResult>{fit_table_row("overall", total, cov),
                                                  fit_table_row("instantaneous", inst, cov),
                                                  fit_table_row("lagged", lagged, cov)};
                };
                std::vector<int> degree;
                for (const auto& r : causal_rows) {
                    degree.push_back(cfg.distinct_out_degree ? *r.market_out_degree_distinct : *r.market_out_degree);
                }
                const std::vector<std::pair<std::string, std::vector<GlmResult>>> tables = {
                    {"correlation", density(corr_rows)},
                    {"causal", density(causal_rows)},
                    {"market_outdegree", {fit_table_row(market + " out-degree", degree, cov)}},
                };
                const std::map<std::string, std::string> titles = {
                    {"correlation", "Edge counts of correlation networks (Poisson GLM)"},
                    {"causal", "Edge counts of causal networks (Poisson GLM)"},
                    {"market_outdegree", "Out-degree of " + market + " in causal networks (Poisson GLM)"},
                };
                for (const auto& [name, results] : tables) {
                    write_file(out / ("glm_" + name + ".csv"), glm_table_csv(name, results));
                    write_file(out / ("glm_" + name + ".txt"), glm_table_text(titles.at(name), results));
                    manifest.glm_tables.push_back(name);
                    for (const auto& r : results) {
                        if (!r.regression) log("GLM " + name + "/" + r.response + " not fitted: " + r.error);
                    }
                }
            });
        }
    } catch (const std::exception& e) {
        manifest.status = "failed";
        manifest.failure_stage = current_stage;
        manifest.failure_message = e.what();
        write_manifest();
        throw;
    }
    write_manifest();
    return manifest;
}

}  // namespace factornet
