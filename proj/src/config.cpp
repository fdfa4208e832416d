#include "factornet/config.hpp"

#include <toml.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "factornet/error.hpp"
#include "factornet/report.hpp"

namespace factornet {

std::string to_string(TimeAnchor a) { return a == TimeAnchor::Start ? "start" : "end"; }

ResampleOptions RunConfig::resample_options(std::size_t threads) const {
    ResampleOptions o;
    o.replicates = replicates;
    o.alpha = alpha;
    o.seed = seed;
    o.scheme = scheme;
    o.block_length = block_length;
    o.include_self_lags = include_self_lags;
    o.threads = threads;
    o.quantile = quantile;
    o.max_failure_rate = max_failure_rate;
    return o;
}

namespace {

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"data",
     {"factors", "factor_date_column", "factor_columns", "factor_scale", "vix", "vix_date_column", "vix_open_column",
      "vix_close_column", "yields", "yields_date_column", "yields_column", "yields_scale", "start", "end"}},
    {"windows", {"length_months", "step_months", "min_obs"}},
    {"inference",
     {"max_lag", "replicates", "alpha", "seed", "quantile", "scheme", "block_length", "include_self_lags",
      "max_failure_rate"}},
    {"indicators",
     {"history_years", "min_history", "include_current", "bc_difference", "es_quantile", "zero_std_is_error",
      "min_obs"}},
    {"analysis", {"market_factor", "distinct_out_degree", "time_anchor", "ccf_max_lag", "rolling_jaccard"}},
    {"output", {"dir"}},
};

class Reader {
public:
    Reader(const toml::table& root, std::filesystem::path base) : root_(root), base_(std::move(base)) {}

    template <class T>
    void get(const char* section, const char* key, T& out) {
        const toml::node* node = find(section, key);
        if (!node) return;
        if constexpr (std::is_same_v<T, double>) {
            if (auto v = node->value<double>()) {
                out = *v;
                return;
            }
        } else if constexpr (std::is_same_v<T, bool>) {
            if (auto v = node->as_boolean()) {
                out = v->get();
                return;
            }
        } else if constexpr (std::is_integral_v<T>) {
            if (auto v = node->as_integer()) {
                const std::int64_t x = v->get();
                if (std::is_unsigned_v<T> && x < 0) fail(section, key, "must be non-negative");
                out = static_cast<T>(x);
                return;
            }
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (auto v = node->as_string()) {
                out = v->get();
                return;
            }
        }
        fail(section, key, "has the wrong type");
    }

    void path(const char* section, const char* key, std::filesystem::path& out) {
        std::string s;
        get(section, key, s);
        if (s.empty()) return;
        std::filesystem::path p(s);
        out = p.is_absolute() || base_.empty() ? p : base_ / p;
    }

    void strings(const char* section, const char* key, std::vector<std::string>& out) {
        const toml::node* node = find(section, key);
        if (!node) return;
        const auto* arr = node->as_array();
        if (!arr) fail(section, key, "must be an array of strings");
        out.clear();
        for (const auto& item : *arr) {
            const auto* s = item.as_string();
            if (!s) fail(section, key, "must be an array of strings");
            out.push_back(s->get());
        }
    }

    void date(const char* section, const char* key, std::optional<Date>& out) {
        const toml::node* node = find(section, key);
        if (!node) return;
        if (const auto* d = node->as_date()) {
            const auto v = d->get();
            out = Date{std::chrono::year{v.year}, std::chrono::month{v.month}, std::chrono::day{v.day}};
            return;
        }
        if (const auto* s = node->as_string()) {
            out = parse_date(s->get());
            if (out) return;
        }
        fail(section, key, "must be a date");
    }

    [[noreturn]] static void fail(const char* section, const char* key, const std::string& what) {
        throw InputError(std::string("config: ") + section + "." + key + " " + what);
    }

private:
    const toml::node* find(const char* section, const char* key) const {
        const auto* table = root_[section].as_table();
        return table ? table->get(key) : nullptr;
    }

    const toml::table& root_;
    std::filesystem::path base_;
};

}  // namespace

RunConfig config_from_toml(const std::string& text, const std::filesystem::path& base_dir) {
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        throw InputError(std::string("config: ") + std::string(e.description()));
    }
    for (const auto& [section, node] : root) {
        const std::string name(section.str());
        auto known = kKnownKeys.find(name);
        if (known == kKnownKeys.end() || !node.is_table()) throw InputError("config: unknown section [" + name + "]");
        for (const auto& [key, value] : *node.as_table()) {
            if (!known->second.count(std::string(key.str()))) {
                throw InputError("config: unknown key " + name + "." + std::string(key.str()));
            }
        }
    }

    RunConfig cfg;
    Reader r(root, base_dir);
    r.path("data", "factors", cfg.factors);
    r.get("data", "factor_date_column", cfg.factor_date_column);
    r.strings("data", "factor_columns", cfg.factor_columns);
    r.get("data", "factor_scale", cfg.factor_scale);
    r.path("data", "vix", cfg.vix);
    r.get("data", "vix_date_column", cfg.vix_date_column);
    r.get("data", "vix_open_column", cfg.vix_open_column);
    r.get("data", "vix_close_column", cfg.vix_close_column);
    r.path("data", "yields", cfg.yields);
    r.get("data", "yields_date_column", cfg.yields_date_column);
    r.get("data", "yields_column", cfg.yields_column);
    r.get("data", "yields_scale", cfg.yields_scale);
    r.date("data", "start", cfg.start);
    r.date("data", "end", cfg.end);

    r.get("windows", "length_months", cfg.window_months);
    r.get("windows", "step_months", cfg.step_months);
    r.get("windows", "min_obs", cfg.min_obs);

    r.get("inference", "max_lag", cfg.max_lag);
    r.get("inference", "replicates", cfg.replicates);
    r.get("inference", "alpha", cfg.alpha);
    r.get("inference", "seed", cfg.seed);
    std::string s = to_string(cfg.quantile);
    r.get("inference", "quantile", s);
    cfg.quantile = parse_quantile_method(s);
    s = to_string(cfg.scheme);
    r.get("inference", "scheme", s);
    cfg.scheme = parse_resample_scheme(s);
    r.get("inference", "block_length", cfg.block_length);
    r.get("inference", "include_self_lags", cfg.include_self_lags);
    r.get("inference", "max_failure_rate", cfg.max_failure_rate);

    r.get("indicators", "history_years", cfg.zscore.history_years);
    r.get("indicators", "min_history", cfg.zscore.min_history);
    r.get("indicators", "include_current", cfg.zscore.include_current);
    r.get("indicators", "bc_difference", cfg.zscore.difference);
    r.get("indicators", "es_quantile", cfg.zscore.q);
    r.get("indicators", "zero_std_is_error", cfg.zscore.zero_std_is_error);
    r.get("indicators", "min_obs", cfg.zscore.min_obs);
    cfg.zscore.method = cfg.quantile;

    r.get("analysis", "market_factor", cfg.market_factor);
    r.get("analysis", "distinct_out_degree", cfg.distinct_out_degree);
    s = to_string(cfg.time_anchor);
    r.get("analysis", "time_anchor", s);
    if (s == "start") {
        cfg.time_anchor = TimeAnchor::Start;
    } else if (s == "end") {
        cfg.time_anchor = TimeAnchor::End;
    } else {
        throw InputError("config: analysis.time_anchor must be 'start' or 'end'");
    }
    r.get("analysis", "ccf_max_lag", cfg.ccf_max_lag);
    r.get("analysis", "rolling_jaccard", cfg.rolling_jaccard);

    r.path("output", "dir", cfg.output_dir);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    return config_from_toml(read_file(path), path.parent_path());
}

void validate(const RunConfig& cfg) {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw InputError("config: " + what);
    };
    need(!cfg.factors.empty(), "data.factors is required");
    need(std::filesystem::exists(cfg.factors), "factor file " + cfg.factors.string() + " does not exist");
    need(cfg.vix.empty() || std::filesystem::exists(cfg.vix), "VIX file " + cfg.vix.string() + " does not exist");
    need(cfg.yields.empty() || std::filesystem::exists(cfg.yields),
         "yield file " + cfg.yields.string() + " does not exist");
    need(std::isfinite(cfg.factor_scale) && cfg.factor_scale != 0.0, "data.factor_scale must be finite and nonzero");
    need(!cfg.start || !cfg.end || *cfg.start <= *cfg.end, "data.start is after data.end");
    need(cfg.window_months >= 1, "windows.length_months must be positive");
    need(cfg.step_months >= 1, "windows.step_months must be positive");
    need(cfg.min_obs >= 10, "windows.min_obs must be at least 10");
    need(cfg.max_lag >= 1, "inference.max_lag must be at least 1");
    need(cfg.replicates >= 1, "inference.replicates must be at least 1");
    need(cfg.alpha > 0.0 && cfg.alpha < 1.0, "inference.alpha must lie in (0, 1)");
    need(cfg.block_length >= 1, "inference.block_length must be positive");
    need(cfg.max_failure_rate >= 0.0 && cfg.max_failure_rate <= 1.0, "inference.max_failure_rate outside [0, 1]");
    need(cfg.zscore.history_years >= 1, "indicators.history_years must be positive");
    need(cfg.zscore.q > 0.0 && cfg.zscore.q < 1.0, "indicators.es_quantile must lie in (0, 1)");
    need(cfg.ccf_max_lag >= 0, "analysis.ccf_max_lag must be non-negative");
    need(cfg.rolling_jaccard >= 1, "analysis.rolling_jaccard must be positive");
    need(!cfg.output_dir.empty(), "output.dir is required");
}

nlohmann::json to_json(const RunConfig& cfg) {
    auto opt_date = [](const std::optional<Date>& d) { return d ? nlohmann::json(format_date(*d)) : nlohmann::json(); };
    nlohmann::json j;
    j["data"] = {{"factors", cfg.factors.string()},
                 {"factor_date_column", cfg.factor_date_column},
                 {"factor_columns", cfg.factor_columns},
                 {"factor_scale", cfg.factor_scale},
                 {"vix", cfg.vix.string()},
                 {"vix_date_column", cfg.vix_date_column},
                 {"vix_open_column", cfg.vix_open_column},
                 {"vix_close_column", cfg.vix_close_column},
                 {"yields", cfg.yields.string()},
                 {"yields_date_column", cfg.yields_date_column},
                 {"yields_column", cfg.yields_column},
                 {"yields_scale", cfg.yields_scale},
                 {"start", opt_date(cfg.start)},
                 {"end", opt_date(cfg.end)}};
    j["windows"] = {{"length_months", cfg.window_months}, {"step_months", cfg.step_months}, {"min_obs", cfg.min_obs}};
    j["inference"] = {{"max_lag", cfg.max_lag},
                      {"replicates", cfg.replicates},
                      {"alpha", cfg.alpha},
                      {"seed", cfg.seed},
                      {"quantile", to_string(cfg.quantile)},
                      {"scheme", to_string(cfg.scheme)},
                      {"block_length", cfg.block_length},
                      {"include_self_lags", cfg.include_self_lags},
                      {"max_failure_rate", cfg.max_failure_rate}};
    j["indicators"] = {{"history_years", cfg.zscore.history_years},
                       {"min_history", cfg.zscore.min_history},
                       {"include_current", cfg.zscore.include_current},
                       {"bc_difference", cfg.zscore.difference},
                       {"es_quantile", cfg.zscore.q},
                       {"zero_std_is_error", cfg.zscore.zero_std_is_error},
                       {"min_obs", cfg.zscore.min_obs}};
    j["analysis"] = {{"market_factor", cfg.market_factor},
                     {"distinct_out_degree", cfg.distinct_out_degree},
                     {"time_anchor", to_string(cfg.time_anchor)},
                     {"ccf_max_lag", cfg.ccf_max_lag},
                     {"rolling_jaccard", cfg.rolling_jaccard}};
    j["output"] = {{"dir", cfg.output_dir.string()}};
    return j;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string canonical = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace factornet
