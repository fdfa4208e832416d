#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "factornet/date.hpp"
#include "factornet/netinfer.hpp"
#include "factornet/stats.hpp"

namespace factornet {

enum class TimeAnchor { Start, End };

struct RunConfig {
    // [data]
    std::filesystem::path factors;
    std::string factor_date_column;           ///< empty: first column
    std::vector<std::string> factor_columns;  ///< empty: all other columns
    double factor_scale = 0.01;               ///< percent files to decimal returns
    std::filesystem::path vix;                ///< optional
    std::string vix_date_column = "DATE";
    std::string vix_open_column = "OPEN";
    std::string vix_close_column = "CLOSE";
    std::filesystem::path yields;  ///< optional
    std::string yields_date_column = "DATE";
    std::string yields_column = "T10Y3M";
    double yields_scale = -1.0;  ///< 10Y-3M published spread flipped to 3M-10Y
    std::optional<Date> start;
    std::optional<Date> end;

    // [windows]
    int window_months = 18;
    int step_months = 3;
    std::size_t min_obs = 100;

    // [inference]
    int max_lag = 5;
    int replicates = 5000;
    double alpha = 0.05;
    std::uint64_t seed = 42;
    QuantileMethod quantile = QuantileMethod::Linear;
    ResampleScheme scheme = ResampleScheme::Residual;
    int block_length = 20;
    bool include_self_lags = true;
    double max_failure_rate = 0.10;

    // [indicators]
    ZScoreOptions zscore;

    // [analysis]
    std::string market_factor = "Mkt-RF";  ///< falls back to the first factor when absent
    bool distinct_out_degree = false;
    TimeAnchor time_anchor = TimeAnchor::End;
    int ccf_max_lag = 10;
    std::size_t rolling_jaccard = 4;

    // [output]
    std::filesystem::path output_dir = "out";

    ResampleOptions resample_options(std::size_t threads) const;
};

/// Parses TOML; relative paths resolve against `base_dir`. Unknown keys are rejected.
RunConfig config_from_toml(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Throws InputError on out-of-range values or missing input files.
void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);
/// FNV-1a over the canonical JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

std::string to_string(TimeAnchor a);

}  // namespace factornet
