#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "factornet/config.hpp"
#include "factornet/glm.hpp"
#include "factornet/graph.hpp"
#include "factornet/network.hpp"

namespace factornet {

/// Seed of the resampling run for one window and network kind.
std::uint64_t window_seed(std::uint64_t seed, int window_index, NetworkKind kind);

/// Per-window analytics row for one network kind.
struct WindowAnalytics {
    WindowSpec window;
    int time_days = 0;
    int lags = 1;
    std::optional<double> jaccard;  ///< undefined for the first window
    bool both_empty = false;
    std::optional<double> jaccard_rolling;
    EdgeCounts counts;
    std::optional<int> market_out_degree;  ///< causal networks only
    std::optional<int> market_out_degree_distinct;
};

/// Jaccard, edge counts and market out-degree along a sequence of networks of one kind.
std::vector<WindowAnalytics> network_analytics(const std::vector<FactorNetwork>& networks,
                                               const std::string& market_factor, TimeAnchor anchor,
                                               std::size_t rolling = 4);
std::string analytics_csv(const std::vector<WindowAnalytics>& rows);

struct PipelineOptions {
    std::size_t threads = 1;
    /// Stop once every window's networks are on disk.
    bool networks_only = false;
    /// Fail instead of estimating a window whose networks are missing.
    bool require_existing = false;
    std::function<void(const std::string&)> log;
};

struct RunManifest {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string status = "ok";
    std::string failure_stage;
    std::string failure_message;
    std::size_t windows = 0;
    std::size_t computed = 0;
    std::size_t reused = 0;
    std::vector<int> selected_lags;
    std::vector<std::string> factors;
    std::vector<std::string> glm_tables;
    std::vector<std::pair<std::string, double>> timings;  ///< seconds per stage
    nlohmann::json config;

    nlohmann::json to_json() const;
};

/// Runs every stage and writes the outputs below cfg.output_dir. Stage failures are recorded in
/// the manifest (written in all cases) and rethrown.
RunManifest run_pipeline(const RunConfig& cfg, const PipelineOptions& options = {});

}  // namespace factornet
