#pragma once

#include <nlohmann/json.hpp>

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "factornet/panel.hpp"

namespace factornet {

enum class NetworkKind { Causal, Correlation };

std::string to_string(NetworkKind k);
NetworkKind parse_network_kind(const std::string& s);

/// Identity of an edge between factors, ignoring weight. For correlation networks lag-0 keys are
/// canonicalized with src <= dst.
struct EdgeKey {
    int src = 0;
    int dst = 0;
    int lag = 0;

    auto operator<=>(const EdgeKey&) const = default;
};

/// Directed edge from factor `src` at t - lag to factor `dst` at t.
struct Edge {
    int src = 0;
    int dst = 0;
    int lag = 0;
    double weight = 0.0;
    bool significant = false;
    double lower = 0.0;  ///< resampling interval
    double upper = 0.0;

    EdgeKey key() const { return {src, dst, lag}; }
};

struct NetworkNode {
    int factor = 0;
    int lag = 0;  ///< layer t - lag

    std::string label(const std::vector<std::string>& names) const;
};

/// Signed weighted graph over (factor, layer) nodes for one inference window.
struct FactorNetwork {
    std::optional<WindowSpec> window;
    NetworkKind kind = NetworkKind::Causal;
    std::vector<std::string> names;
    int lags = 1;
    double alpha = 0.05;
    std::vector<Edge> edges;
    /// Causal ordering of the point estimate (causal networks only).
    std::vector<int> order;

    std::vector<NetworkNode> nodes() const;
    std::vector<Edge> significant_edges() const;
};

nlohmann::json to_json(const FactorNetwork& net);
FactorNetwork network_from_json(const nlohmann::json& j);

/// Header line for edge-list CSVs.
std::string edge_csv_header();
/// One row per edge: window,start,end,kind,src,dst,lag,weight,significant,lower,upper.
std::string edge_csv_rows(const FactorNetwork& net);

/// Kahn topological sort over significant instantaneous edges.
bool instantaneous_subgraph_acyclic(const FactorNetwork& net);

}  // namespace factornet
