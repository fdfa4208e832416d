#include "factornet/graph.hpp"

#include <algorithm>

#include "factornet/error.hpp"

namespace factornet {

std::set<EdgeKey> edge_set(const FactorNetwork& net) {
    std::set<EdgeKey> out;
    for (const auto& e : net.edges) {
        if (!e.significant) continue;
        EdgeKey k = e.key();
        if (net.kind == NetworkKind::Correlation && k.lag == 0 && k.src > k.dst) std::swap(k.src, k.dst);
        out.insert(k);
    }
    return out;
}

JaccardScore jaccard(const std::set<EdgeKey>& previous, const std::set<EdgeKey>& current) {
    if (previous.empty() && current.empty()) return {1.0, true};
    std::size_t common = 0;
    for (const auto& k : previous) common += current.count(k);
    const std::size_t uni = previous.size() + current.size() - common;
    return {static_cast<double>(common) / static_cast<double>(uni), false};
}

std::vector<double> rolling_mean(const std::vector<double>& x, std::size_t k) {
    if (k < 1) throw InputError("rolling_mean: k must be at least 1");
    std::vector<double> out;
    if (x.size() < k) return out;
    for (std::size_t i = k - 1; i < x.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = i + 1 - k; j <= i; ++j) s += x[j];
        out.push_back(s / static_cast<double>(k));
    }
    return out;
}

EdgeCounts edge_counts(const FactorNetwork& net) {
    EdgeCounts c;
    for (const auto& e : net.edges) {
        if (!e.significant) continue;
        if (e.lag == 0) ++c.instantaneous;
        else ++c.lagged;
    }
    c.total = c.instantaneous + c.lagged;
    return c;
}

int out_degree(const FactorNetwork& net, const std::string& factor, bool distinct_targets) {
    auto it = std::find(net.names.begin(), net.names.end(), factor);
    if (it == net.names.end()) throw InputError("out_degree: unknown factor '" + factor + "'");
    const int src = static_cast<int>(it - net.names.begin());
    std::set<int> targets;
    int count = 0;
    for (const auto& e : net.edges) {
        if (!e.significant || e.src != src || e.dst == src) continue;
        ++count;
        targets.insert(e.dst);
    }
    return distinct_targets ? static_cast<int>(targets.size()) : count;
}

}  // namespace factornet
