#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "factornet/network.hpp"

namespace factornet {

/// Significant edges as a set (weight and sign ignored).
std::set<EdgeKey> edge_set(const FactorNetwork& net);

struct JaccardScore {
    double value = 1.0;
    /// Both sets were empty; value is 1 by convention.
    bool both_empty = false;
};

JaccardScore jaccard(const std::set<EdgeKey>& previous, const std::set<EdgeKey>& current);

/// output[i] = mean(x[i .. i + k - 1]); the first k - 1 positions of the input have no output.
std::vector<double> rolling_mean(const std::vector<double>& x, std::size_t k = 4);

struct EdgeCounts {
    int total = 0;
    int instantaneous = 0;
    int lagged = 0;
};

EdgeCounts edge_counts(const FactorNetwork& net);

/// Significant edges leaving `factor` towards other factors at any lag. With distinct_targets
/// each influenced factor is counted once.
int out_degree(const FactorNetwork& net, const std::string& factor, bool distinct_targets = false);

}  // namespace factornet
