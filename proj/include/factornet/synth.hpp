#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "factornet/lingam.hpp"
#include "factornet/network.hpp"
#include "factornet/panel.hpp"

namespace factornet {

enum class NoiseKind { Laplace, Uniform, StudentT, Gaussian };

std::string to_string(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& s);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Laplace;
    double df = 5.0;  ///< Student t only
};

/// Ground-truth structural VAR: y_t = W0 y_t + sum_l W_l y_{t-l} + e_t.
struct SvarSpec {
    int n = 0;
    int lags = 1;
    int t = 0;
    Eigen::MatrixXd w0;
    std::vector<Eigen::MatrixXd> lagged;
    NoiseSpec noise;
    /// Per-variable noise standard deviation; empty means all ones.
    std::vector<double> scales;
    std::uint64_t seed = 0;
    int burn_in = 500;
};

/// True weights; a nonzero entry is an edge.
struct Adjacency {
    Eigen::MatrixXd w0;
    std::vector<Eigen::MatrixXd> lagged;

    int edge_count() const;
};

struct Simulation {
    ReturnPanel panel;
    Adjacency truth;
};

/// Spectral radius of the companion matrix of the implied reduced-form VAR.
double spectral_radius(const SvarSpec& spec);

/// Throws InputError unless W0 is a DAG and the implied VAR is stationary.
void validate(const SvarSpec& spec);

/// Simulates the spec after `burn_in` discarded steps. Dates are consecutive weekdays from
/// 2000-01-03; factors are named x1..xN.
Simulation generate(const SvarSpec& spec);

/// Random DAG spec with round(density * slots) edges, where slots counts the N(N-1)/2
/// instantaneous pairs of a random causal order plus L * N^2 lagged entries. Lagged weights are
/// shrunk until the spectral radius is at most `max_radius`.
SvarSpec random_svar_spec(int n, int lags, int t, double density, NoiseSpec noise, std::uint64_t seed,
                          double max_radius = 0.9);

struct RecoveryMetrics {
    int true_positive = 0;
    int false_positive = 0;
    int false_negative = 0;
    int reversed = 0;
    double precision = 1.0;  ///< 1 when nothing is estimated
    double recall = 1.0;     ///< 1 when the truth is empty
    int shd = 0;             ///< missing + extra + reversed (reversals on the instantaneous layer)
};

RecoveryMetrics recovery_metrics(const std::vector<EdgeKey>& estimated, const Adjacency& truth);
RecoveryMetrics recovery_metrics(const FactorNetwork& estimated, const Adjacency& truth);
/// Nonzero entries of the model (|w| > threshold) count as estimated edges.
RecoveryMetrics recovery_metrics(const CausalModel& estimated, const Adjacency& truth, double threshold = 0.0);

/// Total dependence the greedy ordering would accumulate along `order`.
double ordering_score(const ResidualPanel& residuals, std::span<const int> order);

/// Exhaustive minimizer of ordering_score over all N! orderings (N <= 6).
std::vector<int> brute_force_order(const ResidualPanel& residuals);

}  // namespace factornet
