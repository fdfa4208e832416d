#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "factornet/lingam.hpp"
#include "factornet/network.hpp"
#include "factornet/panel.hpp"
#include "factornet/rng.hpp"
#include "factornet/stats.hpp"

namespace factornet {

/// How resampled panels are generated.
///   Residual     - VAR residual vectors drawn with replacement and fed back through the fitted
///                  VAR to generate a series of the original length (default).
///   Rows         - observed rows drawn i.i.d. with replacement (breaks serial dependence).
///   Block        - moving-block bootstrap of the observed rows.
///   Permutation  - each series permuted independently in time; draws form a null distribution.
enum class ResampleScheme { Residual, Rows, Block, Permutation };

std::string to_string(ResampleScheme s);
ResampleScheme parse_resample_scheme(const std::string& s);

struct ResampleOptions {
    int replicates = 5000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    ResampleScheme scheme = ResampleScheme::Residual;
    int block_length = 20;
    /// Correlation networks: include corr(y^i_t, y^i_{t-1}) self-lag edges.
    bool include_self_lags = true;
    std::size_t threads = 1;
    QuantileMethod quantile = QuantileMethod::Linear;
    /// Abort when more than this fraction of replicates fails to estimate.
    double max_failure_rate = 0.10;
};

struct CoefficientBounds {
    EdgeKey key;
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool keep = false;
};

struct EdgeSignificance {
    std::vector<CoefficientBounds> coefficients;
    std::size_t replicates = 0;
    std::size_t failed = 0;
};

/// Successful replicate estimates, one row per replicate in replicate order.
struct ResampleDraws {
    Eigen::MatrixXd draws;
    std::size_t requested = 0;
    std::size_t failed = 0;
};

/// Maps a T-column panel (N x T) to a coefficient vector in `coefficient_layout` order.
using Estimator = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

/// Edge slots of the coefficient vector. Causal: W0(i, j) for i != j, then W_l(i, j) for each lag.
/// Correlation: lag-0 pairs i < j, then corr(y^i_t, y^j_{t-1}) ordered pairs.
std::vector<EdgeKey> coefficient_layout(NetworkKind kind, int n, int lags, bool include_self_lags = true);

Eigen::VectorXd causal_coefficients(const CausalModel& model);
Eigen::VectorXd correlation_coefficients(const Eigen::MatrixXd& y, bool include_self_lags = true);

Estimator causal_estimator(int lags);
Estimator correlation_estimator(bool include_self_lags);

/// Generates one resampled panel of the same size as `y`. The residual scheme needs `model`, the
/// VAR fitted on `y`.
Eigen::MatrixXd resample_panel(const Eigen::MatrixXd& y, const VarModel* model, ResampleScheme scheme,
                               int block_length, Rng& rng);

/// Runs the estimator on `replicates` resamples. Replicate b uses Rng::stream(seed, b), so the
/// result does not depend on the worker count.
ResampleDraws draw_resamples(const Eigen::MatrixXd& y, int model_lags, const Estimator& estimator,
                             const ResampleOptions& options);

/// Percentile bounds at alpha/2 and 1 - alpha/2. Bootstrap schemes keep a coefficient when the
/// interval excludes zero; the permutation scheme keeps it when the point estimate falls outside
/// the null interval.
EdgeSignificance significance_from_draws(const std::vector<EdgeKey>& layout, const Eigen::VectorXd& point,
                                         const ResampleDraws& draws, double alpha, ResampleScheme scheme,
                                         QuantileMethod method = QuantileMethod::Linear);

EdgeSignificance resample_significance(const ReturnPanel& slice, NetworkKind kind, int lags,
                                       const ResampleOptions& options);

FactorNetwork causal_network(const ReturnPanel& slice, int lags, const ResampleOptions& options,
                             std::optional<WindowSpec> window = std::nullopt);

FactorNetwork correlation_network(const ReturnPanel& slice, const ResampleOptions& options,
                                  std::optional<WindowSpec> window = std::nullopt);

}  // namespace factornet
