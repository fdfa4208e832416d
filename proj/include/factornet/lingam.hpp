#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "factornet/panel.hpp"
#include "factornet/var.hpp"

namespace factornet {

/// VAR residuals, one row per variable.
struct ResidualPanel {
    Eigen::MatrixXd values;
    std::vector<std::string> names;
};

/// Structural VAR: y_t = W0 y_t + sum_l W_l y_{t-l} + e_t with W0 acyclic.
struct CausalModel {
    int lags = 1;
    /// W0(i, j) is the instantaneous effect of variable j on variable i.
    Eigen::MatrixXd w0;
    /// lagged[l - 1] holds W_l; W_l(i, j) is the effect of y^j_{t-l} on y^i_t.
    std::vector<Eigen::MatrixXd> lagged;
    /// Causal ordering, exogenous variable first (0-based).
    std::vector<int> order;
    std::vector<std::string> names;
    VarModel var;
};

/// Maximum-entropy approximation of differential entropy for a standardized sample:
/// H(u) = (1 + log 2 pi) / 2 - k1 (E[log cosh u] - gamma)^2 - k2 (E[u exp(-u^2/2)])^2.
double entropy_approx(std::span<const double> u);

inline constexpr double kEntropyK1 = 79.047;
inline constexpr double kEntropyK2 = 7.4129;
inline constexpr double kEntropyGamma = 0.37457;

/// z_j with its projection on z_i removed: z_j - cov(z_j, z_i) / var(z_i) * z_i.
std::vector<double> pairwise_residual(std::span<const double> z_j, std::span<const double> z_i);

/// Pairwise likelihood-ratio contrast for "i causes j" versus "j causes i" on standardized
/// samples: [H(x_j) + H(r_i^j)] - [H(x_i) + H(r_j^i)]. Positive values favour i as the cause.
double pairwise_contrast(std::span<const double> x_i, std::span<const double> x_j);

/// Greedy DirectLiNGAM ordering. Each step picks the remaining variable with the smallest total
/// dependence sum_j min(0, contrast(i, j))^2, then regresses it out of the others. Ties go to
/// the lowest original index.
std::vector<int> causal_order(const ResidualPanel& residuals);

/// Least-squares instantaneous matrix given an ordering; entries off the ordering's
/// predecessor sets are exactly zero.
Eigen::MatrixXd estimate_w0(const ResidualPanel& residuals, std::span<const int> order);

/// True when W0 permuted by `order` is strictly lower triangular (exact zeros required).
bool is_order_triangular(const Eigen::MatrixXd& w0, std::span<const int> order);

/// VAR fit, DirectLiNGAM on the residuals, then W_l = (I - W0) M_l.
CausalModel var_lingam(const Eigen::MatrixXd& y, int lags, const std::vector<std::string>& names = {});
CausalModel var_lingam(const ReturnPanel& panel, int lags);

}  // namespace factornet
