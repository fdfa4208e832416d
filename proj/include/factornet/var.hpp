#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "factornet/panel.hpp"

namespace factornet {

/// Reduced-form VAR(L) fitted by least squares with an intercept.
struct VarModel {
    int lags = 1;
    Eigen::VectorXd intercept;
    /// coefficients[l - 1] maps y_{t-l} to y_t.
    std::vector<Eigen::MatrixXd> coefficients;
    /// N x t_effective.
    Eigen::MatrixXd residuals;
    /// log det of the MLE residual covariance.
    double log_det_sigma = 0.0;
    int n_params = 0;
    int t_effective = 0;
    std::vector<std::string> names;
};

/// Fits y_t = c + sum_l M_l y_{t-l} + e_t on an N x T matrix. The first dependent observation is
/// column `first_target` (default: `lags`), so several lag orders can share one estimation sample.
/// Throws NumericalError naming the collinear regressors when the design is rank deficient.
VarModel fit_var(const Eigen::MatrixXd& y, int lags, int first_target = -1,
                 const std::vector<std::string>& names = {});

VarModel fit_var(const ReturnPanel& panel, int lags);

/// T_eff * log det(Sigma) + n_params * log(T_eff).
double bic(const VarModel& model, int t_effective);
double bic(const VarModel& model);

/// argmin of BIC over 1..max_lag, every candidate scored on the sample left after trimming
/// max_lag leading observations.
int select_lag(const Eigen::MatrixXd& y, int max_lag = 5);
int select_lag(const ReturnPanel& panel, int max_lag = 5);

}  // namespace factornet
