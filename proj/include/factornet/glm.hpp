#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "factornet/graph.hpp"

namespace factornet {

/// Poisson log-linear fit. Coefficients follow the design-matrix columns (intercept first).
struct GlmFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd std_err;
    Eigen::VectorXd p_value;  ///< two-sided Wald, normal reference
    double deviance = 0.0;
    /// Pearson chi-square / (n - p); quasi-Poisson scale, reported as a diagnostic only.
    double dispersion = 0.0;
    int n_iter = 0;
    bool converged = false;
};

/// Poisson log-link log-likelihood (without the log y! constant).
double poisson_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta);

/// Maximum-likelihood fit by iteratively reweighted least squares, started at
/// beta = (log(mean(y) + 0.5), 0, ...). Column 0 of `x` must be the intercept.
GlmFit fit_poisson(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, double tol = 1e-10, int max_iter = 100);

/// Named covariate columns; undefined entries drop the whole row.
struct Covariates {
    std::vector<std::string> names;
    std::vector<std::vector<std::optional<double>>> columns;

    void add(std::string name, std::vector<std::optional<double>> column);
    void add(std::string name, const std::vector<double>& column);
};

struct CountRegression {
    std::string response;
    std::vector<std::string> variables;  ///< "intercept" first
    GlmFit fit;
    std::size_t n_obs = 0;
};

/// Regresses a count series on the covariates (rows with missing covariates dropped).
CountRegression regress_counts(const std::string& response, const std::vector<int>& counts,
                               const Covariates& covariates);

/// Three fits: overall, instantaneous and lagged significant edge counts.
std::vector<CountRegression> regress_density(const std::vector<EdgeCounts>& counts, const Covariates& covariates);

}  // namespace factornet
