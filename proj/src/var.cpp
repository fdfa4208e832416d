#include "factornet/var.hpp"

#include <cmath>
#include <limits>

#include "factornet/error.hpp"

namespace factornet {

namespace {

std::string regressor_name(Eigen::Index col, Eigen::Index n, const std::vector<std::string>& names) {
    if (col == 0) return "intercept";
    const Eigen::Index lag = (col - 1) / n + 1;
    const Eigen::Index var = (col - 1) % n;
    const std::string base = static_cast<std::size_t>(var) < names.size() ? names[static_cast<std::size_t>(var)]
                                                                          : "y" + std::to_string(var + 1);
    return base + "(t-" + std::to_string(lag) + ")";
}

}  // namespace

VarModel fit_var(const Eigen::MatrixXd& y, int lags, int first_target, const std::vector<std::string>& names) {
    if (lags < 1) throw InputError("fit_var: lag order must be at least 1");
    if (first_target < 0) first_target = lags;
    if (first_target < lags) throw InputError("fit_var: first_target must be >= lags");

    const Eigen::Index n = y.rows();
    const Eigen::Index m = y.cols() - first_target;
    const Eigen::Index k = 1 + n * lags;
    if (m <= k) {
        throw InputError("fit_var: " + std::to_string(m) + " usable observations cannot identify " +
                         std::to_string(k) + " regressors per equation");
    }

    // Rows are time points, columns [1, y_{t-1}', ..., y_{t-L}'].
    Eigen::MatrixXd x(m, k);
    x.col(0).setOnes();
    for (int l = 1; l <= lags; ++l) {
        x.middleCols(1 + (l - 1) * n, n) = y.middleCols(first_target - l, m).transpose();
    }
    const Eigen::MatrixXd target = y.middleCols(first_target, m).transpose();  // m x n

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        std::string cols;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index j = qr.rank(); j < k; ++j) {
            if (!cols.empty()) cols += ", ";
            cols += regressor_name(perm(j), n, names);
        }
        throw NumericalError("fit_var: rank-deficient regressors (collinear: " + cols + ")");
    }
    const Eigen::MatrixXd beta = qr.solve(target);  // k x n

    VarModel model;
    model.lags = lags;
    model.names = names;
    model.intercept = beta.row(0).transpose();
    for (int l = 1; l <= lags; ++l) {
        model.coefficients.push_back(beta.middleRows(1 + (l - 1) * n, n).transpose());
    }
    model.residuals = (target - x * beta).transpose();
    model.t_effective = static_cast<int>(m);
    model.n_params = static_cast<int>(n * k);

    const Eigen::MatrixXd sigma = model.residuals * model.residuals.transpose() / static_cast<double>(m);
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        model.log_det_sigma = -std::numeric_limits<double>::infinity();
    } else {
        model.log_det_sigma = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    }
    if (!model.intercept.allFinite() || !beta.allFinite()) throw NumericalError("fit_var: non-finite coefficients");
    return model;
}

VarModel fit_var(const ReturnPanel& panel, int lags) {
    return fit_var(panel.values(), lags, lags, panel.names());
}

double bic(const VarModel& model, int t_effective) {
    if (!std::isfinite(model.log_det_sigma)) throw NumericalError("bic: singular residual covariance");
    const double t = static_cast<double>(t_effective);
    return t * model.log_det_sigma + static_cast<double>(model.n_params) * std::log(t);
}

double bic(const VarModel& model) { return bic(model, model.t_effective); }

int select_lag(const Eigen::MatrixXd& y, int max_lag) {
    if (max_lag < 1) throw InputError("select_lag: max_lag must be at least 1");
    if (max_lag == 1) return 1;
    int best = 1;
    double best_score = std::numeric_limits<double>::infinity();
    for (int l = 1; l <= max_lag; ++l) {
        const VarModel model = fit_var(y, l, max_lag);
        const double score = bic(model);
        if (score < best_score) {
            best_score = score;
            best = l;
        }
    }
    return best;
}

int select_lag(const ReturnPanel& panel, int max_lag) { return select_lag(panel.values(), max_lag); }

}  // namespace factornet
