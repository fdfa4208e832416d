#include "factornet/glm.hpp"

#include <cmath>

#include "factornet/error.hpp"

namespace factornet {

double poisson_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    return (y.array() * eta.array() - eta.array().exp()).sum();
}

namespace {

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double term = y(i) > 0.0 ? y(i) * std::log(y(i) / mu(i)) : 0.0;
        dev += 2.0 * (term - (y(i) - mu(i)));
    }
    return std::max(dev, 0.0);
}

void check_mu(const Eigen::VectorXd& mu) {
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (!std::isfinite(mu(i)) || mu(i) < 1e-250 || mu(i) > 1e250) {
            throw NumericalError("fit_poisson: fitted means under/overflow (likely separation)");
        }
    }
}

}  // namespace

GlmFit fit_poisson(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, double tol, int max_iter) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (y.size() != n) throw InputError("fit_poisson: response and design lengths differ");
    if (p < 1 || n <= p) throw InputError("fit_poisson: need more observations than coefficients");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(y(i) >= 0.0) || y(i) != std::floor(y(i))) throw InputError("fit_poisson: response must be counts");
        if (x(i, 0) != 1.0) throw InputError("fit_poisson: column 0 must be the intercept");
    }
    if (!x.allFinite()) throw InputError("fit_poisson: non-finite covariates");
    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        qr.setThreshold(1e-10);
        if (qr.rank() < p) throw NumericalError("fit_poisson: design matrix is rank deficient");
    }

    GlmFit fit;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    beta(0) = std::log(y.mean() + 0.5);
    Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd mu = eta.array().exp();
    double dev = poisson_deviance(y, mu);

    for (int iter = 1; iter <= max_iter; ++iter) {
        const Eigen::ArrayXd w = mu.array();
        const Eigen::VectorXd z = eta.array() + (y.array() - mu.array()) / w;
        const Eigen::ArrayXd sw = w.sqrt();
        const Eigen::MatrixXd xw = x.array().colwise() * sw;
        const Eigen::VectorXd zw = z.array() * sw;
        beta = xw.colPivHouseholderQr().solve(zw);
        eta = x * beta;
        mu = eta.array().exp();
        check_mu(mu);
        const double new_dev = poisson_deviance(y, mu);
        fit.n_iter = iter;
        const bool done = std::abs(new_dev - dev) / (std::abs(new_dev) + 0.1) < tol;
        dev = new_dev;
        if (done) {
            fit.converged = true;
            break;
        }
    }
    if (!fit.converged) {
        throw NumericalError("fit_poisson: IRLS did not converge in " + std::to_string(max_iter) + " iterations");
    }

    const Eigen::MatrixXd xw = x.array().colwise() * mu.array().sqrt();
    const Eigen::MatrixXd info = xw.transpose() * xw;
    const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));

    fit.coef = beta;
    fit.deviance = dev;
    fit.std_err = cov.diagonal().array().sqrt();
    fit.p_value.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double zstat = beta(j) / fit.std_err(j);
        fit.p_value(j) = std::erfc(std::abs(zstat) / std::sqrt(2.0));
    }
    fit.dispersion = ((y - mu).array().square() / mu.array()).sum() / static_cast<double>(n - p);
    if (!fit.std_err.allFinite() || (fit.std_err.array() <= 0.0).any()) {
        throw NumericalError("fit_poisson: singular Fisher information");
    }
    return fit;
}

void Covariates::add(std::string name, std::vector<std::optional<double>> column) {
    if (!columns.empty() && column.size() != columns.front().size()) {
        throw InputError("covariate '" + name + "' has a different length");
    }
    names.push_back(std::move(name));
    columns.push_back(std::move(column));
}

void Covariates::add(std::string name, const std::vector<double>& column) {
    add(std::move(name), std::vector<std::optional<double>>(column.begin(), column.end()));
}

CountRegression regress_counts(const std::string& response, const std::vector<int>& counts,
                               const Covariates& covariates) {
    for (const auto& c : covariates.columns) {
        if (c.size() != counts.size()) throw InputError("regress_counts: covariate length differs from counts");
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        bool ok = true;
        for (const auto& c : covariates.columns) ok = ok && c[i].has_value();
        if (ok) rows.push_back(i);
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(covariates.columns.size() + 1);
    Eigen::VectorXd y(n);
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index r = 0; r < n; ++r) {
        const std::size_t i = rows[static_cast<std::size_t>(r)];
        y(r) = counts[i];
        x(r, 0) = 1.0;
        for (Eigen::Index c = 1; c < p; ++c) x(r, c) = *covariates.columns[static_cast<std::size_t>(c - 1)][i];
    }

    CountRegression out;
    out.response = response;
    out.variables.push_back("intercept");
    out.variables.insert(out.variables.end(), covariates.names.begin(), covariates.names.end());
    out.n_obs = rows.size();
    out.fit = fit_poisson(y, x);
    return out;
}

std::vector<CountRegression> regress_density(const std::vector<EdgeCounts>& counts, const Covariates& covariates) {
    std::vector<int> total, inst, lagged;
    for (const auto& c : counts) {
        total.push_back(c.total);
        inst.push_back(c.instantaneous);
        lagged.push_back(c.lagged);
    }
    return {regress_counts("overall", total, covariates), regress_counts("instantaneous", inst, covariates),
            regress_counts("lagged", lagged, covariates)};
}

}  // namespace factornet
