#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace testutil {

/// Coarse-to-fine grid search for the Poisson log-likelihood maximizer (up to 3 coefficients).
/// Each pass evaluates a full (2k+1)^p grid around the incumbent, then shrinks the spacing.
inline Eigen::VectorXd grid_search_poisson(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, double radius = 4.0,
                                           double tol = 1e-7) {
    const Eigen::Index p = x.cols();
    auto loglik = [&](const Eigen::VectorXd& b) {
        const Eigen::VectorXd eta = x * b;
        double s = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) s += y(i) * eta(i) - std::exp(eta(i));
        return s;
    };
    const int k = 10;
    Eigen::VectorXd best = Eigen::VectorXd::Zero(p);
    double best_val = loglik(best);
    double step = radius / k;
    while (step > tol) {
        const Eigen::VectorXd center = best;
        const long points = static_cast<long>(std::pow(2 * k + 1, static_cast<double>(p)));
        for (long code = 0; code < points; ++code) {
            Eigen::VectorXd b = center;
            long c = code;
            for (Eigen::Index j = 0; j < p; ++j) {
                b(j) += step * static_cast<double>(c % (2 * k + 1) - k);
                c /= 2 * k + 1;
            }
            const double v = loglik(b);
            if (v > best_val) {
                best_val = v;
                best = b;
            }
        }
        // The optimum on this grid is within one step of the true maximizer for a concave objective.
        step = 2.0 * step / k;
    }
    return best;
}

}  // namespace testutil
