#include "factornet/lingam.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "factornet/error.hpp"

namespace factornet {

namespace {

const double kGaussEntropy = (1.0 + std::log(2.0 * std::numbers::pi)) / 2.0;

inline double log_cosh(double u) {
    const double a = std::abs(u);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

inline double entropy_from_means(double mean_log_cosh, double mean_gauss) {
    const double a = mean_log_cosh - kEntropyGamma;
    return kGaussEntropy - kEntropyK1 * a * a - kEntropyK2 * mean_gauss * mean_gauss;
}

// Centred, unit (population) variance copy.
std::vector<double> standardize(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double m = 0.0;
    for (double v : x) m += v;
    m /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0) || !std::isfinite(sd)) throw NumericalError("DirectLiNGAM: zero-variance residual");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / sd;
    return out;
}

// Means of log cosh(u) and u exp(-u^2 / 2), evaluated with Eigen's packet math.
std::pair<double, double> entropy_means(const Eigen::ArrayXd& u) {
    const Eigen::ArrayXd a = u.abs();
    const double n = static_cast<double>(u.size());
    const double lc = (a + (1.0 + (-2.0 * a).exp()).log()).sum() / n - std::numbers::ln2;
    const double g = (u * (-0.5 * u.square()).exp()).sum() / n;
    return {lc, g};
}

double entropy_unchecked(const std::vector<double>& u) {
    const auto [lc, g] = entropy_means(Eigen::Map<const Eigen::ArrayXd>(u.data(), static_cast<Eigen::Index>(u.size())));
    return entropy_from_means(lc, g);
}

// Contrast for standardized a, b with entropies already known.
double contrast(const std::vector<double>& a, const std::vector<double>& b, double h_a, double h_b) {
    const auto m = static_cast<Eigen::Index>(a.size());
    const Eigen::Map<const Eigen::ArrayXd> x(a.data(), m);
    const Eigen::Map<const Eigen::ArrayXd> y(b.data(), m);
    const double rho = (x * y).sum() / static_cast<double>(m);
    const double resid_var = 1.0 - rho * rho;
    if (!(resid_var > 1e-12)) throw NumericalError("DirectLiNGAM: perfectly collinear residuals");
    const double s = 1.0 / std::sqrt(resid_var);

    const auto [ab1, ab2] = entropy_means((x - rho * y) * s);  // a regressed on b
    const auto [ba1, ba2] = entropy_means((y - rho * x) * s);  // b regressed on a
    return (h_b + entropy_from_means(ab1, ab2)) - (h_a + entropy_from_means(ba1, ba2));
}

void remove_projection(std::vector<double>& target, const std::vector<double>& on) {
    const double n = static_cast<double>(on.size());
    double mt = 0.0, mo = 0.0;
    for (std::size_t t = 0; t < on.size(); ++t) {
        mt += target[t];
        mo += on[t];
    }
    mt /= n;
    mo /= n;
    double cov = 0.0, var = 0.0;
    for (std::size_t t = 0; t < on.size(); ++t) {
        cov += (target[t] - mt) * (on[t] - mo);
        var += (on[t] - mo) * (on[t] - mo);
    }
    if (!(var > 0.0)) throw NumericalError("DirectLiNGAM: zero-variance regressor");
    const double beta = cov / var;
    for (std::size_t t = 0; t < on.size(); ++t) target[t] -= beta * on[t];
}

}  // namespace

double entropy_approx(std::span<const double> u) {
    if (u.size() < 50) throw InputError("entropy_approx needs at least 50 observations");
    double s1 = 0.0, s2 = 0.0;
    for (double v : u) {
        if (!std::isfinite(v)) throw NumericalError("entropy_approx: non-finite input");
        s1 += log_cosh(v);
        s2 += v * std::exp(-0.5 * v * v);
    }
    const double n = static_cast<double>(u.size());
    return entropy_from_means(s1 / n, s2 / n);
}

std::vector<double> pairwise_residual(std::span<const double> z_j, std::span<const double> z_i) {
    if (z_j.size() != z_i.size()) throw InputError("pairwise_residual: length mismatch");
    std::vector<double> out(z_j.begin(), z_j.end());
    remove_projection(out, std::vector<double>(z_i.begin(), z_i.end()));
    return out;
}

double pairwise_contrast(std::span<const double> x_i, std::span<const double> x_j) {
    if (x_i.size() != x_j.size()) throw InputError("pairwise_contrast: length mismatch");
    const auto a = standardize(x_i);
    const auto b = standardize(x_j);
    return contrast(a, b, entropy_unchecked(a), entropy_unchecked(b));
}

std::vector<int> causal_order(const ResidualPanel& residuals) {
    const auto n = static_cast<std::size_t>(residuals.values.rows());
    const auto m = static_cast<std::size_t>(residuals.values.cols());
    if (n == 0) throw InputError("causal_order: no variables");
    if (n > 1 && m < 3) throw InputError("causal_order: too few observations");

    std::vector<std::vector<double>> work(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < m; ++t) {
            work[i][t] = residuals.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
        }
    }

    std::vector<int> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = static_cast<int>(i);
    std::vector<int> order;
    order.reserve(n);

    std::vector<std::vector<double>> std_data(n);
    std::vector<double> h(n), score(n);
    while (remaining.size() > 1) {
        for (int i : remaining) {
            std_data[i] = standardize(work[i]);
            h[i] = entropy_unchecked(std_data[i]);
            score[i] = 0.0;
        }
        for (std::size_t p = 0; p < remaining.size(); ++p) {
            for (std::size_t q = p + 1; q < remaining.size(); ++q) {
                const int a = remaining[p];
                const int b = remaining[q];
                const double d = contrast(std_data[a], std_data[b], h[a], h[b]);
                const double da = std::min(0.0, d);
                const double db = std::min(0.0, -d);
                score[a] += da * da;
                score[b] += db * db;
            }
        }
        // `remaining` stays sorted by original index, so strict < keeps the lowest index on ties.
        std::size_t best = 0;
        for (std::size_t p = 1; p < remaining.size(); ++p) {
            if (score[remaining[p]] < score[remaining[best]]) best = p;
        }
        const int root = remaining[best];
        order.push_back(root);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        for (int j : remaining) remove_projection(work[j], work[root]);
    }
    order.push_back(remaining.front());
    return order;
}

Eigen::MatrixXd estimate_w0(const ResidualPanel& residuals, std::span<const int> order) {
    const Eigen::Index n = residuals.values.rows();
    if (static_cast<Eigen::Index>(order.size()) != n) throw InputError("estimate_w0: ordering size mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) throw InputError("estimate_w0: invalid ordering");
        seen[static_cast<std::size_t>(v)] = true;
    }

    const Eigen::MatrixXd centered = residuals.values.colwise() - residuals.values.rowwise().mean();
    Eigen::MatrixXd w0 = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t p = 1; p < order.size(); ++p) {
        const Eigen::Index k = static_cast<Eigen::Index>(p);
        Eigen::MatrixXd x(centered.cols(), k);
        for (Eigen::Index c = 0; c < k; ++c) x.col(c) = centered.row(order[static_cast<std::size_t>(c)]).transpose();
        const Eigen::VectorXd target = centered.row(order[p]).transpose();
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        qr.setThreshold(1e-10);
        if (qr.rank() < k) {
            throw NumericalError("estimate_w0: predecessors of variable " + std::to_string(order[p]) +
                                 " are collinear");
        }
        const Eigen::VectorXd coef = qr.solve(target);
        for (Eigen::Index c = 0; c < k; ++c) w0(order[p], order[static_cast<std::size_t>(c)]) = coef(c);
    }
    if (!w0.allFinite()) throw NumericalError("estimate_w0: non-finite coefficients");
    return w0;
}

bool is_order_triangular(const Eigen::MatrixXd& w0, std::span<const int> order) {
    if (static_cast<Eigen::Index>(order.size()) != w0.rows() || w0.rows() != w0.cols()) return false;
    for (std::size_t p = 0; p < order.size(); ++p) {
        for (std::size_t q = p; q < order.size(); ++q) {
            if (w0(order[p], order[q]) != 0.0) return false;
        }
    }
    return true;
}

CausalModel var_lingam(const Eigen::MatrixXd& y, int lags, const std::vector<std::string>& names) {
    CausalModel model;
    model.var = fit_var(y, lags, lags, names);
    model.lags = lags;
    model.names = names;

    const ResidualPanel res{model.var.residuals, names};
    model.order = causal_order(res);
    model.w0 = estimate_w0(res, model.order);

    const Eigen::MatrixXd i_minus_w0 = Eigen::MatrixXd::Identity(y.rows(), y.rows()) - model.w0;
    for (const auto& m : model.var.coefficients) model.lagged.push_back(i_minus_w0 * m);
    return model;
}

CausalModel var_lingam(const ReturnPanel& panel, int lags) {
    return var_lingam(panel.values(), lags, panel.names());
}

}  // namespace factornet
