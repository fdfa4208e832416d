#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "factornet/error.hpp"
#include "factornet/rng.hpp"
#include "factornet/var.hpp"

using namespace factornet;

namespace {

Eigen::MatrixXd ar1(std::uint64_t seed, Eigen::Index t, double phi) {
    Rng rng(seed);
    Eigen::MatrixXd y(1, t);
    double prev = 0.0;
    for (int s = 0; s < 200; ++s) prev = phi * prev + rng.normal();
    for (Eigen::Index s = 0; s < t; ++s) {
        prev = phi * prev + rng.normal();
        y(0, s) = prev;
    }
    return y;
}

Eigen::MatrixXd noise(std::uint64_t seed, Eigen::Index n, Eigen::Index t) {
    Rng rng(seed);
    Eigen::MatrixXd y(n, t);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.laplace();
    return y;
}

}  // namespace

TEST_CASE("scalar AR(1) coefficient") {
    const VarModel m = fit_var(ar1(3, 10000, 0.5), 1);
    CHECK(std::abs(m.coefficients[0](0, 0) - 0.5) < 0.02);
    CHECK(m.residuals.cols() == 9999);
    CHECK(m.n_params == 2);
}

TEST_CASE("white noise coefficients stay within sampling error") {
    int inside = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const VarModel m = fit_var(noise(seed, 3, 5000), 1);
        const double se = 1.0 / std::sqrt(5000.0);
        for (Eigen::Index k = 0; k < 9; ++k) {
            const double c = m.coefficients[0].data()[k];
            CHECK(std::abs(c) < 4.0 * se);
            inside += std::abs(c) < 2.0 * se;
            ++total;
        }
    }
    CHECK(static_cast<double>(inside) / total > 0.88);
}

TEST_CASE("residual properties") {
    const Eigen::MatrixXd y = noise(8, 4, 600);
    const VarModel m = fit_var(y, 2);
    CHECK(m.residuals.rowwise().mean().cwiseAbs().maxCoeff() < 1e-12);
    // Orthogonality to every lagged regressor.
    for (int l = 1; l <= 2; ++l) {
        const Eigen::MatrixXd x = y.middleCols(2 - l, m.residuals.cols());
        CHECK((m.residuals * x.transpose()).cwiseAbs().maxCoeff() / 598.0 < 1e-12);
    }
    // Refitting on fitted + residuals reproduces the coefficients.
    Eigen::MatrixXd rebuilt = y;
    for (Eigen::Index s = 2; s < y.cols(); ++s) {
        Eigen::VectorXd v = m.intercept + m.residuals.col(s - 2);
        for (int l = 1; l <= 2; ++l) v += m.coefficients[l - 1] * y.col(s - l);
        rebuilt.col(s) = v;
    }
    const VarModel again = fit_var(rebuilt, 2);
    for (int l = 0; l < 2; ++l) CHECK((again.coefficients[l] - m.coefficients[l]).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fit is equivariant under reordering") {
    const Eigen::MatrixXd y = noise(12, 3, 500);
    Eigen::PermutationMatrix<3> p;
    p.indices() << 2, 0, 1;
    const VarModel a = fit_var(y, 1);
    const VarModel b = fit_var(p * y, 1);
    const Eigen::MatrixXd expected = p * a.coefficients[0] * p.transpose();
    CHECK((b.coefficients[0] - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rank deficiency names the regressors") {
    CHECK_THROWS_AS(fit_var(Eigen::MatrixXd::Zero(2, 300), 1), NumericalError);
    Eigen::MatrixXd y = noise(2, 2, 300);
    y.row(1) = 2.0 * y.row(0);
    try {
        fit_var(y, 1, -1, {"a", "b"});
        FAIL("expected an error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("(t-1)") != std::string::npos);
    }
    CHECK_THROWS_AS(fit_var(noise(2, 3, 5), 1), InputError);
}

TEST_CASE("BIC penalty grows with parameter count") {
    VarModel m = fit_var(noise(4, 2, 400), 1);
    VarModel bigger = m;
    bigger.n_params += 4;
    CHECK(bic(bigger) > bic(m));
    CHECK(bic(m) == doctest::Approx(m.t_effective * m.log_det_sigma + m.n_params * std::log(m.t_effective)));
}

TEST_CASE("lag selection") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) hits += select_lag(ar1(seed, 2000, 0.5), 5) == 1;
    CHECK(hits >= 38);

    // Strong second-lag loading.
    Rng rng(77);
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(2, 5000);
    for (Eigen::Index s = 2; s < y.cols(); ++s) {
        y(0, s) = 0.1 * y(0, s - 1) + 0.5 * y(1, s - 2) + rng.laplace();
        y(1, s) = -0.5 * y(0, s - 2) + 0.2 * y(1, s - 1) + rng.laplace();
    }
    CHECK(select_lag(y, 5) == 2);
    CHECK(select_lag(noise(5, 3, 200), 1) == 1);
}
