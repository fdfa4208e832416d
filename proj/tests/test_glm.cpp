#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "factornet/error.hpp"
#include "factornet/glm.hpp"
#include "factornet/rng.hpp"
#include "glm_oracle.hpp"

using namespace factornet;

namespace {

double poisson_draw(Rng& rng, double mu) {
    // Knuth multiplication method.
    const double limit = std::exp(-mu);
    double prod = rng.uniform();
    int k = 0;
    while (prod > limit) {
        prod *= rng.uniform();
        ++k;
    }
    return k;
}

struct Instance {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
};

Instance small_instance(std::uint64_t seed) {
    Rng rng(seed);
    Instance d;
    d.x.resize(20, 3);
    d.y.resize(20);
    for (int i = 0; i < 20; ++i) {
        d.x(i, 0) = 1.0;
        d.x(i, 1) = rng.normal();
        d.x(i, 2) = rng.uniform() * 2.0 - 1.0;
        d.y(i) = poisson_draw(rng, std::exp(1.2 + 0.4 * d.x(i, 1) - 0.3 * d.x(i, 2)));
    }
    return d;
}

}  // namespace

TEST_CASE("fit matches a grid-search maximizer") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Instance d = small_instance(seed);
        const GlmFit fit = fit_poisson(d.y, d.x);
        const Eigen::VectorXd oracle = testutil::grid_search_poisson(d.y, d.x);
        CHECK((fit.coef - oracle).cwiseAbs().maxCoeff() < 1e-4);
        CHECK(fit.converged);
        CHECK((fit.std_err.array() > 0.0).all());
        CHECK((fit.p_value.array() >= 0.0).all());
        CHECK((fit.p_value.array() <= 1.0).all());
    }
}

TEST_CASE("intercept-only closed form") {
    Eigen::VectorXd y(6);
    y << 0, 3, 1, 4, 2, 9;
    const GlmFit fit = fit_poisson(y, Eigen::MatrixXd::Ones(6, 1));
    CHECK(std::abs(fit.coef(0) - std::log(19.0 / 6.0)) < 1e-10);

    const GlmFit flat = fit_poisson(Eigen::VectorXd::Constant(10, 7.0), Eigen::MatrixXd::Ones(10, 1));
    CHECK(std::abs(flat.coef(0) - std::log(7.0)) < 1e-12);
    CHECK(std::abs(flat.deviance) < 1e-12);
}

TEST_CASE("score equations vanish at the optimum") {
    for (std::uint64_t seed = 4; seed <= 8; ++seed) {
        const Instance d = small_instance(seed);
        const GlmFit fit = fit_poisson(d.y, d.x);
        const Eigen::VectorXd mu = (d.x * fit.coef).array().exp();
        CHECK((d.x.transpose() * (d.y - mu)).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(fit.deviance >= 0.0);
    }
}

TEST_CASE("affine reparameterization") {
    const Instance d = small_instance(9);
    Instance scaled = d;
    scaled.x.col(1) *= 250.0;
    const GlmFit a = fit_poisson(d.y, d.x);
    const GlmFit b = fit_poisson(scaled.y, scaled.x);
    CHECK(std::abs(b.coef(1) * 250.0 - a.coef(1)) < 1e-8);
    CHECK(std::abs(b.deviance - a.deviance) < 1e-8);
    CHECK((b.p_value - a.p_value).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::VectorXd mu_a = (d.x * a.coef).array().exp();
    const Eigen::VectorXd mu_b = (scaled.x * b.coef).array().exp();
    CHECK((mu_a - mu_b).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("input validation") {
    Instance d = small_instance(10);
    Eigen::MatrixXd constant = d.x;
    constant.col(2).setConstant(3.0);
    CHECK_THROWS_AS(fit_poisson(d.y, constant), NumericalError);
    Eigen::VectorXd frac = d.y;
    frac(0) = 0.5;
    CHECK_THROWS_AS(fit_poisson(frac, d.x), InputError);
    Eigen::MatrixXd no_intercept = d.x;
    no_intercept(0, 0) = 2.0;
    CHECK_THROWS_AS(fit_poisson(d.y, no_intercept), InputError);
    CHECK_THROWS_AS(fit_poisson(d.y.head(3), d.x.topRows(3)), InputError);
}

TEST_CASE("count regression drops rows with missing covariates") {
    Covariates cov;
    cov.add("time", std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7});
    cov.add("z", std::vector<std::optional<double>>{std::nullopt, 0.1, -0.4, 0.3, std::nullopt, 1.0, -1.2, 0.5});
    const std::vector<int> counts = {3, 5, 4, 6, 2, 9, 3, 7};
    const CountRegression r = regress_counts("overall", counts, cov);
    CHECK(r.n_obs == 6);
    CHECK(r.variables == std::vector<std::string>{"intercept", "time", "z"});
    CHECK(r.fit.coef.size() == 3);

    std::vector<EdgeCounts> ec;
    for (int k = 0; k < 8; ++k) ec.push_back(EdgeCounts{counts[k] + 2, 2, counts[k]});
    const auto fits = regress_density(ec, cov);
    REQUIRE(fits.size() == 3);
    CHECK(fits[0].response == "overall");
    CHECK(fits[1].fit.coef(1) == doctest::Approx(0.0).epsilon(1e-8));
}
