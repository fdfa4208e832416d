#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "factornet/error.hpp"
#include "factornet/graph.hpp"
#include "factornet/netinfer.hpp"
#include "factornet/synth.hpp"

using namespace factornet;

namespace {

ReturnPanel noise_panel(std::uint64_t seed, int n, int t) {
    SvarSpec spec;
    spec.n = n;
    spec.lags = 1;
    spec.t = t;
    spec.seed = seed;
    spec.w0 = Eigen::MatrixXd::Zero(n, n);
    spec.lagged = {Eigen::MatrixXd::Zero(n, n)};
    return generate(spec).panel;
}

ResampleOptions small(int replicates, std::uint64_t seed = 1) {
    ResampleOptions o;
    o.replicates = replicates;
    o.seed = seed;
    return o;
}

FactorNetwork hand_network(NetworkKind kind, std::vector<std::string> names, std::vector<Edge> edges) {
    FactorNetwork net;
    net.kind = kind;
    net.names = std::move(names);
    net.edges = std::move(edges);
    return net;
}

Edge sig(int src, int dst, int lag) { return Edge{src, dst, lag, 0.5, true, 0.1, 0.9}; }

}  // namespace

TEST_CASE("coefficient layouts") {
    CHECK(coefficient_layout(NetworkKind::Causal, 5, 1).size() == 5u * 4u + 25u);
    CHECK(coefficient_layout(NetworkKind::Causal, 3, 2).size() == 6u + 18u);
    CHECK(coefficient_layout(NetworkKind::Correlation, 5, 1).size() == 10u + 25u);
    CHECK(coefficient_layout(NetworkKind::Correlation, 5, 1, false).size() == 10u + 20u);
    for (const auto& k : coefficient_layout(NetworkKind::Causal, 4, 1)) {
        if (k.lag == 0) CHECK(k.src != k.dst);
    }
}

TEST_CASE("strong edge is kept and the network is acyclic") {
    SvarSpec spec;
    spec.n = 3;
    spec.lags = 1;
    spec.t = 2000;
    spec.seed = 4;
    spec.w0 = Eigen::MatrixXd::Zero(3, 3);
    spec.w0(2, 0) = 0.8;
    spec.lagged = {Eigen::MatrixXd::Zero(3, 3)};
    spec.lagged[0](1, 1) = 0.5;
    spec.scales = {0.1, 0.1, 0.1};
    const ReturnPanel p = generate(spec).panel;
    const FactorNetwork net = causal_network(p, 1, small(500));
    bool found = false;
    for (const auto& e : net.edges) {
        if (e.src == 0 && e.dst == 2 && e.lag == 0) {
            found = true;
            CHECK(e.significant);
            CHECK(std::abs(e.weight - 0.8) < 0.05);
            CHECK(e.lower <= e.upper);
        }
        if (e.lag == 0) CHECK(e.src != e.dst);
    }
    CHECK(found);
    CHECK(instantaneous_subgraph_acyclic(net));
    CHECK(net.edges.size() == 6u + 9u);
    const auto m = recovery_metrics(net, generate(spec).truth);
    CHECK(m.recall == 1.0);
}

TEST_CASE("single replicate bounds collapse to the replicate") {
    const ReturnPanel p = noise_panel(3, 3, 300);
    const auto sig = resample_significance(p, NetworkKind::Causal, 1, small(1));
    for (const auto& c : sig.coefficients) CHECK(c.lower == c.upper);
    const ResampleDraws d = draw_resamples(p.values(), 1, causal_estimator(1), small(1));
    for (Eigen::Index c = 0; c < d.draws.cols(); ++c) CHECK(sig.coefficients[static_cast<std::size_t>(c)].lower == d.draws(0, c));
}

TEST_CASE("results do not depend on the worker count") {
    const ReturnPanel p = noise_panel(8, 4, 400);
    ResampleOptions a = small(60, 11);
    ResampleOptions b = a;
    b.threads = 3;
    for (auto scheme : {ResampleScheme::Residual, ResampleScheme::Rows, ResampleScheme::Block, ResampleScheme::Permutation}) {
        a.scheme = b.scheme = scheme;
        const auto x = resample_significance(p, NetworkKind::Causal, 1, a);
        const auto y = resample_significance(p, NetworkKind::Causal, 1, b);
        REQUIRE(x.coefficients.size() == y.coefficients.size());
        for (std::size_t k = 0; k < x.coefficients.size(); ++k) {
            CHECK(x.coefficients[k].lower == y.coefficients[k].lower);
            CHECK(x.coefficients[k].upper == y.coefficients[k].upper);
            CHECK(x.coefficients[k].keep == y.coefficients[k].keep);
        }
    }
}

TEST_CASE("shrinking alpha never adds edges") {
    const ReturnPanel p = noise_panel(13, 4, 400);
    const ResampleDraws d = draw_resamples(p.values(), 1, causal_estimator(1), small(200));
    const auto layout = coefficient_layout(NetworkKind::Causal, 4, 1);
    const Eigen::VectorXd point = causal_coefficients(var_lingam(p, 1));
    const auto wide = significance_from_draws(layout, point, d, 0.10, ResampleScheme::Residual);
    const auto narrow = significance_from_draws(layout, point, d, 0.01, ResampleScheme::Residual);
    for (std::size_t k = 0; k < layout.size(); ++k) {
        if (narrow.coefficients[k].keep) CHECK(wide.coefficients[k].keep);
    }
    CHECK_THROWS_AS(significance_from_draws(layout, point, d, 1.5, ResampleScheme::Residual), InputError);
}

TEST_CASE("permutation scheme compares the estimate with the null interval") {
    const std::vector<EdgeKey> layout = {{0, 1, 0}};
    ResampleDraws d;
    d.draws = Eigen::MatrixXd(4, 1);
    d.draws << -0.1, 0.0, 0.05, 0.1;
    Eigen::VectorXd point(1);
    point << 0.3;
    CHECK(significance_from_draws(layout, point, d, 0.05, ResampleScheme::Permutation).coefficients[0].keep);
    point << 0.02;
    CHECK_FALSE(significance_from_draws(layout, point, d, 0.05, ResampleScheme::Permutation).coefficients[0].keep);
    // A bootstrap interval straddling zero is not significant.
    CHECK_FALSE(significance_from_draws(layout, point, d, 0.05, ResampleScheme::Residual).coefficients[0].keep);
}

TEST_CASE("estimator failures") {
    const ReturnPanel p = noise_panel(2, 2, 200);
    int calls = 0;
    const Estimator flaky = [&calls](const Eigen::MatrixXd& y) -> Eigen::VectorXd {
        if (y(0, 5) > 0.9) throw NumericalError("synthetic failure");
        ++calls;
        return Eigen::VectorXd::Constant(1, y(0, 0));
    };
    ResampleOptions o = small(200);
    o.scheme = ResampleScheme::Rows;
    CHECK_THROWS_AS(draw_resamples(p.values(), 1, flaky, o), NumericalError);
    o.max_failure_rate = 0.5;
    const auto d = draw_resamples(p.values(), 1, flaky, o);
    CHECK(d.failed > 0);
    CHECK(static_cast<std::size_t>(d.draws.rows()) + d.failed == 200u);
}

TEST_CASE("correlation networks") {
    SUBCASE("duplicated series") {
        Eigen::MatrixXd v(2, 300);
        Rng rng(3);
        for (Eigen::Index t = 0; t < 300; ++t) v(0, t) = v(1, t) = rng.laplace();
        std::vector<Date> dates;
        for (Date d = Date{std::chrono::year{2001}, std::chrono::January, std::chrono::day{1}}; dates.size() < 300; d = add_days(d, 1)) dates.push_back(d);
        const ReturnPanel p(dates, {"x", "y"}, v);
        ResampleOptions o = small(100);
        o.scheme = ResampleScheme::Rows;
        const FactorNetwork net = correlation_network(p, o);
        CHECK(net.edges[0].lag == 0);
        CHECK(net.edges[0].weight == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(net.edges[0].significant);
        // Exact duplicates leave the VAR used by residual resampling without full rank.
        CHECK_THROWS_AS(correlation_network(p, small(10)), NumericalError);
    }
    SUBCASE("zero-variance column") {
        Eigen::MatrixXd v = noise_panel(1, 2, 200).values();
        v.row(1).setConstant(0.5);
        ReturnPanel p(noise_panel(1, 2, 200).dates(), {"a", "b"}, v);
        CHECK_THROWS_AS(correlation_coefficients(p.values()), NumericalError);
    }
}

TEST_CASE("single-factor causal network") {
    const FactorNetwork net = causal_network(noise_panel(6, 1, 300), 1, small(50));
    REQUIRE(net.edges.size() == 1u);
    CHECK(net.edges[0].lag == 1);
    CHECK(net.edges[0].src == net.edges[0].dst);
}

TEST_CASE("Jaccard score") {
    const std::set<EdgeKey> a = {{0, 1, 0}, {1, 2, 0}, {2, 0, 1}};
    const std::set<EdgeKey> b = {{1, 2, 0}, {2, 0, 1}, {0, 0, 1}};
    CHECK(jaccard(a, b).value == 0.5);
    CHECK(jaccard(a, b).value == jaccard(b, a).value);
    CHECK(jaccard(a, a).value == 1.0);
    CHECK(jaccard(a, {{3, 3, 1}}).value == 0.0);
    const auto empty = jaccard({}, {});
    CHECK(empty.value == 1.0);
    CHECK(empty.both_empty);
    auto a2 = a, b2 = b;
    a2.insert({4, 4, 1});
    b2.insert({4, 4, 1});
    CHECK(jaccard(a2, b2).value >= jaccard(a, b).value);
}

TEST_CASE("rolling mean") {
    CHECK(rolling_mean({1, 2, 3, 4, 5}, 4) == std::vector<double>{2.5, 3.5});
    CHECK(rolling_mean({1, 2, 3}, 1) == std::vector<double>{1, 2, 3});
    CHECK(rolling_mean({2, 2, 2, 2, 2}, 3) == std::vector<double>{2, 2, 2});
}

TEST_CASE("edge counts and out-degree") {
    CHECK(edge_counts(hand_network(NetworkKind::Causal, {"a"}, {})).total == 0);
    const auto net = hand_network(NetworkKind::Causal, {"m", "a", "b"},
                                  {sig(0, 1, 0), sig(0, 2, 0), sig(1, 2, 0), sig(0, 1, 1), sig(2, 2, 1),
                                   Edge{0, 2, 1, 0.1, false, -0.1, 0.2}});
    const EdgeCounts c = edge_counts(net);
    CHECK(c.total == 5);
    CHECK(c.instantaneous == 3);
    CHECK(c.lagged == 2);
    CHECK(out_degree(net, "m") == 3);
    CHECK(out_degree(net, "m", true) == 2);
    CHECK(out_degree(net, "b") == 0);
    CHECK_THROWS_AS(out_degree(net, "zz"), InputError);
    // Summing out-degrees counts every significant edge except self-lags.
    int sum = 0;
    for (const auto& n : net.names) sum += out_degree(net, n);
    CHECK(sum == c.total - 1);

    std::vector<std::string> names = {"Mkt-RF"};
    std::vector<Edge> star;
    for (int i = 1; i <= 10; ++i) names.push_back("f" + std::to_string(i));
    for (int i = 1; i <= 9; ++i) star.push_back(sig(0, i, 0));
    CHECK(out_degree(hand_network(NetworkKind::Causal, names, star), "Mkt-RF") == 9);
}

TEST_CASE("correlation edge sets are canonical") {
    const auto net = hand_network(NetworkKind::Correlation, {"a", "b"}, {sig(1, 0, 0), sig(1, 0, 1)});
    const auto s = edge_set(net);
    CHECK(s.count({0, 1, 0}) == 1);
    CHECK(s.count({1, 0, 1}) == 1);
}

TEST_CASE("network JSON and CSV") {
    FactorNetwork net = causal_network(noise_panel(21, 3, 300), 1, small(40));
    net.window = WindowSpec{7, Date{std::chrono::year{2001}, std::chrono::January, std::chrono::day{1}},
                            Date{std::chrono::year{2002}, std::chrono::June, std::chrono::day{30}}, 18, 3};
    const auto j = to_json(net);
    CHECK(j["nodes"].size() == 6u);
    CHECK(j["nodes"][0]["id"] == "x1@t-1");
    const FactorNetwork back = network_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.edges.size() == net.edges.size());
    for (std::size_t k = 0; k < net.edges.size(); ++k) {
        CHECK(back.edges[k].weight == net.edges[k].weight);
        CHECK(back.edges[k].significant == net.edges[k].significant);
        CHECK(back.edges[k].key() == net.edges[k].key());
    }
    CHECK(back.window->index == 7);
    CHECK(back.order == net.order);
    const std::string csv = edge_csv_rows(net);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(net.edges.size()));
    CHECK(csv.rfind("7,2001-01-01,2002-06-30,causal,", 0) == 0);
    CHECK_THROWS_AS(network_from_json(nlohmann::json::parse("{\"kind\":\"causal\"}")), InputError);
}
