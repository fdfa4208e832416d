import math

import numpy as np
import pytest

import factornet


def test_simulate_and_fit_identity():
    sim = factornet.simulate(n=3, lags=1, t=800, density=0.4, seed=3)
    assert sim["values"].shape == (800, 3)
    assert sim["names"] == ["x1", "x2", "x3"]
    model = factornet.var_lingam(sim["values"], lags=1)
    w0, m1, w1 = model["w0"], model["reduced"][0], model["lagged"][0]
    assert np.array_equal(w1, (np.eye(3) - w0) @ m1)
    assert sorted(model["order"]) == [0, 1, 2]


def test_causal_network_round_trip():
    sim = factornet.simulate(n=3, lags=1, t=600, density=0.4, seed=5)
    net = factornet.causal_network(sim["values"], sim["names"], sim["dates"], lags=1, replicates=50, seed=1)
    assert net["kind"] == "causal"
    assert len(net["edges"]) == 3 * 2 + 9
    value, both_empty = factornet.jaccard(net, net)
    assert value == 1.0
    corr = factornet.correlation_network(sim["values"], replicates=50, seed=1)
    assert corr["kind"] == "correlation"


def test_poisson_intercept_only():
    y = np.array([1.0, 4.0, 2.0, 0.0, 3.0, 2.0])
    fit = factornet.fit_poisson(y, np.ones((6, 1)))
    assert abs(fit["coef"][0] - math.log(2.0)) < 1e-10
    assert fit["converged"]


def test_stats_and_errors():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(500) * 0.01
    assert factornet.ccf(x, x, 2)[2] == pytest.approx(1.0)
    assert factornet.summary_stats(list(x))["vol_ann"] > 0
    assert factornet.select_lag(rng.standard_normal((400, 2)), 3) >= 1
    with pytest.raises(factornet.InputError):
        factornet.fit_poisson(np.array([-1.0, 2.0]), np.ones((2, 1)))
