"""Causal and correlation networks of risk factors."""

import json

from . import _factornet
from ._factornet import (
    InputError,
    NumericalError,
    causal_order,
    ccf,
    entropy,
    fit_poisson,
    select_lag,
    simulate,
    summary_stats,
    var_lingam,
)

__all__ = [
    "InputError",
    "NumericalError",
    "causal_network",
    "causal_order",
    "ccf",
    "correlation_network",
    "entropy",
    "fit_poisson",
    "jaccard",
    "run",
    "select_lag",
    "simulate",
    "summary_stats",
    "var_lingam",
]


def causal_network(values, names=(), dates=(), lags=None, **kwargs):
    """Causal network of a T x N return matrix as a dict."""
    return json.loads(_factornet.causal_network(values, list(names), list(dates), lags, **kwargs))


def correlation_network(values, names=(), dates=(), **kwargs):
    """Correlation network of a T x N return matrix as a dict."""
    return json.loads(_factornet.correlation_network(values, list(names), list(dates), **kwargs))


def jaccard(previous, current):
    """Jaccard score of the significant edge sets of two network dicts: (value, both_empty)."""
    return _factornet.jaccard(json.dumps(previous), json.dumps(current))


def run(config, output_dir=None, threads=1):
    """Runs the full pipeline and returns the manifest."""
    return json.loads(_factornet.run(str(config), output_dir, threads))
