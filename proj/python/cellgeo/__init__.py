"""Spatial point-process modelling of cellular base-station deployments.

Models are plain dicts such as ``{"family": "strauss", "beta": 200, "gamma": 0.5, "r": 0.05}``.
Fitted models are the same dicts with added ``window`` and ``diagnostics`` keys.
"""

import json
import os

from ._cellgeo import (
    ConfigError,
    DataError,
    Envelope,
    Error,
    NumericalError,
    PointPattern,
    SummaryCurve,
    TestReport,
    Window,
    classify,
    coverage_curve,
    envelope_alpha,
    g_function,
    k_function,
    l_function,
    read_pattern,
    rescale_to_unit,
    sample_poisson,
    sinr_at_user,
    test_curve,
)
from . import _cellgeo

__all__ = [
    "ConfigError",
    "DataError",
    "Envelope",
    "Error",
    "NumericalError",
    "PointPattern",
    "SummaryCurve",
    "TestReport",
    "Window",
    "build_envelope",
    "classify",
    "coverage_curve",
    "envelope_alpha",
    "fit",
    "g_function",
    "k_function",
    "l_function",
    "read_pattern",
    "rescale_to_unit",
    "run_pipeline",
    "sample_poisson",
    "simulate",
    "sinr_at_user",
    "test_curve",
]


def simulate(model, window, seed, steps=0):
    """Draws one pattern from ``model`` on ``window``; ``steps`` overrides the MCMC length."""
    return _cellgeo._simulate(json.dumps(model), window, seed, steps)


def fit(pattern, family):
    """Fits one family with the default irregular-parameter grids and returns the fitted-model dict."""
    return json.loads(_cellgeo._fit(pattern, family))


def build_envelope(fitted, grid, nsim=99, nrank=5, seed=1, statistic="L"):
    """Pointwise Monte Carlo envelope of ``statistic`` under a fitted-model dict."""
    return _cellgeo._envelope(json.dumps(fitted), statistic, list(grid), nsim, nrank, seed)


def run_pipeline(input_path, out_dir, families=("poisson", "geyer", "matern_cluster"), nsim=99, nrank=5, seed=1,
                 mode="planar"):
    """Runs classify, fit and envelope tests, writing artifacts to ``out_dir``.

    Returns ``(verdict, not_rejected_families)``.
    """
    os.makedirs(out_dir, exist_ok=True)
    return _cellgeo._run_pipeline(os.fspath(input_path), os.fspath(out_dir), mode, list(families), nsim, nrank, seed)
