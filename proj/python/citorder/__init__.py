"""Probability-weighted coupling analysis and class integration test orders."""

import json

from ._core import (
    AnalysisError,
    InputError,
    Model,
    generate,
    load_pmif,
    load_pmif_file,
    parse_minij,
)
from ._core import wilcoxon_json as _wilcoxon_json

__all__ = [
    "AnalysisError",
    "InputError",
    "Model",
    "analyze",
    "generate",
    "load_pmif",
    "load_pmif_file",
    "order",
    "parse_minij",
    "wilcoxon",
]


def analyze(model, **kwargs):
    """Full relationship analysis of a model, as a dict."""
    return json.loads(model.analyze_json(**kwargs))


def order(model, strategy, **kwargs):
    """Integration test order for one strategy, as a dict."""
    return json.loads(model.order_json(strategy, **kwargs))


def wilcoxon(a, b, alpha=0.05):
    """Two-sided Wilcoxon signed-rank test on paired samples, as a dict."""
    return json.loads(_wilcoxon_json(list(a), list(b), alpha))
