"""Moebius geometry of the Heisenberg group and Euclidean space."""

import json

from ._core import (
    Heisenberg,
    MoebiusError,
    classify,
    euclidean_cross_ratio,
    list_suites,
)
from . import _core

__all__ = [
    "Heisenberg",
    "MoebiusError",
    "classify",
    "euclidean_cross_ratio",
    "list_suites",
    "run_suite",
    "run_all",
]


def run_suite(tag, seed=1, k=2, samples=0):
    """Run one verification suite and return its report as a dict."""
    return json.loads(_core.run_suite_json(tag, seed, k, samples))


def run_all(seed=1, k=2, tags=(), threads=0):
    """Run the selected suites (all when empty) and return the summary as a dict."""
    return json.loads(_core.run_all_json(seed, k, list(tags), threads))
