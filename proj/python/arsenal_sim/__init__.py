"""Trace-driven cache simulator with adaptive prefetcher selection.

Experiments take the same JSON-shaped configuration as the ``arsenal-sim``
command line tool and return its report as a dict.
"""

import json

from ._core import (
    BloomFilter,
    ConfigError,
    IoError,
    TraceParseError,
    derive_parameters,
    generate,
    parse_trace,
    select_test_case_1,
    select_test_case_2,
)
from . import _core

__all__ = [
    "BloomFilter",
    "ConfigError",
    "IoError",
    "TraceParseError",
    "derive_parameters",
    "generate",
    "overhead",
    "parse_trace",
    "run_compare",
    "run_experiment",
    "select_test_case_1",
    "select_test_case_2",
]


def run_experiment(config):
    """Run one experiment described by a config dict; returns the report dict."""
    return json.loads(_core.run_experiment_json(json.dumps(config)))


def run_compare(config):
    """Arsenal vs. each standalone component vs. no prefetching over config["traces"]."""
    return json.loads(_core.run_compare_json(json.dumps(config)))


def overhead(components, costs=()):
    """Hardware budget for a framework of ``components`` shadowed prefetchers.

    ``costs`` is a sequence of (name, kb) pairs for the prefetchers themselves.
    """
    return json.loads(_core.overhead_json(components, list(costs)))
