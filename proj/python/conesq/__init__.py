"""Conical square functions on discrete measures: Python front end."""

import json as _json

from ._conesq import (  # noqa: F401
    ConesqError,
    Scenario,
    ball_mass,
    criterion_keys,
    point_cone_volume,
    suite_names,
)
from . import _conesq


def run_suite(name, scenario, timing=False):
    """Run a named suite on a scenario and return its records as dicts."""
    return _json.loads(_conesq._run_suite(name, scenario, timing))


def run_criterion(key, seed=20240601):
    """Run one acceptance criterion and return its summary dict."""
    return _json.loads(_conesq._run_criterion(key, seed))


def load_scenario(source):
    """Build a scenario from a file path or a dict."""
    if isinstance(source, dict):
        return Scenario.from_json(_json.dumps(source))
    return Scenario.load(str(source))


__all__ = [
    "ConesqError",
    "Scenario",
    "ball_mass",
    "criterion_keys",
    "load_scenario",
    "point_cone_volume",
    "run_criterion",
    "run_suite",
    "suite_names",
]
