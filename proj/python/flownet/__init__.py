"""Dynamical flow networks: simulation, throughput dichotomy, cuts, resilience.

Every operation takes a scenario (dict or JSON text) and returns parsed JSON.
`trajectory` is the exception: it returns the sampled run as CSV text.
"""

import json as _json

from . import _core

__version__ = _core.version()

__all__ = [
    "validate",
    "simulate",
    "trajectory",
    "analyze",
    "classify",
    "mincut",
    "resilience",
]


def _text(scenario):
    if isinstance(scenario, str):
        return scenario
    return _json.dumps(scenario)


def validate(scenario):
    return _json.loads(_core.validate(_text(scenario)))


def simulate(scenario):
    return _json.loads(_core.simulate(_text(scenario)))


def trajectory(scenario):
    return _core.trajectory(_text(scenario))


def analyze(scenario):
    return _json.loads(_core.analyze(_text(scenario)))


def classify(scenario):
    return _json.loads(_core.classify(_text(scenario)))


def mincut(scenario):
    return _json.loads(_core.mincut(_text(scenario)))


def resilience(scenario):
    return _json.loads(_core.resilience(_text(scenario)))
