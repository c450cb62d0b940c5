"""Loom-based collision avoidance for a unicycle robot.

Configs are plain dicts in the scenario file layout; results come back as dicts.
"""

import json as _json

from . import _core
from ._core import (
    PROTOCOL_VERSION,
    TRACE_FORMAT_VERSION,
    ConfigError,
    DomainError,
    RejectedScenario,
    loom,
    relative_geometry,
    step_unicycle,
    wrap_angle,
)

__all__ = [
    "PROTOCOL_VERSION",
    "TRACE_FORMAT_VERSION",
    "ConfigError",
    "DomainError",
    "RejectedScenario",
    "Session",
    "avoidance_control",
    "check_feasibility",
    "classify",
    "falsify",
    "load_config",
    "loom",
    "relative_geometry",
    "run_episode",
    "step_unicycle",
    "wrap_angle",
]


def _dump(config):
    return _json.dumps(config if config is not None else {})


def load_config(path):
    with open(path, encoding="utf-8") as f:
        return _json.load(f)


def check_feasibility(config=None):
    return _json.loads(_core.check_feasibility(_dump(config)))


def classify(x, config=None):
    """x is (x1, x2, x3, x4, x5, x6)."""
    return _core.classify(tuple(x), _dump(config))


def avoidance_control(m, config=None):
    """m is (x1, x2, x3, x5, x6, a_r)."""
    return _core.avoidance_control(tuple(m), _dump(config))


def run_episode(config=None, trace=False):
    out = _json.loads(_core.run_episode(_dump(config), trace))
    return (out["result"], out["trace"]) if trace else out["result"]


def falsify(config=None, n_episodes=1000, seed=7, threads=0):
    return _json.loads(_core.falsify(_dump(config), n_episodes, seed, threads))


class Session:
    """In-process bridge session speaking the websocket frame protocol."""

    def __init__(self, config=None):
        self._s = _core.Session(_dump(config))

    def send(self, frame):
        self._s.push(frame if isinstance(frame, str) else _json.dumps(frame))

    def tick(self):
        return [_json.loads(f) for f in self._s.tick()]

    @property
    def paused(self):
        return self._s.paused
