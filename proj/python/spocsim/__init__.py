"""Python front end for the escrow protocol simulator.

Configuration uses the same ``key = value`` text as the CLI config files; pass
keyword arguments and they are rendered into that text. Money comes back as
Python ``int`` base units.
"""

import json

from . import _spoc

__all__ = [
    "run_scenario",
    "payoff_matrix",
    "gas_report",
    "latency_report",
    "inspect_trace",
    "hash_secret",
    "generate_secret",
    "parse_money",
    "UNITS_PER_WHOLE",
]

UNITS_PER_WHOLE = 10**18

_MONEY_KEYS = {
    "V", "P", "C", "D_R", "D_E", "threshold",
    "requestorPayoff", "nodePayoff", "requestorPayoffWithGas", "nodePayoffWithGas",
    "recordedRequestorPayoff", "recordedNodePayoff",
    "recordedRequestorPayoffWithGas", "recordedNodePayoffWithGas",
    "lockedInContract", "requestorGas", "nodeGas",
    "pricePerGas", "cost", "totalPerTaskCost",
}


def _money(obj, key=None):
    if isinstance(obj, dict):
        if key == "expected":
            return {k: int(v) for k, v in obj.items()}
        return {k: _money(v, k) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_money(v) for v in obj]
    if key in _MONEY_KEYS and isinstance(obj, str):
        return int(obj)
    return obj


def _config(config, overrides):
    lines = [config] if config else []
    for key, value in overrides.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    return "\n".join(lines)


def run_scenario(config="", **overrides):
    """Run one scenario; returns (outcome, trace_lines, violations)."""
    outcome, trace, violations = _spoc.run_scenario(_config(config, overrides))
    return _money(json.loads(outcome)), trace, list(violations)


def payoff_matrix(config="", grid=None, draws=0, **overrides):
    return _money(json.loads(_spoc.payoff_matrix(_config(config, overrides), grid, draws)))


def gas_report(config="", **overrides):
    return _money(json.loads(_spoc.gas_report(_config(config, overrides))))


def latency_report(config="", **overrides):
    return json.loads(_spoc.latency_report(_config(config, overrides)))


def inspect_trace(trace):
    """Returns (report, consistent)."""
    report, ok = _spoc.inspect_trace(trace)
    return _money(json.loads(report)), ok


def hash_secret(secret: bytes) -> bytes:
    return _spoc.hash_secret(secret)


def generate_secret(seed: int) -> bytes:
    return _spoc.generate_secret(seed)


def parse_money(text: str) -> int:
    return int(_spoc.parse_money(text))
