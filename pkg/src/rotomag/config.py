"""Flat ``key = value`` run configuration.

Numeric values may be written as arithmetic expressions over a small set of
math functions, e.g. ``theta_B = acos(sqrt(3)/(2*sqrt(2)))``. A comma list
gives a sequence; ``linspace(a, b, n)`` expands to n evenly spaced values.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from .scenario import RotatingField, Scenario, ScenarioA, ScenarioB, ScenarioC


class ConfigError(ValueError):
    """Bad configuration; ``key`` names the offending entry when known."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


_FUNCS = {
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "asin": math.asin,
    "acos": math.acos,
    "atan": math.atan,
    "atan2": math.atan2,
    "exp": math.exp,
    "log": math.log,
    "abs": abs,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def _eval_node(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name) and node.id in _CONSTS:
        return _CONSTS[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_eval_node(node.operand))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        args = [_eval_node(a) for a in node.args]
        if node.func.id == "linspace":
            a, b, n = args
            n = int(n)
            if n < 1:
                raise ValueError("linspace needs n >= 1")
            return [a + (b - a) * k / (n - 1) for k in range(n)] if n > 1 else [a]
        if node.func.id in _FUNCS:
            return _FUNCS[node.func.id](*args)
    if isinstance(node, (ast.Tuple, ast.List)):
        out = []
        for elt in node.elts:
            v = _eval_node(elt)
            out.extend(v if isinstance(v, list) else [v])
        return out
    raise ValueError(f"unsupported expression: {ast.dump(node)}")


def eval_number(text: str):
    """Evaluate a numeric expression (or comma list) without ``eval``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
        return _eval_node(tree.body)
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError, OverflowError) as exc:
        raise ValueError(f"cannot evaluate {text!r}: {exc}") from None


@dataclass
class RunConfig:
    scenario: str = "A"
    omega: float = 1.0
    theta_B: float = math.pi / 3
    omega0: float = 1.0
    l: int = 1
    epsilon_nl: float = 0.0
    xi_nl: float = 0.0
    two_s: int = 1
    sign_q: int = 1
    sign_mu: int = 1
    omega1: float = 1.0
    omega2: float = 1.0
    box_d: float = 1.0
    # state selectors
    m: int = 0
    ms: float = 0.5
    n_rho: int = 0
    n_z: int = 0
    # scenario C spectrum grid
    n_rho_max: int = 1
    m_max: int = 1
    n_z_max: int = 1
    # oracle
    steps: int = 40000
    samples: int = 9
    seed: int = 0
    # scan
    tol: float = 1e-9
    scan_ratio: list = field(default_factory=list)
    scan_theta_B: list = field(default_factory=list)
    # output
    format: str = "csv"
    out: Optional[str] = None
    precision: Optional[int] = None
    timestamp: bool = True

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def scenario_obj(self) -> Scenario:
        """Build the validated scenario; errors name the offending key when possible."""
        try:
            fld = RotatingField(self.omega, self.theta_B)
        except ValueError as exc:
            raise ConfigError(str(exc), "omega" if "omega" in str(exc) else "theta_B") from None
        try:
            if self.scenario == "A":
                return ScenarioA(fld, self.omega0, self.l, self.epsilon_nl)
            if self.scenario == "B":
                return ScenarioB(fld, self.omega0, self.l, self.epsilon_nl, self.xi_nl)
            return ScenarioC(
                fld, self.two_s, self.omega1, self.omega2, self.sign_q, self.sign_mu, self.box_d
            )
        except ValueError as exc:
            msg = str(exc)
            key = msg.split()[0] if msg.split() and msg.split()[0] in _FIELD_TYPES else None
            raise ConfigError(msg, key) from None


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}
_INT_KEYS = {"l", "two_s", "sign_q", "sign_mu", "m", "n_rho", "n_z", "n_rho_max", "m_max", "n_z_max", "steps", "samples", "seed", "precision"}
_FLOAT_KEYS = {"omega", "theta_B", "omega0", "epsilon_nl", "xi_nl", "omega1", "omega2", "box_d", "ms", "tol"}
_LIST_KEYS = {"scan_ratio", "scan_theta_B"}
_CHOICES = {"scenario": ("A", "B", "C"), "format": ("csv", "json")}


def _convert(key: str, raw: str):
    raw = raw.strip()
    if key in _CHOICES:
        val = raw.strip("\"'")
        if key == "scenario":
            val = val.upper()
        if val not in _CHOICES[key]:
            raise ConfigError(f"{key} must be one of {', '.join(_CHOICES[key])}, got {raw!r}", key)
        return val
    if key == "out":
        return raw.strip("\"'") or None
    if key == "timestamp":
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"timestamp must be true or false, got {raw!r}", key)
    try:
        val = eval_number(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}", key) from None
    if key in _LIST_KEYS:
        return [float(v) for v in (val if isinstance(val, list) else [val])]
    if isinstance(val, list):
        raise ConfigError(f"{key} takes a single value, got a list", key)
    if key in _INT_KEYS:
        if float(val) != int(round(val)):
            raise ConfigError(f"{key} must be an integer, got {raw!r}", key)
        return int(round(val))
    return float(val)


def parse_lines(lines, source: str = "<config>") -> dict:
    values = {}
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in text.split("=", 1))
        values[key] = (raw, f"{source}:{lineno}")
    return values


def load_config(path: Optional[str] = None, overrides=(), **flags) -> RunConfig:
    """Read ``path`` (if given), apply ``key=value`` overrides, then explicit flags."""
    entries = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        entries.update(parse_lines(text.splitlines(), str(path)))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = (part.strip() for part in item.split("=", 1))
        entries[key] = (raw, "--set")
    cfg = RunConfig()
    for key, (raw, where) in entries.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r} ({where})", key)
        setattr(cfg, key, _convert(key, raw))
    for key, val in flags.items():
        if val is not None:
            setattr(cfg, key, val)
    return cfg
