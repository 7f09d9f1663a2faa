"""Experiment configuration: a YAML file merged with command-line overrides.

Angles are radians when numeric and multiples of pi when written as strings such
as ``0.125pi``, ``-pi/4`` or ``pi``. Ranges are ``"a:b"`` strings or two-item
lists.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from .errors import ClusterError
from .hamiltonian import FreqWindow
from .modes import MIN_QUADRATURE_POINTS, PumpSpec
from .staggering import BinRange, PumpSchedule


class ConfigError(ClusterError, ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


COMMAND_KEYS = {
    "ppt-scan": {"gamma", "thetas", "n_theta", "out"},
    "supermodes": {"gamma", "theta", "out"},
    "dual-rail": {"p1", "p2", "theta1", "theta2", "window", "out", "format"},
    "lattice": {"p1", "p2", "theta1", "theta2", "window", "bins", "out", "format"},
    "time-varying": {"p1", "p2", "schedule", "window", "bins", "out", "format"},
    "overlap": {"n_points", "theta", "out"},
}

DEFAULTS = {
    "gamma": 0.1,
    "n_theta": 101,
    "theta": math.pi / 8,
    "p1": 1,
    "p2": 3,
    "theta1": math.pi / 8,
    "theta2": math.pi / 8,
    "window": (-2, 4),
    "bins": (0, 5),
    "n_points": 64,
    "format": None,
    "out": None,
}

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError(f"not an angle: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    match = _ANGLE.match(text)
    if match:
        coef, denom = match.groups()
        c = 1.0 if coef in (None, "", "+") else -1.0 if coef == "-" else float(coef)
        return c * math.pi / (float(denom) if denom else 1.0)
    return float(text)


def parse_range(value: Any) -> tuple[int, int]:
    if isinstance(value, (int, float)):
        # YAML 1.1 reads an unquoted -2:4 as a base-60 integer
        raise ValueError(f"expected 'a:b' or [a, b], got the number {value!r} (quote ranges in YAML)")
    if isinstance(value, str):
        parts = value.split(":")
    else:
        parts = list(value)
    if len(parts) != 2:
        raise ValueError(f"expected 'a:b', got {value!r}")
    return int(parts[0]), int(parts[1])


def load_file(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"invalid YAML in {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a mapping")
    return _flatten(data)


def _flatten(data: Mapping) -> dict:
    """Lift keys of the optional ``pump`` section to the top level."""
    out = {}
    for key, value in data.items():
        if key == "pump" and isinstance(value, Mapping):
            for sub, v in value.items():
                out[sub] = v
        else:
            out[key] = value
    return out


@dataclass
class ExperimentConfig:
    command: str
    gamma: float = 0.1
    thetas: list[float] = field(default_factory=list)
    theta: float = math.pi / 8
    pump: PumpSpec | None = None
    window: FreqWindow | None = None
    bins: BinRange | None = None
    schedule: PumpSchedule | None = None
    n_points: int = 64
    out: str | None = None
    format: str | None = None


def _schedule(value: Any, bins: BinRange) -> PumpSchedule:
    """An explicit {bin: [theta1, theta2]} mapping, or a list of pairs cycled over the bins."""
    if isinstance(value, Mapping):
        angles = {int(k): tuple(parse_angle(a) for a in pair) for k, pair in value.items()}
    else:
        if isinstance(value, str):
            value = [p.split(",") for p in value.split(";") if p.strip()]
        cycle = [tuple(parse_angle(a) for a in pair) for pair in value]
        if not cycle:
            raise ValueError("schedule is empty")
        angles = {k: cycle[(k - bins.k_min) % len(cycle)] for k in bins}
    for k, pair in angles.items():
        if len(pair) != 2:
            raise ValueError(f"bin {k} needs two angles (theta1, theta2), got {len(pair)}")
    missing = [k for k in bins if k not in angles]
    if missing:
        raise ValueError(f"no angles for bins {missing}")
    return PumpSchedule(angles)


def build_config(command: str, file_values: Mapping | None = None, overrides: Mapping | None = None) -> ExperimentConfig:
    """Merge file values and flag overrides (flags win), validate, and build typed objects."""
    allowed = COMMAND_KEYS[command]
    raw: dict = {}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in allowed:
                raise ConfigError(key, f"unknown key for '{command}' (allowed: {', '.join(sorted(allowed))})")
            raw[key] = value

    def get(key):
        return raw.get(key, DEFAULTS.get(key))

    cfg = ExperimentConfig(command)
    key = "?"
    try:
        if "gamma" in allowed:
            key = "gamma"
            cfg.gamma = float(get("gamma"))
            if not (math.isfinite(cfg.gamma) and cfg.gamma >= 0):
                raise ValueError("must be a finite number >= 0")
        if "theta" in allowed:
            key = "theta"
            cfg.theta = parse_angle(get("theta"))
        if command == "ppt-scan":
            if "thetas" in raw:
                key = "thetas"
                values = raw["thetas"]
                if isinstance(values, str):
                    values = values.split(",")
                cfg.thetas = [parse_angle(v) for v in values]
                if not cfg.thetas:
                    raise ValueError("theta grid is empty")
            else:
                key = "n_theta"
                n = int(get("n_theta"))
                if n < 1:
                    raise ValueError("must be >= 1")
                cfg.thetas = [math.pi / 4 * i / (n - 1) for i in range(n)] if n > 1 else [0.0]
        if "window" in allowed:
            key = "window"
            cfg.window = FreqWindow(*parse_range(get("window")))
        if "bins" in allowed:
            key = "bins"
            cfg.bins = BinRange(*parse_range(get("bins")))
        if "p1" in allowed:
            key = "p1"
            p1 = int(get("p1"))
            key = "p2"
            p2 = int(get("p2"))
            if p1 == p2:
                raise ValueError(f"p1 and p2 must differ (both {p1})")
            if command == "time-varying":
                key = "schedule"
                if "schedule" not in raw:
                    raise ValueError("time-varying requires a schedule")
                cfg.schedule = _schedule(raw["schedule"], cfg.bins)
                cfg.pump = cfg.schedule.pump(p1, p2)
            else:
                key = "theta1"
                t1 = parse_angle(get("theta1"))
                key = "theta2"
                t2 = parse_angle(get("theta2"))
                cfg.pump = PumpSpec.dual(p1, t1, p2, t2)
        if "n_points" in allowed:
            key = "n_points"
            cfg.n_points = int(get("n_points"))
            if cfg.n_points < MIN_QUADRATURE_POINTS:
                raise ValueError(f"needs >= {MIN_QUADRATURE_POINTS} quadrature points")
        if "format" in allowed:
            key = "format"
            fmt = get("format")
            if fmt is not None and fmt not in ("json", "dot", "csv"):
                raise ValueError(f"unknown format {fmt!r}")
            cfg.format = fmt
        key = "out"
        cfg.out = get("out")
    except ConfigError:
        raise
    except (ValueError, TypeError, ClusterError) as exc:
        raise ConfigError(key, str(exc)) from exc
    return cfg
