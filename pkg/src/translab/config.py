"""Experiment configuration, report rows and calibration files.

Configs are INI files with one section per run::

    [sharpness-small]
    experiment = sharpness
    theta = 0.5
    q = 2
    cases = 5

Calibration files hold one ``key = value`` pair per line.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError


def parse_exponent(text: str) -> float:
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "∞"):
        return math.inf
    v = float(t)
    if not v >= 1:
        raise ValueError(f"exponent {text!r} is below 1")
    return v


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    label: str = ""
    group: str = ""  # family name; empty selects the experiment default
    measure: str = ""
    function: str = ""
    half_length: float | None = None
    samples: int | None = None
    theta: float = 0.5
    q: float = 2.0
    p: float = 2.0
    probes: int | None = None
    cases: int | None = None
    seed: int = 0
    tolerance: float | None = None
    calibration: str | None = None
    refine: int = 0

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ConfigError(f"theta must lie in (0, 1), got {self.theta}")
        for name in ("q", "p"):
            if not getattr(self, name) >= 1:
                raise ConfigError(f"{name} must lie in [1, inf], got {getattr(self, name)}")
        if self.refine not in (0, 1, 2):
            raise ConfigError(f"refine must be 0, 1 or 2, got {self.refine}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        for name in ("probes", "cases", "samples"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be positive")

    def with_(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    @property
    def name(self) -> str:
        return self.label or self.experiment


_CASTS = {
    "half_length": float, "samples": int, "theta": float, "q": parse_exponent, "p": parse_exponent,
    "probes": int, "cases": int, "seed": int, "tolerance": float, "refine": int,
    "group": str, "measure": str, "function": str, "calibration": str, "experiment": str,
}


def _key_line(text: str, section: str, key: str) -> int | None:
    current = None
    for i, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        m = re.match(r"\[(.+)\]$", s)
        if m:
            current = m.group(1).strip()
        elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", s):
            return i
    return None


def parse_config(text: str, source: str = "<config>", known: set[str] | None = None) -> list[ExperimentConfig]:
    """All sections of an INI document, in file order."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    out = []
    for section in parser.sections():
        values: dict = {"label": section}
        for key, raw in parser.items(section):
            where = _key_line(text, section, key)
            loc = f"{source}:{where}" if where else source
            if key not in _CASTS:
                raise ConfigError(f"{loc}: unknown key {key!r} in section [{section}]")
            try:
                values[key] = _CASTS[key](raw)
            except ValueError as exc:
                raise ConfigError(f"{loc}: bad value for {key!r}: {exc}") from None
        values.setdefault("experiment", section)
        if known is not None and values["experiment"] not in known:
            raise ConfigError(f"{source}: section [{section}] names unknown experiment "
                              f"{values['experiment']!r}")
        try:
            out.append(ExperimentConfig(**values))
        except ConfigError as exc:
            raise ConfigError(f"{source}: section [{section}]: {exc}") from None
    return out


def load_config(path: str | Path, known: set[str] | None = None) -> list[ExperimentConfig]:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    return parse_config(text, str(p), known)


# -- report rows ---------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    """One checked quantity.

    ``kind == "bound"`` rows pass when ``lhs / rhs <= 1 + tolerance``;
    ``kind == "residual"`` rows carry the residual in ``lhs`` and pass when
    it is at most ``tolerance``.
    """

    experiment: str
    case: str
    lhs: float
    rhs: float
    tolerance: float
    refine: int = 0
    kind: str = "bound"
    note: str = ""

    @property
    def ratio(self) -> float:
        if self.kind == "residual":
            return self.lhs
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    @property
    def passed(self) -> bool:
        r = self.ratio
        if math.isnan(r):
            return False
        if self.kind == "residual":
            return r <= self.tolerance
        return r <= 1.0 + self.tolerance


def residual_row(experiment, case, value, tol, refine=0, note="") -> ReportRow:
    return ReportRow(experiment, str(case), float(value), float(tol), float(tol), refine, "residual", note)


def bound_row(experiment, case, lhs, rhs, tol=0.0, refine=0, note="") -> ReportRow:
    return ReportRow(experiment, str(case), float(lhs), float(rhs), float(tol), refine, "bound", note)


@dataclass
class Outcome:
    rows: list[ReportRow]
    metrics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


# -- calibration files ------------------------------------------------------------


def read_calibration(path: str | Path) -> dict[str, float]:
    p = Path(path)
    if not p.exists():
        return {}
    out = {}
    for i, line in enumerate(p.read_text().splitlines(), start=1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        if "=" not in s:
            raise ConfigError(f"{p}:{i}: expected 'key = value'")
        key, value = (part.strip() for part in s.rsplit("=", 1))  # keys contain "="
        try:
            v = float(value)
        except ValueError:
            raise ConfigError(f"{p}:{i}: calibration value for {key!r} is not a number") from None
        if not (math.isfinite(v) and v > 0):
            raise ConfigError(f"{p}:{i}: calibration value for {key!r} must be positive and finite")
        out[key] = v
    return out


def write_calibration(path: str | Path, values: dict[str, float]) -> None:
    p = Path(path)
    merged = read_calibration(p)
    merged.update(values)
    p.parent.mkdir(parents=True, exist_ok=True)
    lines = ["# frozen calibration constants (key = value)"]
    lines += [f"{k} = {float(merged[k])!r}" for k in sorted(merged)]
    p.write_text("\n".join(lines) + "\n")


def calibration_key(experiment: str, theta: float, q: float, p: float) -> str:
    return f"{experiment}/theta={theta:g}/q={q:g}/p={p:g}"
