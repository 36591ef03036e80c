"""Flat ``key = value`` run configuration shared by every CLI subcommand."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .core import CollisionConfig
from .phase_shift import (
    BreitWigner,
    HardSphere,
    PhaseShiftModel,
    SquareWell,
    ZeroRange,
    load_tabulated,
)

__all__ = ["RunConfig", "ConfigError", "MODELS", "MODEL_PARAMS", "parse_config", "render_config", "load_config"]

MODELS = ("hard_sphere", "square_well", "zero_range", "breit_wigner", "tabulated", "none")
MODEL_PARAMS = ("b", "V0", "a", "Er", "width", "theta_bg")
FORMATS = ("json", "csv", "text")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    sigma0: float = 0.01
    k0: float = 1.0
    r0: float = 10.0
    t: float = 0.0
    model: str = "hard_sphere"
    b: float = 1.0
    V0: float = 0.0
    a: float = 0.0
    Er: float = 0.5
    width: float = 0.1
    theta_bg: float = 0.0
    table: str = ""
    samples: int = 200_000
    seed: int = 42
    quad_n: int = 200
    l_max: int = 0  # 0 selects the l_max needed for the requested sigma0
    workers: int = 1
    format: str = ""  # empty: the subcommand's default
    out: str = ""

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.format and self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}; choose from {', '.join(FORMATS)}")
        for name in ("samples", "quad_n", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if self.l_max < 0:
            raise ConfigError("l_max must be >= 0")
        for name in ("table", "out"):
            value = getattr(self, name)
            # the flat file format cannot carry these
            if "#" in value or "\n" in value or value != value.strip():
                raise ConfigError(f"{name} must not contain '#', newlines or surrounding spaces")

    def collision(self) -> CollisionConfig:
        try:
            return CollisionConfig(self.sigma0, self.k0, self.r0, self.t)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def phase_model(self) -> PhaseShiftModel:
        try:
            if self.model == "hard_sphere":
                return HardSphere(self.b)
            if self.model == "square_well":
                return SquareWell(self.V0, self.b)
            if self.model == "zero_range":
                return ZeroRange(self.a)
            if self.model == "breit_wigner":
                return BreitWigner(self.Er, self.width, self.theta_bg)
            if self.model == "none":
                return ZeroRange(0.0)
            if not self.table:
                raise ConfigError("model 'tabulated' needs table = PATH")
            return load_tabulated(self.table)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def with_values(self, **changes) -> "RunConfig":
        return replace(self, **changes)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def coerce(key: str, text: str):
    """Convert a textual value for ``key`` to the field's type."""
    if key not in _TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    kind = _TYPES[key]
    text = text.strip()
    try:
        if kind == "float":
            value = float(text)
            if not math.isfinite(value):
                raise ValueError
            return value
        if kind == "int":
            return int(text)
    except ValueError:
        raise ConfigError(f"invalid value for {key}: {text!r}") from None
    return text


def parse_config(text: str, base: RunConfig | None = None, source: str = "<config>") -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            values[key] = coerce(key, value)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    return replace(base or RunConfig(), **values)


def _render_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(cfg: RunConfig) -> str:
    return "".join(f"{f.name} = {_render_value(getattr(cfg, f.name))}\n" for f in fields(RunConfig))


def load_config(path, base: RunConfig | None = None) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, base, str(path))
