"""s-wave phase shifts, scattering amplitude and cross section.

All models are immutable and evaluate vectorized over ``k``.  Phase shifts
are continuous in ``k`` and vanish as ``k -> 0`` (no Levinson offset).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "PhaseShiftModel",
    "HardSphere",
    "SquareWell",
    "ZeroRange",
    "BreitWigner",
    "Tabulated",
    "TabulatedFormatError",
    "load_tabulated",
    "theta",
    "theta_derivs",
    "f0",
    "cross_section",
    "finite_difference_derivs",
    "resonant_depths",
]


def _check_k(k):
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)) or np.any(k <= 0):
        raise ValueError("wavenumber k must be finite and > 0")
    return k


class PhaseShiftModel:
    """Base class for an s-wave phase-shift source theta(k)."""

    def theta(self, k):
        raise NotImplementedError

    def analytic_derivs(self, k):
        """Return (theta', theta'') in closed form, or None if unavailable."""
        return None


@dataclass(frozen=True)
class HardSphere(PhaseShiftModel):
    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"hard-sphere radius b must be > 0, got {self.b!r}")

    def theta(self, k):
        return -np.asarray(k, dtype=float) * self.b

    def analytic_derivs(self, k):
        k = np.asarray(k, dtype=float)
        return np.full_like(k, -self.b), np.zeros_like(k)


@dataclass(frozen=True)
class ZeroRange(PhaseShiftModel):
    """Pure scattering-length model; ``a = 0`` is the non-interacting case."""

    a: float

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise ValueError(f"scattering length must be finite, got {self.a!r}")

    def theta(self, k):
        return -np.arctan(np.asarray(k, dtype=float) * self.a)

    def analytic_derivs(self, k):
        k = np.asarray(k, dtype=float)
        den = 1.0 + (k * self.a) ** 2
        return -self.a / den, 2.0 * k * self.a**3 / den**2


@dataclass(frozen=True)
class SquareWell(PhaseShiftModel):
    """Attractive well V(r) = -V0 for r < b.

    tan(theta + k b) = (k / kappa) tan(kappa b) with kappa = sqrt(k^2 + 2 V0).
    The branch of theta + k b follows kappa b through each half period, so
    theta is continuous and never hits a tan pole.
    """

    V0: float
    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"well radius b must be > 0, got {self.b!r}")
        if not math.isfinite(self.V0) or self.V0 < 0:
            raise ValueError(f"well depth V0 must be finite and >= 0, got {self.V0!r}")

    def _inner_phase(self, k):
        kappa = np.sqrt(k * k + 2.0 * self.V0)
        x = kappa * self.b
        m = np.floor(x / math.pi + 0.5)
        rem = x - m * math.pi  # in [-pi/2, pi/2)
        return m * math.pi + np.arctan2(k * np.sin(rem), kappa * np.cos(rem))

    def theta(self, k):
        k = np.asarray(k, dtype=float)
        offset = math.pi * math.floor(math.sqrt(2.0 * self.V0) * self.b / math.pi + 0.5)
        return self._inner_phase(k) - k * self.b - offset


@dataclass(frozen=True)
class BreitWigner(PhaseShiftModel):
    """Isolated resonance at energy ``Er`` (= k^2/2) on a constant background."""

    Er: float
    width: float
    theta_bg: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"resonance width must be > 0, got {self.width!r}")
        if not (math.isfinite(self.Er) and math.isfinite(self.theta_bg)):
            raise ValueError("Er and theta_bg must be finite")

    def theta(self, k):
        k = np.asarray(k, dtype=float)
        return self.theta_bg + np.arctan2(0.5 * self.width, self.Er - 0.5 * k * k)

    def analytic_derivs(self, k):
        k = np.asarray(k, dtype=float)
        half = 0.5 * self.width
        detune = self.Er - 0.5 * k * k
        den = detune**2 + half**2
        d_e = half / den
        d2_e = 2.0 * half * detune / den**2
        return k * d_e, d_e + k * k * d2_e


class TabulatedFormatError(ValueError):
    """Malformed phase-shift table; ``line`` is 1-based (0 for whole-file errors)."""

    def __init__(self, message: str, line: int = 0, source: str = "<table>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True, eq=False)
class Tabulated(PhaseShiftModel):
    """Cubic-spline interpolation of tabulated (k, theta) pairs."""

    k_grid: tuple
    theta_values: tuple
    source: str = ""
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        k = np.asarray(self.k_grid, dtype=float)
        th = np.asarray(self.theta_values, dtype=float)
        if k.ndim != 1 or th.shape != k.shape:
            raise ValueError("k_grid and theta_values must be 1-D and equally long")
        if k.size < 4:
            raise ValueError(f"need at least 4 table points, got {k.size}")
        if not (np.all(np.isfinite(k)) and np.all(np.isfinite(th))):
            raise ValueError("table entries must be finite")
        if k[0] <= 0 or np.any(np.diff(k) <= 0):
            raise ValueError("k_grid must be positive and strictly ascending")
        object.__setattr__(self, "k_grid", tuple(k.tolist()))
        object.__setattr__(self, "theta_values", tuple(th.tolist()))
        object.__setattr__(self, "_spline", CubicSpline(k, th))

    def _check_range(self, k):
        lo, hi = self.k_grid[0], self.k_grid[-1]
        if np.any(k < lo) or np.any(k > hi):
            raise ValueError(f"k outside tabulated range [{lo}, {hi}]")

    def theta(self, k):
        k = np.asarray(k, dtype=float)
        self._check_range(k)
        return self._spline(k)

    def analytic_derivs(self, k):
        k = np.asarray(k, dtype=float)
        self._check_range(k)
        return self._spline(k, 1), self._spline(k, 2)


def load_tabulated(path) -> Tabulated:
    """Read a two-column ``k theta`` text file; ``#`` starts a comment."""
    path = Path(path)
    ks, ths = [], []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TabulatedFormatError(f"cannot read file ({exc.strerror})", source=str(path)) from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise TabulatedFormatError(f"expected 2 columns, found {len(parts)}", lineno, str(path))
        try:
            k, th = float(parts[0]), float(parts[1])
        except ValueError:
            raise TabulatedFormatError(f"non-numeric entry {line!r}", lineno, str(path)) from None
        if not (math.isfinite(k) and math.isfinite(th)):
            raise TabulatedFormatError("non-finite entry", lineno, str(path))
        if k <= 0:
            raise TabulatedFormatError(f"k must be > 0, got {k!r}", lineno, str(path))
        if ks and k <= ks[-1]:
            raise TabulatedFormatError(f"k not strictly ascending ({k!r} after {ks[-1]!r})", lineno, str(path))
        ks.append(k)
        ths.append(th)
    if len(ks) < 4:
        raise TabulatedFormatError(f"need at least 4 data rows, found {len(ks)}", source=str(path))
    return Tabulated(tuple(ks), tuple(ths), source=str(path))


def theta(model: PhaseShiftModel, k):
    """Phase shift in radians; returns a float for scalar ``k``."""
    k = _check_k(k)
    out = model.theta(k)
    return float(out) if np.ndim(out) == 0 else out


def finite_difference_derivs(model: PhaseShiftModel, k: float):
    """Central differences with one Richardson step, h = max(1e-4 k, 1e-6)."""
    k = float(k)
    h = max(1e-4 * k, 1e-6)
    if k - h <= 0:
        raise ValueError(f"k = {k!r} too close to 0 for finite differences")
    offsets = np.array([-h, -0.5 * h, 0.0, 0.5 * h, h])
    f = np.asarray(model.theta(k + offsets), dtype=float)
    d1_h = (f[4] - f[0]) / (2 * h)
    d1_half = (f[3] - f[1]) / h
    d2_h = (f[4] - 2 * f[2] + f[0]) / h**2
    d2_half = (f[3] - 2 * f[2] + f[1]) / (0.25 * h * h)
    return (4 * d1_half - d1_h) / 3, (4 * d2_half - d2_h) / 3


def theta_derivs(model: PhaseShiftModel, k: float):
    """(theta, theta', theta'') at scalar ``k``."""
    k = float(_check_k(k))
    th = float(model.theta(k))
    analytic = model.analytic_derivs(k)
    if analytic is not None:
        d1, d2 = analytic
    else:
        d1, d2 = finite_difference_derivs(model, k)
    return th, float(d1), float(d2)


def f0(model: PhaseShiftModel, k):
    """s-wave amplitude (exp(2i theta) - 1) / (2ik)."""
    k = _check_k(k)
    th = model.theta(k)
    # (e^{2i th} - 1)/(2i) == e^{i th} sin(th), without the cancellation at small th
    out = np.exp(1j * th) * np.sin(th) / k
    return complex(out) if np.ndim(out) == 0 else out


def cross_section(model: PhaseShiftModel, k):
    """S0(k) = 4 pi |f0(k)|^2 = (4 pi / k^2) sin^2 theta(k)."""
    k = _check_k(k)
    out = 4.0 * math.pi * np.sin(model.theta(k)) ** 2 / (k * k)
    return float(out) if np.ndim(out) == 0 else out


def resonant_depths(k: float, b: float, v_max: float, n_scan: int = 4000) -> list[float]:
    """Square-well depths V0 <= v_max with theta(k) = pi/2 (mod pi), ascending."""
    from scipy.optimize import brentq

    def c(v):
        return math.cos(SquareWell(v, b).theta(k))

    grid = np.linspace(1e-9, v_max, n_scan)
    vals = np.array([c(v) for v in grid])
    roots = []
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if flo * fhi < 0:
            v = brentq(c, lo, hi, xtol=1e-14, rtol=1e-15)
            # sign flips from the Levinson offset jumping by pi are not resonances
            if abs(c(v)) < 1e-9:
                roots.append(v)
    return roots
