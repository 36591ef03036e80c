"""Collision parameters, gaussian packets and CM/relative coordinates.

Units are hbar = mu = 1 (mu the reduced mass), so each particle has mass 2
and a free single-particle plane wave picks up the phase exp(-i k^2 t / 4).

Geometry: both the mean relative momentum and the relative separation lie on
``BeamGeometry.axis``.  The relative packet starts at ``-r0 * axis`` and moves
with momentum ``+k0 * axis``, so the collision is head-on and happens at
``t = r0 / k0``.  Particle 1 sits at ``-r0/2 * axis`` with mean momentum
``+k0 * axis``; particle 2 is its mirror image.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CollisionConfig",
    "DerivedScales",
    "BeamGeometry",
    "gaussian_gamma",
    "cm_rel",
    "rel_cm",
    "packet_1",
    "packet_2",
    "initial_amplitude",
    "cm_amplitude",
    "relative_amplitude",
    "derived_scales",
    "factorization_check",
]


@dataclass(frozen=True)
class CollisionConfig:
    """Physical parameters of a head-on collision of two gaussian packets.

    Parameters
    ----------
    sigma0 : float
        Momentum-space width of each single-particle packet.
    k0 : float
        Magnitude of the mean relative momentum.
    r0 : float
        Initial relative separation; the scalar in the phase exp(i(k-k0)r0)
        of the scattered wave.
    t : float
        Elapsed time.  Only enters amplitudes as a phase.
    """

    sigma0: float
    k0: float
    r0: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        for name in ("sigma0", "k0", "r0", "t"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.sigma0 <= 0:
            raise ValueError(f"sigma0 must be > 0, got {self.sigma0}")
        if self.k0 <= 0:
            raise ValueError(f"k0 must be > 0, got {self.k0}")
        if self.r0 < 0:
            raise ValueError(f"r0 must be >= 0, got {self.r0}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")

    @property
    def sigma0_over_k0(self) -> float:
        return self.sigma0 / self.k0

    @property
    def spreading_ratio(self) -> float:
        """sigma0^2 r0 / (2 k0); the packets have spread noticeably once this is O(1)."""
        return self.sigma0**2 * self.r0 / (2.0 * self.k0)

    def replace(self, **changes) -> "CollisionConfig":
        values = {"sigma0": self.sigma0, "k0": self.k0, "r0": self.r0, "t": self.t}
        values.update(changes)
        return CollisionConfig(**values)


@dataclass(frozen=True)
class DerivedScales:
    gamma_sq: float
    sigma_c: float
    t_col: float


@dataclass(frozen=True)
class BeamGeometry:
    """Common axis of the mean momentum and the separation."""

    axis: tuple = (0.0, 0.0, 1.0)
    _unit: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (3,):
            raise ValueError("axis must be a 3-vector")
        norm = float(np.linalg.norm(axis))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"axis must have unit norm, |axis| = {norm!r}")
        object.__setattr__(self, "axis", tuple(float(x) for x in axis))
        object.__setattr__(self, "_unit", axis)

    @property
    def unit(self) -> np.ndarray:
        return self._unit.copy()


def gaussian_gamma(a, b, c: float):
    """Normalized 3-D gaussian with inverse width ``c`` peaked at ``b``.

    ``(c^2 / 2 pi)^(3/4) exp(-(c^2 / 4) |a - b|^2)``, whose square integrates
    to one over ``a``.  ``a`` and ``b`` broadcast over leading axes; the last
    axis holds the three components.
    """
    if not c > 0:
        raise ValueError(f"inverse width c must be > 0, got {c!r}")
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    dist_sq = np.sum(d * d, axis=-1)
    return (c * c / (2.0 * math.pi)) ** 0.75 * np.exp(-0.25 * c * c * dist_sq)


def radial_gamma(dist, c: float):
    """``gaussian_gamma`` as a function of the distance |a - b| only."""
    dist = np.asarray(dist, dtype=float)
    return (c * c / (2.0 * math.pi)) ** 0.75 * np.exp(-0.25 * c * c * dist * dist)


def cm_rel(k1, k2):
    """Total momentum K = k1 + k2 and relative momentum k = (k1 - k2) / 2."""
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    return k1 + k2, 0.5 * (k1 - k2)


def rel_cm(K, k):
    """Inverse of :func:`cm_rel`."""
    K = np.asarray(K, dtype=float)
    k = np.asarray(k, dtype=float)
    return 0.5 * K + k, 0.5 * K - k


def _free_phase(k, mass_factor: float, t: float):
    if t == 0:
        return 1.0
    k = np.asarray(k, dtype=float)
    return np.exp(-1j * mass_factor * np.sum(k * k, axis=-1) * t)


def packet_1(k1, cfg: CollisionConfig, geom: BeamGeometry = BeamGeometry(), t: float = 0.0):
    """Particle-1 packet, optionally freely propagated to time ``t``."""
    n = geom.unit
    k1 = np.asarray(k1, dtype=float)
    shift = k1 - cfg.k0 * n
    amp = gaussian_gamma(k1, cfg.k0 * n, math.sqrt(2.0) / cfg.sigma0)
    # centred at -r0/2 * n in position space
    phase = np.exp(0.5j * cfg.r0 * (shift @ n))
    return amp * phase * _free_phase(k1, 0.25, t)


def packet_2(k2, cfg: CollisionConfig, geom: BeamGeometry = BeamGeometry(), t: float = 0.0):
    """Particle-2 packet, the parity image of :func:`packet_1`."""
    n = geom.unit
    k2 = np.asarray(k2, dtype=float)
    shift = k2 + cfg.k0 * n
    amp = gaussian_gamma(k2, -cfg.k0 * n, math.sqrt(2.0) / cfg.sigma0)
    phase = np.exp(-0.5j * cfg.r0 * (shift @ n))
    return amp * phase * _free_phase(k2, 0.25, t)


def initial_amplitude(k1, k2, cfg: CollisionConfig, geom: BeamGeometry = BeamGeometry()):
    """Product state phi_1(k1) phi_2(k2) at t = 0."""
    return packet_1(k1, cfg, geom) * packet_2(k2, cfg, geom)


def cm_amplitude(K, cfg: CollisionConfig, t: float = 0.0):
    """CM factor Gamma(K, 0; 1/sigma0), with free phase exp(-i K^2 t / 8)."""
    K = np.asarray(K, dtype=float)
    return gaussian_gamma(K, np.zeros(3), 1.0 / cfg.sigma0) * _free_phase(K, 0.125, t)


def relative_amplitude(k, cfg: CollisionConfig, geom: BeamGeometry = BeamGeometry(), t: float = 0.0):
    """Unscattered relative packet, with free phase exp(-i k^2 t / 2)."""
    n = geom.unit
    k = np.asarray(k, dtype=float)
    amp = gaussian_gamma(k, cfg.k0 * n, 2.0 / cfg.sigma0)
    phase = np.exp(1j * cfg.r0 * ((k - cfg.k0 * n) @ n))
    return amp * phase * _free_phase(k, 0.5, t)


def derived_scales(cfg: CollisionConfig) -> DerivedScales:
    gamma_sq = 1.0 + cfg.spreading_ratio**2
    return DerivedScales(
        gamma_sq=gamma_sq,
        sigma_c=cfg.sigma0 / math.sqrt(gamma_sq),
        t_col=cfg.r0 / cfg.k0,
    )


def factorization_check(k1, k2, cfg: CollisionConfig, geom: BeamGeometry = BeamGeometry()) -> float:
    """Largest relative gap between the product state and its CM x relative form.

    The product of the two packets should equal
    Gamma(K, 0; 1/sigma0) Gamma(k, k0 axis; 2/sigma0) exp(i r0 (k - k0 axis).axis).
    """
    K, k = cm_rel(k1, k2)
    direct = initial_amplitude(k1, k2, cfg, geom)
    factored = cm_amplitude(K, cfg) * relative_amplitude(k, cfg, geom)
    return float(np.max(np.abs(direct - factored) / np.abs(factored)))
