"""Deterministic Gauss-Legendre oracles for the scattered norm and I1."""

from __future__ import annotations

import math

import numpy as np

from ..analytic import ScatteredWave, scattered_amplitude
from ..core import BeamGeometry, CollisionConfig, relative_amplitude
from ..phase_shift import PhaseShiftModel

__all__ = [
    "gauss_legendre",
    "radial_support",
    "epsilon_sq_quadrature",
    "overlap_I1",
    "perpendicular",
]

# half-width of the radial window, in units of sigma0
RADIAL_HALF_WIDTH = 12.0
# angular cut: exp(-ANGULAR_CUT) is dropped
ANGULAR_CUT = 80.0


def gauss_legendre(n: int, a: float, b: float):
    """Nodes and weights of the n-point rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def radial_support(cfg: CollisionConfig, half_width: float = RADIAL_HALF_WIDTH):
    lo = max(1e-8 * cfg.k0, cfg.k0 - half_width * cfg.sigma0)
    return lo, cfg.k0 + half_width * cfg.sigma0


def epsilon_sq_quadrature(cfg: CollisionConfig, model: PhaseShiftModel, n: int = 200) -> float:
    """4 pi int k^2 |eps eta(k)|^2 dk with the exact phase shift."""
    k, w = gauss_legendre(n, *radial_support(cfg))
    amp = scattered_amplitude(k, cfg.t, ScatteredWave(cfg, model))
    return float(4.0 * math.pi * np.sum(w * k * k * np.abs(amp) ** 2))


def perpendicular(n: np.ndarray) -> np.ndarray:
    """Some unit vector orthogonal to ``n``."""
    trial = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e = trial - (trial @ n) * n
    return e / np.linalg.norm(e)


def overlap_I1(
    cfg: CollisionConfig,
    model: PhaseShiftModel,
    geom: BeamGeometry = BeamGeometry(),
    n_radial: int = 200,
    n_angular: int = 200,
    t: float | None = None,
) -> float:
    """|<phi_scat | phi_1 phi_2>|^2 with phi_scat normalized.

    The CM factors of both states coincide, so only the relative overlap
    survives.  It is axially symmetric about the beam axis; the angular rule
    is placed on the forward cone where the packet lives, per radial node.
    """
    t = cfg.t if t is None else t
    eps_sq = epsilon_sq_quadrature(cfg, model, n_radial)
    if eps_sq == 0.0:
        return 0.0
    n = geom.unit
    e = perpendicular(n)
    k, wk = gauss_legendre(n_radial, *radial_support(cfg))
    x, wx = np.polynomial.legendre.leggauss(int(n_angular))
    # 1 - cos(angle) in [0, vmax(k)]
    vmax = np.minimum(2.0, ANGULAR_CUT * cfg.sigma0**2 / (2.0 * k * cfg.k0))
    v = 0.5 * vmax[:, None] * (x[None, :] + 1.0)
    wv = 0.5 * vmax[:, None] * wx[None, :]
    u = 1.0 - v
    s = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    kvec = k[:, None, None] * (u[..., None] * n + s[..., None] * e)
    packet = relative_amplitude(kvec, cfg, geom, t)
    scat = scattered_amplitude(k, t, ScatteredWave(cfg, model))
    inner = np.sum(wv * packet, axis=1)
    overlap = 2.0 * math.pi * np.sum(wk * k * k * np.conj(scat) * inner)
    return float(abs(overlap) ** 2 / eps_sq)
