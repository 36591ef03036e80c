"""Monte Carlo estimates of the partial-overlap integrals I2 and I3.

I2 = int d^3k2 |g(k2)|^2 with g(k2) = int d^3k1 phi_scat*(k1, k2) phi_1(k1).
Writing |g|^2 as a 9-D integral over (k1, k3, k2), each sample draws k2 from
a gaussian around the spectator's mean momentum and then k1, k3 independently
from the gaussian |phi_cm(k1 + k2) phi_1(k1)| (normalized).  Conditional on
k2 the two inner draws give independent unbiased estimates of g and g*, so
their product is unbiased for |g|^2 and the weights stay bounded.
"""

from __future__ import annotations

import math

import numpy as np

from ..analytic import ScatteredWave, scattered_amplitude
from ..core import BeamGeometry, CollisionConfig, cm_amplitude, packet_1, packet_2
from ..phase_shift import PhaseShiftModel
from .quadrature import epsilon_sq_quadrature
from .streams import DEFAULT_CHUNK, McEstimate, mc_mean

__all__ = ["scattered_pair_amplitude", "mc_overlap_I2_I3", "DEFAULT_OVERLAP_SAMPLES"]

DEFAULT_OVERLAP_SAMPLES = 200_000

# stream-index blocks keep I2 and I3 on disjoint streams
_I3_STREAM_OFFSET = 1 << 32


def scattered_pair_amplitude(k1, k2, cfg: CollisionConfig, model: PhaseShiftModel, norm: float, t: float):
    """Normalized phi_scat(k1, k2, t) = phi_cm(K, t) eta(|k|, t)."""
    K = k1 + k2
    # k = 0 has measure zero; the closed form stays finite as k -> 0
    krel = np.maximum(np.linalg.norm(0.5 * (k1 - k2), axis=-1), np.finfo(float).tiny)
    eta = scattered_amplitude(krel, t, ScatteredWave(cfg, model)) / norm
    return cm_amplitude(K, cfg, t) * eta


def _gauss_logpdf(x, mean, var):
    d = x - mean
    return -0.5 * np.sum(d * d / var, axis=-1) - 0.5 * np.sum(np.log(2.0 * math.pi * np.broadcast_to(var, d.shape)), axis=-1)


def _make_draw(cfg, model, geom, norm, t, which: int):
    n = geom.unit
    s2 = cfg.sigma0**2
    packet = packet_1 if which == 1 else packet_2
    sign = 1.0 if which == 1 else -1.0
    own_center = sign * cfg.k0 * n  # mean momentum of the projected particle
    # spectator proposal: wider than |g|^2 (variances ~1.5 s2 across, 0.5 s2 along the axis)
    outer_var_perp, outer_var_par = 2.0 * s2, 0.75 * s2
    inner_var = 2.0 * s2 / 3.0

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        z = rng.standard_normal((size, 3))
        par = z @ n
        perp = z - par[:, None] * n
        spectator = -own_center + math.sqrt(outer_var_perp) * perp + math.sqrt(outer_var_par) * par[:, None] * n
        log_q = (
            -0.5 * (perp * perp).sum(-1)
            - 0.5 * par * par
            - 1.5 * math.log(2.0 * math.pi)
            - math.log(outer_var_perp)
            - 0.5 * math.log(outer_var_par)
        )
        inner_mean = (2.0 * own_center - spectator) / 3.0
        a = inner_mean + math.sqrt(inner_var) * rng.standard_normal((size, 3))
        b = inner_mean + math.sqrt(inner_var) * rng.standard_normal((size, 3))
        log_ha = _gauss_logpdf(a, inner_mean, inner_var)
        log_hb = _gauss_logpdf(b, inner_mean, inner_var)
        if which == 1:
            sa = scattered_pair_amplitude(a, spectator, cfg, model, norm, t)
            sb = scattered_pair_amplitude(b, spectator, cfg, model, norm, t)
        else:
            sa = scattered_pair_amplitude(spectator, a, cfg, model, norm, t)
            sb = scattered_pair_amplitude(spectator, b, cfg, model, norm, t)
        num = np.conj(sa) * packet(a, cfg, geom, t) * sb * np.conj(packet(b, cfg, geom, t))
        return (num * np.exp(-(log_q + log_ha + log_hb))).real

    return draw


def mc_overlap_I2_I3(
    cfg: CollisionConfig,
    model: PhaseShiftModel,
    n_samples: int = DEFAULT_OVERLAP_SAMPLES,
    seed: int = 42,
    *,
    geom: BeamGeometry = BeamGeometry(),
    t: float | None = None,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> tuple[McEstimate, McEstimate]:
    """Importance-sampled (I2, I3).  Both vanish identically without scattering."""
    if n_samples < 100_000:
        raise ValueError(f"n_samples must be >= 1e5, got {n_samples}")
    t = cfg.t if t is None else t
    eps_sq = epsilon_sq_quadrature(cfg, model)
    if eps_sq == 0.0:
        zero = McEstimate(0.0, 0.0, int(n_samples), int(seed))
        return zero, zero
    norm = math.sqrt(eps_sq)
    est = []
    for which, offset in ((1, 0), (2, _I3_STREAM_OFFSET)):
        draw = _make_draw(cfg, model, geom, norm, t, which)
        est.append(mc_mean(draw, n_samples, seed, stream_offset=offset, chunk_size=chunk_size, workers=workers))
    return est[0], est[1]
