"""Purity of the scattered shell state through a partial-wave (Legendre) split.

A pair amplitude that depends on the directions only through
c = k1_hat . k2_hat expands as

    Psi(k1, k2) = sum_l A_l(|k1|, |k2|) (2l+1)/(4 pi) P_l(c)
                = sum_{l,m} A_l(|k1|, |k2|) Y_lm(k1_hat) Y_lm*(k2_hat),

so in the basis {radial node x Y_lm} the state is block diagonal, each
radial block B_l repeated 2l+1 times, and

    Tr rho_1^2 = sum_l (2l+1) Tr[(B_l B_l^dagger)^2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import ndtr

from ..core import CollisionConfig
from ..phase_shift import PhaseShiftModel
from .overlaps import scattered_pair_amplitude
from .quadrature import gauss_legendre
from .quadrature import epsilon_sq_quadrature
from .streams import DEFAULT_CHUNK, McEstimate, mc_mean

__all__ = [
    "SectorDecomposition",
    "SectorTruncationError",
    "RadialGridSpec",
    "legendre_table",
    "sector_decompose",
    "shell_sector_decompose",
    "shell_purity",
    "auto_l_max",
    "sample_shell_pairs",
    "mc_shell_norm",
    "mc_shell_purity",
    "log_log_slope",
]

ROUNDTRIP_TOL = 1e-6
# terms below exp(-ANGULAR_CUT) of the peak are outside the angular window
ANGULAR_CUT = 80.0


class SectorTruncationError(RuntimeError):
    def __init__(self, residual: float, l_max: int):
        self.residual = residual
        self.l_max = l_max
        super().__init__(
            f"partial-wave round-trip residual {residual:.3g} exceeds {ROUNDTRIP_TOL:g} "
            f"at l_max = {l_max}; increase l_max"
        )


@dataclass(frozen=True)
class RadialGridSpec:
    n_radial: int = 96
    half_width: float = 12.0  # single-particle support k0 +- half_width * sigma0
    n_angular: int | None = None  # default: l_max + 160


@dataclass(frozen=True)
class SectorDecomposition:
    """Per-l radial blocks of a normalized rotationally invariant pair state.

    ``sector_matrices[l]`` is B_l with quadrature weights and the k^2 measure
    absorbed, so the blocks are plain matrices in an orthonormal basis.
    """

    l_max: int
    k_nodes: np.ndarray
    k_weights: np.ndarray
    sector_matrices: np.ndarray
    raw_norm: float
    roundtrip_residual: float

    @property
    def norm(self) -> float:
        degeneracy = 2 * np.arange(self.l_max + 1) + 1
        return float(np.sum(degeneracy * np.sum(np.abs(self.sector_matrices) ** 2, axis=(1, 2))))

    def sector_norms(self) -> np.ndarray:
        return np.sum(np.abs(self.sector_matrices) ** 2, axis=(1, 2))

    def amplitude(self, i: np.ndarray, j: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Reconstructed (normalized) amplitude at radial node pairs (i, j) and cosine u."""
        ells = np.arange(self.l_max + 1)
        scale = self.k_nodes * np.sqrt(self.k_weights)
        a = self.sector_matrices[:, i, j] / (scale[i] * scale[j])
        table = legendre_table(self.l_max, np.asarray(u, dtype=float))
        return np.sum(a * ((2 * ells + 1) / (4 * math.pi))[:, None] * table, axis=0)


def legendre_table(l_max: int, u: np.ndarray) -> np.ndarray:
    """P_l(u) for l = 0..l_max, shape (l_max + 1, len(u))."""
    u = np.asarray(u, dtype=float)
    table = np.empty((l_max + 1,) + u.shape)
    table[0] = 1.0
    if l_max >= 1:
        table[1] = u
    for ell in range(1, l_max):
        table[ell + 1] = ((2 * ell + 1) * u * table[ell] - ell * table[ell - 1]) / (ell + 1)
    return table


def _frame_vectors(k, u, frame):
    # k1 along frame @ z, k2 at cosine u from it in the frame's xz plane
    s = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    e1 = frame @ np.array([0.0, 0.0, 1.0])
    e2 = frame @ np.array([1.0, 0.0, 0.0])
    dir2 = u[:, None] * e1 + s[:, None] * e2
    return k[:, None] * e1, dir2


def sector_decompose(
    amplitude: Callable[[np.ndarray, np.ndarray], np.ndarray],
    k_nodes: np.ndarray,
    k_weights: np.ndarray,
    l_max: int,
    *,
    u_window: tuple[float, float] = (-1.0, 1.0),
    n_angular: int | None = None,
    frame: np.ndarray | None = None,
    check_points: int = 400,
    normalize: bool = True,
    seed: int = 0,
) -> SectorDecomposition:
    """Legendre-project a rotationally invariant pair amplitude.

    ``amplitude(k1, k2)`` takes arrays of 3-vectors (last axis) and must be
    negligible for k1_hat . k2_hat outside ``u_window``.  ``frame`` is a
    rotation applied to the sampling directions.
    """
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    k_nodes = np.asarray(k_nodes, dtype=float)
    k_weights = np.asarray(k_weights, dtype=float)
    frame = np.eye(3) if frame is None else np.asarray(frame, dtype=float)
    n_angular = l_max + 160 if n_angular is None else int(n_angular)
    u, wu = gauss_legendre(n_angular, *u_window)
    proj = 2.0 * math.pi * (legendre_table(l_max, u) * wu).T  # (n_u, L+1)

    nr = k_nodes.size
    k1_vecs, dir2 = _frame_vectors(k_nodes, u, frame)
    A = np.empty((l_max + 1, nr, nr), dtype=complex)
    peak = 0.0
    for i in range(nr):
        k1 = np.broadcast_to(k1_vecs[i], (nr, n_angular, 3))
        k2 = k_nodes[:, None, None] * dir2[None, :, :]
        values = amplitude(k1, k2)
        peak = max(peak, float(np.max(np.abs(values))))
        A[:, i, :] = (values @ proj).T

    # round trip at random node pairs and cosines inside the window,
    # relative to the largest amplitude on the projection grid
    rng = np.random.default_rng(seed)
    ii = rng.integers(0, nr, check_points)
    jj = rng.integers(0, nr, check_points)
    uu = rng.uniform(*u_window, check_points)
    v1, d2 = _frame_vectors(k_nodes[ii], uu, frame)
    direct = amplitude(v1, k_nodes[jj][:, None] * d2)
    table = legendre_table(l_max, uu)
    ells = np.arange(l_max + 1)
    rebuilt = np.sum(A[:, ii, jj] * ((2 * ells + 1) / (4 * math.pi))[:, None] * table, axis=0)
    peak = max(peak, float(np.max(np.abs(direct))))
    residual = float(np.max(np.abs(rebuilt - direct)) / peak) if peak > 0 else float(np.max(np.abs(rebuilt)))

    scale = k_nodes * np.sqrt(k_weights)
    B = A * scale[None, :, None] * scale[None, None, :]
    degeneracy = 2 * ells + 1
    raw_norm = float(np.sum(degeneracy * np.sum(np.abs(B) ** 2, axis=(1, 2))))
    if normalize:
        if raw_norm == 0.0:
            raise ValueError("zero-norm amplitude")
        B = B / math.sqrt(raw_norm)
    return SectorDecomposition(l_max, k_nodes, k_weights, B, raw_norm, residual)


def auto_l_max(cfg: CollisionConfig, spec: RadialGridSpec = RadialGridSpec()) -> int:
    """An l_max large enough to resolve the back-to-back peak of the CM factor.

    Legendre coefficients of exp(-a (1 + c)) fall off like exp(-l^2 / 2a);
    a = k1 k2 / (2 sigma0^2) is largest at the outer edge of the radial grid.
    """
    k_hi = cfg.k0 + spec.half_width * cfg.sigma0
    a_max = k_hi**2 / (2.0 * cfg.sigma0**2)
    return int(math.ceil(math.sqrt(60.0 * a_max))) + 8


def shell_sector_decompose(
    cfg: CollisionConfig,
    model: PhaseShiftModel,
    l_max: int | None = None,
    radial_grid_spec: RadialGridSpec = RadialGridSpec(),
    *,
    frame: np.ndarray | None = None,
) -> SectorDecomposition:
    """Sector decomposition of the normalized scattered pair state phi_cm(K) eta(k)."""
    spec = radial_grid_spec
    if l_max is None:
        l_max = auto_l_max(cfg, spec)
    if l_max < 8:
        raise ValueError(f"l_max must be >= 8, got {l_max}")
    eps_sq = epsilon_sq_quadrature(cfg, model)
    if eps_sq == 0.0:
        raise ValueError("no scattering: the scattered shell state is empty")
    norm = math.sqrt(eps_sq)
    lo = max(1e-6 * cfg.k0, cfg.k0 - spec.half_width * cfg.sigma0)
    hi = cfg.k0 + spec.half_width * cfg.sigma0
    k, w = gauss_legendre(spec.n_radial, lo, hi)
    a_min = lo * lo / (2.0 * cfg.sigma0**2)
    upper = min(1.0, -1.0 + ANGULAR_CUT / a_min)

    def amplitude(k1, k2):
        return scattered_pair_amplitude(k1, k2, cfg, model, norm, cfg.t)

    decomp = sector_decompose(
        amplitude, k, w, l_max, u_window=(-1.0, upper), n_angular=spec.n_angular, frame=frame
    )
    if decomp.roundtrip_residual > ROUNDTRIP_TOL:
        raise SectorTruncationError(decomp.roundtrip_residual, l_max)
    return decomp


def shell_purity(decomp: SectorDecomposition) -> float:
    """sum_l (2l+1) Tr[(B_l B_l^dagger)^2], normalized."""
    B = decomp.sector_matrices
    rho = B @ np.conj(np.swapaxes(B, 1, 2))
    degeneracy = 2 * np.arange(decomp.l_max + 1) + 1
    tr = np.sum(np.abs(rho) ** 2, axis=(1, 2))
    return float(np.sum(degeneracy * tr) / decomp.norm**2)


def log_log_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float)), 1)[0])


# ---------------------------------------------------------------- Monte Carlo


def _isotropic(rng, size):
    v = rng.standard_normal((size, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _radial_proposal(rng, size, cfg):
    """|k| ~ N(k0, sigma0^2/4) truncated to k > 0."""
    out = np.empty(0)
    sd = 0.5 * cfg.sigma0
    while out.size < size:
        k = cfg.k0 + sd * rng.standard_normal(2 * (size - out.size) + 16)
        out = np.concatenate([out, k[k > 0]])
    return out[:size]


def _radial_proposal_pdf(k, cfg):
    sd = 0.5 * cfg.sigma0
    mass = ndtr(cfg.k0 / sd)
    return np.exp(-0.5 * ((k - cfg.k0) / sd) ** 2) / (sd * math.sqrt(2 * math.pi) * mass)


def sample_shell_pairs(rng: np.random.Generator, size: int, cfg: CollisionConfig, model: PhaseShiftModel):
    """Exact draws (k1, k2) from |phi_cm(K) eta(k)|^2.

    K is gaussian; |k| is drawn from the gaussian envelope and accepted with
    probability sin^2 theta(|k|), which is |e^{2i theta} - 1|^2 / 4.
    """
    K = cfg.sigma0 * rng.standard_normal((size, 3))
    radii = np.empty(0)
    while radii.size < size:
        need = size - radii.size
        trial = _radial_proposal(rng, 2 * need + 16, cfg)
        accept = rng.random(trial.size) < np.sin(model.theta(trial)) ** 2
        radii = np.concatenate([radii, trial[accept]])
    k = radii[:size, None] * _isotropic(rng, size)
    return 0.5 * K + k, 0.5 * K - k


def mc_shell_norm(
    cfg: CollisionConfig,
    model: PhaseShiftModel,
    n_samples: int = 200_000,
    seed: int = 42,
    *,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> McEstimate:
    """6-D estimate of int int |phi_scat|^2 with the quadrature-normalized eta."""
    norm = math.sqrt(epsilon_sq_quadrature(cfg, model))

    def draw(rng, size):
        K = cfg.sigma0 * rng.standard_normal((size, 3))
        r = _radial_proposal(rng, size, cfg)
        k = r[:, None] * _isotropic(rng, size)
        amp = scattered_pair_amplitude(0.5 * K + k, 0.5 * K - k, cfg, model, norm, cfg.t)
        # |phi_cm(K)|^2 is exactly the density of K
        p_cm = (2 * math.pi * cfg.sigma0**2) ** -1.5 * np.exp(-0.5 * np.sum(K * K, axis=1) / cfg.sigma0**2)
        p_k = _radial_proposal_pdf(r, cfg) / (4 * math.pi * r * r)
        return np.abs(amp) ** 2 / (p_cm * p_k)

    return mc_mean(draw, n_samples, seed, chunk_size=chunk_size, workers=workers)


def mc_shell_purity(
    cfg: CollisionConfig,
    model: PhaseShiftModel,
    n_samples: int = 1_000_000,
    seed: int = 42,
    *,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> McEstimate:
    """12-D estimate of Tr rho_1^2 for the scattered shell state.

    With (k1, k2) and (k3, k4) drawn from |Psi|^2 the weight
    Psi*(k1, k4) Psi*(k3, k2) / (Psi*(k1, k2) Psi*(k3, k4)) is unbiased and
    has unit second moment.
    """
    if epsilon_sq_quadrature(cfg, model) == 0.0:
        raise ValueError("no scattering: the scattered shell state is empty")

    def psi(a, b):
        return scattered_pair_amplitude(a, b, cfg, model, 1.0, cfg.t)

    def draw(rng, size):
        k1, k2 = sample_shell_pairs(rng, size, cfg, model)
        k3, k4 = sample_shell_pairs(rng, size, cfg, model)
        w = np.conj(psi(k1, k4) * psi(k3, k2)) / np.conj(psi(k1, k2) * psi(k3, k4))
        return w.real

    return mc_mean(draw, n_samples, seed, chunk_size=chunk_size, workers=workers)
