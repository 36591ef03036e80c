"""Exact purity of discretized two-particle states and the second-order check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridState",
    "grid_purity_exact",
    "four_index_purity",
    "ExpansionReport",
    "expansion_check",
    "random_unit_vector",
    "random_unit_matrix",
]


@dataclass(frozen=True)
class GridState:
    """Two-particle amplitude psi[i, j] on weighted single-particle grids."""

    psi: np.ndarray
    weights1: np.ndarray | None = None
    weights2: np.ndarray | None = None

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        if psi.ndim != 2:
            raise ValueError("psi must be a matrix")
        if not np.all(np.isfinite(psi)):
            raise ValueError("psi has non-finite entries")
        w1 = np.ones(psi.shape[0]) if self.weights1 is None else np.asarray(self.weights1, dtype=float)
        w2 = np.ones(psi.shape[1]) if self.weights2 is None else np.asarray(self.weights2, dtype=float)
        if w1.shape != (psi.shape[0],) or w2.shape != (psi.shape[1],):
            raise ValueError("weights do not match psi")
        if np.any(w1 <= 0) or np.any(w2 <= 0):
            raise ValueError("quadrature weights must be positive")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "weights1", w1)
        object.__setattr__(self, "weights2", w2)

    def scaled(self) -> np.ndarray:
        """sqrt(w1_i) psi_ij sqrt(w2_j): the state in an orthonormal basis."""
        return np.sqrt(self.weights1)[:, None] * self.psi * np.sqrt(self.weights2)[None, :]

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.scaled()) ** 2))


def grid_purity_exact(state: GridState) -> float:
    """Tr(rho_1^2) of the normalized state."""
    m = state.scaled()
    norm_sq = float(np.sum(np.abs(m) ** 2))
    if norm_sq == 0.0:
        raise ValueError("zero-norm state")
    rho = m @ m.conj().T
    return float(np.sum(np.abs(rho) ** 2).real / norm_sq**2)


def four_index_purity(state: GridState) -> float:
    """Brute-force sum_{ijkl} psi_ij psi_kl psi*_il psi*_kj (weighted, normalized)."""
    m = state.scaled()
    norm_sq = float(np.sum(np.abs(m) ** 2))
    if norm_sq == 0.0:
        raise ValueError("zero-norm state")
    total = np.einsum("ij,kl,il,kj->", m, m, m.conj(), m.conj(), optimize=False)
    return float(total.real / norm_sq**2)


@dataclass(frozen=True)
class ExpansionReport:
    eps: float
    purity_exact: float
    purity_formula: float
    residual: float
    residual_over_eps3: float
    I1: float
    I2: float
    I3: float


def _unit(v, name):
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"{name} must have unit norm, got {norm!r}")


def expansion_check(phi1, phi2, phi_s, eps: float) -> ExpansionReport:
    """Exact purity of (phi1 x phi2 + eps phi_s)/sqrt(N) against the second-order formula."""
    phi1 = np.asarray(phi1, dtype=complex)
    phi2 = np.asarray(phi2, dtype=complex)
    phi_s = np.asarray(phi_s, dtype=complex)
    _unit(phi1, "phi1")
    _unit(phi2, "phi2")
    _unit(phi_s.ravel(), "phi_s")
    if phi_s.shape != (phi1.size, phi2.size):
        raise ValueError("phi_s shape must be (len(phi1), len(phi2))")
    if not 0 <= abs(eps) <= 0.2:
        raise ValueError(f"|eps| must lie in [0, 0.2], got {eps!r}")

    p_exact = grid_purity_exact(GridState(np.outer(phi1, phi2) + eps * phi_s))
    # discrete versions of the three interference integrals
    I1 = abs(np.vdot(phi_s, np.outer(phi1, phi2))) ** 2
    I2 = float(np.sum(np.abs(phi_s.conj().T @ phi1) ** 2))
    I3 = float(np.sum(np.abs(phi_s.conj() @ phi2) ** 2))
    p_formula = 1.0 - 2.0 * abs(eps) ** 2 * (1.0 + I1 - I2 - I3)
    residual = abs(p_exact - p_formula)
    ratio = residual / abs(eps) ** 3 if eps else 0.0
    return ExpansionReport(float(abs(eps)), p_exact, p_formula, residual, ratio, float(I1), I2, I3)


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_unit_matrix(rng: np.random.Generator, n1: int, n2: int) -> np.ndarray:
    m = rng.standard_normal((n1, n2)) + 1j * rng.standard_normal((n1, n2))
    return m / np.linalg.norm(m)
