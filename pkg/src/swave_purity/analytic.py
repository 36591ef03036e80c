"""Closed-form scattered wave, scattered norm and purity laws."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import CollisionConfig, derived_scales, radial_gamma
from .phase_shift import PhaseShiftModel, cross_section, theta_derivs

__all__ = [
    "PERTURBATIVE_LIMIT",
    "PerturbativeRegimeViolation",
    "ScatteredWave",
    "PurityReport",
    "scattered_amplitude",
    "epsilon_sq",
    "regime_diagnostics",
    "purity",
    "purity_narrow",
    "purity_from_expansion",
    "narrow_limit_I1",
    "narrow_limit_I2",
    "narrow_limit_I3",
]

# largest |eps|^2 for which the second-order purity expansion is trusted
PERTURBATIVE_LIMIT = 0.1


class PerturbativeRegimeViolation(ValueError):
    def __init__(self, epsilon_sq: float, limit: float = PERTURBATIVE_LIMIT):
        self.epsilon_sq = epsilon_sq
        self.limit = limit
        super().__init__(
            f"|eps|^2 = {epsilon_sq:.6g} exceeds the perturbative threshold {limit}; "
            "the second-order purity expansion is not reliable here"
        )


@dataclass(frozen=True)
class ScatteredWave:
    """The s-wave scattered relative amplitude eps * eta(k, t).

    Depends on the relative momentum only through its magnitude, and on time
    only through the phase exp(-i k^2 t / 2).
    """

    cfg: CollisionConfig
    model: PhaseShiftModel

    @property
    def prefactor(self) -> complex:
        s2 = self.cfg.sigma0**2
        return s2 / (4.0 * self.cfg.k0 - 2j * s2 * self.cfg.r0)

    def __call__(self, k, t: float | None = None):
        return scattered_amplitude(k, self.cfg.t if t is None else t, self)


def scattered_amplitude(k, t: float, wave: ScatteredWave):
    """Closed-form scattered amplitude at radial wavenumber ``k``.

    Uses the exact theta(k); vectorized over ``k``.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("radial wavenumber k must be > 0")
    cfg = wave.cfg
    th = wave.model.theta(k)
    bracket = 2j * np.exp(1j * th) * np.sin(th)  # e^{2i th} - 1
    envelope = radial_gamma(k - cfg.k0, 2.0 / cfg.sigma0)
    phase = np.exp(1j * ((k - cfg.k0) * cfg.r0 - 0.5 * k * k * t))
    out = wave.prefactor * bracket * envelope * phase / k
    return complex(out) if out.ndim == 0 else out


def epsilon_sq(cfg: CollisionConfig, model: PhaseShiftModel) -> float:
    """Norm of the scattered wave from a second-order Taylor expansion of theta at k0."""
    th, d1, d2 = theta_derivs(model, cfg.k0)
    s2 = cfg.sigma0**2
    gamma_sq = derived_scales(cfg).gamma_sq
    den = 2.0 - 1j * s2 * d2
    smear = cmath.sqrt(2.0 / den) * cmath.exp(-s2 * d1 * d1 / den)
    bracket = 1.0 - (cmath.exp(2j * th) * smear).real
    return s2 / (cfg.k0**2 * gamma_sq) * bracket


@dataclass(frozen=True)
class PurityReport:
    purity: float
    one_minus_purity: float
    epsilon_sq: float
    diagnostics: dict
    method: str  # "expansion" | "narrow" | "oracle"

    def as_dict(self) -> dict:
        return {
            "purity": self.purity,
            "one_minus_purity": self.one_minus_purity,
            "epsilon_sq": self.epsilon_sq,
            "method": self.method,
            **self.diagnostics,
        }


def regime_diagnostics(cfg: CollisionConfig, model: PhaseShiftModel) -> dict:
    """Dimensionless numbers that say how narrow the packets are."""
    th, d1, d2 = theta_derivs(model, cfg.k0)
    return {
        "sigma0_over_k0": cfg.sigma0_over_k0,
        "sigma0_theta_prime": cfg.sigma0 * d1,
        "sigma0_sq_theta_double_prime": cfg.sigma0**2 * d2,
        "gamma_sq": derived_scales(cfg).gamma_sq,
        "spreading_ratio": cfg.spreading_ratio,
        "theta_k0": th,
    }


def _from_one_minus(one_minus: float, eps_sq: float, diag: dict, method: str) -> PurityReport:
    # one_minus is stored as 1 - purity exactly so that the pair always sums to 1
    purity_value = 1.0 - one_minus
    return PurityReport(purity_value, 1.0 - purity_value, eps_sq, diag, method)


def purity(cfg: CollisionConfig, model: PhaseShiftModel) -> PurityReport:
    """P = 1 - 2 |eps|^2, refusing to answer outside the perturbative regime."""
    eps_sq = epsilon_sq(cfg, model)
    if eps_sq > PERTURBATIVE_LIMIT:
        raise PerturbativeRegimeViolation(eps_sq)
    return _from_one_minus(2.0 * eps_sq, eps_sq, regime_diagnostics(cfg, model), "expansion")


def purity_narrow(cfg: CollisionConfig, model: PhaseShiftModel) -> PurityReport:
    """Narrow-packet limit 1 - P = sigma_c^2 S0(k0) / pi."""
    sigma_c = derived_scales(cfg).sigma_c
    one_minus = sigma_c**2 * cross_section(model, cfg.k0) / math.pi
    return _from_one_minus(one_minus, 0.5 * one_minus, regime_diagnostics(cfg, model), "narrow")


def purity_from_expansion(epsilon_sq: float, I1: float, I2: float, I3: float) -> float:
    """Second-order purity including the interference integrals I1, I2, I3."""
    for name, value in (("epsilon_sq", epsilon_sq), ("I1", I1), ("I2", I2), ("I3", I3)):
        if not value >= 0:
            raise ValueError(f"{name} must be >= 0, got {value!r}")
    if epsilon_sq > PERTURBATIVE_LIMIT:
        raise PerturbativeRegimeViolation(epsilon_sq)
    return 1.0 - 2.0 * epsilon_sq * (1.0 + I1 - I2 - I3)


def narrow_limit_I1(cfg: CollisionConfig) -> float:
    """Leading-order I1 for narrow packets: sigma0^2 / (2 k0^2)."""
    return cfg.sigma0**2 / (2.0 * cfg.k0**2)


def narrow_limit_I2(cfg: CollisionConfig) -> float:
    """Leading-order I2 for narrow packets: 2 sigma0^2 / (3 k0^2)."""
    return 2.0 * cfg.sigma0**2 / (3.0 * cfg.k0**2)


narrow_limit_I3 = narrow_limit_I2
