"""Entanglement generated by low-energy s-wave scattering of gaussian wave packets."""

from .analytic import (
    PERTURBATIVE_LIMIT,
    PerturbativeRegimeViolation,
    PurityReport,
    ScatteredWave,
    epsilon_sq,
    purity,
    purity_from_expansion,
    purity_narrow,
    regime_diagnostics,
    scattered_amplitude,
)
from .core import BeamGeometry, CollisionConfig, DerivedScales, derived_scales, gaussian_gamma
from .phase_shift import (
    BreitWigner,
    HardSphere,
    SquareWell,
    Tabulated,
    TabulatedFormatError,
    ZeroRange,
    cross_section,
    f0,
    load_tabulated,
    theta,
    theta_derivs,
)

__version__ = "0.1.0"
