"""Shared test doubles."""

import numpy as np

from swave_purity.phase_shift import PhaseShiftModel


class ConstantPhase(PhaseShiftModel):
    """theta = theta0 for every k."""

    def __init__(self, theta0: float):
        self.theta0 = float(theta0)

    def theta(self, k):
        return np.full_like(np.asarray(k, dtype=float), self.theta0)

    def analytic_derivs(self, k):
        return 0.0, 0.0
