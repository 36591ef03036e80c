"""Oracle comparisons behind ``swave-purity validate``.

Every check returns a :class:`Check` holding the measured value, the target,
the tolerance and the verdict.  Nothing here depends on wall-clock time or on
the number of worker threads, so two runs with the same settings produce the
same report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import epsilon_sq, narrow_limit_I1, narrow_limit_I2, purity, purity_narrow
from .core import CollisionConfig, derived_scales
from .oracle.grid import expansion_check, random_unit_matrix, random_unit_vector
from .oracle.overlaps import mc_overlap_I2_I3
from .oracle.quadrature import epsilon_sq_quadrature, overlap_I1
from .oracle.shell import (
    RadialGridSpec,
    log_log_slope,
    mc_shell_norm,
    mc_shell_purity,
    shell_purity,
    shell_sector_decompose,
)
from .phase_shift import BreitWigner, HardSphere, SquareWell, ZeroRange, f0, resonant_depths
from .runconfig import RunConfig

__all__ = ["Check", "SUITES", "run_suite", "bracket_bound_violations", "unitarity_worst", "random_model"]

SUITES = ("quick", "full")

SHELL_SIGMA_RATIOS = (0.02, 0.04, 0.08)
SHELL_MC_SIGMA_RATIO = 0.15
SHELL_NORM_SIGMA_RATIO = 0.05
RESONANCE_RADIUS = 5.0


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    target: float
    tolerance: float
    passed: bool
    detail: str = ""


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b else abs(a - b)


def random_model(rng: np.random.Generator, k0: float):
    """A random phase-shift model from the analytic families."""
    kind = rng.integers(4)
    if kind == 0:
        return HardSphere(float(rng.uniform(0.05, 5.0)) / k0)
    if kind == 1:
        return ZeroRange(float(rng.uniform(-10.0, 10.0)) / k0)
    if kind == 2:
        return SquareWell(float(rng.uniform(0.0, 30.0)) * k0 * k0, float(rng.uniform(0.1, 10.0)) / k0)
    er = 0.5 * k0 * k0 * float(rng.uniform(0.5, 1.5))
    return BreitWigner(er, float(rng.uniform(0.01, 1.0)) * k0 * k0, float(rng.uniform(-1.0, 1.0)))


def bracket_bound_violations(n_draws: int, seed: int) -> int:
    """Count draws where |eps|^2 leaves [0, 2 sigma0^2 / (k0^2 gamma^2)]."""
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n_draws):
        k0 = float(rng.uniform(0.2, 5.0))
        cfg = CollisionConfig(
            sigma0=k0 * float(rng.uniform(1e-3, 0.05)),
            k0=k0,
            r0=float(rng.uniform(0.0, 200.0)) / k0,
        )
        eps = epsilon_sq(cfg, random_model(rng, k0))
        bound = 2.0 * cfg.sigma0**2 / (k0**2 * derived_scales(cfg).gamma_sq)
        if not 0.0 <= eps <= bound * (1.0 + 1e-12):
            bad += 1
    return bad


def unitarity_worst(n_draws: int, seed: int) -> tuple[float, float]:
    """Largest violations of |f0| <= 1/k and Im f0 = k |f0|^2 over random draws."""
    rng = np.random.default_rng(seed)
    worst_bound = worst_optical = 0.0
    for _ in range(n_draws):
        k0 = float(rng.uniform(0.2, 5.0))
        k = k0 * rng.uniform(0.05, 3.0, size=32)
        amp = f0(random_model(rng, k0), k)
        worst_bound = max(worst_bound, float(np.max(np.abs(amp) * k - 1.0)))
        worst_optical = max(worst_optical, float(np.max(np.abs(amp.imag - k * np.abs(amp) ** 2) * k)))
    return worst_bound, worst_optical


class _Suite:
    def __init__(self, run: RunConfig):
        self.run = run
        self.cfg = CollisionConfig(run.sigma0, run.k0, run.r0, run.t)
        self.hard = HardSphere(1.0 / run.k0)
        self.checks: list[Check] = []

    def add(self, name, measured, target, tolerance, passed, detail=""):
        self.checks.append(Check(name, float(measured), float(target), float(tolerance), bool(passed), detail))

    # -------------------------------------------------------------- quick

    def no_scattering(self):
        none = ZeroRange(0.0)
        eps = epsilon_sq(self.cfg, none)
        quad = epsilon_sq_quadrature(self.cfg, none, self.run.quad_n)
        dev = max(abs(1.0 - purity(self.cfg, none).purity), abs(2.0 * quad))
        self.add("no_scattering_purity", dev, 0.0, 1e-14, dev < 1e-14 and eps == 0.0)

    def hard_sphere_norm(self):
        eps = epsilon_sq(self.cfg, self.hard)
        quad = epsilon_sq_quadrature(self.cfg, self.hard, self.run.quad_n)
        self.add("hard_sphere_eps_sq", eps, quad, 1e-6, _rel(eps, quad) <= 1e-6, "relative")

    def resonance_norm(self):
        k0 = self.cfg.k0
        radius = RESONANCE_RADIUS / k0
        # deepest resonant well below 25 k0^2: several bound states, sharp theta(k)
        depth = resonant_depths(k0, radius, 25.0 * k0 * k0)[-1]
        model = SquareWell(depth, radius)
        quad = epsilon_sq_quadrature(self.cfg, model, self.run.quad_n)
        err_full = _rel(epsilon_sq(self.cfg, model), quad)
        err_narrow = _rel(purity_narrow(self.cfg, model).epsilon_sq, quad)
        self.add(
            "resonance_eps_sq",
            err_full,
            0.0,
            1e-2,
            err_full <= 1e-2 and err_narrow > err_full,
            f"narrow-limit deviation {err_narrow:.3g}",
        )

    def overlap_i1(self):
        value = overlap_I1(self.cfg, self.hard)
        target = narrow_limit_I1(self.cfg)
        self.add("I1_narrow_limit", value, target, 0.05, _rel(value, target) <= 0.05, "relative")

    def overlap_i2_i3(self):
        n = max(self.run.samples, 100_000)
        i2, i3 = mc_overlap_I2_I3(self.cfg, self.hard, n, self.run.seed, workers=self.run.workers)
        target = narrow_limit_I2(self.cfg)
        for name, est in (("I2_narrow_limit", i2), ("I3_narrow_limit", i3)):
            ok = est.within(target, 3.0) and est.rel_stderr <= 0.05
            self.add(name, est.mean, target, 3.0 * est.stderr, ok, f"stderr {est.stderr:.17g}")
        combined = math.hypot(i2.stderr, i3.stderr)
        self.add("I2_equals_I3", i2.mean - i3.mean, 0.0, 3.0 * combined, abs(i2.mean - i3.mean) <= 3.0 * combined)

    def expansion(self):
        rng = np.random.default_rng(self.run.seed)
        phi1, phi2 = random_unit_vector(rng, 32), random_unit_vector(rng, 32)
        phi_s = random_unit_matrix(rng, 32, 32)
        eps_values = (1e-1, 1e-2, 1e-3)
        residuals = [expansion_check(phi1, phi2, phi_s, e).residual for e in eps_values]
        slope = log_log_slope(eps_values, residuals)
        self.add("expansion_slope", slope, 3.0, 0.3, slope >= 2.7, "lower bound 2.7")
        self.add("expansion_residual_1e-2", residuals[1], 0.0, 1e-5, residuals[1] <= 1e-5)

    def shell_slope(self):
        spec = RadialGridSpec()
        l_max = self.run.l_max or None
        sigmas = [r * self.cfg.k0 for r in SHELL_SIGMA_RATIOS]
        values = [shell_purity(shell_sector_decompose(self.cfg.replace(sigma0=s), self.hard, l_max, spec)) for s in sigmas]
        slope = log_log_slope(sigmas, values)
        self.add("shell_purity_slope", slope, 2.0, 0.15, abs(slope - 2.0) <= 0.15)

    def bracket_bound(self):
        bad = bracket_bound_violations(1000, self.run.seed)
        self.add("bracket_bound_violations", bad, 0, 0, bad == 0, "1000 random draws")

    def unitarity(self):
        bound, optical = unitarity_worst(200, self.run.seed)
        self.add("unitarity_bound", bound, 0.0, 1e-12, bound <= 1e-12, "max(k|f0| - 1)")
        self.add("unitarity_optical", optical, 0.0, 1e-12, optical <= 1e-12, "max k|Im f0 - k|f0|^2|")

    # --------------------------------------------------------------- full

    def shell_mc(self):
        cfg = self.cfg.replace(sigma0=SHELL_MC_SIGMA_RATIO * self.cfg.k0)
        grid = shell_purity(shell_sector_decompose(cfg, self.hard, self.run.l_max or None))
        est = mc_shell_purity(cfg, self.hard, max(2 * self.run.samples, 400_000), self.run.seed, workers=self.run.workers)
        self.add("shell_purity_mc", est.mean, grid, 3.0 * est.stderr, est.within(grid, 3.0), f"stderr {est.stderr:.17g}")

    def shell_norm(self):
        cfg = self.cfg.replace(sigma0=SHELL_NORM_SIGMA_RATIO * self.cfg.k0)
        est = mc_shell_norm(cfg, self.hard, max(self.run.samples, 100_000), self.run.seed, workers=self.run.workers)
        decomp = shell_sector_decompose(cfg, self.hard, self.run.l_max or None)
        self.add("shell_norm_mc", est.mean, 1.0, 3.0 * est.stderr, est.within(1.0, 3.0), f"stderr {est.stderr:.17g}")
        self.add("shell_norm_sectors", decomp.norm, 1.0, 1e-8, abs(decomp.norm - 1.0) <= 1e-8)

    def time_invariance(self):
        late = self.cfg.replace(t=1e3)
        p0 = purity(self.cfg.replace(t=0.0), self.hard).purity
        p1 = purity(late, self.hard).purity
        self.add("time_invariance_purity", abs(p1 - p0), 0.0, 0.0, p1 == p0)
        i0 = overlap_I1(self.cfg, self.hard, t=0.0)
        i1 = overlap_I1(self.cfg, self.hard, t=1e3)
        self.add("time_invariance_I1", _rel(i1, i0), 0.0, 1e-12, _rel(i1, i0) <= 1e-12)

    def spreading(self):
        r0_grid = np.linspace(0.0, 200.0, 10) / self.cfg.k0
        eps = [epsilon_sq(self.cfg.replace(r0=float(r)), self.hard) for r in r0_grid]
        steps = np.diff(eps)
        self.add("spreading_monotone", float(np.max(steps)), 0.0, 0.0, bool(np.all(steps < 0)), "max step in eps^2")

    def convergence(self):
        n = self.run.quad_n
        a = epsilon_sq_quadrature(self.cfg, self.hard, n)
        b = epsilon_sq_quadrature(self.cfg, self.hard, 2 * n)
        self.add("quadrature_convergence", _rel(a, b), 0.0, 1e-10, _rel(a, b) <= 1e-10)


QUICK = (
    "no_scattering",
    "hard_sphere_norm",
    "resonance_norm",
    "overlap_i1",
    "overlap_i2_i3",
    "expansion",
    "shell_slope",
    "bracket_bound",
    "unitarity",
)
FULL = QUICK + ("shell_mc", "shell_norm", "time_invariance", "spreading", "convergence")


def run_suite(run: RunConfig, suite: str = "quick") -> list[Check]:
    """Run the named suite and return its checks in a fixed order."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    s = _Suite(run)
    for step in QUICK if suite == "quick" else FULL:
        getattr(s, step)()
    return s.checks
