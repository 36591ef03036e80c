import math

import numpy as np
import pytest

from swave_purity.analytic import epsilon_sq, narrow_limit_I1
from swave_purity.core import BeamGeometry, CollisionConfig
from swave_purity.oracle.quadrature import epsilon_sq_quadrature, gauss_legendre, overlap_I1, radial_support
from swave_purity.phase_shift import BreitWigner, HardSphere, SquareWell, ZeroRange

BASE = CollisionConfig(sigma0=0.01, k0=1.0, r0=10.0)


def test_gauss_legendre_exact_for_polynomials():
    x, w = gauss_legendre(10, -0.5, 2.0)
    assert np.sum(w * x**19) == pytest.approx((2.0**20 - 0.5**20) / 20, rel=1e-13)


def test_radial_support_clamps_at_origin():
    lo, hi = radial_support(CollisionConfig(sigma0=0.2, k0=1.0))
    assert lo == 1e-8
    assert hi == pytest.approx(3.4)


def test_no_scattering_norm_vanishes():
    assert abs(epsilon_sq_quadrature(BASE, ZeroRange(0.0))) <= 1e-15


def test_hard_sphere_norm_matches_closed_form():
    quad = epsilon_sq_quadrature(BASE, HardSphere(1.0))
    assert quad == pytest.approx(epsilon_sq(BASE, HardSphere(1.0)), rel=1e-6)
    # frozen oracle value
    assert quad == pytest.approx(1.4161256756940846e-4, rel=1e-12)


@pytest.mark.parametrize(
    "model", [HardSphere(1.0), ZeroRange(3.0), SquareWell(24.9698, 5.0), BreitWigner(0.5, 0.2, 0.1)]
)
@pytest.mark.parametrize("sigma0", [0.01, 0.05])
def test_norm_self_convergence(model, sigma0):
    cfg = BASE.replace(sigma0=sigma0)
    a = epsilon_sq_quadrature(cfg, model, 200)
    b = epsilon_sq_quadrature(cfg, model, 400)
    assert abs(a - b) <= 1e-10 * abs(b)


def test_narrow_resonance_needs_more_nodes():
    # a resonance narrower than the packet is resolved by raising n
    cfg = BASE.replace(sigma0=0.05)
    model = BreitWigner(0.5, 0.02, 0.1)
    a = epsilon_sq_quadrature(cfg, model, 1600)
    b = epsilon_sq_quadrature(cfg, model, 3200)
    assert abs(a - b) <= 1e-10 * abs(b)


def test_norm_does_not_depend_on_time():
    model = SquareWell(24.9698, 5.0)
    a = epsilon_sq_quadrature(BASE, model)
    b = epsilon_sq_quadrature(BASE.replace(t=1e3), model)
    assert a == pytest.approx(b, rel=1e-12)


def test_narrow_resonance_closed_form_within_one_percent():
    model = SquareWell(24.9698, 5.0)
    quad = epsilon_sq_quadrature(BASE, model)
    assert epsilon_sq(BASE, model) == pytest.approx(quad, rel=1e-2)


# ---------------------------------------------------------------- I1


def test_i1_no_scattering():
    assert overlap_I1(BASE, ZeroRange(0.0)) == 0.0


def test_i1_narrow_limit():
    value = overlap_I1(BASE, HardSphere(1.0))
    assert value == pytest.approx(narrow_limit_I1(BASE), rel=0.05)
    # frozen oracle value; 0.99996 of the narrow limit
    assert value == pytest.approx(4.999822220909744e-05, rel=1e-8)


@pytest.mark.parametrize("r0", [0.0, 10.0, 100.0])
def test_i1_narrow_limit_across_separations(r0):
    cfg = BASE.replace(r0=r0)
    assert overlap_I1(cfg, ZeroRange(0.5)) == pytest.approx(narrow_limit_I1(cfg), rel=0.05)


def test_i1_time_independent():
    model = HardSphere(1.0)
    ref = overlap_I1(BASE, model, t=0.0)
    for t in (1.0, 37.5, 1e3):
        assert overlap_I1(BASE, model, t=t) == pytest.approx(ref, rel=1e-12)


def test_i1_self_convergence():
    model = SquareWell(24.9698, 5.0)
    a = overlap_I1(BASE, model, n_radial=200, n_angular=200)
    b = overlap_I1(BASE, model, n_radial=400, n_angular=400)
    assert abs(a - b) <= 1e-8 * abs(b)


def test_i1_does_not_depend_on_axis():
    model = HardSphere(1.0)
    tilted = BeamGeometry((1 / math.sqrt(3),) * 3)
    assert overlap_I1(BASE, model, tilted) == pytest.approx(overlap_I1(BASE, model), rel=1e-12)
