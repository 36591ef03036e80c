import math

import numpy as np
import pytest
from numpy.polynomial.hermite_e import hermegauss
from hypothesis import given, settings
from hypothesis import strategies as st

from swave_purity.core import (
    BeamGeometry,
    CollisionConfig,
    cm_rel,
    derived_scales,
    factorization_check,
    gaussian_gamma,
    initial_amplitude,
    packet_1,
    packet_2,
    rel_cm,
)
from swave_purity.oracle.quadrature import gauss_legendre

finite = st.floats(-1e3, 1e3, allow_nan=False)
vec3 = st.tuples(finite, finite, finite).map(np.array)


# ---------------------------------------------------------------- config


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(sigma0=0.0, k0=1.0),
        dict(sigma0=-1.0, k0=1.0),
        dict(sigma0=0.1, k0=0.0),
        dict(sigma0=0.1, k0=1.0, r0=-1.0),
        dict(sigma0=0.1, k0=1.0, t=-1.0),
        dict(sigma0=math.nan, k0=1.0),
        dict(sigma0=0.1, k0=math.inf),
    ],
)
def test_config_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        CollisionConfig(**kwargs)


def test_config_ratios():
    cfg = CollisionConfig(sigma0=0.02, k0=2.0, r0=50.0)
    assert cfg.sigma0_over_k0 == pytest.approx(0.01)
    assert cfg.spreading_ratio == pytest.approx(0.02**2 * 50.0 / 4.0)


def test_geometry_requires_unit_axis():
    BeamGeometry((0.0, 0.6, 0.8))
    with pytest.raises(ValueError):
        BeamGeometry((0.0, 0.0, 1.001))


# ------------------------------------------------------------- gaussians


def test_gamma_peak_value():
    assert gaussian_gamma(np.zeros(3), np.zeros(3), 1.0) == pytest.approx((1 / (2 * math.pi)) ** 0.75, rel=1e-15)
    assert gaussian_gamma(np.zeros(3), np.zeros(3), 1.0) == pytest.approx(0.25198, abs=5e-6)


def test_gamma_unit_offset():
    value = gaussian_gamma(np.array([1.0, 0, 0]), np.zeros(3), math.sqrt(2.0))
    assert value == pytest.approx((1 / math.pi) ** 0.75 * math.exp(-0.5), rel=1e-14)
    assert value == pytest.approx(0.25704, abs=1e-5)


@pytest.mark.parametrize("c", [0.0, -1.0])
def test_gamma_rejects_nonpositive_width(c):
    with pytest.raises(ValueError):
        gaussian_gamma(np.zeros(3), np.zeros(3), c)


def tensor_rule(n, centre, half):
    x, w = gauss_legendre(n, -half, half)
    grid = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    weights = np.einsum("i,j,k->ijk", w, w, w).ravel()
    return grid + centre, weights


@pytest.mark.parametrize("c", [0.1, 0.3, 1.0, 3.0, 10.0])
def test_gamma_square_integrates_to_one(c):
    pts, w = tensor_rule(60, np.zeros(3), 10.0 / c)
    g = gaussian_gamma(pts, np.zeros(3), c)
    assert np.sum(w * g**2) == pytest.approx(1.0, abs=1e-8)


# ----------------------------------------------------------- coordinates


def test_cm_rel_symmetric():
    v = np.array([0.3, -1.2, 2.5])
    K, k = cm_rel(v, v)
    np.testing.assert_array_equal(K, 2 * v)
    np.testing.assert_array_equal(k, np.zeros(3))


def test_cm_rel_head_on():
    K, k = cm_rel(np.array([1.0, 0, 0]), np.array([-1.0, 0, 0]))
    np.testing.assert_array_equal(K, np.zeros(3))
    np.testing.assert_array_equal(k, np.array([1.0, 0, 0]))


def test_round_trip_exact_on_dyadic_inputs():
    rng = np.random.default_rng(0)
    k1 = rng.integers(-1000, 1000, size=(200, 3)) / 64.0
    k2 = rng.integers(-1000, 1000, size=(200, 3)) / 64.0
    a, b = rel_cm(*cm_rel(k1, k2))
    np.testing.assert_array_equal(a, k1)
    np.testing.assert_array_equal(b, k2)


@given(vec3, vec3)
def test_round_trip_within_rounding(k1, k2):
    a, b = rel_cm(*cm_rel(k1, k2))
    scale = np.maximum(np.abs(k1), np.abs(k2)) + 1e-300
    assert np.all(np.abs(a - k1) <= 4 * np.finfo(float).eps * scale)
    assert np.all(np.abs(b - k2) <= 4 * np.finfo(float).eps * scale)


# --------------------------------------------------------------- packets


def test_factorization_random_points():
    rng = np.random.default_rng(7)
    cfg = CollisionConfig(sigma0=0.3, k0=1.0, r0=10.0)
    k1 = np.array([0, 0, 1.0]) + 0.5 * rng.standard_normal((100, 3))
    k2 = np.array([0, 0, -1.0]) + 0.5 * rng.standard_normal((100, 3))
    assert factorization_check(k1, k2, cfg) < 1e-12


def test_factorization_tilted_axis():
    rng = np.random.default_rng(8)
    geom = BeamGeometry((0.6, 0.0, 0.8))
    cfg = CollisionConfig(sigma0=0.2, k0=1.5, r0=30.0)
    n = geom.unit
    k1 = cfg.k0 * n + 0.3 * rng.standard_normal((100, 3))
    k2 = -cfg.k0 * n + 0.3 * rng.standard_normal((100, 3))
    assert factorization_check(k1, k2, cfg, geom) < 1e-12


def test_peak_value_is_product_of_gaussian_peaks():
    cfg = CollisionConfig(sigma0=0.1, k0=1.0, r0=5.0)
    n = np.array([0, 0, 1.0])
    value = initial_amplitude(cfg.k0 * n, -cfg.k0 * n, cfg)
    peak = (2.0 / cfg.sigma0**2 / (2 * math.pi)) ** 1.5
    assert abs(value) == pytest.approx(peak, rel=1e-14)
    assert value.imag == pytest.approx(0.0, abs=1e-14 * peak)


def test_propagation_changes_only_the_phase():
    cfg = CollisionConfig(sigma0=0.1, k0=1.0, r0=5.0)
    rng = np.random.default_rng(3)
    k = rng.standard_normal((50, 3))
    for packet in (packet_1, packet_2):
        np.testing.assert_allclose(np.abs(packet(k, cfg, t=37.0)), np.abs(packet(k, cfg)), rtol=1e-13)


def hermite_rule(n, centre, scale):
    """Tensor Gauss-Hermite rule for integrals over R^3 near ``centre``."""
    x, w = hermegauss(n)
    w = w * scale * np.exp(0.5 * x * x)
    grid = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    return centre + scale * grid, np.einsum("i,j,k->ijk", w, w, w).ravel()


def test_initial_state_normalized():
    cfg = CollisionConfig(sigma0=0.2, k0=1.0, r0=10.0)
    n = np.array([0, 0, 1.0])
    k1, w1 = hermite_rule(12, cfg.k0 * n, 0.8 * cfg.sigma0)
    k2, w2 = hermite_rule(12, -cfg.k0 * n, 0.8 * cfg.sigma0)
    amp = initial_amplitude(k1[:, None, :], k2[None, :, :], cfg)
    total = float(np.einsum("i,ij,j->", w1, np.abs(amp) ** 2, w2))
    assert total == pytest.approx(1.0, abs=1e-6)


# ---------------------------------------------------------------- scales


def test_scales_without_spreading():
    s = derived_scales(CollisionConfig(sigma0=0.05, k0=1.0, r0=0.0))
    assert s.gamma_sq == 1.0
    assert s.sigma_c == 0.05
    assert s.t_col == 0.0


def test_scales_gamma_five():
    # sigma0^2 r0 / (2 k0) = 2
    s = derived_scales(CollisionConfig(sigma0=1.0, k0=1.0, r0=4.0))
    assert s.gamma_sq == pytest.approx(5.0, rel=1e-15)


def test_scales_reference_regime():
    s = derived_scales(CollisionConfig(sigma0=0.01, k0=1.0, r0=100.0))
    assert s.gamma_sq == pytest.approx(1.000025, rel=1e-14)
    assert s.t_col == 100.0


@settings(max_examples=200)
@given(
    st.floats(1e-4, 10.0),
    st.floats(1e-3, 10.0),
    st.floats(0.0, 1e4),
)
def test_scales_invariants(sigma0, k0, r0):
    s = derived_scales(CollisionConfig(sigma0=sigma0, k0=k0, r0=r0))
    assert s.gamma_sq >= 1.0
    assert s.sigma_c <= sigma0
    assert s.sigma_c * math.sqrt(s.gamma_sq) == pytest.approx(sigma0, rel=1e-15)
    if r0 == 0:
        assert s.gamma_sq == 1.0 and s.sigma_c == sigma0
