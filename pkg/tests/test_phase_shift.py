import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from swave_purity.phase_shift import (
    BreitWigner,
    HardSphere,
    SquareWell,
    Tabulated,
    TabulatedFormatError,
    ZeroRange,
    cross_section,
    f0,
    finite_difference_derivs,
    load_tabulated,
    resonant_depths,
    theta,
    theta_derivs,
)

from helpers import ConstantPhase


# ------------------------------------------------------------------ theta


def test_hard_sphere_linear():
    assert theta(HardSphere(1.0), 0.5) == -0.5


def test_zero_range_slope_at_origin():
    a = 2.5
    for k in (1e-3, 1e-4, 1e-5):
        assert theta(ZeroRange(a), k) / k == pytest.approx(-a, rel=(k * a) ** 2)


@pytest.mark.parametrize("model", [HardSphere(1.0), ZeroRange(1.0), SquareWell(1.0, 1.0), BreitWigner(0.5, 0.1)])
@pytest.mark.parametrize("k", [0.0, -1.0, math.nan])
def test_nonpositive_k_rejected(model, k):
    with pytest.raises(ValueError):
        theta(model, k)


@pytest.mark.parametrize(
    "factory",
    [
        lambda: HardSphere(0.0),
        lambda: HardSphere(-1.0),
        lambda: SquareWell(1.0, 0.0),
        lambda: SquareWell(-1.0, 1.0),
        lambda: ZeroRange(math.inf),
        lambda: BreitWigner(0.5, 0.0),
        lambda: BreitWigner(0.5, -0.1),
    ],
)
def test_invalid_models_rejected(factory):
    with pytest.raises(ValueError):
        factory()


def radial_ode_phase(V0, b, k, r_end_extra=3.0):
    """Phase shift from integrating u'' = (2 V(r) - k^2) u outward (mod pi)."""
    kappa_sq = k * k + 2.0 * V0

    def inside(r, y):
        return [y[1], -kappa_sq * y[0]]

    def outside(r, y):
        return [y[1], -k * k * y[0]]

    opts = dict(method="DOP853", rtol=1e-12, atol=1e-14)
    s1 = solve_ivp(inside, (0.0, b), [0.0, 1.0], **opts)
    r_end = b + r_end_extra / k
    s2 = solve_ivp(outside, (b, r_end), s1.y[:, -1], **opts)
    u, du = s2.y[:, -1]
    # u ~ sin(k r + delta) beyond the well
    return math.atan2(k * u, du) - k * r_end


def mod_pi_distance(a, b):
    d = (a - b) % math.pi
    return min(d, math.pi - d)


@pytest.mark.parametrize("V0,b", [(0.5, 1.0), (3.0, 2.0), (20.6, 5.0)])
def test_square_well_matches_radial_equation(V0, b):
    model = SquareWell(V0, b)
    for k in np.linspace(0.05, 3.0, 20):
        assert mod_pi_distance(theta(model, k), radial_ode_phase(V0, b, k)) < 1e-6


def test_square_well_vanishes_at_threshold():
    # no Levinson offset: theta -> 0 as k -> 0 away from zero-energy resonances
    for V0, b in [(0.5, 1.0), (3.0, 2.0), (20.6, 5.0)]:
        assert abs(theta(SquareWell(V0, b), 1e-6)) < 1e-4


def test_square_well_zero_depth_is_free():
    np.testing.assert_allclose(SquareWell(0.0, 2.0).theta(np.linspace(0.1, 3, 30)), 0.0, atol=1e-14)


@pytest.mark.parametrize(
    "model",
    [SquareWell(20.6344, 5.0), SquareWell(3.0, 2.0), BreitWigner(0.5, 0.02, 0.3), ZeroRange(-3.0), HardSphere(2.0)],
)
def test_continuity_on_dense_grid(model):
    k = np.linspace(0.01, 4.0, 20001)
    th = model.theta(k)
    assert np.all(np.isfinite(th))
    jumps = np.abs(np.diff(th))
    # local slope from the neighbouring intervals
    local = np.maximum(np.r_[jumps[1:], jumps[-1]], np.r_[jumps[0], jumps[:-1]])
    assert np.all(jumps <= 10.0 * local + 1e-12)
    assert jumps.max() < 0.5


def test_breit_wigner_passes_through_half_pi():
    model = BreitWigner(Er=0.5, width=0.1)
    assert theta(model, 1.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert theta(model, 0.5) < math.pi / 2 < theta(model, 1.5)


# ------------------------------------------------------------ derivatives


def test_hard_sphere_derivatives():
    for k in (0.1, 1.0, 7.0):
        assert theta_derivs(HardSphere(2.0), k) == (-2 * k, -2.0, 0.0)


def test_zero_range_derivatives():
    th, d1, d2 = theta_derivs(ZeroRange(1.0), 1.0)
    assert th == pytest.approx(-math.pi / 4)
    assert d1 == pytest.approx(-0.5, rel=1e-15)
    assert d2 == pytest.approx(0.5, rel=1e-15)


def test_hard_sphere_finite_difference_agrees():
    model = HardSphere(1.7)
    for k in (0.05, 1.0, 4.0):
        d1, d2 = finite_difference_derivs(model, k)
        assert abs(d1 + 1.7) <= 1e-8
        assert abs(d2) <= 1e-5


def table_model(k_lo=0.2, k_hi=3.0, n=400):
    k = np.linspace(k_lo, k_hi, n)
    return Tabulated(tuple(k), tuple(np.sin(k) - 0.3 * k * k))


@pytest.mark.parametrize(
    "model,k",
    [
        (ZeroRange(1.3), 0.7),
        (ZeroRange(-4.0), 1.1),
        (BreitWigner(0.5, 0.1, 0.2), 0.9),
        (BreitWigner(0.5, 0.3), 1.0),
        (table_model(), 1.3),
    ],
)
def test_analytic_and_finite_difference_derivatives_agree(model, k):
    a1, a2 = model.analytic_derivs(k)
    f1, f2 = finite_difference_derivs(model, k)
    assert f1 == pytest.approx(float(a1), rel=1e-6)
    assert f2 == pytest.approx(float(a2), rel=1e-4)


def test_tabulated_spline_derivatives_close_to_truth():
    model = table_model()
    th, d1, d2 = theta_derivs(model, 1.3)
    assert th == pytest.approx(math.sin(1.3) - 0.3 * 1.69, abs=1e-9)
    assert d1 == pytest.approx(math.cos(1.3) - 0.6 * 1.3, abs=1e-6)
    assert d2 == pytest.approx(-math.sin(1.3) - 0.6, abs=1e-3)


def test_finite_difference_rejects_k_near_zero():
    with pytest.raises(ValueError):
        finite_difference_derivs(HardSphere(1.0), 5e-7)


# --------------------------------------------------- amplitude and sigma


def test_f0_zero_phase():
    assert f0(ConstantPhase(0.0), 1.3) == 0


def test_f0_unitarity_maximum():
    k = 0.7
    value = f0(ConstantPhase(math.pi / 2), k)
    assert value.real == pytest.approx(0.0, abs=1e-16)
    assert value.imag == pytest.approx(1 / k, rel=1e-15)


def test_f0_hard_sphere_low_energy_limit():
    b = 1.5
    assert f0(HardSphere(b), 1e-4 / b).real == pytest.approx(-b, rel=1e-6)


def test_f0_matches_definition():
    k = np.linspace(0.1, 3, 50)
    model = SquareWell(4.0, 1.5)
    expected = (np.exp(2j * model.theta(k)) - 1) / (2j * k)
    np.testing.assert_allclose(f0(model, k), expected, rtol=1e-12, atol=1e-15)


def test_cross_section_limits():
    k = 0.8
    assert cross_section(ConstantPhase(math.pi / 2), k) == pytest.approx(4 * math.pi / k**2, rel=1e-15)
    assert cross_section(ConstantPhase(0.0), k) == 0.0
    assert cross_section(HardSphere(0.5), 1e-6) == pytest.approx(4 * math.pi * 0.25, rel=1e-9)


models = st.one_of(
    st.floats(0.01, 10.0).map(HardSphere),
    st.floats(-20.0, 20.0).map(ZeroRange),
    st.builds(SquareWell, st.floats(0.0, 40.0), st.floats(0.05, 10.0)),
    st.builds(BreitWigner, st.floats(0.0, 5.0), st.floats(1e-3, 2.0), st.floats(-3.0, 3.0)),
)


@settings(max_examples=300, deadline=None)
@given(models, st.floats(1e-3, 10.0))
def test_unitarity(model, k):
    amp = f0(model, k)
    assert abs(amp) <= (1 + 1e-12) / k
    assert abs(amp.imag - k * abs(amp) ** 2) <= 1e-12 * max(1.0, 1 / k)
    assert cross_section(model, k) <= 4 * math.pi / k**2 * (1 + 1e-12)


# -------------------------------------------------------------- resonance


def test_resonant_depths_give_half_pi():
    depths = resonant_depths(1.0, 5.0, 25.0)
    assert len(depths) >= 5
    assert depths == sorted(depths)
    for v in depths:
        assert math.cos(theta(SquareWell(v, 5.0), 1.0)) == pytest.approx(0.0, abs=1e-9)
    assert depths[-2:] == pytest.approx([20.6344, 24.9698], abs=1e-3)


# -------------------------------------------------------------- tabulated


def write(tmp_path, text):
    path = tmp_path / "theta.txt"
    path.write_text(text, encoding="utf-8")
    return path


def test_load_tabulated(tmp_path):
    path = write(tmp_path, "# k theta\n0.5 0.1\n1.0 0.2  # inline\n\n1.5 0.25\n2.0 0.27\n")
    model = load_tabulated(path)
    assert model.k_grid == (0.5, 1.0, 1.5, 2.0)
    assert theta(model, 1.0) == pytest.approx(0.2, abs=1e-15)
    with pytest.raises(ValueError):
        theta(model, 2.5)


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("0.5 0.1\n1.0 0.2\n1.5\n2.0 0.3\n", 3, "2 columns"),
        ("0.5 0.1\n1.0 abc\n1.5 0.2\n2.0 0.3\n", 2, "non-numeric"),
        ("0.5 0.1\n1.0 0.2\n0.9 0.2\n2.0 0.3\n", 3, "ascending"),
        ("# header\n-0.5 0.1\n1.0 0.2\n1.5 0.2\n2.0 0.3\n", 2, "k must be > 0"),
        ("0.5 0.1\n1.0 nan\n1.5 0.2\n2.0 0.3\n", 2, "non-finite"),
        ("0.5 0.1\n1.0 0.2\n1.5 0.2\n", 0, "at least 4"),
    ],
)
def test_load_tabulated_errors_name_the_line(tmp_path, text, line, fragment):
    path = write(tmp_path, text)
    with pytest.raises(TabulatedFormatError) as info:
        load_tabulated(path)
    assert info.value.line == line
    assert fragment in str(info.value)
    if line:
        assert f"{path}:{line}:" in str(info.value)


def test_load_tabulated_missing_file(tmp_path):
    with pytest.raises(TabulatedFormatError):
        load_tabulated(tmp_path / "absent.txt")


def test_tabulated_validation():
    with pytest.raises(ValueError):
        Tabulated((1.0, 2.0, 3.0), (0.0, 0.1, 0.2))
    with pytest.raises(ValueError):
        Tabulated((1.0, 2.0, 2.0, 3.0), (0.0, 0.1, 0.2, 0.3))
