import math

import numpy as np
import pytest
from hypothesis import given
from scipy.integrate import trapezoid
from hypothesis import strategies as st

from oracles import laguerre_sum
from rotomag.landau import (
    LandauState,
    corrected_energies_C,
    fd_residual,
    landau_energies,
    landau_overlap,
    landau_wavefunction,
    laguerre,
    orbital_l_expectation,
)
from rotomag.scenario import RotatingField, ScenarioC

W_S_SLOW = 1.0050373127401788


def test_laguerre_examples():
    assert laguerre(0, 2.5, 3.7) == 1.0
    assert laguerre(1, 1, 0.5) == pytest.approx(1.5, abs=1e-15)
    assert laguerre(2, 0, 2.0) == pytest.approx(-1.0, abs=1e-14)


@given(st.integers(0, 8), st.floats(0, 5), st.floats(0, 20))
def test_laguerre_matches_explicit_sum(n, a, x):
    ref = laguerre_sum(n, a, x)
    assert laguerre(n, a, x) == pytest.approx(ref, rel=1e-9, abs=1e-9 * max(1.0, x) ** n)


def test_laguerre_vectorized():
    x = np.linspace(0, 4, 7)
    assert np.allclose(laguerre(3, 1, x), [laguerre_sum(3, 1, v) for v in x])


def test_normalization_constant():
    st0 = LandauState(2, 0, -3, 0.5, 1.7)
    assert st0.normalization == pytest.approx(1.7 * math.sqrt(2 * 2 / math.gamma(6)), rel=1e-14)


def test_wavefunction_at_origin(slow_c):
    st0 = LandauState.for_scenario(slow_c, 0, 0, 0, 0.5)
    val = landau_wavefunction(st0, slow_c, (0.0, 0.0, 0.0))
    assert val == pytest.approx(0.5641895835477563, abs=1e-15)
    assert abs(val - math.sqrt(1 / math.pi)) < 1e-15


def test_wavefunction_domain(slow_c):
    st0 = LandauState.for_scenario(slow_c, 0, 0, 0, 0.5)
    for bad in [(-0.1, 0, 0), (0, 2 * math.pi, 0), (0, 0, 1.0)]:
        with pytest.raises(ValueError):
            landau_wavefunction(st0, slow_c, bad)


def test_wavefunction_phase_factors():
    sc = ScenarioC(RotatingField(0.0, 0.0), 1, 2.0, 1.0, box_d=3.0)
    st0 = LandauState.for_scenario(sc, 1, 2, -1, 0.5)
    a = landau_wavefunction(st0, sc, (0.4, 0.0, 0.0))
    b = landau_wavefunction(st0, sc, (0.4, 0.3, 0.5))
    assert b / a == pytest.approx(np.exp(-0.3j + 2j * math.pi * 2 * 0.5 / 3.0), abs=1e-13)


STATES = [(n, m) for n in range(3) for m in range(-3, 4)]


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.3])
def test_normalization_quadrature(alpha):
    for n, m in STATES:
        st0 = LandauState(n, 0, m, 0.5, alpha)
        assert abs(landau_overlap(st0, st0) - 1) <= 1e-8


def test_orthogonality():
    a = LandauState(0, 0, 0, 0.5, 1.0)
    b = LandauState(1, 0, 0, 0.5, 1.0)
    assert abs(landau_overlap(a, b)) <= 1e-8
    for m in range(-2, 3):
        for n1 in range(3):
            for n2 in range(n1 + 1, 4):
                ov = landau_overlap(LandauState(n1, 0, m, 0.5, 1.3), LandauState(n2, 0, m, 0.5, 1.3))
                assert abs(ov) <= 1e-8


def test_overlap_with_trapezoid_oracle():
    # independent fine trapezoid rule on the explicit wavefunction
    st0 = LandauState(2, 0, 1, 0.5, 1.0)
    rho = np.linspace(0, 12, 200001)
    f = np.abs(st0.radial(rho)) ** 2 * rho
    assert abs(trapezoid(f, rho) - 1) < 1e-8


def test_energy_example(slow_c):
    assert landau_energies(slow_c, 0, 0, 0, 0.5) == pytest.approx(1 - 0.5 * W_S_SLOW, abs=1e-12)
    assert landau_energies(slow_c, 0, 0, 0, 0.5) == pytest.approx(0.4974813436299106, abs=1e-13)


def test_corrected_energy_example(slow_c):
    val = corrected_energies_C(slow_c, 0, 0, 1, 0.5)
    assert val == pytest.approx(2 - 1.005 - 0.5 * W_S_SLOW, abs=1e-12)
    assert val == pytest.approx(0.4924813436299107, abs=1e-13)


def test_level_degeneracy(slow_c):
    assert landau_energies(slow_c, 0, 0, 1, 0.5) == pytest.approx(landau_energies(slow_c, 0, 0, 0, 0.5))
    # with eps(q) = +1 every m >= 0 collapses onto n_rho; m = -1 sits with n_rho + 1
    assert landau_energies(slow_c, 0, 0, -1, 0.5) == pytest.approx(landau_energies(slow_c, 1, 0, 0, 0.5))
    levels = {}
    for n in range(3):
        for m in range(-2, 3):
            e = round(landau_energies(slow_c, n, 0, m, 0.5), 10)
            levels.setdefault(e, []).append((n, m))
    assert any(len(v) > 1 for v in levels.values())


@given(st.integers(0, 3), st.integers(-3, 3), st.integers(-3, 3), st.floats(0, 2), st.floats(0, math.pi))
def test_energy_properties(n, nz, m, w, tb):
    sc = ScenarioC(RotatingField(w, tb), 3, 1.4, 0.8, sign_q=-1, box_d=2.0)
    e = landau_energies(sc, n, nz, m, 0.5)
    assert e == landau_energies(sc, n, -nz, m, 0.5)
    diff = corrected_energies_C(sc, n, nz, m, 0.5) - e
    assert diff == pytest.approx(-m * w * math.cos(tb), abs=1e-12)


def test_static_correction_vanishes():
    sc = ScenarioC(RotatingField(0.0, 1.0), 1, 1.0, 1.0)
    assert corrected_energies_C(sc, 1, 1, 2, -0.5) == landau_energies(sc, 1, 1, 2, -0.5)


def test_rejects_bad_spin(slow_c):
    with pytest.raises(ValueError):
        landau_energies(slow_c, 0, 0, 0, 1.5)
    with pytest.raises(ValueError):
        landau_energies(slow_c, 0, 0, 0, 0.0)


@pytest.mark.parametrize("n,m,ms", [(0, 0, 0.5), (1, 1, -0.5), (0, -2, 0.5), (2, 1, 0.5)])
def test_fd_residual_small_and_second_order(slow_c, n, m, ms):
    st0 = LandauState.for_scenario(slow_c, n, 0, m, ms)
    h = 0.02 / slow_c.alpha
    coarse = fd_residual(st0, slow_c, 2 * h)
    fine = fd_residual(st0, slow_c, h)
    assert fine <= 5e-3
    assert 3.0 <= coarse / fine <= 5.0


def test_fd_residual_detects_mismatched_state(slow_c):
    # the right profile in the wrong field (alpha = 2 against omega1 = 1) is not an eigenfunction
    st_bad = LandauState(0, 0, 1, 0.5, 2.0)
    assert fd_residual(st_bad, slow_c, 0.02) > 0.1


@pytest.mark.parametrize("n,nz,m", [(0, 0, 0), (0, 1, 1), (1, -1, -2), (2, 0, 3)])
def test_orbital_l_expectation(slow_c, n, nz, m):
    st0 = LandauState.for_scenario(slow_c, n, nz, m, 0.5)
    l = orbital_l_expectation(st0, slow_c)
    assert np.allclose(l, [0, 0, m], atol=1e-8)
