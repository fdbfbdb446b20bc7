import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import ladder_element, series_expm, wigner_small_d
from rotomag.angular_momentum import build_rep, component_along, rotation_about_y, tensor_embed


def comm(a, b):
    return a @ b - b @ a


@pytest.mark.parametrize("two_j", range(9))
def test_rep_invariants(two_j):
    rep = build_rep(two_j)
    j = two_j / 2
    assert np.allclose(np.diag(rep.jz).real, j - np.arange(two_j + 1), atol=0)
    assert np.max(np.abs(comm(rep.jx, rep.jy) - 1j * rep.jz)) < 1e-12
    assert np.max(np.abs(comm(rep.jy, rep.jz) - 1j * rep.jx)) < 1e-12
    assert np.max(np.abs(comm(rep.jz, rep.jx) - 1j * rep.jy)) < 1e-12
    casimir = rep.jx @ rep.jx + rep.jy @ rep.jy + rep.jz @ rep.jz
    assert np.max(np.abs(casimir - j * (j + 1) * np.eye(rep.dim))) < 1e-12
    for op in rep.ops():
        assert np.array_equal(op, op.conj().T)


def test_spin_half_jz():
    assert np.array_equal(build_rep(1).jz, np.diag([0.5, -0.5]))


def test_spin_one_jx_element():
    # row m' = 1 (index 0), col m = 0 (index 1)
    rep = build_rep(2)
    expected = ladder_element(2, 0) / 2
    assert expected == pytest.approx(0.7071067811865476, abs=1e-16)
    assert rep.jx[0, 1] == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("two_j", [3, 4, 5])
def test_ladder_elements_match_formula(two_j):
    rep = build_rep(two_j)
    jplus = rep.jx + 1j * rep.jy
    for k in range(1, rep.dim):
        two_m = two_j - 2 * k
        assert jplus[k - 1, k].real == pytest.approx(ladder_element(two_j, two_m), abs=1e-14)


def test_scalar_rep():
    rep = build_rep(0)
    for op in rep.ops():
        assert op.shape == (1, 1) and op[0, 0] == 0


def test_negative_two_j_rejected():
    with pytest.raises(ValueError):
        build_rep(-1)


def test_rotation_zero_is_identity():
    assert np.allclose(rotation_about_y(build_rep(3), 0.0), np.eye(4), atol=1e-15)


def test_spin_half_rotation_pi():
    expected = series_expm(-1j * math.pi * build_rep(1).jy).real
    assert np.allclose(expected, [[0, -1], [1, 0]], atol=1e-14)
    assert np.allclose(rotation_about_y(build_rep(1), math.pi), expected, atol=1e-14)


def test_spin_half_rotation_half_pi():
    r = math.sqrt(2) / 2
    expected = series_expm(-1j * math.pi / 2 * build_rep(1).jy).real
    assert np.allclose(expected, [[r, -r], [r, r]], atol=1e-14)
    assert np.allclose(rotation_about_y(build_rep(1), math.pi / 2), expected, atol=1e-14)


@pytest.mark.parametrize("two_j", range(5))
@pytest.mark.parametrize("beta", [0.3, 1.1, 2.5, math.pi])
def test_rotation_matches_factorial_wigner_d(two_j, beta):
    rot = rotation_about_y(build_rep(two_j), beta)
    for row in range(two_j + 1):
        for col in range(two_j + 1):
            d = wigner_small_d(two_j, two_j - 2 * row, two_j - 2 * col, beta)
            assert rot[row, col] == pytest.approx(d, abs=1e-12)


@given(st.integers(0, 8), st.floats(-7, 7))
def test_rotation_matches_series(two_j, theta):
    rep = build_rep(two_j)
    assert np.max(np.abs(rotation_about_y(rep, theta) - series_expm(-1j * theta * rep.jy))) < 1e-11


@pytest.mark.parametrize("two_j", range(9))
def test_full_turn_sign(two_j):
    rot = rotation_about_y(build_rep(two_j), 2 * math.pi)
    assert np.max(np.abs(rot - (-1) ** two_j * np.eye(two_j + 1))) < 1e-12


@given(st.integers(0, 8), st.floats(-4, 4), st.floats(-4, 4))
def test_rotation_composes(two_j, a, b):
    rep = build_rep(two_j)
    lhs = rotation_about_y(rep, a) @ rotation_about_y(rep, b)
    assert np.max(np.abs(lhs - rotation_about_y(rep, a + b))) < 1e-12


@given(st.integers(0, 4), st.floats(0, math.pi))
def test_rotation_columns_expand_jz_eigenvectors(two_j, theta):
    rep = build_rep(two_j)
    rot = rotation_about_y(rep, theta)
    basis = np.eye(rep.dim)
    for col in range(rep.dim):
        expansion = sum(
            wigner_small_d(two_j, two_j - 2 * row, two_j - 2 * col, theta) * basis[:, row]
            for row in range(rep.dim)
        )
        assert np.allclose(rot @ basis[:, col], expansion, atol=1e-12)


def test_tensor_embed_trivial_orbit():
    prod = tensor_embed(build_rep(0), build_rep(1))
    assert np.array_equal(prod.Jz, np.diag([0.5, -0.5]))


def test_tensor_embed_p_shell():
    prod = tensor_embed(build_rep(2), build_rep(1))
    assert prod.dim == 6
    assert np.array_equal(np.diag(prod.Jz).real, [1.5, 0.5, 0.5, -0.5, -0.5, -1.5])
    assert prod.labels == [(1, 0.5), (1, -0.5), (0, 0.5), (0, -0.5), (-1, 0.5), (-1, -0.5)]


@given(st.integers(0, 4), st.integers(1, 4))
def test_orbit_and_spin_commute(two_l, two_s):
    prod = tensor_embed(build_rep(two_l), build_rep(two_s))
    for lop in prod.L:
        for sop in prod.S:
            assert np.max(np.abs(comm(lop, sop))) < 1e-13
    assert np.array_equal(prod.Jz, prod.Lz + prod.Sz)


def test_component_along_axes():
    rep = build_rep(3)
    assert np.array_equal(component_along(rep.ops(), (0, 0, 1)), rep.jz)
    assert np.array_equal(component_along(rep.ops(), (1, 0, 0)), rep.jx)


@given(st.integers(0, 8), st.floats(0, math.pi))
def test_component_along_is_rotated_jz(two_j, theta):
    rep = build_rep(two_j)
    comp = component_along(rep.ops(), (math.sin(theta), 0, math.cos(theta)))
    r = rotation_about_y(rep, theta)
    assert np.max(np.abs(comp - r @ rep.jz @ r.T)) < 1e-12
    assert np.allclose(comp, comp.conj().T)


def test_component_along_rejects_non_unit():
    with pytest.raises(ValueError):
        component_along(build_rep(1).ops(), (1, 1, 0))
