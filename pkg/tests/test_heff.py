import logging
import math
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from rotomag.angular_momentum import product_rotation, rotation_about_y, vector_dot
from rotomag.heff import (
    NotHermitianError,
    analytic_eigensystem_A,
    analytic_spin_eigensystem_C,
    build_heff_A,
    build_heff_B,
    build_heff_C,
    eigensolve_hermitian,
    match_up_to_subspace,
    max_pair_residual,
    weakfield_l0_states,
)
from rotomag.scenario import (
    DegenerateFrameError,
    RotatingField,
    ScenarioA,
    ScenarioB,
    ScenarioC,
    derive_frame_A,
    derive_frame_C,
    resonance_orders,
)

log = logging.getLogger(__name__)

rates = st.floats(0.1, 3.0)
angles = st.floats(0.05, math.pi - 0.05)


@st.composite
def scenarios_a(draw, max_l=3):
    sc = ScenarioA(
        RotatingField(draw(rates), draw(angles)),
        draw(rates),
        draw(st.integers(0, max_l)),
        draw(st.floats(-2, 2)),
    )
    try:
        derive_frame_A(sc)
    except DegenerateFrameError:
        assume(False)
    return sc


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def test_l0_is_spin_only(resonant_field):
    sc = ScenarioA(resonant_field, 0.8, 0, 0.3)
    h = build_heff_A(sc).matrix
    fr = derive_frame_A(sc)
    assert h.shape == (2, 2)
    assert np.allclose(np.linalg.eigvalsh(h), [0.3 - fr.omega_S / 2, 0.3 + fr.omega_S / 2], atol=1e-13)


def test_resonant_p_shell_spectrum(resonant_a):
    evals = np.linalg.eigvalsh(build_heff_A(resonant_a).matrix)
    expected = sorted(m * 1 + ms * 2 for m, ms in product((-1, 0, 1), (0.5, -0.5)))
    assert expected == [-2, -1, 0, 0, 1, 2]
    assert np.allclose(evals, expected, atol=1e-12)


def test_static_limit_is_lab_zeeman():
    sc = ScenarioA(RotatingField(0.0, 0.9), 1.3, 1, 0.2)
    b = sc.basis
    n0 = sc.field.n0
    lab = 0.2 * np.eye(b.dim) + 1.3 * (vector_dot(b.L, n0) + 2 * vector_dot(b.S, n0))
    assert np.allclose(build_heff_A(sc).matrix, lab, atol=1e-14)


@given(scenarios_a())
def test_heff_equals_h0_minus_omega_jz(sc):
    b = sc.basis
    n0 = sc.field.n0
    h0 = sc.epsilon_nl * np.eye(b.dim) + sc.omega0 * (vector_dot(b.L, n0) + 2 * vector_dot(b.S, n0))
    fr = derive_frame_A(sc)
    frame_form = (
        sc.epsilon_nl * np.eye(b.dim) + fr.omega_L * vector_dot(b.L, fr.n_L) + fr.omega_S * vector_dot(b.S, fr.n_S)
    )
    h = build_heff_A(sc).matrix
    assert np.max(np.abs(h - (h0 - sc.field.omega * b.Jz))) < 1e-12
    assert np.max(np.abs(h - frame_form)) < 1e-12


@given(scenarios_a())
def test_similarity_identity(sc):
    fr = derive_frame_A(sc)
    b = sc.basis
    rot = product_rotation(b, fr.theta_L, fr.theta_S)
    diag = sc.epsilon_nl * np.eye(b.dim) + fr.omega_L * b.Lz + fr.omega_S * b.Sz
    assert np.max(np.abs(build_heff_A(sc).matrix - rot @ diag @ rot.T)) <= 1e-12


def test_analytic_energy_resonant_state(resonant_a):
    system = analytic_eigensystem_A(resonant_a)
    assert system.energies[system.find((1, 0.5))] == pytest.approx(2.0, abs=1e-12)


def test_static_degeneracy():
    w0 = 0.7
    sc = ScenarioA(RotatingField(0.0, 0.4), w0, 1, 0.25)
    system = analytic_eigensystem_A(sc)
    for m, ms in sc.basis.labels:
        assert system.energies[system.find((m, ms))] == pytest.approx(0.25 + w0 * (m + 2 * ms))
    e1 = system.energies[system.find((1, -0.5))]
    e2 = system.energies[system.find((-1, 0.5))]
    assert e1 == pytest.approx(0.25) and e2 == pytest.approx(0.25)


@given(scenarios_a())
def test_analytic_matches_numeric(sc):
    h = build_heff_A(sc).matrix
    analytic = analytic_eigensystem_A(sc)
    numeric = eigensolve_hermitian(h)
    assert np.max(np.abs(analytic.energies - numeric.energies)) <= 1e-10
    assert match_up_to_subspace(analytic, numeric) <= 1e-8
    assert max_pair_residual(h, analytic) <= 1e-10 * max(1.0, np.linalg.norm(h, 2))
    gram = analytic.states.conj().T @ analytic.states
    assert np.max(np.abs(gram - np.eye(len(gram)))) < 1e-12


def test_generic_spectrum_nondegenerate():
    rng = np.random.default_rng(7)
    distinct = total = 0
    for _ in range(200):
        sc = ScenarioA(
            RotatingField(rng.uniform(0.2, 2), rng.uniform(0.1, 3.0)),
            rng.uniform(0.2, 2),
            int(rng.integers(0, 4)),
        )
        try:
            if resonance_orders(sc) is not None:
                continue
            energies = analytic_eigensystem_A(sc).energies
        except DegenerateFrameError:
            continue
        total += 1
        gaps = np.diff(energies)
        if np.all(gaps > 1e-9):
            distinct += 1
        else:
            log.info("level collision at %s (min gap %.2e)", sc, gaps.min())
    assert total > 150
    assert distinct / total >= 0.95


def test_heff_b_reduces_to_a(resonant_field):
    sc = ScenarioB(resonant_field, 1.1, 2, 0.4, 0.0)
    assert np.array_equal(build_heff_B(sc).matrix, build_heff_A(sc.without_spin_orbit()).matrix)
    sc0 = ScenarioB(resonant_field, 1.1, 0, 0.4, 2.5)
    assert np.allclose(build_heff_B(sc0).matrix, build_heff_A(sc0.without_spin_orbit()).matrix, atol=0)


def test_field_free_spin_orbit():
    # l.s = (j(j+1) - l(l+1) - s(s+1)) / 2 -> -1 (j = 1/2, twice), 1/2 (j = 3/2, four times)
    ls = [(j * (j + 1) - 2 - 0.75) / 2 for j in (0.5, 1.5)]
    assert ls == [-1.0, 0.5]
    sc = ScenarioB(RotatingField(0.0, 0.0), 0.0, 1, 0.0, 1.0)
    evals = np.linalg.eigvalsh(build_heff_B(sc).matrix)
    assert np.allclose(evals, [-1, -1, 0.5, 0.5, 0.5, 0.5], atol=1e-13)


def test_weakfield_l0_resonant(resonant_field):
    sc = ScenarioB(resonant_field, math.sqrt(1.5), 0, -0.3, 0.9)
    system = weakfield_l0_states(sc)
    assert system.energies[system.find((0, 0.5))] == pytest.approx(-0.3 + 1.0, abs=1e-12)
    numeric = eigensolve_hermitian(build_heff_B(sc).matrix)
    assert np.max(np.abs(system.energies - numeric.energies)) <= 1e-10
    assert match_up_to_subspace(system, numeric) <= 1e-10


def test_weakfield_l0_static():
    sc = ScenarioB(RotatingField(0.0, 1.2), 0.6, 0, 0.0, 0.3)
    system = weakfield_l0_states(sc)
    r = rotation_about_y(sc.basis.s_rep, 1.2)
    up = system.state(system.find((0, 0.5)))
    assert abs(abs(np.vdot(r[:, 0], up)) - 1) < 1e-12


def test_weakfield_rejects_l1(resonant_field):
    with pytest.raises(ValueError):
        weakfield_l0_states(ScenarioB(resonant_field, 1.0, 1, 0.0, 0.1))


def test_eigensolve_trivial():
    assert np.allclose(eigensolve_hermitian(np.eye(2)).energies, [1, 1])
    assert np.allclose(eigensolve_hermitian(np.array([[0, 1], [1, 0]])).energies, [-1, 1])


@pytest.mark.parametrize("seed", range(5))
def test_eigensolve_reconstruction(seed):
    rng = np.random.default_rng(seed)
    m = random_hermitian(rng, 6)
    system = eigensolve_hermitian(m)
    recon = system.states @ np.diag(system.energies) @ system.states.conj().T
    assert np.linalg.norm(recon - m, 2) <= 1e-10 * np.linalg.norm(m, 2)
    assert np.all(np.diff(system.energies) >= 0)


def test_eigensolve_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eigensolve_hermitian(np.array([[0, 1], [0, 0]]))


@given(st.integers(1, 4), rates, rates, angles, st.sampled_from([1, -1]))
def test_spin_sector_similarity(two_s, w2, w, theta, eps):
    sc = ScenarioC(RotatingField(w, theta), two_s, 1.0, w2, sign_mu=eps)
    try:
        fr = derive_frame_C(sc)
    except DegenerateFrameError:
        assume(False)
    b = sc.basis
    r = rotation_about_y(b.s_rep, fr.theta_S)
    target = r @ (-eps * fr.omega_S * b.Sz) @ r.T
    assert np.max(np.abs(build_heff_C(sc).matrix - target)) <= 1e-12
    system = analytic_spin_eigensystem_C(sc)
    assert max_pair_residual(build_heff_C(sc).matrix, system) < 1e-12
