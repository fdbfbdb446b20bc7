"""Lab-frame Hamiltonian, cyclic-solution phases, precession traces and resonant cycles.

For an eigenstate phi of H_eff with energy E, one period T = 2 pi / omega
returns psi(T) = exp(-i E T - i pi two_s) phi. The dynamic phase is
-E T - 2 pi <j_z>, so the geometric part is -pi two_s + 2 pi <j_z>. All
phases are reported as principal values in (-pi, pi]; unreduced values are
kept alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from .angular_momentum import ComplexMatrix
from .heff import analytic_eigensystem_A, build_heff, eigensystem
from .landau import LandauState, corrected_energies_C, orbital_l_expectation
from .propagator import Propagator, u_full
from .scenario import (
    Scenario,
    ScenarioA,
    ScenarioB,
    ScenarioC,
    derive_frame,
    derive_frame_C,
    resonance_orders,
)

EIGEN_RESIDUAL_TOL = 1e-8
CYCLE_FIDELITY_TOL = 1e-9
CYCLE_PHASE_TOL = 1e-6

Label = tuple


class NotEigenstateError(ValueError):
    """The initial state is not an eigenstate of H_eff, so it need not be cyclic."""


def wrap_phase(x: float) -> float:
    """Principal value in (-pi, pi]."""
    r = math.remainder(x, 2 * math.pi)
    return math.pi if r <= -math.pi else r


def phase_distance(a: float, b: float) -> float:
    """|a - b| reduced mod 2 pi."""
    return abs(wrap_phase(a - b))


class LabHamiltonian:
    """H(t) with the field-independent and field-coupled parts precomputed.

    A: eps I + omega0 (l + 2s).n(t); B adds xi l.s; C (spin sector only):
    -eps(mu) omega2 s.n(t).
    """

    def __init__(self, sc: Scenario):
        self.scenario = sc
        basis = sc.basis
        self.basis = basis
        if isinstance(sc, ScenarioC):
            self.static = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
            coupling = -sc.sign_mu * sc.omega2
            mu = [coupling * s for s in basis.S]
        else:
            self.static = sc.epsilon_nl * np.eye(basis.dim, dtype=np.complex128)
            if isinstance(sc, ScenarioB):
                self.static = self.static + sc.xi_nl * basis.l_dot_s()
            mu = [sc.omega0 * (lop + 2 * sop) for lop, sop in zip(basis.L, basis.S)]
        self.mx, self.my, self.mz = mu
        tb = sc.field.theta_B
        self._sin = math.sin(tb)
        self._axial = self.static + math.cos(tb) * self.mz
        self.omega = sc.field.omega

    def __call__(self, t: float) -> ComplexMatrix:
        wt = self.omega * t
        return self._axial + self._sin * (math.cos(wt) * self.mx + math.sin(wt) * self.my)

    def spectral_norm(self) -> float:
        # H(t) = W H(0) W^H, so the norm is the same at every t
        return float(np.linalg.norm(self(0.0), 2))


def matrix_h_of_t(sc: Scenario, t: float) -> ComplexMatrix:
    return LabHamiltonian(sc)(t)


@dataclass(frozen=True)
class PhaseReport:
    label: Label
    energy: float
    jz_expect: float
    delta: float
    beta: float
    gamma: float
    delta_raw: float
    beta_raw: float
    gamma_raw: float
    gamma_closed_form: Optional[float] = None
    closed_form_exact: bool = True

    @property
    def closed_form_deviation(self) -> Optional[float]:
        if self.gamma_closed_form is None:
            return None
        return phase_distance(self.gamma, self.gamma_closed_form)


def _phase_report(sc: Scenario, label, energy, jz, closed=None, exact=True) -> PhaseReport:
    period = sc.field.period
    delta = -energy * period - math.pi * sc.two_s
    beta = -energy * period - 2 * math.pi * jz
    gamma = delta - beta
    return PhaseReport(
        label=label,
        energy=float(energy),
        jz_expect=float(jz),
        delta=wrap_phase(delta),
        beta=wrap_phase(beta),
        gamma=wrap_phase(gamma),
        delta_raw=delta,
        beta_raw=beta,
        gamma_raw=gamma,
        gamma_closed_form=None if closed is None else wrap_phase(closed),
        closed_form_exact=exact,
    )


def _closed_form(sc: Scenario, label) -> Optional[float]:
    if label is None:
        return None
    frame = derive_frame(sc)
    if isinstance(sc, ScenarioC):
        (m_s,) = label
        return -m_s * frame.Omega_S
    m, m_s = label
    if isinstance(sc, ScenarioB) and sc.l != 0 and sc.xi_nl != 0:
        return None
    return -m * frame.Omega_L - m_s * frame.Omega_S


def resolve_eigenstate(sc: Scenario, label=None, index=None) -> tuple[NDArray, float, Optional[Label]]:
    """Pick an H_eff eigenvector by analytic label or by ascending-energy index."""
    system = eigensystem(sc)
    if label is not None:
        i = system.find(tuple(label))
    elif index is not None:
        i = index
    else:
        raise ValueError("give a label or an eigenindex")
    lab = system.labels[i] if system.labels is not None else None
    return system.state(i), float(system.energies[i]), lab


def cyclic_phase_report(
    sc: Scenario,
    label: Optional[Sequence[float]] = None,
    *,
    index: Optional[int] = None,
    state: Optional[NDArray] = None,
) -> PhaseReport:
    """Total, dynamic and geometric phase over one period for an H_eff eigenstate.

    ``label`` is (m, m_s) for scenarios A/B, (m_s,) for the scenario C spin
    sector, or (n_rho, n_z, m, m_s) for the full scenario C state, whose
    orbital part is first order and flagged as such. An explicit ``state``
    is accepted only if it is an eigenstate of H_eff.
    """
    if isinstance(sc, ScenarioC) and label is not None and len(label) == 4:
        return _landau_phase_report(sc, tuple(label))
    basis = sc.basis
    if state is not None:
        heff = build_heff(sc).matrix
        vec = np.asarray(state, dtype=np.complex128)
        vec = vec / np.linalg.norm(vec)
        energy = float(np.real(vec.conj() @ heff @ vec))
        res = float(np.linalg.norm(heff @ vec - energy * vec))
        if res > EIGEN_RESIDUAL_TOL:
            raise NotEigenstateError(f"initial state is not an H_eff eigenstate (residual {res:.3e})")
        lab = None
    else:
        vec, energy, lab = resolve_eigenstate(sc, label, index)
    jz = float(np.real(vec.conj() @ basis.Jz @ vec))
    return _phase_report(sc, lab if lab is not None else index, energy, jz, _closed_form(sc, lab))


def _landau_phase_report(sc: ScenarioC, label: Label) -> PhaseReport:
    n_rho, n_z, m, m_s = label
    frame = derive_frame_C(sc)
    energy = corrected_energies_C(sc, n_rho, n_z, m, m_s)
    # <l_z> = m cos(theta_B) in the tilted Landau state; the spin part is exact
    jz = m * math.cos(sc.field.theta_B) + m_s * math.cos(frame.theta_S)
    closed = -m * frame.Omega_B - m_s * frame.Omega_S
    return _phase_report(sc, label, energy, jz, closed, exact=False)


def phase_reports(sc: Scenario) -> list[PhaseReport]:
    """One report per H_eff eigenstate, ascending energy."""
    system = eigensystem(sc)
    return [cyclic_phase_report(sc, index=i) for i in range(len(system))]


@dataclass(frozen=True)
class TracePoint:
    t: float
    l: NDArray[np.float64]
    s: NDArray[np.float64]


def _expect(ops, psi) -> NDArray[np.float64]:
    return np.array([float(np.real(psi.conj() @ op @ psi)) for op in ops])


def _rot_y(theta: float) -> NDArray[np.float64]:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def _rot_z(phi: float) -> NDArray[np.float64]:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def angular_momentum_trace(sc: Scenario, label: Sequence[float], times) -> list[TracePoint]:
    """<l>(t) and <s>(t) along the cyclic solution seeded by a labelled eigenstate.

    Values come from the evolved state U(t) phi. In scenario C only the spin
    sector is a matrix; the orbital vector is the quadrature value of <u|l|u>
    carried through the tilt exp(-i theta_B l_y) and the frame rotation W(t),
    which act on the vector operator l as ordinary 3D rotations.
    """
    prop = Propagator.from_scenario(sc)
    basis = sc.basis
    if isinstance(sc, ScenarioC):
        n_rho, n_z, m, m_s = label
        st = LandauState.for_scenario(sc, n_rho, n_z, m, m_s)
        l_body = orbital_l_expectation(st, sc) if m != 0 else np.zeros(3)
        l_tilted = _rot_y(sc.field.theta_B) @ l_body
        phi0, _, _ = resolve_eigenstate(sc, (m_s,))
    else:
        if isinstance(sc, ScenarioB) and sc.l != 0 and sc.xi_nl != 0:
            raise ValueError("labelled traces need analytic eigenstates (l = 0 or xi_nl = 0)")
        phi0, _, _ = resolve_eigenstate(sc, tuple(label))
    out = []
    for t in times:
        psi = u_full(prop, t) @ phi0
        s_vec = _expect(basis.S, psi)
        if isinstance(sc, ScenarioC):
            l_vec = _rot_z(sc.field.omega * t) @ l_tilted
        else:
            l_vec = _expect(basis.L, psi)
        out.append(TracePoint(float(t), l_vec, s_vec))
    return out


def precession_formula(magnitude: float, theta: float, omega: float, t: float) -> NDArray[np.float64]:
    """magnitude * (sin theta cos wt, sin theta sin wt, cos theta)."""
    return magnitude * np.array(
        [math.sin(theta) * math.cos(omega * t), math.sin(theta) * math.sin(omega * t), math.cos(theta)]
    )


@dataclass(frozen=True)
class CycleCheck:
    is_cyclic: bool
    phase: float
    fidelity: float
    resonance: Optional[tuple[int, int]]
    expected_phase: Optional[float]

    @property
    def phase_matches(self) -> Optional[bool]:
        if self.expected_phase is None:
            return None
        return phase_distance(self.phase, self.expected_phase) <= CYCLE_PHASE_TOL


Coefficients = Union[Mapping[tuple, complex], Sequence[complex]]


def superposition_state(sc: ScenarioA, coefficients: Coefficients) -> NDArray[np.complex128]:
    """sum a_{m m_s} phi_{m m_s}; a sequence is taken in product-basis label order."""
    system = analytic_eigensystem_A(sc)
    labels = sc.basis.labels
    if isinstance(coefficients, Mapping):
        amps = [complex(coefficients.get(lab, 0.0)) for lab in labels]
        unknown = set(coefficients) - set(labels)
        if unknown:
            raise ValueError(f"unknown labels {sorted(unknown)}")
    else:
        amps = [complex(a) for a in coefficients]
        if len(amps) != len(labels):
            raise ValueError(f"expected {len(labels)} coefficients, got {len(amps)}")
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps))
    if abs(norm - 1) > 1e-12:
        raise ValueError(f"coefficients must be normalized, |a| = {norm!r}")
    psi = np.zeros(sc.basis.dim, dtype=np.complex128)
    for lab, a in zip(labels, amps):
        psi += a * system.state(system.find(lab))
    return psi


def resonant_cycle_phase(sc: ScenarioA, orders: tuple[int, int]) -> float:
    """Return phase -eps T - (N_S + 1) pi of any superposition within the shell."""
    return wrap_phase(-sc.epsilon_nl * sc.field.period - (orders[1] + 1) * math.pi)


def superposition_cycle_check(sc: ScenarioA, coefficients: Coefficients, tol: float = 1e-9) -> CycleCheck:
    psi0 = superposition_state(sc, coefficients)
    prop = Propagator.from_scenario(sc)
    psi_t = u_full(prop, sc.field.period) @ psi0
    overlap = complex(psi0.conj() @ psi_t)
    fidelity = abs(overlap)
    try:
        orders = resonance_orders(sc, tol)
    except ValueError:
        orders = None
    expected = resonant_cycle_phase(sc, orders) if orders else None
    return CycleCheck(
        is_cyclic=fidelity >= 1 - CYCLE_FIDELITY_TOL,
        phase=wrap_phase(math.atan2(overlap.imag, overlap.real)),
        fidelity=fidelity,
        resonance=orders,
        expected_phase=expected,
    )


def h_expectation_along(sc: Scenario, psi0, times) -> NDArray[np.float64]:
    """<psi(t)|H(t)|psi(t)> with psi(t) from the exact propagator."""
    prop = Propagator.from_scenario(sc)
    ham = LabHamiltonian(sc)
    out = []
    for t in times:
        psi = u_full(prop, t) @ psi0
        out.append(float(np.real(psi.conj() @ ham(t) @ psi)))
    return np.array(out)
