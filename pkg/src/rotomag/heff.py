"""Time-independent effective Hamiltonians in the co-rotating frame and their eigensystems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from .angular_momentum import ComplexMatrix, ProductRep, product_rotation, vector_dot
from .scenario import (
    Scenario,
    ScenarioA,
    ScenarioB,
    ScenarioC,
    derive_frame_A,
    derive_frame_C,
    effective_field_vectors,
)

HERMITIAN_TOL = 1e-10


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class EffectiveHamiltonian:
    matrix: ComplexMatrix
    basis: ProductRep
    scenario: str


@dataclass(frozen=True)
class EigenSystem:
    """Ascending energies with orthonormal eigenvectors stored as columns.

    ``labels`` holds analytic quantum numbers per column when known:
    (m, m_s) for scenarios A/B and (m_s,) for the scenario C spin sector.
    """

    energies: NDArray[np.float64]
    states: ComplexMatrix
    labels: Optional[tuple[tuple, ...]] = None

    def __len__(self) -> int:
        return len(self.energies)

    def state(self, i: int) -> NDArray[np.complex128]:
        return self.states[:, i]

    def find(self, label: tuple) -> int:
        if self.labels is None:
            raise LookupError("eigensystem carries no analytic labels")
        for i, lab in enumerate(self.labels):
            if len(lab) == len(label) and all(abs(a - b) < 1e-9 for a, b in zip(lab, label)):
                return i
        raise LookupError(f"no eigenstate labelled {label!r}")


def check_hermitian(mat: ComplexMatrix, tol: float = HERMITIAN_TOL) -> None:
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {mat.shape}")
    dev = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if dev > tol * max(1.0, float(np.max(np.abs(mat)))):
        raise NotHermitianError(f"matrix is not Hermitian (max |M - M^H| = {dev:.3e})")


def eigensolve_hermitian(mat: ComplexMatrix) -> EigenSystem:
    check_hermitian(mat)
    mat = np.asarray(mat, dtype=np.complex128)
    energies, states = np.linalg.eigh((mat + mat.conj().T) / 2)
    return EigenSystem(energies=energies, states=states)


def _heff_from_vectors(sc: ScenarioA, basis: ProductRep, orbit_vec, spin_vec) -> ComplexMatrix:
    return (
        sc.epsilon_nl * np.eye(basis.dim, dtype=np.complex128)
        + vector_dot(basis.L, orbit_vec)
        + vector_dot(basis.S, spin_vec)
    )


def build_heff_A(sc: ScenarioA) -> EffectiveHamiltonian:
    """epsilon_nl + omega_L l.n_L + omega_S s.n_S on the (2l+1) x 2 product basis.

    Built from the vectors omega_L n_L = omega0 n0 - omega z and
    omega_S n_S = 2 omega0 n0 - omega z, which stay well defined where a tilt
    angle does not.
    """
    basis = sc.basis
    orbit_vec, spin_vec = effective_field_vectors(sc)
    return EffectiveHamiltonian(_heff_from_vectors(sc, basis, orbit_vec, spin_vec), basis, "A")


def build_heff_B(sc: ScenarioB) -> EffectiveHamiltonian:
    base = build_heff_A(sc)
    mat = base.matrix + sc.xi_nl * base.basis.l_dot_s()
    return EffectiveHamiltonian(mat, base.basis, "B")


def build_heff_C(sc: ScenarioC) -> EffectiveHamiltonian:
    """Spin sector of the free-particle effective Hamiltonian: -eps(mu) omega_S s.n_S.

    Equals H(0) - omega s_z with H(0) = -eps(mu) omega2 s.n0.
    """
    basis = sc.basis
    spin_vec = -sc.sign_mu * sc.omega2 * sc.field.n0 - np.array([0.0, 0.0, sc.field.omega])
    return EffectiveHamiltonian(vector_dot(basis.S, spin_vec), basis, "C")


def build_heff(sc: Scenario) -> EffectiveHamiltonian:
    if isinstance(sc, ScenarioC):
        return build_heff_C(sc)
    if isinstance(sc, ScenarioB):
        return build_heff_B(sc)
    return build_heff_A(sc)


def _sorted_system(energies, states, labels) -> EigenSystem:
    order = np.argsort(energies, kind="stable")
    return EigenSystem(
        energies=np.asarray(energies, dtype=float)[order],
        states=np.asarray(states)[:, order],
        labels=tuple(labels[i] for i in order),
    )


def analytic_eigensystem_A(sc: ScenarioA) -> EigenSystem:
    """Rotated product states exp(-i theta_L l_y - i theta_S s_y) |m, m_s>.

    Energies epsilon_nl + m omega_L + m_s omega_S. Raises DegenerateFrameError
    at the points where a tilt angle is undefined.
    """
    frame = derive_frame_A(sc)
    basis = sc.basis
    rot = product_rotation(basis, frame.theta_L, frame.theta_S).astype(np.complex128)
    labels = basis.labels
    energies = [sc.epsilon_nl + m * frame.omega_L + ms * frame.omega_S for m, ms in labels]
    return _sorted_system(energies, rot, labels)


def weakfield_l0_states(sc: ScenarioB) -> EigenSystem:
    """Exact eigenstates for an s shell: the spin rotated onto n_S, energies eps + m_s omega_S."""
    if sc.l != 0:
        raise ValueError(f"closed-form weak-field eigenstates need l = 0, got l = {sc.l}")
    return analytic_eigensystem_A(sc)


def analytic_spin_eigensystem_C(sc: ScenarioC) -> EigenSystem:
    """exp(-i theta_S s_y)|m_s> with energies -eps(mu) m_s omega_S, labelled (m_s,)."""
    frame = derive_frame_C(sc)
    basis = sc.basis
    rot = product_rotation(basis, 0.0, frame.theta_S).astype(np.complex128)
    labels = [(ms,) for _, ms in basis.labels]
    energies = [-sc.sign_mu * ms * frame.omega_S for (ms,) in labels]
    return _sorted_system(energies, rot, labels)


def eigensystem(sc: Scenario) -> EigenSystem:
    """Analytic eigensystem where one exists, numerical eigensolve otherwise."""
    if isinstance(sc, ScenarioC):
        return analytic_spin_eigensystem_C(sc)
    if isinstance(sc, ScenarioB) and (sc.l != 0 and sc.xi_nl != 0):
        return eigensolve_hermitian(build_heff_B(sc).matrix)
    return analytic_eigensystem_A(sc)


def residual(mat: ComplexMatrix, vec, energy: float) -> float:
    return float(np.linalg.norm(mat @ vec - energy * vec))


def max_pair_residual(mat: ComplexMatrix, system: EigenSystem) -> float:
    return max(residual(mat, system.state(i), e) for i, e in enumerate(system.energies))


def match_up_to_subspace(a: EigenSystem, b: EigenSystem, tol: float = 1e-8) -> float:
    """Largest deviation between the spectral projectors of two eigensystems.

    Comparing projectors onto each eigenvalue cluster makes the check blind to
    column phases and to rotations inside degenerate subspaces.
    """
    ea, eb = np.asarray(a.energies), np.asarray(b.energies)
    if ea.shape != eb.shape:
        raise ValueError("eigensystems have different sizes")
    worst = float(np.max(np.abs(ea - eb))) if ea.size else 0.0
    for lo, hi in _clusters(ea, tol):
        pa = a.states[:, lo:hi] @ a.states[:, lo:hi].conj().T
        pb = b.states[:, lo:hi] @ b.states[:, lo:hi].conj().T
        worst = max(worst, float(np.max(np.abs(pa - pb))))
    return worst


def _clusters(energies: Sequence[float], tol: float) -> list[tuple[int, int]]:
    out = []
    start = 0
    for k in range(1, len(energies) + 1):
        if k == len(energies) or energies[k] - energies[k - 1] > tol:
            out.append((start, k))
            start = k
    return out
