"""Exact evolution U(t) = W(t) exp(-i H_eff t) without time ordering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular_momentum import ComplexMatrix, ProductRep
from .heff import EigenSystem, check_hermitian, eigensolve_hermitian, build_heff
from .scenario import Scenario


def w_matrix(basis: ProductRep, omega: float, t: float) -> ComplexMatrix:
    """Rotating-frame map W(t) = exp(-i omega t j_z), diagonal in the product basis."""
    jz = np.real(np.diag(basis.Jz))
    return np.diag(np.exp(-1j * omega * t * jz))


def expm_hermitian(mat: ComplexMatrix, t: float) -> ComplexMatrix:
    """exp(-i H t) as V diag(exp(-i E t)) V^H."""
    check_hermitian(mat)
    return _expm_from(eigensolve_hermitian(mat), t)


def _expm_from(system: EigenSystem, t: float) -> ComplexMatrix:
    v = system.states
    return (v * np.exp(-1j * system.energies * t)) @ v.conj().T


@dataclass(frozen=True)
class Propagator:
    """Caches the eigensystem of H_eff; queries at any t are then closed form."""

    scenario: Scenario
    basis: ProductRep
    heff: ComplexMatrix
    system: EigenSystem

    @classmethod
    def from_scenario(cls, sc: Scenario) -> "Propagator":
        h = build_heff(sc)
        return cls(sc, h.basis, h.matrix, eigensolve_hermitian(h.matrix))

    @property
    def omega(self) -> float:
        return self.scenario.field.omega

    def u_eff(self, t: float) -> ComplexMatrix:
        return _expm_from(self.system, t)

    def w(self, t: float) -> ComplexMatrix:
        return w_matrix(self.basis, self.omega, t)

    def __call__(self, t: float) -> ComplexMatrix:
        return u_full(self, t)


def u_full(p: Propagator, t: float) -> ComplexMatrix:
    # W is diagonal: scale rows instead of a dense product
    jz = np.real(np.diag(p.basis.Jz))
    return np.exp(-1j * p.omega * t * jz)[:, None] * p.u_eff(t)
