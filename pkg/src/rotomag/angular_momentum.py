"""Angular-momentum matrices, y-rotations and orbit-spin product embeddings.

All matrices are in units of hbar, in the standard |j, m> basis ordered by
descending magnetic quantum number m = j, j-1, ..., -j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

ComplexMatrix = NDArray[np.complex128]

UNIT_TOL = 1e-12


def hermitian_exp(gen: ComplexMatrix, coeff: complex) -> ComplexMatrix:
    """Return exp(coeff * gen) for Hermitian ``gen`` via its eigendecomposition."""
    evals, evecs = np.linalg.eigh(gen)
    return (evecs * np.exp(coeff * evals)) @ evecs.conj().T


@dataclass(frozen=True)
class AngularMomentumRep:
    """Spin-j representation with j = two_j / 2."""

    two_j: int
    jx: ComplexMatrix = field(repr=False)
    jy: ComplexMatrix = field(repr=False)
    jz: ComplexMatrix = field(repr=False)

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def m_values(self) -> NDArray[np.float64]:
        """Magnetic quantum numbers in basis order (descending)."""
        return self.j - np.arange(self.dim)

    def ops(self) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
        return self.jx, self.jy, self.jz

    def index_of(self, m: float) -> int:
        """Basis index of magnetic quantum number ``m``."""
        k = self.j - m
        idx = int(round(k))
        if abs(k - idx) > 1e-9 or not 0 <= idx < self.dim:
            raise ValueError(f"m={m} is not a valid projection for j={self.j}")
        return idx


def build_rep(two_j: int) -> AngularMomentumRep:
    """Build jx, jy, jz for j = two_j/2 from the ladder-operator matrix elements.

    <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); with descending order J+ sits on the
    first superdiagonal.
    """
    if two_j < 0 or int(two_j) != two_j:
        raise ValueError(f"two_j must be a nonnegative integer, got {two_j!r}")
    two_j = int(two_j)
    j = two_j / 2
    dim = two_j + 1
    m = j - np.arange(dim)
    # column k holds m[k]; J+ maps it to row k-1 (m+1)
    lower_m = m[1:]
    jplus = np.diag(np.sqrt(j * (j + 1) - lower_m * (lower_m + 1)), k=1).astype(np.complex128)
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / 2j
    jz = np.diag(m).astype(np.complex128)
    for mat in (jx, jy, jz):
        mat.setflags(write=False)
    return AngularMomentumRep(two_j=two_j, jx=jx, jy=jy, jz=jz)


def rotation_about_y(rep: AngularMomentumRep, theta: float) -> NDArray[np.float64]:
    """Return exp(-i theta jy), whose entries are the Wigner small-d functions.

    Entry [row m', col m] equals d^j_{m'm}(theta). ``jy`` is purely imaginary
    in this basis, so the result is real orthogonal and returned as real.
    """
    rot = hermitian_exp(rep.jy, -1j * theta)
    return np.ascontiguousarray(rot.real)


@dataclass(frozen=True)
class ProductRep:
    """Orbit (x) spin product space, orbital index major and spin index minor."""

    l_rep: AngularMomentumRep
    s_rep: AngularMomentumRep
    Lx: ComplexMatrix = field(repr=False)
    Ly: ComplexMatrix = field(repr=False)
    Lz: ComplexMatrix = field(repr=False)
    Sx: ComplexMatrix = field(repr=False)
    Sy: ComplexMatrix = field(repr=False)
    Sz: ComplexMatrix = field(repr=False)

    @property
    def dim(self) -> int:
        return self.l_rep.dim * self.s_rep.dim

    @property
    def Jz(self) -> ComplexMatrix:
        return self.Lz + self.Sz

    @property
    def L(self) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
        return self.Lx, self.Ly, self.Lz

    @property
    def S(self) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
        return self.Sx, self.Sy, self.Sz

    @property
    def labels(self) -> list[tuple[int, float]]:
        """(m, m_s) for every product basis vector, in basis order."""
        return [
            (int(round(m)), float(ms))
            for m in self.l_rep.m_values
            for ms in self.s_rep.m_values
        ]

    def basis_index(self, m: float, m_s: float) -> int:
        return self.l_rep.index_of(m) * self.s_rep.dim + self.s_rep.index_of(m_s)

    def l_dot_s(self) -> ComplexMatrix:
        return self.Lx @ self.Sx + self.Ly @ self.Sy + self.Lz @ self.Sz


def tensor_embed(l_rep: AngularMomentumRep, s_rep: AngularMomentumRep) -> ProductRep:
    eye_l = np.eye(l_rep.dim)
    eye_s = np.eye(s_rep.dim)
    return ProductRep(
        l_rep=l_rep,
        s_rep=s_rep,
        Lx=np.kron(l_rep.jx, eye_s),
        Ly=np.kron(l_rep.jy, eye_s),
        Lz=np.kron(l_rep.jz, eye_s),
        Sx=np.kron(eye_l, s_rep.jx),
        Sy=np.kron(eye_l, s_rep.jy),
        Sz=np.kron(eye_l, s_rep.jz),
    )


def product_rotation(basis: ProductRep, theta_l: float, theta_s: float) -> NDArray[np.float64]:
    """exp(-i theta_l l_y - i theta_s s_y) on the product space."""
    return np.kron(rotation_about_y(basis.l_rep, theta_l), rotation_about_y(basis.s_rep, theta_s))


def component_along(ops, n) -> ComplexMatrix:
    """Return n . (Jx, Jy, Jz) for a unit 3-vector ``n``."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {n.shape}")
    norm = float(np.linalg.norm(n))
    if abs(norm - 1.0) > UNIT_TOL:
        raise ValueError(f"direction must be a unit vector, |n| = {norm!r}")
    jx, jy, jz = ops
    return n[0] * jx + n[1] * jy + n[2] * jz


def vector_dot(ops, v) -> ComplexMatrix:
    """v . (Jx, Jy, Jz) for an arbitrary (not necessarily unit) 3-vector."""
    jx, jy, jz = ops
    return v[0] * jx + v[1] * jy + v[2] * jz
