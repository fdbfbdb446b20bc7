"""Landau-level eigenfunctions and spectra for the free charged particle.

The orbital sector is handled analytically: cylindrical Landau states in a
periodic z box of length d, checked by quadrature and by finite-difference
residuals of the z-aligned stationary problem. Units: M = hbar = 1, so the
inverse magnetic length is alpha = sqrt(omega1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .scenario import ScenarioC, derive_frame_C

RHO_MAX_LENGTHS = 12.0
DEFAULT_RADIAL_NODES = 400


def laguerre(n: int, a: float, x: ArrayLike):
    """Generalized Laguerre polynomial L_n^a(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
    return cur if np.ndim(cur) else float(cur)


def _laguerre_deriv(n: int, a: float, x):
    # d/dx L_n^a(x) = -L_{n-1}^{a+1}(x)
    if n == 0:
        return np.zeros_like(np.asarray(x, dtype=float))
    return -np.asarray(laguerre(n - 1, a + 1, x))


@dataclass(frozen=True)
class LandauState:
    n_rho: int
    n_z: int
    m: int
    m_s: float
    alpha: float

    def __post_init__(self):
        if self.n_rho < 0 or int(self.n_rho) != self.n_rho:
            raise ValueError(f"n_rho must be a nonnegative integer, got {self.n_rho!r}")
        if int(self.n_z) != self.n_z or int(self.m) != self.m:
            raise ValueError("n_z and m must be integers")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")

    @classmethod
    def for_scenario(cls, sc: ScenarioC, n_rho: int, n_z: int, m: int, m_s: float) -> "LandauState":
        _check_spin(sc, m_s)
        return cls(n_rho, n_z, m, m_s, sc.alpha)

    @property
    def normalization(self) -> float:
        """N = alpha sqrt(2 n_rho! / Gamma(n_rho + |m| + 1))."""
        am = abs(self.m)
        log_ratio = math.lgamma(self.n_rho + 1) - math.lgamma(self.n_rho + am + 1)
        return self.alpha * math.sqrt(2.0 * math.exp(log_ratio))

    def radial(self, rho: ArrayLike):
        """Radial factor N exp(-y/2) (alpha rho)^|m| L_{n_rho}^{|m|}(y) with y = (alpha rho)^2.

        Valid for negative rho as the analytic continuation, which finite
        differences use as a ghost point across the axis.
        """
        ar = self.alpha * np.asarray(rho, dtype=float)
        y = ar * ar
        am = abs(self.m)
        return self.normalization * np.exp(-y / 2) * ar**am * laguerre(self.n_rho, am, y)

    def radial_deriv(self, rho: ArrayLike):
        a = self.alpha
        ar = a * np.asarray(rho, dtype=float)
        y = ar * ar
        am = abs(self.m)
        lag = laguerre(self.n_rho, am, y)
        dlag = _laguerre_deriv(self.n_rho, am, y)
        powm = ar**am
        dpow = am * a * ar ** (am - 1) if am else 0.0
        return self.normalization * np.exp(-y / 2) * (
            -a * ar * powm * lag + dpow * lag + powm * dlag * 2 * a * ar
        )


def _check_spin(sc: ScenarioC, m_s: float) -> None:
    if abs(m_s) > sc.s + 1e-12:
        raise ValueError(f"|m_s| = {abs(m_s)} exceeds s = {sc.s}")
    k = sc.s - m_s
    if abs(k - round(k)) > 1e-9:
        raise ValueError(f"m_s = {m_s} is not a projection of spin s = {sc.s}")


def _check_qn(sc: ScenarioC, n_rho: int, m_s: float) -> None:
    if n_rho < 0:
        raise ValueError(f"n_rho must be nonnegative, got {n_rho}")
    _check_spin(sc, m_s)


def landau_energies(sc: ScenarioC, n_rho: int, n_z: int, m: int, m_s: float) -> float:
    """Unperturbed level (2 n_rho + |m| + 1) w1 + 2 n_z^2 pi^2 / d^2 - eps(q) m w1 - eps(mu) m_s w_S."""
    _check_qn(sc, n_rho, m_s)
    frame = derive_frame_C(sc)
    w1 = sc.omega1
    return (
        (2 * n_rho + abs(m) + 1) * w1
        + 2 * n_z**2 * math.pi**2 / sc.box_d**2
        - sc.sign_q * m * w1
        - sc.sign_mu * m_s * frame.omega_S
    )


def corrected_energies_C(sc: ScenarioC, n_rho: int, n_z: int, m: int, m_s: float) -> float:
    """First-order level including the -omega l_z correction: shift -m omega cos(theta_B)."""
    base = landau_energies(sc, n_rho, n_z, m, m_s)
    return base - m * sc.field.omega * math.cos(sc.field.theta_B)


def landau_wavefunction(st: LandauState, sc: ScenarioC, point) -> complex:
    """Orbital amplitude u(rho, phi, z); the spin factor is the bare |m_s> vector."""
    rho, phi, z = point
    if rho < 0 or not 0 <= phi < 2 * math.pi or not 0 <= z < sc.box_d:
        raise ValueError(f"point {point!r} outside rho >= 0, 0 <= phi < 2pi, 0 <= z < d")
    ang = np.exp(1j * st.m * phi) / math.sqrt(2 * math.pi)
    zf = np.exp(2j * math.pi * st.n_z * z / sc.box_d) / math.sqrt(sc.box_d)
    return complex(st.radial(rho) * ang * zf)


def radial_nodes(alpha: float, n: int = DEFAULT_RADIAL_NODES) -> tuple[NDArray, NDArray]:
    """Gauss-Legendre nodes and weights mapped onto [0, 12/alpha]."""
    x, w = np.polynomial.legendre.leggauss(n)
    rmax = RHO_MAX_LENGTHS / alpha
    return (x + 1) * rmax / 2, w * rmax / 2


def landau_overlap(a: LandauState, b: LandauState, n_nodes: int = DEFAULT_RADIAL_NODES) -> float:
    """<a|b> over all space; phi and z integrals are exact by orthogonality."""
    if a.m != b.m or a.n_z != b.n_z or a.m_s != b.m_s:
        return 0.0
    rho, w = radial_nodes(a.alpha, n_nodes)
    return float(np.sum(w * rho * a.radial(rho) * b.radial(rho)))


def orbital_l_expectation(
    st: LandauState,
    sc: ScenarioC,
    n_nodes: int = DEFAULT_RADIAL_NODES,
    n_phi: int = 32,
    n_z: int = 16,
) -> NDArray[np.float64]:
    """<u|l|u> by quadrature on a (rho, phi, z) grid.

    Angular and axial derivatives are taken spectrally on the periodic grids,
    the radial one from the Laguerre derivative identity, so nothing about m
    is assumed when applying the operators.
    """
    rho, wr = radial_nodes(st.alpha, n_nodes)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    z = sc.box_d * np.arange(n_z) / n_z
    R, P, Z = np.meshgrid(rho, phi, z, indexing="ij")
    ang = np.exp(1j * st.m * P) / math.sqrt(2 * math.pi)
    zf = np.exp(2j * math.pi * st.n_z * Z / sc.box_d) / math.sqrt(sc.box_d)
    u = st.radial(R) * ang * zf
    du_rho = st.radial_deriv(R) * ang * zf
    du_phi = _spectral_deriv(u, axis=1, length=2 * math.pi)
    du_z = _spectral_deriv(u, axis=2, length=sc.box_d)

    lz_u = -1j * du_phi
    l_plus = np.exp(1j * P) * (Z * du_rho + 1j * Z / R * du_phi - R * du_z)
    l_minus = np.exp(-1j * P) * (-Z * du_rho + 1j * Z / R * du_phi + R * du_z)
    lx_u = (l_plus + l_minus) / 2
    ly_u = (l_plus - l_minus) / 2j

    weight = (wr * rho)[:, None, None] * (2 * math.pi / n_phi) * (sc.box_d / n_z)
    norm = float(np.sum(weight * np.abs(u) ** 2))
    return np.array(
        [float(np.real(np.sum(weight * u.conj() * op))) / norm for op in (lx_u, ly_u, lz_u)]
    )


def _spectral_deriv(f, axis: int, length: float):
    n = f.shape[axis]
    k = 2 * math.pi * np.fft.fftfreq(n, d=length / n)
    shape = [1] * f.ndim
    shape[axis] = n
    return np.fft.ifft(1j * k.reshape(shape) * np.fft.fft(f, axis=axis), axis=axis)


def fd_residual(st: LandauState, sc: ScenarioC, h: float) -> float:
    """Relative residual ||H^z u - E0 u|| / ||u|| with central differences of spacing h.

    H^z = p^2/2 + w1^2 rho^2/2 - eps(q) w1 l_z - eps(mu) w_S s_z. The radial
    grid is cell-centred, rho_j = (j + 1/2) h, with the analytically continued
    profile as ghost point at -h/2. The phi grid uses spacing alpha h radians
    and the periodic z grid spacing close to h. Because u separates, the
    angular and axial stencils act on their 1D samples and the 3D residual
    norm reduces to a radial sum.
    """
    frame = derive_frame_C(sc)
    energy = landau_energies(sc, st.n_rho, st.n_z, st.m, st.m_s)
    rmax = RHO_MAX_LENGTHS / st.alpha
    n_rho = int(math.ceil(rmax / h))
    rho = (np.arange(-1, n_rho + 1) + 0.5) * h
    R = st.radial(rho)

    n_phi = max(int(round(2 * math.pi / (st.alpha * h))), 3)
    dphi = 2 * math.pi / n_phi
    phi_samples = np.exp(1j * st.m * dphi * np.arange(n_phi))
    d2_phi = _stencil_ratio(phi_samples, dphi, second=True)
    d1_phi = _stencil_ratio(phi_samples, dphi, second=False)

    nz = max(int(round(sc.box_d / h)), 3)
    dz = sc.box_d / nz
    z_samples = np.exp(2j * math.pi * st.n_z * dz * np.arange(nz) / sc.box_d)
    d2_z = _stencil_ratio(z_samples, dz, second=True)

    r = rho[1:-1]
    Rc = R[1:-1]
    lap_rho = (R[2:] - 2 * Rc + R[:-2]) / h**2 + (R[2:] - R[:-2]) / (2 * h * r)
    laplacian = lap_rho + d2_phi * Rc / r**2 + d2_z * Rc
    lz = -1j * d1_phi
    hu = (
        -0.5 * laplacian
        + 0.5 * sc.omega1**2 * r**2 * Rc
        - sc.sign_q * sc.omega1 * lz * Rc
        - sc.sign_mu * frame.omega_S * st.m_s * Rc
    )
    res = hu - energy * Rc
    num = np.sum(np.abs(res) ** 2 * r)
    den = np.sum(Rc**2 * r)
    return float(math.sqrt(num / den))


def _stencil_ratio(samples, step: float, second: bool) -> complex:
    # periodic central stencil applied to the samples, divided by the samples
    fwd = np.roll(samples, -1)
    back = np.roll(samples, 1)
    if second:
        applied = (fwd - 2 * samples + back) / step**2
    else:
        applied = (fwd - back) / (2 * step)
    ratio = applied / samples
    if np.ptp(ratio.real) > 1e-9 * max(1.0, abs(ratio[0])) or np.ptp(ratio.imag) > 1e-9 * max(1.0, abs(ratio[0])):
        raise AssertionError("stencil does not act diagonally on the sampled mode")
    return complex(ratio[0])
