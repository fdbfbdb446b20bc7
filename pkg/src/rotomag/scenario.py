"""Physical configurations and the rotating-frame geometry derived from them.

Couplings are given as angular frequencies with hbar = 1 (and M = 1 for the
free charged particle), so field magnitudes, charges and moments never
appear separately.

Scenario A: valence electron in a strong rotating field (no spin-orbit term).
Scenario B: same electron in a weak field, with a shell-constant spin-orbit
    coupling xi_nl * l.s.
Scenario C: free charged particle of arbitrary spin with a magnetic moment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from numpy.typing import NDArray

from .angular_momentum import ProductRep, build_rep, tensor_embed

Vector3 = NDArray[np.float64]

DEFAULT_RESONANCE_TOL = 1e-9


class DegenerateFrameError(ValueError):
    """An effective precession frequency vanishes, leaving its tilt angle undefined."""


@dataclass(frozen=True)
class RotatingField:
    """Field direction precessing about z at polar angle ``theta_B`` with rate ``omega``.

    ``omega = 0`` is accepted as the static-field limit; anything that needs
    the period then raises.
    """

    omega: float
    theta_B: float

    def __post_init__(self):
        if not math.isfinite(self.omega) or self.omega < 0:
            raise ValueError(f"omega must be finite and >= 0, got {self.omega!r}")
        if not 0.0 <= self.theta_B <= math.pi:
            raise ValueError(f"theta_B must lie in [0, pi], got {self.theta_B!r}")

    @property
    def period(self) -> float:
        if self.omega == 0:
            raise ValueError("a static field (omega = 0) has no rotation period")
        return 2 * math.pi / self.omega

    @property
    def n0(self) -> Vector3:
        return field_direction(self, 0.0)


@dataclass(frozen=True)
class ScenarioA:
    field: RotatingField
    omega0: float
    l: int
    epsilon_nl: float = 0.0

    two_s = 1

    def __post_init__(self):
        _check_nonneg("omega0", self.omega0)
        if int(self.l) != self.l or self.l < 0:
            raise ValueError(f"l must be a nonnegative integer, got {self.l!r}")
        if not math.isfinite(self.epsilon_nl):
            raise ValueError("epsilon_nl must be finite")

    @property
    def basis(self) -> ProductRep:
        return product_basis(2 * int(self.l), self.two_s)


@dataclass(frozen=True)
class ScenarioB(ScenarioA):
    xi_nl: float = 0.0

    def __post_init__(self):
        super().__post_init__()
        if not math.isfinite(self.xi_nl):
            raise ValueError("xi_nl must be finite")

    def without_spin_orbit(self) -> ScenarioA:
        return ScenarioA(self.field, self.omega0, self.l, self.epsilon_nl)


@dataclass(frozen=True)
class ScenarioC:
    """Free charged particle; only the spin sector is realized as matrices."""

    field: RotatingField
    two_s: int
    omega1: float
    omega2: float
    sign_q: int = 1
    sign_mu: int = 1
    box_d: float = 1.0

    def __post_init__(self):
        if int(self.two_s) != self.two_s or self.two_s < 1:
            raise ValueError(f"two_s must be a positive integer, got {self.two_s!r}")
        if not math.isfinite(self.omega1) or self.omega1 <= 0:
            raise ValueError(f"omega1 must be > 0, got {self.omega1!r}")
        _check_nonneg("omega2", self.omega2)
        if not (math.isfinite(self.box_d) and self.box_d > 0):
            raise ValueError(f"box_d must be > 0, got {self.box_d!r}")
        for name in ("sign_q", "sign_mu"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1, got {getattr(self, name)!r}")

    @property
    def alpha(self) -> float:
        """Inverse magnetic length sqrt(M omega1 / hbar) with M = hbar = 1."""
        return math.sqrt(self.omega1)

    @property
    def s(self) -> float:
        return self.two_s / 2

    @property
    def basis(self) -> ProductRep:
        return product_basis(0, self.two_s)


Scenario = Union[ScenarioA, ScenarioB, ScenarioC]


def _check_nonneg(name: str, value: float) -> None:
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


@lru_cache(maxsize=None)
def product_basis(two_l: int, two_s: int) -> ProductRep:
    return tensor_embed(build_rep(two_l), build_rep(two_s))


def field_direction(field: RotatingField, t: float) -> Vector3:
    st = math.sin(field.theta_B)
    wt = field.omega * t
    return np.array([st * math.cos(wt), st * math.sin(wt), math.cos(field.theta_B)])


@dataclass(frozen=True)
class DerivedFrame:
    """Effective precession rates, tilt angles and solid angles in the rotating frame.

    The orbital entries are ``None`` for scenario C, where the orbital tilt is
    theta_B itself at first order.
    """

    omega_S: float
    theta_S: float
    Omega_S: float
    Omega_B: float
    omega_L: Optional[float] = None
    theta_L: Optional[float] = None
    Omega_L: Optional[float] = None

    @property
    def n_S(self) -> Vector3:
        return _xz_unit(self.theta_S)

    @property
    def n_L(self) -> Optional[Vector3]:
        return None if self.theta_L is None else _xz_unit(self.theta_L)


def _xz_unit(theta: float) -> Vector3:
    return np.array([math.sin(theta), 0.0, math.cos(theta)])


def solid_angle(theta: float) -> float:
    """Solid angle 2 pi (1 - cos theta) of the cone traced at polar angle theta."""
    return 2 * math.pi * (1 - math.cos(theta))


def _tilt(sin_num: float, cos_num: float, rate: float, what: str) -> float:
    if rate == 0.0:
        raise DegenerateFrameError(f"{what} vanishes; its tilt angle is undefined")
    return math.atan2(sin_num, cos_num)


def effective_field_vectors(sc: ScenarioA) -> tuple[Vector3, Vector3]:
    """Return (omega_L n_L, omega_S n_S) = (omega0 n0 - omega z, 2 omega0 n0 - omega z)."""
    n0 = sc.field.n0
    z = np.array([0.0, 0.0, 1.0])
    return sc.omega0 * n0 - sc.field.omega * z, 2 * sc.omega0 * n0 - sc.field.omega * z


def derive_frame_A(sc: ScenarioA) -> DerivedFrame:
    w0, w, tb = sc.omega0, sc.field.omega, sc.field.theta_B
    cb, sb = math.cos(tb), math.sin(tb)
    # |omega0 n0 - omega z| and |2 omega0 n0 - omega z|; hypot avoids the
    # cancellation in omega0^2 + omega^2 - 2 omega0 omega cos(theta_B)
    omega_L = math.hypot(w0 * sb, w0 * cb - w)
    omega_S = math.hypot(2 * w0 * sb, 2 * w0 * cb - w)
    theta_L = _tilt(w0 * sb, w0 * cb - w, omega_L, "omega_L")
    theta_S = _tilt(2 * w0 * sb, 2 * w0 * cb - w, omega_S, "omega_S")
    return DerivedFrame(
        omega_S=omega_S,
        theta_S=theta_S,
        Omega_S=solid_angle(theta_S),
        Omega_B=solid_angle(tb),
        omega_L=omega_L,
        theta_L=theta_L,
        Omega_L=solid_angle(theta_L),
    )


def derive_frame_C(sc: ScenarioC) -> DerivedFrame:
    w2, w, tb, eps = sc.omega2, sc.field.omega, sc.field.theta_B, sc.sign_mu
    cb, sb = math.cos(tb), math.sin(tb)
    omega_S = math.hypot(w2 * sb, w2 * cb + eps * w)
    theta_S = _tilt(w2 * sb, w2 * cb + eps * w, omega_S, "omega_S")
    return DerivedFrame(
        omega_S=omega_S,
        theta_S=theta_S,
        Omega_S=solid_angle(theta_S),
        Omega_B=solid_angle(tb),
    )


def derive_frame(sc: Scenario) -> DerivedFrame:
    if isinstance(sc, ScenarioC):
        return derive_frame_C(sc)
    return derive_frame_A(sc)


def _near_positive_int(x: float, tol: float) -> Optional[int]:
    n = round(x)
    if n >= 1 and abs(x - n) <= tol:
        return int(n)
    return None


def resonance_orders(sc: ScenarioA, tol: float = DEFAULT_RESONANCE_TOL) -> Optional[tuple[int, int]]:
    """Return (N_L, N_S) when omega_L and omega_S are integer multiples of omega.

    Raises DegenerateFrameError when either effective rate vanishes.
    """
    if not 0 < tol < 0.5:
        raise ValueError(f"tol must lie in (0, 0.5), got {tol!r}")
    frame = derive_frame_A(sc)
    if sc.field.omega == 0:
        return None
    n_l = _near_positive_int(frame.omega_L / sc.field.omega, tol)
    n_s = _near_positive_int(frame.omega_S / sc.field.omega, tol)
    if n_l is None or n_s is None:
        return None
    return n_l, n_s
