"""Brute-force reference: fixed-step classical RK4 on i d/dt psi = H(t) psi.

Nothing here uses the rotating-frame solution; it only evaluates the lab
Hamiltonian H(t) at the stepper's substep times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .phases import LabHamiltonian, wrap_phase
from .propagator import Propagator, u_full
from .scenario import Scenario

MIN_STEPS = 100
STABILITY_LIMIT = 0.1
_CHUNK = 2048


class StepSizeError(ValueError):
    pass


@dataclass(frozen=True)
class Trajectory:
    """States at times[k]; ``states`` has shape (n_times, dim) or (n_times, dim, n_cols)."""

    times: NDArray[np.float64]
    states: NDArray[np.complex128]
    scenario: Scenario
    h: float

    @property
    def final(self) -> NDArray[np.complex128]:
        return self.states[-1]

    def norms(self) -> NDArray[np.float64]:
        return np.linalg.norm(self.states, axis=1)

    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms() - 1.0)))


def min_stable_steps(sc: Scenario, t_end: float) -> int:
    """Smallest even step count with ||H|| h <= 0.1 (and at least 100)."""
    hnorm = LabHamiltonian(sc).spectral_norm()
    n = max(MIN_STEPS, math.ceil(hnorm * abs(t_end) / STABILITY_LIMIT))
    return n + (n % 2)


def integrate_tdse(sc: Scenario, psi0, t_end: float, steps: int) -> Trajectory:
    """Integrate from t = 0 to ``t_end`` in ``steps`` equal RK4 steps, recording every state.

    ``psi0`` may be a unit vector or a matrix of unit columns (each column is
    evolved independently by the same linear map).
    """
    if steps < MIN_STEPS:
        raise StepSizeError(f"steps must be >= {MIN_STEPS}, got {steps}")
    psi0 = np.asarray(psi0, dtype=np.complex128)
    norms = np.linalg.norm(psi0, axis=0)
    if np.any(np.abs(norms - 1) > 1e-12):
        raise ValueError("initial state(s) must be normalized to 1e-12")
    ham = LabHamiltonian(sc)
    h = t_end / steps
    hnorm = ham.spectral_norm()
    if hnorm * abs(h) > STABILITY_LIMIT:
        raise StepSizeError(
            f"||H|| h = {hnorm * abs(h):.3g} exceeds {STABILITY_LIMIT}; use at least "
            f"{min_stable_steps(sc, t_end)} steps"
        )

    times = np.arange(steps + 1) * h
    states = np.empty((steps + 1,) + psi0.shape, dtype=np.complex128)
    states[0] = psi0
    y = psi0.copy()
    half = h / 2
    for start in range(0, steps, _CHUNK):
        stop = min(start + _CHUNK, steps)
        # H on the half-step grid t_start, t_start + h/2, ..., t_stop
        grid = start * h + half * np.arange(2 * (stop - start) + 1)
        wt = ham.omega * grid
        neg_i_h = -1j * (
            ham._axial[None]
            + ham._sin * (np.cos(wt)[:, None, None] * ham.mx[None] + np.sin(wt)[:, None, None] * ham.my[None])
        )
        for k in range(stop - start):
            a, b, c = neg_i_h[2 * k], neg_i_h[2 * k + 1], neg_i_h[2 * k + 2]
            k1 = a @ y
            k2 = b @ (y + half * k1)
            k3 = b @ (y + half * k2)
            k4 = c @ (y + h * k3)
            y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            states[start + k + 1] = y
    return Trajectory(times=times, states=states, scenario=sc, h=h)


def integrate_propagator(sc: Scenario, t_end: float, steps: int) -> Trajectory:
    """Evolve every basis column at once; the final state is the oracle U(t_end)."""
    return integrate_tdse(sc, np.eye(sc.basis.dim, dtype=np.complex128), t_end, steps)


def simpson(values: NDArray, h: float) -> NDArray:
    """Composite Simpson rule over an odd number of equally spaced samples (axis 0)."""
    n = values.shape[0]
    if n < 3 or n % 2 == 0:
        raise ValueError(
            f"Simpson quadrature needs an even number of intervals; got {n - 1} "
            "(use an even step count)"
        )
    return (h / 3) * (values[0] + values[-1] + 4 * values[1:-1:2].sum(axis=0) + 2 * values[2:-1:2].sum(axis=0))


def energy_samples(tr: Trajectory) -> NDArray[np.float64]:
    """<psi(t_k)|H(t_k)|psi(t_k)> at every recorded time (per column for matrix trajectories)."""
    ham = LabHamiltonian(tr.scenario)
    wt = ham.omega * tr.times
    hs = ham._axial[None] + ham._sin * (
        np.cos(wt)[:, None, None] * ham.mx[None] + np.sin(wt)[:, None, None] * ham.my[None]
    )
    if tr.states.ndim == 2:
        return np.real(np.einsum("ti,tij,tj->t", tr.states.conj(), hs, tr.states))
    return np.real(np.einsum("tic,tij,tjc->tc", tr.states.conj(), hs, tr.states))


def dynamic_phase_raw(tr: Trajectory, sc: Scenario | None = None):
    """-integral of <H(t)> over the trajectory, unreduced."""
    if sc is not None and sc != tr.scenario:
        raise ValueError("trajectory was integrated for a different scenario")
    return -simpson(energy_samples(tr), tr.h)


def dynamic_phase_quadrature(tr: Trajectory, sc: Scenario | None = None):
    """Dynamic phase over a trajectory spanning one period, as a principal value."""
    period = tr.scenario.field.period
    if tr.times[0] != 0.0 or abs(tr.times[-1] - period) > 1e-9 * period:
        raise ValueError("trajectory must cover exactly [0, T]")
    raw = dynamic_phase_raw(tr, sc)
    if np.ndim(raw):
        return np.array([wrap_phase(float(x)) for x in raw])
    return wrap_phase(float(raw))


@dataclass(frozen=True)
class OraclePhases:
    total: float
    dynamic: float
    geometric: float
    fidelity: float
    norm_drift: float


def oracle_phases(sc: Scenario, psi0, steps: int) -> OraclePhases:
    """Total phase arg<psi(0)|psi(T)>, quadrature dynamic phase and their difference."""
    period = sc.field.period
    tr = integrate_tdse(sc, psi0, period, steps)
    psi0 = np.asarray(psi0, dtype=np.complex128)
    overlap = complex(psi0.conj() @ tr.final)
    total = math.atan2(overlap.imag, overlap.real)
    dyn = float(dynamic_phase_raw(tr))
    return OraclePhases(
        total=wrap_phase(total),
        dynamic=wrap_phase(dyn),
        geometric=wrap_phase(total - dyn),
        fidelity=abs(overlap),
        norm_drift=tr.norm_drift(),
    )


def oracle_phases_all(sc: Scenario, states: NDArray, steps: int) -> list[OraclePhases]:
    """oracle_phases for every column of ``states`` from a single matrix integration."""
    period = sc.field.period
    tr = integrate_tdse(sc, states, period, steps)
    overlaps = np.einsum("ic,ic->c", states.conj(), tr.final)
    dyn = dynamic_phase_raw(tr)
    drift = np.max(np.abs(np.linalg.norm(tr.states, axis=1) - 1.0), axis=0)
    out = []
    for c, ov in enumerate(overlaps):
        total = math.atan2(ov.imag, ov.real)
        out.append(
            OraclePhases(
                total=wrap_phase(total),
                dynamic=wrap_phase(float(dyn[c])),
                geometric=wrap_phase(total - float(dyn[c])),
                fidelity=abs(ov),
                norm_drift=float(drift[c]),
            )
        )
    return out


def propagator_mismatch(sc: Scenario, t: float, steps: int) -> float:
    """Operator 2-norm distance between the exact U(t) and the RK4 propagator."""
    if t == 0:
        return 0.0
    exact = u_full(Propagator.from_scenario(sc), t)
    numeric = integrate_propagator(sc, t, steps).final
    return float(np.linalg.norm(exact - numeric, 2))


@dataclass(frozen=True)
class ConvergenceStudy:
    steps: tuple[int, ...]
    errors: tuple[float, ...]
    order: float


def convergence_order(sc: Scenario, t_end: float, base_steps: int | None = None, levels: int = 4) -> ConvergenceStudy:
    """Fit the slope of log(error) against log(h) over successive step halvings.

    The error is the propagator mismatch at ``t_end``; the ladder starts at the
    coarsest stable step count unless ``base_steps`` is given.
    """
    base = base_steps or min_stable_steps(sc, t_end)
    steps = tuple(base * 2**k for k in range(levels))
    exact = u_full(Propagator.from_scenario(sc), t_end)
    errors = tuple(
        float(np.linalg.norm(exact - integrate_propagator(sc, t_end, n).final, 2)) for n in steps
    )
    log_h = np.log(t_end / np.array(steps, dtype=float))
    slope = float(np.polyfit(log_h, np.log(errors), 1)[0])
    return ConvergenceStudy(steps=steps, errors=errors, order=slope)
