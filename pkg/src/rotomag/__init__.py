"""Charged particles in a rotating magnetic field: rotating-frame solutions and brute-force checks."""

__version__ = "0.1.0"

from .angular_momentum import (
    AngularMomentumRep,
    ProductRep,
    build_rep,
    component_along,
    rotation_about_y,
    tensor_embed,
)
from .scenario import (
    DegenerateFrameError,
    DerivedFrame,
    RotatingField,
    ScenarioA,
    ScenarioB,
    ScenarioC,
    derive_frame_A,
    derive_frame_C,
    field_direction,
    resonance_orders,
)
from .heff import (
    EigenSystem,
    EffectiveHamiltonian,
    analytic_eigensystem_A,
    build_heff_A,
    build_heff_B,
    build_heff_C,
    eigensolve_hermitian,
    weakfield_l0_states,
)
from .landau import (
    LandauState,
    corrected_energies_C,
    laguerre,
    landau_energies,
    landau_wavefunction,
)
from .propagator import Propagator, expm_hermitian, u_full, w_matrix
from .phases import (
    PhaseReport,
    angular_momentum_trace,
    cyclic_phase_report,
    matrix_h_of_t,
    superposition_cycle_check,
)
from .oracle import (
    Trajectory,
    dynamic_phase_quadrature,
    integrate_tdse,
    propagator_mismatch,
)
