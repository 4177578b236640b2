"""Floquet synthetic-dimension simulator for honeycomb-class two-band models."""

__version__ = "0.1.0"

from .lattice import (
    DVector,
    HaldaneParams,
    LatticeGeometry,
    ModelKind,
    bloch_hamiltonian,
    bloch_map,
    chern_number,
    d_vector,
    geometry,
    phase_boundary,
    reciprocal_vectors,
)
from .drive import (
    GOLDEN_RATIO,
    DriveConfig,
    HarmonicChannel,
    ModulationSample,
    dh_dtheta,
    effective_hamiltonian,
    effective_hamiltonian_theta,
    harmonic_table,
    modulation,
    theta,
    theta_map,
)
from .dynamics import (
    DissipationConfig,
    ModeState,
    Trajectory,
    evolve_conservative,
    evolve_driven_dissipative,
    initial_state,
)
from .observables import (
    CoverageReport,
    DosHistogram,
    SlopeFit,
    WorkSeries,
    bloch_vector,
    coverage_fraction,
    density_of_states,
    pumping_slope,
    work_by_harmonic,
    work_done,
)
from .sweep import SweepResult, SweepSpec, commensurate_control, sweep
