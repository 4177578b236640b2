"""Parallel (M, phi) phase-diagram grids of full evolutions.

Each cell runs one evolution, fits the pumping slopes, and attaches the
Chern oracle evaluated on the same synthesized drive map.  Cells are
independent; results are assembled by index so worker count never changes
the output.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .drive import GOLDEN_RATIO, DriveConfig, theta_map
from .dynamics import (
    DEFAULT_DT,
    DissipationConfig,
    default_horizon,
    evolve_conservative,
    evolve_driven_dissipative,
)
from .errors import FloqlatError, GapClosedError, NotConvergedError
from .lattice import ModelKind, chern_number, geometry, phase_boundary
from .observables import pumping_slope, work_done

STATUS_OK = "ok"
STATUS_GAP_CLOSED = "gap-closed"
STATUS_FAILED = "numerical-failure"

MODE_CONSERVATIVE = "conservative"
MODE_DISSIPATIVE = "driven_dissipative"


def worker_count(requested=None):
    """Resolve the worker pool size; FLOQUET_WORKERS overrides."""
    env = os.environ.get("FLOQUET_WORKERS")
    if env:
        return max(1, int(env))
    if requested:
        return max(1, int(requested))
    return max(1, min(4, os.cpu_count() or 1))


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition plus the per-cell evolution parameters."""

    kind: ModelKind
    m_range: tuple = (-6.0, 6.0, 10)
    phi_range: tuple = (-np.pi, np.pi, 10)
    mode: str = MODE_CONSERVATIVE
    ratio: Optional[float] = None       # Omega2/Omega1; None -> golden ratio
    base_cfg: DriveConfig = field(default_factory=DriveConfig)
    diss: DissipationConfig = field(default_factory=DissipationConfig)
    T: Optional[float] = None
    dt: float = DEFAULT_DT
    decimate: int = 200
    workers: Optional[int] = None
    chern_grid: int = 64

    def __post_init__(self):
        if self.m_range[2] < 2 or self.phi_range[2] < 2:
            raise ValueError("sweep axes need at least 2 points")
        for lo, hi, _ in (self.m_range, self.phi_range):
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValueError("sweep ranges must be finite")
        if self.mode not in (MODE_CONSERVATIVE, MODE_DISSIPATIVE):
            raise ValueError(f"unknown sweep mode {self.mode!r}")

    def m_values(self):
        return np.linspace(*self.m_range)

    def phi_values(self):
        return np.linspace(*self.phi_range)

    def resolved_ratio(self):
        return GOLDEN_RATIO if self.ratio is None else self.ratio

    def cell_cfg(self, m):
        base = self.base_cfg
        return DriveConfig(
            omega1=base.omega1,
            omega2=base.omega1 * self.resolved_ratio(),
            phi1=base.phi1,
            phi2=base.phi2,
            omega_r=base.omega_r,
            delta=m * base.omega_r,
            mu=base.mu,
        )


@dataclass
class SweepResult:
    spec: SweepSpec
    m_values: np.ndarray
    phi_values: np.ndarray
    slope1: np.ndarray
    slope2: np.ndarray
    r2_1: np.ndarray
    r2_2: np.ndarray
    chern: np.ndarray     # float grid, NaN where the oracle failed
    status: np.ndarray    # object grid of status strings

    def boundary_mask(self):
        """Cells within one M-grid-step of the analytic phase boundary."""
        m_step = abs(self.m_values[1] - self.m_values[0])
        mask = np.zeros((len(self.m_values), len(self.phi_values)), dtype=bool)
        for j, phi in enumerate(self.phi_values):
            mb_plus, mb_minus = phase_boundary(self.spec.kind, phi)
            dist = np.minimum(
                np.abs(self.m_values - mb_plus), np.abs(self.m_values - mb_minus)
            )
            mask[:, j] = dist <= m_step
        return mask


def _run_cell(spec, m, phi):
    cfg = spec.cell_cfg(m)
    slope1 = slope2 = r2_1 = r2_2 = np.nan
    chern = np.nan
    status = STATUS_OK
    try:
        horizon = spec.T
        if spec.mode == MODE_DISSIPATIVE:
            if horizon is None:
                horizon = default_horizon(cfg, spec.diss)
            traj = evolve_driven_dissipative(
                spec.kind, cfg, phi, spec.diss, horizon, spec.dt, spec.decimate
            )
        else:
            if horizon is None:
                horizon = default_horizon(cfg)
            traj = evolve_conservative(
                spec.kind, cfg, phi, horizon, spec.dt, spec.decimate
            )
        fit = pumping_slope(work_done(traj, spec.kind, cfg, phi), cfg)
        slope1, slope2 = fit.slope1, fit.slope2
        r2_1, r2_2 = fit.r2_1, fit.r2_2
    except FloqlatError:
        status = STATUS_FAILED
    try:
        chern = float(
            chern_number(theta_map(spec.kind, cfg, phi), geometry(spec.kind), spec.chern_grid)
        )
    except (GapClosedError, NotConvergedError):
        if status == STATUS_OK:
            status = STATUS_GAP_CLOSED
    return slope1, slope2, r2_1, r2_2, chern, status


def sweep(spec):
    """Run the full grid; cell failures are recorded, never raised."""
    m_values = spec.m_values()
    phi_values = spec.phi_values()
    shape = (len(m_values), len(phi_values))
    cells = [(i, j) for i in range(shape[0]) for j in range(shape[1])]

    nworkers = worker_count(spec.workers)
    if nworkers == 1:
        results = [_run_cell(spec, m_values[i], phi_values[j]) for i, j in cells]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            results = list(
                pool.map(
                    lambda ij: _run_cell(spec, m_values[ij[0]], phi_values[ij[1]]),
                    cells,
                )
            )

    out = SweepResult(
        spec=spec,
        m_values=m_values,
        phi_values=phi_values,
        slope1=np.full(shape, np.nan),
        slope2=np.full(shape, np.nan),
        r2_1=np.full(shape, np.nan),
        r2_2=np.full(shape, np.nan),
        chern=np.full(shape, np.nan),
        status=np.empty(shape, dtype=object),
    )
    for (i, j), (s1, s2, r1, r2, c, st) in zip(cells, results):
        out.slope1[i, j] = s1
        out.slope2[i, j] = s2
        out.r2_1[i, j] = r1
        out.r2_2[i, j] = r2
        out.chern[i, j] = c
        out.status[i, j] = st
    return out


def commensurate_control(spec):
    """Rational-ratio control grid; defaults the ratio to 3/2 if unset."""
    if spec.ratio is None:
        spec = replace(spec, ratio=1.5)
    return sweep(spec)
