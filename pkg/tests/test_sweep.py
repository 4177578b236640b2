import numpy as np
import pytest

from floqlat.drive import GOLDEN_RATIO
from floqlat.dynamics import DissipationConfig, evolve_conservative, evolve_driven_dissipative
from floqlat.lattice import ModelKind, phase_boundary
from floqlat.observables import pumping_slope, work_done
from floqlat.sweep import (
    SweepSpec,
    commensurate_control,
    sweep,
    worker_count,
)

QUICK = dict(m_range=(1.0, 4.0, 2), phi_range=(np.pi / 3, np.pi / 2, 2), T=30.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(kind=ModelKind.HALDANE, m_range=(0, 1, 1))
    with pytest.raises(ValueError):
        SweepSpec(kind=ModelKind.HALDANE, phi_range=(0, np.inf, 4))
    with pytest.raises(ValueError):
        SweepSpec(kind=ModelKind.HALDANE, mode="weird")


def test_cells_match_standalone_runs():
    spec = SweepSpec(kind=ModelKind.BRICKWALL, workers=1, **QUICK)
    res = sweep(spec)
    for i, m in enumerate(res.m_values):
        for j, phi in enumerate(res.phi_values):
            cfg = spec.cell_cfg(m)
            traj = evolve_conservative(spec.kind, cfg, phi, spec.T, spec.dt, spec.decimate)
            fit = pumping_slope(work_done(traj, spec.kind, cfg, phi), cfg)
            assert res.slope1[i, j] == fit.slope1
            assert res.slope2[i, j] == fit.slope2


def test_worker_count_bit_identity():
    spec1 = SweepSpec(kind=ModelKind.HALDANE, workers=1, **QUICK)
    spec4 = SweepSpec(kind=ModelKind.HALDANE, workers=4, **QUICK)
    r1, r4 = sweep(spec1), sweep(spec4)
    assert np.array_equal(r1.slope1, r4.slope1)
    assert np.array_equal(r1.slope2, r4.slope2)
    assert np.array_equal(r1.chern, r4.chern, equal_nan=True)
    assert np.array_equal(r1.status, r4.status)


def test_env_var_overrides_workers(monkeypatch):
    monkeypatch.setenv("FLOQUET_WORKERS", "3")
    assert worker_count(8) == 3
    monkeypatch.delenv("FLOQUET_WORKERS")
    assert worker_count(8) == 8


def test_boundary_mask():
    spec = SweepSpec(
        kind=ModelKind.BRICKWALL,
        m_range=(-6.0, 6.0, 10),
        phi_range=(-np.pi, np.pi, 10),
    )
    res_mask_spec = spec
    mvals = res_mask_spec.m_values()
    phivals = res_mask_spec.phi_values()
    step = mvals[1] - mvals[0]
    # hand check one column
    from floqlat.sweep import SweepResult

    result = SweepResult(
        spec=spec,
        m_values=mvals,
        phi_values=phivals,
        slope1=np.zeros((10, 10)),
        slope2=np.zeros((10, 10)),
        r2_1=np.zeros((10, 10)),
        r2_2=np.zeros((10, 10)),
        chern=np.zeros((10, 10)),
        status=np.full((10, 10), "ok", dtype=object),
    )
    mask = result.boundary_mask()
    for j, phi in enumerate(phivals):
        mb = phase_boundary(spec.kind, phi)[0]
        for i, m in enumerate(mvals):
            expected = min(abs(m - mb), abs(m + mb)) <= step
            assert mask[i, j] == expected


def test_gap_closed_cell_status():
    mb = phase_boundary(ModelKind.BRICKWALL, np.pi / 2)[0]
    spec = SweepSpec(
        kind=ModelKind.BRICKWALL,
        m_range=(mb, mb + 1.0, 2),
        phi_range=(np.pi / 2, np.pi / 2 + 0.01, 2),
        T=30.0,
        chern_grid=66,  # grid contains the Dirac point exactly
        workers=1,
    )
    res = sweep(spec)
    assert res.status[0, 0] == "gap-closed"
    assert not np.isfinite(res.chern[0, 0])
    assert np.isfinite(res.slope1[0, 0])  # the evolution itself succeeded


def test_commensurate_control_defaults_to_three_halves():
    spec = SweepSpec(kind=ModelKind.BRICKWALL, workers=1, **QUICK)
    res = commensurate_control(spec)
    assert abs(res.spec.resolved_ratio() - 1.5) < 1e-15
    # explicit golden ratio reduces to a plain sweep
    golden = SweepSpec(kind=ModelKind.BRICKWALL, workers=1, ratio=GOLDEN_RATIO, **QUICK)
    assert np.array_equal(commensurate_control(golden).slope1, sweep(golden).slope1)


def test_flux_antisymmetry_of_slopes():
    spec = SweepSpec(
        kind=ModelKind.BRICKWALL,
        m_range=(1.0, 2.0, 2),
        phi_range=(-np.pi / 2, np.pi / 2, 2),
        T=120.0,
        workers=2,
    )
    res = sweep(spec)
    # phi grid is (-pi/2, +pi/2): slopes flip sign across the flux axis
    for i in range(2):
        assert abs(res.slope1[i, 0] + res.slope1[i, 1]) < 0.2
        assert abs(res.slope2[i, 0] + res.slope2[i, 1]) < 0.2


def test_dissipative_phase_insensitivity():
    # shifting the drive phases leaves steady-state slopes nearly unchanged
    from floqlat.drive import DriveConfig

    diss = DissipationConfig()
    for m, phi in [(1.0, np.pi / 2), (4.5, 2.0)]:
        fits = []
        for phi1, phi2 in [(np.pi / 10, 0.0), (0.0, np.pi / 3)]:
            cfg = DriveConfig(phi1=phi1, phi2=phi2, delta=m * 125.0)
            traj = evolve_driven_dissipative(ModelKind.BRICKWALL, cfg, phi, diss, 500.0)
            fits.append(pumping_slope(work_done(traj, ModelKind.BRICKWALL, cfg, phi), cfg))
        assert abs(fits[0].slope1 - fits[1].slope1) < 0.15
        assert abs(fits[0].slope2 - fits[1].slope2) < 0.15
