import numpy as np
import pytest

from floqlat.drive import DriveConfig
from floqlat.dynamics import ModeState, evolve_conservative, slow_period
from floqlat.errors import ConfigMismatchError, InsufficientDataError, ZeroNormError
from floqlat.lattice import ModelKind, geometry, chern_number, phase_boundary
from floqlat.drive import theta_map
from floqlat.observables import (
    WorkSeries,
    bloch_vector,
    coverage_fraction,
    density_of_states,
    pumping_slope,
    work_by_harmonic,
    work_done,
)

OMEGA_R = 125.0


@pytest.fixture(scope="module")
def bw_run(fig_cfg):
    cfg = fig_cfg()
    traj = evolve_conservative(
        ModelKind.BRICKWALL, cfg, np.pi / 2, T=30 * slow_period(cfg),
        track_harmonics=True,
    )
    return cfg, traj


def test_work_starts_at_zero(bw_run):
    cfg, traj = bw_run
    ws = work_done(traj, ModelKind.BRICKWALL, cfg, np.pi / 2)
    assert ws.w1[0] == 0.0 and ws.w2[0] == 0.0


def test_work_done_config_mismatch(bw_run):
    cfg, traj = bw_run
    with pytest.raises(ConfigMismatchError):
        work_done(traj, ModelKind.HALDANE, cfg, np.pi / 2)
    with pytest.raises(ConfigMismatchError):
        work_done(traj, ModelKind.BRICKWALL, cfg, 0.3)


def test_pumping_slope_linear_series():
    cfg = DriveConfig()
    t = np.linspace(0.0, 50.0, 2000)
    c = 0.37
    ws = WorkSeries(times=t, w1=c * t, w2=np.full_like(t, 5.0), omega1=cfg.omega1, omega2=cfg.omega2)
    fit = pumping_slope(ws, cfg)
    assert abs(fit.slope1 - 2 * np.pi * c / (cfg.omega1 * cfg.omega2)) < 1e-12
    assert abs(fit.r2_1 - 1.0) < 1e-12
    assert abs(fit.slope2) < 1e-12
    assert fit.r2_2 == 1.0  # perfect fit of a constant


def test_pumping_slope_needs_samples():
    cfg = DriveConfig()
    t = np.linspace(0, 1, 50)
    ws = WorkSeries(times=t, w1=t, w2=t, omega1=cfg.omega1, omega2=cfg.omega2)
    with pytest.raises(InsufficientDataError):
        pumping_slope(ws, cfg)


def test_bloch_vector_cardinal_states():
    np.testing.assert_allclose(
        bloch_vector(ModeState(np.array([1.0, 0.0], dtype=complex), 0.0)), [0, 0, 1], atol=1e-12
    )
    np.testing.assert_allclose(
        bloch_vector(ModeState(np.array([1.0, 1.0]) / np.sqrt(2), 0.0)), [1, 0, 0], atol=1e-12
    )
    # sigma_y = -i(b1^dag b2 - b2^dag b1): (1, i)/sqrt(2) maps to +y
    np.testing.assert_allclose(
        bloch_vector(ModeState(np.array([1.0, 1.0j]) / np.sqrt(2), 0.0)), [0, 1, 0], atol=1e-12
    )


def test_bloch_vector_zero_state():
    with pytest.raises(ZeroNormError):
        bloch_vector(ModeState(np.zeros(2, dtype=complex), 0.0))


def test_coverage_constant_state():
    bloch = np.tile([0.3, -0.4, np.sqrt(1 - 0.25)], (500, 1))
    report = coverage_fraction(bloch, n_bins=400)
    assert report.visited == 1
    assert abs(report.fraction - 1 / 400) < 1e-15


def test_coverage_rejects_tiny_binning(bw_run):
    _, traj = bw_run
    with pytest.raises(ValueError):
        coverage_fraction(traj, n_bins=8)


def test_coverage_full_sphere_grid():
    # a dense uniform cloud must touch every cell
    rng = np.random.default_rng(3)
    z = rng.uniform(-1, 1, 200000)
    az = rng.uniform(0, 2 * np.pi, 200000)
    r = np.sqrt(1 - z**2)
    bloch = np.stack([r * np.cos(az), r * np.sin(az), z], axis=1)
    assert coverage_fraction(bloch, n_bins=400).fraction == 1.0


def test_coverage_monotone_in_horizon(bw_run):
    _, traj = bw_run
    n = len(traj.bloch)
    fracs = [
        coverage_fraction(traj.bloch[:k], 400).fraction
        for k in (n // 8, n // 4, n // 2, n)
    ]
    assert all(b >= a for a, b in zip(fracs, fracs[1:]))


def test_dos_even_and_normalized(fig_cfg):
    for kind in ModelKind:
        hist = density_of_states(kind, fig_cfg(), np.pi / 2, m=2.0, grid_n=96, n_energy_bins=80)
        width = np.diff(hist.edges)
        assert abs(np.sum(hist.density * width) - 1.0) < 1e-9
        np.testing.assert_allclose(hist.density, hist.density[::-1], atol=1e-12)


def test_dos_weight_at_three_omega_r(fig_cfg):
    for kind in ModelKind:
        for m in (1.0, 4.0):
            hist = density_of_states(kind, fig_cfg(), np.pi / 2, m, grid_n=96)
            assert hist.weight_at(3.0) > 0.0


def test_dos_gap_closes_at_boundary(fig_cfg):
    for kind in ModelKind:
        mb = phase_boundary(kind, np.pi / 2)[0]
        hist = density_of_states(kind, fig_cfg(), np.pi / 2, mb, grid_n=120)
        assert hist.min_abs_energy() < 0.05


def test_dos_rejects_small_grid(fig_cfg):
    with pytest.raises(ValueError):
        density_of_states(ModelKind.HALDANE, fig_cfg(), np.pi / 2, 1.0, grid_n=32)


def test_harmonic_completeness(bw_run):
    cfg, traj = bw_run
    he = work_by_harmonic(traj, ModelKind.BRICKWALL, cfg, np.pi / 2)
    assert he.completeness_residual() < 1e-8


def test_harmonic_requires_tracking(fig_cfg):
    cfg = fig_cfg()
    traj = evolve_conservative(ModelKind.BRICKWALL, cfg, np.pi / 2, T=5.0)
    with pytest.raises(ValueError):
        work_by_harmonic(traj, ModelKind.BRICKWALL, cfg, np.pi / 2)


def test_brickwall_net_pump_rate_twice_chern(fig_cfg):
    cfg = fig_cfg()
    traj = evolve_conservative(ModelKind.BRICKWALL, cfg, np.pi / 2, track_harmonics=True)
    he = work_by_harmonic(traj, ModelKind.BRICKWALL, cfg, np.pi / 2)
    c = chern_number(theta_map(ModelKind.BRICKWALL, cfg, np.pi / 2), geometry(ModelKind.BRICKWALL), 64)
    assert abs(abs(he.net_pump_rate()) - 2 * abs(c)) < 0.25


def test_trivial_phase_net_rate_small(fig_cfg):
    cfg = fig_cfg(m=6.0)
    traj = evolve_conservative(ModelKind.BRICKWALL, cfg, np.pi / 2, track_harmonics=True)
    he = work_by_harmonic(traj, ModelKind.BRICKWALL, cfg, np.pi / 2)
    assert abs(he.net_pump_rate()) < 0.2
