"""Topological signatures extracted from trajectories and static maps.

Work accumulators, normalized pumping-slope fits, Bloch-sphere coverage,
density of states of the instantaneous two-band spectrum, and the
per-harmonic split of the pumped energy.
"""

from dataclasses import dataclass

import numpy as np

from .drive import harmonic_table, pauli_coefficients_theta
from .errors import ConfigMismatchError, InsufficientDataError, ZeroNormError
from .lattice import SQRT3, ModelKind, reciprocal_vectors

DEFAULT_WINDOW_START = 0.1


@dataclass(frozen=True)
class WorkSeries:
    """Accumulated work transferred by each drive versus time."""

    times: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    omega1: float
    omega2: float


@dataclass(frozen=True)
class SlopeFit:
    """Normalized pumping rates 2*pi*dW_i/dt / (Omega1*Omega2) with fit R^2."""

    slope1: float
    slope2: float
    r2_1: float
    r2_2: float
    window: float


@dataclass(frozen=True)
class CoverageReport:
    n_bins: int
    visited: int
    fraction: float


@dataclass(frozen=True)
class DosHistogram:
    """Unit-area histogram of the two-band spectrum, energies in Omega_R."""

    edges: np.ndarray
    density: np.ndarray
    m: float

    def weight_at(self, energy):
        """Probability density in the bin containing ``energy``."""
        idx = np.searchsorted(self.edges, energy, side="right") - 1
        if idx < 0 or idx >= len(self.density):
            return 0.0
        return float(self.density[idx])

    def min_abs_energy(self):
        return float(getattr(self, "_min_abs", np.nan))


def _check_match(traj, kind, cfg, phi):
    same = (
        traj.kind is kind
        and traj.cfg == cfg
        and abs(traj.phi - phi) < 1e-12
    )
    if not same:
        raise ConfigMismatchError(
            "trajectory was produced with a different (kind, cfg, phi)"
        )


def work_done(traj, kind, cfg, phi):
    """Work series accumulated by the integrator (RK4-stage resolution)."""
    _check_match(traj, kind, cfg, phi)
    return WorkSeries(
        times=traj.times,
        w1=traj.w1,
        w2=traj.w2,
        omega1=cfg.omega1,
        omega2=cfg.omega2,
    )


def _ols(t, y):
    tbar = t.mean()
    ybar = y.mean()
    dt = t - tbar
    denom = np.dot(dt, dt)
    slope = np.dot(dt, y - ybar) / denom
    resid = y - (ybar + slope * dt)
    ss_res = np.dot(resid, resid)
    ss_tot = np.dot(y - ybar, y - ybar)
    r2 = 1.0 if ss_tot <= 1e-300 else 1.0 - ss_res / ss_tot
    return slope, max(0.0, min(1.0, r2))


def pumping_slope(ws, cfg, window_start_fraction=DEFAULT_WINDOW_START):
    """Least-squares pumping rates over the trailing fit window."""
    t_start = window_start_fraction * ws.times[-1]
    sel = ws.times >= t_start
    if sel.sum() < 100:
        raise InsufficientDataError(
            f"only {int(sel.sum())} samples past the window start; need >= 100"
        )
    t = ws.times[sel]
    scale = 2.0 * np.pi / (cfg.omega1 * cfg.omega2)
    s1, r2_1 = _ols(t, ws.w1[sel])
    s2, r2_2 = _ols(t, ws.w2[sel])
    return SlopeFit(
        slope1=float(s1 * scale),
        slope2=float(s2 * scale),
        r2_1=r2_1,
        r2_2=r2_2,
        window=1.0 - window_start_fraction,
    )


def bloch_vector(state):
    """(<sx>, <sy>, <sz>) of one state, unit norm."""
    amp = np.asarray(state.amp, dtype=complex)
    n2 = float(np.sum(np.abs(amp) ** 2))
    if n2 <= 0.0:
        raise ZeroNormError("cannot project a zero state onto the sphere")
    cross = np.conj(amp[0]) * amp[1]
    return np.array(
        [
            2.0 * cross.real / n2,
            2.0 * cross.imag / n2,
            (abs(amp[0]) ** 2 - abs(amp[1]) ** 2) / n2,
        ]
    )


def _sphere_bins(n_bins):
    """Equal-area cells: latitude bands split into longitude sectors."""
    n_bands = int(round(np.sqrt(n_bins)))
    base, extra = divmod(n_bins, n_bands)
    sectors = np.full(n_bands, base, dtype=int)
    sectors[:extra] += 1
    # each cell has area 4*pi/n_bins; band k spans dz = 2*m_k/n_bins
    lower = 1.0 - 2.0 * np.cumsum(sectors) / n_bins
    return sectors, lower


def coverage_fraction(traj_or_bloch, n_bins=400):
    """Fraction of equal-area sphere cells visited by the Bloch trajectory."""
    if n_bins < 16:
        raise ValueError("n_bins must be at least 16")
    bloch = getattr(traj_or_bloch, "bloch", traj_or_bloch)
    bloch = np.asarray(bloch)
    sectors, lower = _sphere_bins(n_bins)
    z = np.clip(bloch[:, 2], -1.0, 1.0)
    band = np.clip(
        np.searchsorted(-lower, -z, side="left"), 0, len(sectors) - 1
    )
    az = np.mod(np.arctan2(bloch[:, 1], bloch[:, 0]), 2.0 * np.pi)
    sec = np.minimum(
        (az / (2.0 * np.pi) * sectors[band]).astype(int), sectors[band] - 1
    )
    offsets = np.concatenate([[0], np.cumsum(sectors)])
    visited = np.unique(offsets[band] + sec)
    return CoverageReport(
        n_bins=n_bins, visited=len(visited), fraction=len(visited) / n_bins
    )


def density_of_states(kind, cfg, phi, m, grid_n=120, n_energy_bins=120):
    """Histogram both instantaneous eigenvalues over the drive-phase cell.

    Samples theta uniformly on a grid_n x grid_n grid of the parallelogram
    spanned by the reciprocal basis; energies are reported in units of
    Omega_R and the histogram is normalized to unit area.
    """
    if grid_n < 64:
        raise ValueError("grid_n must be at least 64")
    cell_cfg = cfg.with_m(m)
    g1, g2 = reciprocal_vectors(kind)
    frac = np.arange(grid_n) / grid_n
    fi, fj = np.meshgrid(frac, frac, indexing="ij")
    th = fi[..., None] * g1 + fj[..., None] * g2
    hx, hy, hz = pauli_coefficients_theta(kind, cell_cfg, phi, th)
    e = np.sqrt(hx**2 + hy**2 + hz**2) / cfg.omega_r
    energies = np.concatenate([e.ravel(), -e.ravel()])
    density, edges = np.histogram(energies, bins=n_energy_bins, density=True)
    hist = DosHistogram(edges=edges, density=density, m=float(m))
    object.__setattr__(hist, "_min_abs", float(e.min()))
    return hist


@dataclass(frozen=True)
class HarmonicEnergies:
    """Per-tone accumulated energies and their direction recombinations."""

    kind: ModelKind
    channels: tuple
    times: np.ndarray
    series: np.ndarray    # (n_samples, n_channels)
    w_total: np.ndarray   # w1 + w2, for the completeness identity
    omega1: float
    omega2: float

    @property
    def totals(self):
        return self.series[-1]

    def completeness_residual(self):
        """Relative mismatch between the channel sum and the total work."""
        total = self.series[-1].sum()
        ref = self.w_total[-1]
        scale = max(abs(ref), 1e-30)
        return abs(total - ref) / scale

    def _rate(self, y, window_start=DEFAULT_WINDOW_START):
        sel = self.times >= window_start * self.times[-1]
        slope, _ = _ols(self.times[sel], y[sel])
        return slope

    def net_pump_rate(self, window_start=DEFAULT_WINDOW_START):
        """Normalized net transfer rate recombined from the tone energies.

        Each tone's energy is mapped back onto the two drives through its
        frequency composition, E_c -> ((b_c W2 - a_c W1)/nu_c) E_c, and half
        the difference is fitted; this recombination is exact (it equals
        (W2 - W1)/2) and is the quantized net rate, 2C/(2 pi) * W1 W2 on the
        brick wall.
        """
        weights = np.array(
            [
                (c.b * self.omega2 - c.a * self.omega1) / c_freq
                for c in self.channels
                for c_freq in (c.a * self.omega1 + c.b * self.omega2,)
            ]
        )
        combo = 0.5 * (self.series @ weights)
        rate = self._rate(combo, window_start)
        return 2.0 * np.pi * rate / (self.omega1 * self.omega2)

    def direction_combos(self, window_start=DEFAULT_WINDOW_START):
        """Literal per-tone direction recombinations, normalized.

        Brick wall: 1/2 d/dt [(E_10 - E_01) + (E_11 - E_-11)].
        Honeycomb: x and y combinations with their 1/(2*sqrt(3)) and 1/6
        hopping-length normalizations.  Diagnostic only: the per-tone
        energies carry non-universal cross terms, so unlike
        ``net_pump_rate`` these combinations are not quantized.
        """
        e = self.series
        if self.kind is ModelKind.BRICKWALL:
            combo = 0.5 * ((e[:, 0] - e[:, 1]) + (e[:, 3] - e[:, 2]))
        else:
            px = (e[:, 0] - e[:, 1] + e[:, 5]) / (2.0 * SQRT3)
            py = (2.0 * e[:, 2] - e[:, 0] - e[:, 1] - e[:, 3] - e[:, 4]) / 6.0
            combo = px + py
        rate = self._rate(combo, window_start)
        return 2.0 * np.pi * rate / (self.omega1 * self.omega2)

    def channel_rates(self, window_start=DEFAULT_WINDOW_START):
        """Fitted normalized energy rate per tone."""
        scale = 2.0 * np.pi / (self.omega1 * self.omega2)
        return np.array(
            [self._rate(self.series[:, c], window_start) * scale
             for c in range(self.series.shape[1])]
        )


def work_by_harmonic(traj, kind, cfg, phi, table=None):
    """Split the accumulated work into the synthesized tones.

    The trajectory must have been produced with ``track_harmonics=True`` so
    the per-channel integrals share the RK4 stages of the evolution.
    """
    _check_match(traj, kind, cfg, phi)
    if traj.e_channels is None:
        raise ValueError("trajectory lacks channel data; evolve with track_harmonics=True")
    channels = tuple(table if table is not None else harmonic_table(kind))
    if len(channels) != traj.e_channels.shape[1]:
        raise ConfigMismatchError("harmonic table does not match trajectory channels")
    return HarmonicEnergies(
        kind=kind,
        channels=channels,
        times=traj.times,
        series=traj.e_channels,
        w_total=traj.w1 + traj.w2,
        omega1=cfg.omega1,
        omega2=cfg.omega2,
    )
