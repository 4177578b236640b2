"""Fixed-step RK4 evolution of the driven two-mode system.

Conservative runs integrate i d/dt psi = H(t) psi; driven-dissipative runs
integrate d/dt beta = -i H(t) beta - gamma beta + s(t) with the coherent
input tone rotated into the modulation frame.  Work done by each drive and
the per-tone energy split are accumulated inside the same RK4 stages as the
state itself, at full step resolution.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .drive import (
    DriveConfig,
    channel_arrays,
    effective_hamiltonian,
    hamiltonian_norm_bound,
)
from .errors import (
    DegenerateStartError,
    NumericalBlowupError,
    StepTooLargeError,
    ZeroNormError,
)
from .lattice import ModelKind

DEFAULT_DT = 2.5e-5       # us; keeps dt * ||H|| under 0.05 rad at Fig-scale drives
DEFAULT_DECIMATE = 200
PHASE_STEP_LIMIT = 0.05   # rad
CONSERVATIVE_PERIODS = 120.0
DISSIPATIVE_HORIZON_OVER_GAMMA = 15.0


@dataclass(frozen=True)
class ModeState:
    """Supermode amplitude pair at one instant."""

    amp: np.ndarray
    t: float

    @property
    def norm(self):
        return float(np.linalg.norm(self.amp))


@dataclass(frozen=True)
class DissipationConfig:
    """Loss rates and external drive of the dissipative channel."""

    gamma: float = 0.01
    gamma_e: float = 0.01
    s_amp: float = 1.0
    drive_detuning: Optional[float] = None  # default resolves to -3*Omega_R
    enabled: bool = True

    def __post_init__(self):
        if self.gamma < 0 or self.gamma_e < 0:
            raise ValueError("loss rates must be non-negative")

    def resolved_detuning(self, cfg):
        if self.drive_detuning is None:
            return -3.0 * cfg.omega_r
        return self.drive_detuning


@dataclass
class Trajectory:
    """Decimated time series produced by one evolution run."""

    kind: ModelKind
    cfg: DriveConfig
    phi: float
    diss: Optional[DissipationConfig]
    dt: float
    decimate: int
    times: np.ndarray
    amps: np.ndarray      # (n, 2) complex
    bloch: np.ndarray     # (n, 3)
    w1: np.ndarray
    w2: np.ndarray
    norm: np.ndarray
    dphase: np.ndarray    # integral of the effective frequency modulation
    e_channels: Optional[np.ndarray] = None  # (n, n_channels)

    def __len__(self):
        return len(self.times)

    def state_at(self, i):
        return ModeState(amp=self.amps[i].copy(), t=float(self.times[i]))

    @property
    def t_final(self):
        return float(self.times[-1])


def slow_period(cfg):
    return 2.0 * np.pi / min(cfg.omega1, cfg.omega2)


def default_horizon(cfg, diss=None):
    """Run length: 30 slow-drive periods, or several loss times when driven."""
    if diss is not None and diss.enabled and diss.gamma > 0:
        return DISSIPATIVE_HORIZON_OVER_GAMMA / diss.gamma
    return CONSERVATIVE_PERIODS * slow_period(cfg)


def initial_state(kind, cfg, phi):
    """Lower-band eigenstate of H(0), first nonzero component real-positive."""
    h0 = effective_hamiltonian(kind, cfg, phi, 0.0)
    evals, evecs = np.linalg.eigh(h0)
    if evals[1] - evals[0] < 1e-12:
        raise DegenerateStartError("H(0) is degenerate; cannot pick a band")
    v = evecs[:, 0]
    for comp in v:
        if abs(comp) > 1e-12:
            v = v * (comp.conjugate() / abs(comp))
            break
    return ModeState(amp=v.astype(complex), t=0.0)


@njit(cache=True, nogil=True)
def _run_kernel(
    psi0,
    dt,
    nsteps,
    decimate,
    omega1,
    omega2,
    phi1,
    phi2,
    omega_r,
    delta,
    sinphi,
    xy_a,
    xy_b,
    xy_wx,
    xy_wy,
    z_a,
    z_b,
    z_w,
    gamma,
    amp1,
    amp2,
    freq1,
    freq2,
    dcoef1,
    dcoef2,
    dissipative,
    track,
    out_psi,
    out_w,
    out_norm,
    out_dphase,
    out_ech,
):
    nxy = xy_a.shape[0]
    nz = z_a.shape[0]
    nch = nxy + nz

    # channel phasors exp(i*alpha_c(t)) advanced by half-step rotations
    zxy = np.empty(nxy, dtype=np.complex128)
    rxy = np.empty(nxy, dtype=np.complex128)
    nu_xy = np.empty(nxy)
    for c in range(nxy):
        a0 = xy_a[c] * phi1 + xy_b[c] * phi2
        nu = xy_a[c] * omega1 + xy_b[c] * omega2
        nu_xy[c] = nu
        zxy[c] = complex(np.cos(a0), np.sin(a0))
        rxy[c] = complex(np.cos(0.5 * nu * dt), np.sin(0.5 * nu * dt))
    zz = np.empty(nz, dtype=np.complex128)
    rz = np.empty(nz, dtype=np.complex128)
    nu_z = np.empty(nz)
    for c in range(nz):
        b0 = z_a[c] * phi1 + z_b[c] * phi2
        nu = z_a[c] * omega1 + z_b[c] * omega2
        nu_z[c] = nu
        zz[c] = complex(np.cos(b0), np.sin(b0))
        rz[c] = complex(np.cos(0.5 * nu * dt), np.sin(0.5 * nu * dt))

    # linear parts of the input-drive phases
    pd1 = complex(1.0, 0.0)
    pd2 = complex(1.0, 0.0)
    rd1 = complex(np.cos(0.5 * freq1 * dt), np.sin(0.5 * freq1 * dt))
    rd2 = complex(np.cos(0.5 * freq2 * dt), np.sin(0.5 * freq2 * dt))

    sxy = np.empty((3, nxy), dtype=np.complex128)
    sz_ = np.empty((3, nz), dtype=np.complex128)
    spd1 = np.empty(3, dtype=np.complex128)
    spd2 = np.empty(3, dtype=np.complex128)

    e1 = np.zeros(nch)
    e2 = np.zeros(nch)
    e3 = np.zeros(nch)
    e4 = np.zeros(nch)

    p1 = psi0[0]
    p2 = psi0[1]
    w1 = 0.0
    w2 = 0.0
    dph = 0.0
    ech = np.zeros(nch)

    out_psi[0, 0] = p1
    out_psi[0, 1] = p2
    out_w[0, 0] = 0.0
    out_w[0, 1] = 0.0
    out_norm[0] = np.sqrt(p1.real**2 + p1.imag**2 + p2.real**2 + p2.imag**2)
    out_dphase[0] = 0.0
    if track:
        for c in range(nch):
            out_ech[0, c] = 0.0

    status = 0
    bad = -1

    for step in range(nsteps):
        # stage phasors at t, t+dt/2, t+dt
        for c in range(nxy):
            sxy[0, c] = zxy[c]
            zh = zxy[c] * rxy[c]
            sxy[1, c] = zh
            zxy[c] = zh * rxy[c]
            sxy[2, c] = zxy[c]
        for c in range(nz):
            sz_[0, c] = zz[c]
            zh = zz[c] * rz[c]
            sz_[1, c] = zh
            zz[c] = zh * rz[c]
            sz_[2, c] = zz[c]
        spd1[0] = pd1
        pdh = pd1 * rd1
        spd1[1] = pdh
        pd1 = pdh * rd1
        spd1[2] = pd1
        spd2[0] = pd2
        pdh = pd2 * rd2
        spd2[1] = pdh
        pd2 = pdh * rd2
        spd2[2] = pd2

        kp1 = complex(0.0, 0.0)
        kp2 = complex(0.0, 0.0)
        kw1 = 0.0
        kw2 = 0.0
        kdp = 0.0
        a1 = p1
        a2 = p2
        adp = dph
        for stage in range(4):
            sidx = 0 if stage == 0 else (1 if stage < 3 else 2)
            # Hamiltonian Pauli coefficients and their theta-derivatives
            hx = 0.0
            hy = 0.0
            dhx1 = 0.0
            dhx2 = 0.0
            dhy1 = 0.0
            dhy2 = 0.0
            for c in range(nxy):
                cs = sxy[sidx, c].real
                sn = sxy[sidx, c].imag
                hx += xy_wx[c] * cs
                hy += xy_wy[c] * sn
                dhx1 -= xy_wx[c] * sn * xy_a[c]
                dhx2 -= xy_wx[c] * sn * xy_b[c]
                dhy1 += xy_wy[c] * cs * xy_a[c]
                dhy2 += xy_wy[c] * cs * xy_b[c]
            hx *= omega_r
            hy *= omega_r
            dhx1 *= omega_r
            dhx2 *= omega_r
            dhy1 *= omega_r
            dhy2 *= omega_r
            sz_sum = 0.0
            dhz1 = 0.0
            dhz2 = 0.0
            for c in range(nz):
                cs = sz_[sidx, c].real
                sn = sz_[sidx, c].imag
                sz_sum += z_w[c] * sn
                dhz1 -= z_w[c] * cs * z_a[c]
                dhz2 -= z_w[c] * cs * z_b[c]
            hz = 0.5 * delta - omega_r * sinphi * sz_sum
            dhz1 *= omega_r * sinphi
            dhz2 *= omega_r * sinphi
            lam_h = 2.0 * omega_r * sinphi * sz_sum

            # expectations on the normalized state; an (almost) empty mode
            # contributes no work
            n2 = a1.real**2 + a1.imag**2 + a2.real**2 + a2.imag**2
            if n2 > 1e-24:
                cross = a1.conjugate() * a2
                pz = (a1.real**2 + a1.imag**2 - a2.real**2 - a2.imag**2) / n2
                cr2 = 2.0 / n2 * cross
            else:
                pz = 0.0
                cr2 = complex(0.0, 0.0)

            # work rates from <dH/dtheta_i> on the normalized state
            ex1 = dhz1 * pz + dhx1 * cr2.real + dhy1 * cr2.imag
            ex2 = dhz2 * pz + dhx2 * cr2.real + dhy2 * cr2.imag
            dw1 = omega1 * ex1
            dw2 = omega2 * ex2

            # -i H psi (- gamma psi + s for dissipative runs)
            hp1 = hz * a1 + complex(hx, -hy) * a2
            hp2 = complex(hx, hy) * a1 - hz * a2
            dp1 = complex(hp1.imag, -hp1.real)
            dp2 = complex(hp2.imag, -hp2.real)
            if dissipative:
                dp1 -= gamma * a1
                dp2 -= gamma * a2
                h1 = dcoef1 * adp
                h2 = dcoef2 * adp
                dp1 += amp1 * spd1[sidx] * complex(np.cos(h1), np.sin(h1))
                dp2 += amp2 * spd2[sidx] * complex(np.cos(h2), np.sin(h2))

            if track:
                if stage == 0:
                    ev = e1
                elif stage == 1:
                    ev = e2
                elif stage == 2:
                    ev = e3
                else:
                    ev = e4
                for c in range(nxy):
                    cs = sxy[sidx, c].real
                    sn = sxy[sidx, c].imag
                    gx = -omega_r * xy_wx[c] * sn
                    gy = omega_r * xy_wy[c] * cs
                    ev[c] = nu_xy[c] * (gx * cr2.real + gy * cr2.imag)
                for c in range(nz):
                    cs = sz_[sidx, c].real
                    gz = -omega_r * sinphi * z_w[c] * cs
                    ev[nxy + c] = nu_z[c] * gz * pz

            if stage == 0:
                kp1 = dp1
                kp2 = dp2
                kw1 = dw1
                kw2 = dw2
                kdp = lam_h
                a1 = p1 + 0.5 * dt * dp1
                a2 = p2 + 0.5 * dt * dp2
                adp = dph + 0.5 * dt * lam_h
            elif stage == 1:
                kp1 += 2.0 * dp1
                kp2 += 2.0 * dp2
                kw1 += 2.0 * dw1
                kw2 += 2.0 * dw2
                kdp += 2.0 * lam_h
                a1 = p1 + 0.5 * dt * dp1
                a2 = p2 + 0.5 * dt * dp2
                adp = dph + 0.5 * dt * lam_h
            elif stage == 2:
                kp1 += 2.0 * dp1
                kp2 += 2.0 * dp2
                kw1 += 2.0 * dw1
                kw2 += 2.0 * dw2
                kdp += 2.0 * lam_h
                a1 = p1 + dt * dp1
                a2 = p2 + dt * dp2
                adp = dph + dt * lam_h
            else:
                kp1 += dp1
                kp2 += dp2
                kw1 += dw1
                kw2 += dw2
                kdp += lam_h

        if status != 0:
            break

        sixth = dt / 6.0
        p1 = p1 + sixth * kp1
        p2 = p2 + sixth * kp2
        w1 = w1 + sixth * kw1
        w2 = w2 + sixth * kw2
        dph = dph + sixth * kdp
        if track:
            for c in range(nch):
                ech[c] += sixth * (e1[c] + 2.0 * e2[c] + 2.0 * e3[c] + e4[c])

        if (step + 1) % decimate == 0:
            s = (step + 1) // decimate
            out_psi[s, 0] = p1
            out_psi[s, 1] = p2
            out_w[s, 0] = w1
            out_w[s, 1] = w2
            nrm = np.sqrt(p1.real**2 + p1.imag**2 + p2.real**2 + p2.imag**2)
            out_norm[s] = nrm
            out_dphase[s] = dph
            if track:
                for c in range(nch):
                    out_ech[s, c] = ech[c]
            if not np.isfinite(nrm):
                status = 1
                bad = s
                break

    return status, bad


def _drive_wiring(cfg, diss):
    """Input tone on (beta1, beta2) in the modulation frame.

    The laser sits ``drive_detuning`` (default -3*Omega_R) below the frame
    center, next to the lower supermode; rotating out the carrier and the
    supermode splitting leaves a slow tone only on beta2, at
    exp(i((-d - delta/2) t + Delta_h/2)) with Delta_h the integral of the
    effective frequency modulation carried by the kernel.  The mirror tone
    on beta1 retains the full splitting and drops under the rotating-wave
    approximation.
    """
    amp = np.sqrt(diss.gamma_e) * diss.s_amp
    d = diss.resolved_detuning(cfg)
    freq = -d - 0.5 * cfg.delta
    return (0.0, amp, freq, freq, 0.5, 0.5)


def _check_step(kind, cfg, phi, dt):
    if dt <= 0:
        raise StepTooLargeError("dt must be positive")
    bound = hamiltonian_norm_bound(kind, cfg, phi)
    if dt * bound > PHASE_STEP_LIMIT:
        raise StepTooLargeError(
            f"dt*||H|| = {dt * bound:.3f} rad exceeds {PHASE_STEP_LIMIT}; "
            f"use dt <= {PHASE_STEP_LIMIT / bound:.2e}"
        )


def _bloch_from_amps(amps, norm):
    n2 = np.maximum(norm**2, 1e-300)
    cross = np.conj(amps[:, 0]) * amps[:, 1]
    bloch = np.empty((len(amps), 3))
    bloch[:, 0] = 2.0 * cross.real / n2
    bloch[:, 1] = 2.0 * cross.imag / n2
    bloch[:, 2] = (np.abs(amps[:, 0]) ** 2 - np.abs(amps[:, 1]) ** 2) / n2
    return bloch


def _run(kind, cfg, phi, diss, T, dt, decimate, psi0, track_harmonics):
    _check_step(kind, cfg, phi, dt)
    nsteps = max(int(np.ceil(round(T / dt, 6) / decimate)) * decimate, decimate)
    nsamp = nsteps // decimate + 1

    if psi0 is None:
        psi0 = initial_state(kind, cfg, phi)
    amp0 = np.asarray(psi0.amp, dtype=complex)

    xy_tones, xy_wx, xy_wy, z_tones, z_w = channel_arrays(kind)
    nch = len(xy_wx) + len(z_w)

    out_psi = np.empty((nsamp, 2), dtype=complex)
    out_w = np.empty((nsamp, 2))
    out_norm = np.empty(nsamp)
    out_dphase = np.empty(nsamp)
    out_ech = np.empty((nsamp, nch)) if track_harmonics else np.empty((1, nch))

    dissipative = diss is not None and diss.enabled
    gamma = diss.gamma if dissipative else 0.0
    if dissipative:
        amp1, amp2, freq1, freq2, dcoef1, dcoef2 = _drive_wiring(cfg, diss)
    else:
        amp1 = amp2 = freq1 = freq2 = dcoef1 = dcoef2 = 0.0

    status, bad = _run_kernel(
        amp0,
        dt,
        nsteps,
        decimate,
        cfg.omega1,
        cfg.omega2,
        cfg.phi1,
        cfg.phi2,
        cfg.omega_r,
        cfg.delta,
        float(np.sin(phi)),
        np.ascontiguousarray(xy_tones[:, 0]),
        np.ascontiguousarray(xy_tones[:, 1]),
        xy_wx,
        xy_wy,
        np.ascontiguousarray(z_tones[:, 0]),
        np.ascontiguousarray(z_tones[:, 1]),
        z_w,
        gamma,
        amp1,
        amp2,
        freq1,
        freq2,
        dcoef1,
        dcoef2,
        dissipative,
        track_harmonics,
        out_psi,
        out_w,
        out_norm,
        out_dphase,
        out_ech,
    )
    if status == 1:
        t_bad = bad * decimate * dt
        raise NumericalBlowupError(f"non-finite state at t = {t_bad:.6g}", t_bad=t_bad)
    if dissipative and amp1 == 0.0 and amp2 == 0.0 and out_norm[-1] < 1e-12:
        raise ZeroNormError("undriven state decayed below 1e-12")

    times = np.arange(nsamp) * (decimate * dt)
    return Trajectory(
        kind=kind,
        cfg=cfg,
        phi=float(phi),
        diss=diss if dissipative else None,
        dt=dt,
        decimate=decimate,
        times=times,
        amps=out_psi,
        bloch=_bloch_from_amps(out_psi, out_norm),
        w1=out_w[:, 0],
        w2=out_w[:, 1],
        norm=out_norm,
        dphase=out_dphase,
        e_channels=out_ech if track_harmonics else None,
    )


def evolve_conservative(
    kind,
    cfg,
    phi,
    T=None,
    dt=DEFAULT_DT,
    decimate=DEFAULT_DECIMATE,
    psi0=None,
    track_harmonics=False,
):
    """Integrate the Schroedinger dynamics from the lower-band eigenstate."""
    if T is None:
        T = default_horizon(cfg)
    return _run(kind, cfg, phi, None, T, dt, decimate, psi0, track_harmonics)


def evolve_driven_dissipative(
    kind,
    cfg,
    phi,
    diss,
    T=None,
    dt=DEFAULT_DT,
    decimate=DEFAULT_DECIMATE,
    psi0=None,
    track_harmonics=False,
):
    """Integrate the lossy, externally driven supermode dynamics."""
    if T is None:
        T = default_horizon(cfg, diss)
    return _run(kind, cfg, phi, diss, T, dt, decimate, psi0, track_harmonics)
