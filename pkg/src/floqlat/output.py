"""Bit-exact CSV output, run manifests, and AWG waveform export.

All numeric columns are written with 17 significant digits so downstream
tools reproduce analyses from files alone.  Every file carries the full
parameter echo as leading ``# key = value`` comment lines; re-running from
that echo reproduces the file byte-identically (timestamps live only in
the manifest).
"""

import json
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .drive import FRAME_CONVENTION, harmonic_table, modulation_theta, theta
from .errors import NyquistViolationError

FLOAT_FMT = "%.17g"


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return FLOAT_FMT % x
    return str(x)


def _echo_lines(echo):
    return [f"# {key} = {_fmt(value)}" for key, value in echo.items()]


def write_csv(path, header, columns, echo=None):
    """Write columns (sequence of equal-length arrays) with an echo block."""
    rows = len(columns[0])
    lines = _echo_lines(echo) if echo else []
    lines.append(",".join(header))
    for i in range(rows):
        lines.append(",".join(_fmt(col[i]) for col in columns))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


TRAJECTORY_COLUMNS = [
    "t",
    "re_b1",
    "im_b1",
    "re_b2",
    "im_b2",
    "bx",
    "by",
    "bz",
    "norm",
    "W1",
    "W2",
]


def write_trajectory_csv(path, traj, echo=None):
    cols = [
        traj.times,
        traj.amps[:, 0].real,
        traj.amps[:, 0].imag,
        traj.amps[:, 1].real,
        traj.amps[:, 1].imag,
        traj.bloch[:, 0],
        traj.bloch[:, 1],
        traj.bloch[:, 2],
        traj.norm,
        traj.w1,
        traj.w2,
    ]
    return write_csv(path, TRAJECTORY_COLUMNS, cols, echo)


SWEEP_COLUMNS = ["M", "phi", "slope1", "slope2", "r2_1", "r2_2", "chern", "status"]


def write_sweep_csv(path, result, echo=None):
    rows = []
    for i, m in enumerate(result.m_values):
        for j, phi in enumerate(result.phi_values):
            chern = result.chern[i, j]
            rows.append(
                [
                    m,
                    phi,
                    result.slope1[i, j],
                    result.slope2[i, j],
                    result.r2_1[i, j],
                    result.r2_2[i, j],
                    "" if not np.isfinite(chern) else int(chern),
                    result.status[i, j],
                ]
            )
    lines = _echo_lines(echo) if echo else []
    lines.append(",".join(SWEEP_COLUMNS))
    for row in rows:
        lines.append(",".join(_fmt(v) if v != "" else "" for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


DOS_COLUMNS = ["M", "e_lo", "e_hi", "density"]


def write_dos_csv(path, histograms, echo=None):
    ms, lo, hi, dens = [], [], [], []
    for hist in histograms:
        n = len(hist.density)
        ms.extend([hist.m] * n)
        lo.extend(hist.edges[:-1])
        hi.extend(hist.edges[1:])
        dens.extend(hist.density)
    return write_csv(
        path, DOS_COLUMNS, [np.array(ms), np.array(lo), np.array(hi), np.array(dens)], echo
    )


CHERN_COLUMNS = ["kind", "M", "phi", "grid_n", "chern"]


def write_chern_csv(path, kind, m, phi, grid_n, chern, echo=None):
    lines = _echo_lines(echo) if echo else []
    lines.append(",".join(CHERN_COLUMNS))
    lines.append(
        ",".join([kind.value, _fmt(m), _fmt(phi), _fmt(grid_n), _fmt(chern)])
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_manifest(path, echo, wall_time_s, extra=None):
    payload = {
        "tool": "floqlat",
        "version": __version__,
        "frame_convention": FRAME_CONVENTION,
        "wall_time_s": wall_time_s,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "parameters": {key: _json_value(v) for key, v in echo.items()},
    }
    if extra:
        payload.update({key: _json_value(v) for key, v in extra.items()})
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _json_value(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


WAVEFORM_COLUMNS = ["t", "vx", "vy", "lam", "delta"]


@dataclass(frozen=True)
class WaveformFile:
    """Uniformly sampled drive waveforms plus the accumulated phase ramp."""

    path: str
    sample_rate: float
    duration: float
    kind: object
    times: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    lam: np.ndarray
    delta: np.ndarray


def export_waveforms(kind, cfg, phi, sample_rate, T, path, echo=None):
    """Write t, Vx/V0, Vy/V0, lambda, and Delta = integral(lambda) columns.

    ``sample_rate`` is in samples per time unit and must exceed four times
    the highest synthesized tone frequency (cycles per time unit).
    """
    worst = max(harmonic_table(kind), key=lambda c: abs(c.frequency(cfg)))
    max_cycles = abs(worst.frequency(cfg)) / (2.0 * np.pi)
    if sample_rate <= 4.0 * max_cycles:
        raise NyquistViolationError(
            f"sample_rate {sample_rate} <= 4x tone {worst.label()} "
            f"({max_cycles:.6g} cycles per time unit)"
        )
    n = max(int(round(T * sample_rate)), 1) + 1
    times = np.arange(n) / sample_rate
    th1, th2 = theta(times, cfg)
    vx, vy, lam = modulation_theta(kind, cfg, phi, np.stack([th1, th2], axis=-1))
    delta = np.concatenate(
        [[0.0], np.cumsum(0.5 * (lam[1:] + lam[:-1]) * np.diff(times))]
    )
    header = dict(echo or {})
    header.update(
        {
            "waveform.sample_rate": sample_rate,
            "waveform.duration": times[-1],
            "waveform.kind": kind.value,
        }
    )
    write_csv(path, WAVEFORM_COLUMNS, [times, vx, vy, lam, delta], header)
    return WaveformFile(
        path=str(path),
        sample_rate=sample_rate,
        duration=float(times[-1]),
        kind=kind,
        times=times,
        vx=vx,
        vy=vy,
        lam=lam,
        delta=delta,
    )
