"""Flat key = value run configuration with validated defaults.

One format: ``key = value`` lines, ``#`` comments, nesting via dotted keys
(``drive.omega1``).  Unknown keys are rejected; validation failures name the
offending key.  The default configuration reproduces the conservative
brick-wall topological run (M = 1, phi = pi/2, golden-ratio drives).
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .drive import GOLDEN_RATIO, DriveConfig
from .dynamics import DEFAULT_DECIMATE, DEFAULT_DT, DissipationConfig
from .errors import ConfigError
from .lattice import ModelKind
from .sweep import MODE_CONSERVATIVE, MODE_DISSIPATIVE, SweepSpec

COMMENSURATE_MAX_DEN = 64


def _parse_bool(raw):
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_ratio(raw):
    if raw.strip().lower() == "golden":
        return GOLDEN_RATIO
    return float(raw)


_SCHEMA = {
    # key: (parser, default)
    "kind": (str, "brickwall"),
    "M": (float, 1.0),
    "phi": (float, np.pi / 2),
    "t1": (float, 1.0),
    "t2": (float, 1.0),
    "drive.omega1": (float, 3.0),
    "drive.omega2": (float, None),
    "drive.ratio": (_parse_ratio, GOLDEN_RATIO),
    "drive.phi1": (float, np.pi / 10),
    "drive.phi2": (float, 0.0),
    "drive.omega_r": (float, 125.0),
    "drive.mu": (float, 30000.0),
    "diss.enabled": (_parse_bool, False),
    "diss.gamma": (float, 0.01),
    "diss.gamma_e": (float, 0.01),
    "diss.s_amp": (float, 1.0),
    "diss.drive_detuning": (float, None),
    "evolve.T": (float, None),
    "evolve.dt": (float, DEFAULT_DT),
    "evolve.decimate": (int, DEFAULT_DECIMATE),
    "evolve.harmonics": (_parse_bool, False),
    "sweep.m_min": (float, -6.0),
    "sweep.m_max": (float, 6.0),
    "sweep.m_n": (int, 10),
    "sweep.phi_min": (float, -np.pi),
    "sweep.phi_max": (float, np.pi),
    "sweep.phi_n": (int, 10),
    "sweep.mode": (str, MODE_CONSERVATIVE),
    "sweep.ratio": (_parse_ratio, None),
    "sweep.T": (float, None),
    "sweep.workers": (int, None),
    "sweep.chern_grid": (int, 64),
    "output.dir": (str, "."),
    "run.deterministic": (_parse_bool, True),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters plus the raw key/value echo."""

    kind: ModelKind
    m: float
    phi: float
    t1: float
    t2: float
    drive: DriveConfig
    diss: DissipationConfig
    diss_enabled: bool
    evolve_T: Optional[float]
    dt: float
    decimate: int
    harmonics: bool
    sweep: SweepSpec
    output_dir: str
    deterministic: bool
    values: dict = field(repr=False, default_factory=dict)

    @property
    def commensurate(self):
        """Rational drive-frequency ratio detected up to denominator 64."""
        ratio = self.drive.omega2 / self.drive.omega1
        frac = Fraction(ratio).limit_denominator(COMMENSURATE_MAX_DEN)
        return abs(float(frac) - ratio) < 1e-9

    def ratio_as_fraction(self):
        ratio = self.drive.omega2 / self.drive.omega1
        frac = Fraction(ratio).limit_denominator(COMMENSURATE_MAX_DEN)
        return frac if abs(float(frac) - ratio) < 1e-9 else None

    def echo(self):
        """Complete parameter echo; re-loading it reproduces this config.

        Unset optional keys are omitted (their defaults regenerate), and the
        resolved drive frequency and laser detuning are spelled out.
        """
        out = {k: v for k, v in self.values.items() if v is not None}
        out["drive.omega2"] = self.drive.omega2
        out["diss.drive_detuning"] = self.diss.resolved_detuning(self.drive)
        out["commensurate"] = self.commensurate
        return out


def _validate(key, cond, message):
    if not cond:
        raise ConfigError(f"invalid value for {key}: {message}", key=key)


def build_config(values):
    """Assemble and validate a RunConfig from a complete key/value map."""
    try:
        kind = ModelKind.parse(values["kind"])
    except ValueError as exc:
        raise ConfigError(f"invalid value for kind: {exc}", key="kind") from None

    _validate("phi", -np.pi <= values["phi"] <= np.pi, "phi must lie in [-pi, pi]")
    _validate("t1", values["t1"] > 0, "t1 must be positive")
    _validate("t2", values["t2"] >= 0, "t2 must be non-negative")
    _validate("drive.omega1", values["drive.omega1"] > 0, "must be positive")
    _validate("drive.omega_r", values["drive.omega_r"] > 0, "must be positive")
    _validate("drive.mu", values["drive.mu"] > 0, "must be positive")
    omega2 = values["drive.omega2"]
    if omega2 is None:
        _validate("drive.ratio", values["drive.ratio"] > 0, "must be positive")
        omega2 = values["drive.omega1"] * values["drive.ratio"]
    _validate("drive.omega2", omega2 > 0, "must be positive")
    _validate("diss.gamma", values["diss.gamma"] >= 0, "gamma must be non-negative")
    _validate(
        "diss.gamma_e", values["diss.gamma_e"] >= 0, "gamma_e must be non-negative"
    )
    _validate("evolve.dt", values["evolve.dt"] > 0, "dt must be positive")
    _validate("evolve.decimate", values["evolve.decimate"] >= 1, "decimate >= 1")
    if values["evolve.T"] is not None:
        _validate("evolve.T", values["evolve.T"] > 0, "T must be positive")
    _validate("sweep.m_n", values["sweep.m_n"] >= 2, "need at least 2 points")
    _validate("sweep.phi_n", values["sweep.phi_n"] >= 2, "need at least 2 points")
    _validate(
        "sweep.mode",
        values["sweep.mode"] in (MODE_CONSERVATIVE, MODE_DISSIPATIVE),
        f"must be {MODE_CONSERVATIVE} or {MODE_DISSIPATIVE}",
    )
    if values["sweep.workers"] is not None:
        _validate("sweep.workers", values["sweep.workers"] >= 1, "workers >= 1")
    _validate("sweep.chern_grid", values["sweep.chern_grid"] >= 16, "grid >= 16")
    _validate(
        "run.deterministic",
        values["run.deterministic"] is True,
        "only deterministic runs are supported",
    )

    drive = DriveConfig(
        omega1=values["drive.omega1"],
        omega2=omega2,
        phi1=values["drive.phi1"],
        phi2=values["drive.phi2"],
        omega_r=values["drive.omega_r"],
        delta=values["M"] * values["drive.omega_r"],
        mu=values["drive.mu"],
    )
    diss = DissipationConfig(
        gamma=values["diss.gamma"],
        gamma_e=values["diss.gamma_e"],
        s_amp=values["diss.s_amp"],
        drive_detuning=values["diss.drive_detuning"],
        enabled=values["diss.enabled"],
    )
    sweep_spec = SweepSpec(
        kind=kind,
        m_range=(values["sweep.m_min"], values["sweep.m_max"], values["sweep.m_n"]),
        phi_range=(
            values["sweep.phi_min"],
            values["sweep.phi_max"],
            values["sweep.phi_n"],
        ),
        mode=values["sweep.mode"],
        ratio=values["sweep.ratio"],
        base_cfg=drive,
        diss=replace(diss, enabled=True),
        T=values["sweep.T"],
        dt=values["evolve.dt"],
        decimate=values["evolve.decimate"],
        workers=values["sweep.workers"],
        chern_grid=values["sweep.chern_grid"],
    )
    return RunConfig(
        kind=kind,
        m=values["M"],
        phi=values["phi"],
        t1=values["t1"],
        t2=values["t2"],
        drive=drive,
        diss=diss,
        diss_enabled=values["diss.enabled"],
        evolve_T=values["evolve.T"],
        dt=values["evolve.dt"],
        decimate=values["evolve.decimate"],
        harmonics=values["evolve.harmonics"],
        sweep=sweep_spec,
        output_dir=values["output.dir"],
        deterministic=values["run.deterministic"],
        values=dict(values),
    )


def parse_config_text(text, source="<string>"):
    """Parse flat key = value text into a raw value map."""
    values = {key: default for key, (_, default) in _SCHEMA.items()}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(
                f"{source}:{lineno}: expected 'key = value', got {raw_line!r}",
                line=lineno,
            )
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key == "commensurate":
            continue  # echo-only output field, ignored on re-load
        if key not in _SCHEMA:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}", key=key, line=lineno)
        parser, _ = _SCHEMA[key]
        try:
            values[key] = parser(raw_value)
        except ValueError as exc:
            raise ConfigError(
                f"{source}:{lineno}: cannot parse {key!r}: {exc}", key=key, line=lineno
            ) from None
    return values


def load_config(path):
    """Read, parse, and validate a config file (missing keys use defaults)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return build_config(parse_config_text(text, source=str(path)))


def default_config():
    return build_config({key: default for key, (_, default) in _SCHEMA.items()})
