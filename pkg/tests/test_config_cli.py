import json

import numpy as np
import pytest

from floqlat.cli import run_cli
from floqlat.config import build_config, default_config, load_config, parse_config_text
from floqlat.drive import GOLDEN_RATIO, DriveConfig, modulation
from floqlat.errors import ConfigError, NyquistViolationError
from floqlat.lattice import ModelKind
from floqlat.output import export_waveforms


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_empty_file_gives_figure_defaults(tmp_path):
    cfg = load_config(write(tmp_path, ""))
    assert cfg.kind is ModelKind.BRICKWALL
    assert cfg.m == 1.0
    assert abs(cfg.phi - np.pi / 2) < 1e-15
    assert not cfg.diss_enabled
    assert abs(cfg.drive.omega1 - 3.0) < 1e-15
    assert abs(cfg.drive.omega2 - 3.0 * GOLDEN_RATIO) < 1e-15
    assert abs(cfg.drive.phi1 - np.pi / 10) < 1e-15
    assert cfg.drive.phi2 == 0.0
    assert cfg.drive.omega_r == 125.0
    assert not cfg.commensurate


def test_comments_and_dotted_keys(tmp_path):
    cfg = load_config(
        write(
            tmp_path,
            """
            # a comment
            kind = haldane
            M = 2.5            # inline comment
            drive.omega1 = 4.0
            diss.enabled = true
            """,
        )
    )
    assert cfg.kind is ModelKind.HALDANE
    assert cfg.m == 2.5
    assert cfg.drive.omega1 == 4.0
    assert abs(cfg.drive.delta - 2.5 * 125.0) < 1e-12
    assert cfg.diss_enabled


def test_negative_gamma_names_key(tmp_path):
    with pytest.raises(ConfigError) as err:
        load_config(write(tmp_path, "diss.gamma = -1\n"))
    assert "gamma" in str(err.value)


def test_unknown_key_rejected(tmp_path):
    with pytest.raises(ConfigError) as err:
        load_config(write(tmp_path, "drive.omega3 = 5\n"))
    assert "omega3" in str(err.value)


def test_parse_error_reports_line(tmp_path):
    with pytest.raises(ConfigError) as err:
        load_config(write(tmp_path, "kind = brickwall\nnot a config line\n"))
    assert err.value.line == 2


def test_bad_value_reports_key_and_line(tmp_path):
    with pytest.raises(ConfigError) as err:
        load_config(write(tmp_path, "M = two\n"))
    assert err.value.key == "M" and err.value.line == 1


def test_commensurate_flag_surfaces(tmp_path):
    cfg = load_config(write(tmp_path, "drive.ratio = 1.5\n"))
    assert cfg.commensurate
    assert str(cfg.ratio_as_fraction()) == "3/2"
    assert cfg.echo()["commensurate"] is True
    # golden ratio is not rational up to denominator 64
    assert not default_config().commensurate


def test_echo_round_trip(tmp_path):
    cfg = load_config(write(tmp_path, "kind = haldane\nM = 3.0\ndrive.ratio = 1.5\n"))
    echoed = "\n".join(f"{k} = {v}" for k, v in cfg.echo().items())
    cfg2 = build_config(parse_config_text(echoed))
    assert cfg2.kind is cfg.kind
    assert cfg2.m == cfg.m
    assert cfg2.drive == cfg.drive
    assert cfg2.diss.gamma == cfg.diss.gamma
    assert cfg2.diss.resolved_detuning(cfg2.drive) == cfg.diss.resolved_detuning(cfg.drive)


def test_csv_echo_block_is_loadable(tmp_path):
    # the '# key = value' echo block of any output file is itself a config
    cfg_path = write(tmp_path, "evolve.T = 2.0\n")
    out = str(tmp_path / "traj.csv")
    assert run_cli(["evolve", "--config", cfg_path, "--out", out]) == 0
    echo_lines = [
        line[2:] for line in open(out) if line.startswith("# ")
    ]
    cfg2 = build_config(parse_config_text("\n".join(echo_lines)))
    assert cfg2.evolve_T == 2.0
    assert cfg2.kind is ModelKind.BRICKWALL


def test_deterministic_flag_must_stay_on(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "run.deterministic = false\n"))


def test_cli_version(capsys):
    assert run_cli(["version"]) == 0
    assert capsys.readouterr().out.strip() == "0.1.0"


def test_cli_unknown_subcommand(capsys):
    assert run_cli(["frobnicate"]) == 2


def test_cli_chern_prints_integer(capsys):
    code = run_cli(["chern", "--kind", "haldane", "--M", "1", "--phi", "1.5708", "--grid", "64"])
    assert code == 0
    out = capsys.readouterr().out.strip()
    assert out in ("-1", "1")


def test_cli_chern_trivial(capsys):
    assert run_cli(["chern", "--kind", "brickwall", "--M", "6", "--phi", "1.5708"]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_cli_evolve_writes_contracted_csv(tmp_path, capsys):
    cfg_path = write(tmp_path, "evolve.T = 10.0\n")
    out = str(tmp_path / "traj.csv")
    assert run_cli(["evolve", "--config", cfg_path, "--out", out]) == 0
    lines = [l for l in open(out) if not l.startswith("#")]
    header = lines[0].strip().split(",")
    assert header == ["t", "re_b1", "im_b1", "re_b2", "im_b2", "bx", "by", "bz", "norm", "W1", "W2"]
    data = np.loadtxt(out, delimiter=",", skiprows=len(open(out).read().splitlines()) - len(lines) + 1)
    assert data.shape[1] == 11
    norm = np.sqrt(data[:, 1] ** 2 + data[:, 2] ** 2 + data[:, 3] ** 2 + data[:, 4] ** 2)
    np.testing.assert_allclose(norm, data[:, 8], atol=1e-12)
    manifest = json.load(open(out + ".manifest.json"))
    assert manifest["version"] == "0.1.0"
    assert "sigma_z" in manifest["frame_convention"]


def test_cli_evolve_output_reproducible(tmp_path):
    cfg_path = write(tmp_path, "evolve.T = 5.0\n")
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert run_cli(["evolve", "--config", cfg_path, "--out", out1]) == 0
    assert run_cli(["evolve", "--config", cfg_path, "--out", out2]) == 0
    assert open(out1).read() == open(out2).read()


def test_cli_sweep_csv_contract(tmp_path):
    cfg_path = write(
        tmp_path,
        """
        sweep.m_n = 2
        sweep.phi_n = 2
        sweep.m_min = 1.0
        sweep.m_max = 2.0
        sweep.phi_min = 1.0
        sweep.phi_max = 1.5
        sweep.T = 20.0
        """,
    )
    out = str(tmp_path / "sweep.csv")
    assert run_cli(["sweep", "--config", cfg_path, "--out", out]) == 0
    lines = [l.strip() for l in open(out) if not l.startswith("#")]
    assert lines[0] == "M,phi,slope1,slope2,r2_1,r2_2,chern,status"
    assert len(lines) == 1 + 4
    assert all(row.endswith("ok") for row in lines[1:])


def test_cli_dos_csv(tmp_path):
    out = str(tmp_path / "dos.csv")
    assert run_cli(["dos", "--M", "1,2", "--grid", "96", "--bins", "40", "--out", out]) == 0
    lines = [l.strip() for l in open(out) if not l.startswith("#")]
    assert lines[0] == "M,e_lo,e_hi,density"
    assert len(lines) == 1 + 2 * 40


def test_cli_missing_config_is_runtime_error(tmp_path, capsys):
    assert run_cli(["evolve", "--config", str(tmp_path / "nope.cfg")]) == 1
    assert "evolve" in capsys.readouterr().err


def test_waveform_zero_flux(tmp_path):
    cfg = DriveConfig()
    path = str(tmp_path / "wf.csv")
    wf = export_waveforms(ModelKind.BRICKWALL, cfg, 0.0, sample_rate=32.0, T=2.0, path=path)
    assert np.all(wf.lam == 0.0)
    assert np.all(wf.delta == 0.0)
    assert wf.delta[0] == 0.0


def test_waveform_first_sample_matches_hand_value(tmp_path):
    cfg = DriveConfig(phi1=np.pi / 10, phi2=0.0)
    wf = export_waveforms(
        ModelKind.BRICKWALL, cfg, np.pi / 2, 32.0, 1.0, str(tmp_path / "wf.csv")
    )
    assert abs(wf.vx[0] - (2 * np.cos(np.pi / 10) + 1)) < 1e-12


def test_waveform_round_trip(tmp_path):
    cfg = DriveConfig()
    wf = export_waveforms(
        ModelKind.HALDANE, cfg, 1.0, 48.0, 1.5, str(tmp_path / "wf.csv")
    )
    for i in (0, len(wf.times) // 2, len(wf.times) - 1):
        s = modulation(ModelKind.HALDANE, cfg, 1.0, wf.times[i])
        assert abs(s.vx - wf.vx[i]) < 1e-12
        assert abs(s.vy - wf.vy[i]) < 1e-12
        assert abs(s.lam - wf.lam[i]) < 1e-12


def test_waveform_nyquist_guard(tmp_path):
    cfg = DriveConfig()
    with pytest.raises(NyquistViolationError):
        export_waveforms(ModelKind.HALDANE, cfg, 1.0, 4.0, 1.0, str(tmp_path / "x.csv"))


def test_cli_signals(tmp_path):
    out = str(tmp_path / "sig.csv")
    assert run_cli(["signals", "--rate", "64", "--T", "1.0", "--out", out]) == 0
    lines = [l.strip() for l in open(out) if not l.startswith("#")]
    assert lines[0] == "t,vx,vy,lam,delta"
    assert len(lines) == 1 + 65
