import json

import numpy as np
import pytest

from spdcsim.cli import main

TINY = """\
name = {name}
crystal.length_mm = 0.5
pump.bandwidth_fwhm_nm = {bw}
path.d1_mm = 500
path.aperture_size_mm = 2
sweep.tau_start_fs = -50
sweep.tau_stop_fs = 150
sweep.steps = 21
grid.lobes = 12
grid.n_sum = {n_sum}
{extra}
"""


def write(tmp_path, name="tiny", bw=1.0, n_sum=6, extra=""):
    path = tmp_path / f"{name}.cfg"
    path.write_text(TINY.format(name=name, bw=bw, n_sum=n_sum, extra=extra))
    return str(path)


def read_csv(path):
    return np.loadtxt(path, delimiter=",", skiprows=1)


def test_sweep_outputs(tmp_path):
    cfg = write(tmp_path)
    out = tmp_path / "out"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
    raw = (out / "tiny.csv").read_bytes()
    assert b"\r" not in raw
    assert raw.splitlines()[0] == b"tau_fs,rate_raw,rate_normalized"
    data = read_csv(out / "tiny.csv")
    assert data.shape == (21, 3)
    side = json.loads((out / "tiny.json").read_text())
    for key in ("visibility", "asymmetry", "grid", "convergence", "resolved_config", "version", "tool"):
        assert key in side
    assert side["convergence"] is None
    assert 0 <= side["visibility"] <= 1


def test_csv_has_12_significant_digits(tmp_path):
    cfg = write(tmp_path)
    main(["sweep", "--config", cfg, "--out", str(tmp_path)])
    row = (tmp_path / "tiny.csv").read_text().splitlines()[5].split(",")
    mantissa = row[1].split("e")[0].replace(".", "").replace("-", "").lstrip("0")
    assert len(mantissa) <= 12


def test_sidecar_round_trip(tmp_path):
    cfg = write(tmp_path)
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", "--config", cfg, "--out", str(first)]) == 0
    assert main(["sweep", "--config", str(first / "tiny.json"), "--out", str(second)]) == 0
    assert (first / "tiny.csv").read_bytes() == (second / "tiny.csv").read_bytes()


def test_sweep_with_convergence(tmp_path):
    cfg = write(tmp_path)
    code = main(["sweep", "--config", cfg, "--out", str(tmp_path), "--converge"])
    side = json.loads((tmp_path / "tiny.json").read_text())
    assert set(side["convergence"]) == {"n_sum", "n_diff", "n_rho", "n_phi", "n_z"}
    # outputs are written either way; the exit code reports the verdict
    assert code == (0 if max(side["convergence"].values()) <= 1e-3 else 3)


def test_unknown_key_exit_2(tmp_path, capsys):
    cfg = write(tmp_path, extra="path.colour = red")
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "path.colour" in err and "line 11" in err


def test_steps_one_exit_2(tmp_path, capsys):
    assert main(["sweep", "--config", write(tmp_path), "--steps", "1", "--out", str(tmp_path)]) == 2
    assert "sweep.steps" in capsys.readouterr().err


def test_bad_threads(tmp_path):
    assert main(["sweep", "--config", write(tmp_path), "--threads", "0"]) == 2


def test_under_resolved_converge_exit_3(tmp_path, capsys):
    cfg = write(tmp_path, bw=4.0, n_sum=2)
    assert main(["converge", "--config", cfg]) == 3
    report = json.loads(capsys.readouterr().out)
    assert report["converged"] is False and report["max_change"]["n_sum"] > 1e-3


def test_cw_trivially_converged_in_sum(tmp_path, capsys):
    cfg = write(tmp_path, bw=0.0)
    main(["converge", "--config", cfg])
    report = json.loads(capsys.readouterr().out)
    assert report["max_change"]["n_sum"] == 0.0


def test_oracle_requires_flag(tmp_path):
    assert main(["oracle", "--config", write(tmp_path, bw=0.0)]) == 2


def test_oracle_pulsed_flagged_exit_2(tmp_path):
    assert main(["oracle", "--config", write(tmp_path, extra="oracle.one_dimensional = true")]) == 2


def test_oracle_large_aperture_fails(tmp_path, capsys):
    cfg = write(tmp_path, bw=0.0, extra="oracle.one_dimensional = true")
    assert main(["oracle", "--config", cfg]) == 3
    assert json.loads(capsys.readouterr().out)["pass"] is False


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    assert "oned_cw" in capsys.readouterr().out.split()


@pytest.fixture(scope="module")
def fig2_3mm(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig2")
    assert main(["sweep", "--config", "fig2_L3.0mm", "--out", str(out)]) == 0
    return out


def test_fig2_csv_contract(fig2_3mm):
    data = read_csv(fig2_3mm / "fig2_L3.0mm.csv")
    assert np.all(np.diff(data[:, 0]) > 0)
    side = json.loads((fig2_3mm / "fig2_L3.0mm.json").read_text())
    tau, norm = data[:, 0], data[:, 2]
    far = np.argsort(-np.abs(tau - side["dip_tau_fs"]), kind="stable")[: round(0.1 * tau.size)]
    assert abs(np.mean(norm[far]) - 1) < 0.01
