import csv
import io
import os
import subprocess
import sys

import numpy as np
import pytest

from plate_mps.cli import main, oracle, run

SMALL = """
domain.shape = circle
bc.default = clamped
basis.count = 24
sampling.boundary = 256
sampling.interior = 256
scan.k_min = 3.0
scan.k_max = 3.4
scan.step = 0.02
output.resolution = 16
"""


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def small_cfg(tmp_path):
    p = tmp_path / "small.cfg"
    p.write_text(SMALL)
    return p


def test_validate_only_touches_nothing(tmp_path, small_cfg, capsys):
    out = tmp_path / "out"
    assert run(str(small_cfg), validate_only=True, output=str(out)) == 0
    assert "scan.k_min = 3.0" in capsys.readouterr().out
    assert not out.exists()


def test_bad_config_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("scan.k_min = 3\nscan.kmax = 4\n")
    assert main(["run", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.cfg")]) == 2


def test_outputs_and_formats(tmp_path, small_cfg):
    out = tmp_path / "out"
    assert run(str(small_cfg), output=str(out)) == 0
    curve = (out / "tension_curve.csv").read_text().splitlines()
    assert curve[0] == "k,tau_1,tau_2,tau_3,tau_4,g_condition"
    assert len(curve) == 1 + 21
    eig = read_csv(out / "eigenfrequencies.csv")
    assert len(eig) == 1
    assert float(eig[0]["k_star"]) == pytest.approx(3.196, abs=0.01)
    assert float(eig[0]["omega_star"]) == pytest.approx(float(eig[0]["k_star"]) ** 2)
    mode = read_csv(out / "mode_1_1.csv")
    assert list(mode[0]) == ["x", "y", "value"]
    assert mode[0]["value"] == "NaN"
    vals = np.array([float(r["value"]) for r in mode])
    assert np.nanmax(np.abs(vals)) == pytest.approx(1.0)
    manifest = (out / "run_manifest.cfg").read_text()
    assert manifest.startswith("# plate-mps ")
    assert "sampling.seed = 1" in manifest


def test_reruns_are_byte_identical(tmp_path, small_cfg):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(str(small_cfg), output=str(a)) == 0
    assert run(str(small_cfg), threads=3, output=str(b)) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_manifest_reproduces_run(tmp_path, small_cfg):
    a = tmp_path / "a"
    run(str(small_cfg), output=str(a))
    manifest = tmp_path / "again.cfg"
    manifest.write_text((a / "run_manifest.cfg").read_text())
    b = tmp_path / "b"
    assert run(str(manifest), output=str(b)) == 0
    for name in ("tension_curve.csv", "eigenfrequencies.csv", "mode_1_1.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_env_seed_recorded(tmp_path, small_cfg, monkeypatch):
    monkeypatch.setenv("PLATE_MPS_SEED", "99")
    out = tmp_path / "out"
    assert run(str(small_cfg), output=str(out)) == 0
    assert "sampling.seed = 99" in (out / "run_manifest.cfg").read_text()


def test_all_points_failing_exits_3(tmp_path):
    p = tmp_path / "fail.cfg"
    # keeping only directions within 1% of the top of G leaves fewer than four
    p.write_text(SMALL + "scan.reg_eps = 0.99\n")
    out = tmp_path / "out"
    assert run(str(p), output=str(out)) == 3
    assert "warning:" in (out / "run_manifest.cfg").read_text()


def test_oracle_subcommand():
    buf = io.StringIO()
    assert oracle("clamped", k_max=8.0, stdout=buf) == 0
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    ks = [float(r["k"]) for r in rows]
    for ref in (3.196, 4.611, 5.906, 6.306, 7.144):
        assert min(abs(k - ref) for k in ks) < 1e-3

    buf = io.StringIO()
    oracle("clamped", k_max=2.0, stdout=buf)
    assert buf.getvalue().strip() == "k,n,multiplicity"

    buf = io.StringIO()
    oracle("free", nu=0.33, k_max=5.0, stdout=buf)
    ks = [float(r["k"]) for r in csv.DictReader(io.StringIO(buf.getvalue()))]
    for ref in (2.29, 3.01, 3.50, 4.53):
        assert min(abs(k - ref) for k in ks) < 0.005

    assert oracle("glued") == 2


def test_console_script(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "plate_mps.cli", "oracle", "clamped", "--kmax", "3.5"],
        capture_output=True, text=True, check=True,
    )
    assert res.stdout.splitlines()[1].startswith("3.196")


def test_bundled_disk_config(tmp_path):
    out = tmp_path / "disk"
    assert run("disk_clamped.cfg", output=str(out)) == 0
    first = read_csv(out / "eigenfrequencies.csv")[0]
    assert float(first["k_star"]) == pytest.approx(3.196, abs=0.01)


def test_bundled_shape2_free_config(tmp_path):
    out = tmp_path / "free"
    assert run("shape2_free.cfg", output=str(out)) == 0
    ks = [float(r["k_star"]) for r in read_csv(out / "eigenfrequencies.csv")[:3]]
    assert ks == pytest.approx([2.20, 2.40, 2.75], abs=0.02)
