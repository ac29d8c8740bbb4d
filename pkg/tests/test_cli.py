"""End-to-end CLI contract tests (subcommands, exit codes, formats)."""

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

import genhelix as gh


def run_cli(*args, cwd, env_extra=None):
    env = os.environ.copy()
    env.pop("HELIX_TOL", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "genhelix.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        env=env,
    )


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli")
    out = run_cli(
        "generate",
        "--kind", "circular-helix",
        "--params", "a=3,b=4",
        "--nodes", "2000",
        "--out", "h.json",
        cwd=path,
    )
    assert out.returncode == 0, out.stderr
    return path


def test_generate_writes_curve_file(workdir):
    doc = json.loads((workdir / "h.json").read_text())
    assert doc["space"] == "euclidean:3"
    assert doc["param"] == "arclength"
    assert len(doc["samples"]) == 2000


def test_generate_clifford(workdir):
    out = run_cli(
        "generate",
        "--kind", "clifford-s3",
        "--params", f"theta={math.pi / 4},p=1,q=2",
        "--nodes", "1000",
        "--out", "c.json",
        cwd=workdir,
    )
    assert out.returncode == 0, out.stderr
    doc = json.loads((workdir / "c.json").read_text())
    assert doc["space"] == "sphere:3:1"


def test_generate_rejects_degenerate_params(workdir):
    out = run_cli(
        "generate", "--kind", "circular-helix", "--params", "a=0,b=4",
        "--nodes", "200", "--out", "x.json", cwd=workdir,
    )
    assert out.returncode == 2
    assert "a > 0" in out.stderr


def test_generate_rejects_unknown_kind(workdir):
    out = run_cli(
        "generate", "--kind", "trefoil", "--params", "a=1",
        "--nodes", "200", "--out", "x.json", cwd=workdir,
    )
    assert out.returncode == 2


def test_generate_rejects_small_node_count(workdir):
    out = run_cli(
        "generate", "--kind", "circular-helix", "--params", "a=3,b=4",
        "--nodes", "32", "--out", "x.json", cwd=workdir,
    )
    assert out.returncode == 2


def test_analyze_helix_exit_zero_and_report(workdir):
    out = run_cli("analyze", "--in", "h.json", "--report", "h.report.json", cwd=workdir)
    assert out.returncode == 0
    doc = json.loads((workdir / "h.report.json").read_text())
    assert doc["verdict"] == "Helix"
    assert abs(doc["angle_mean"] - 0.8) < 1e-6


def test_analyze_perturbed_exit_one(workdir):
    out = run_cli(
        "generate",
        "--kind", "perturbed-circular-helix",
        "--params", "a=3,b=4,eps=0.05",
        "--nodes", "1500",
        "--out", "p.json",
        cwd=workdir,
    )
    assert out.returncode == 0, out.stderr
    out = run_cli("analyze", "--in", "p.json", "--report", "p.report.json", cwd=workdir)
    assert out.returncode == 1
    assert json.loads((workdir / "p.report.json").read_text())["verdict"] == "NonHelix"


def test_analyze_two_sample_file_exit_three(workdir):
    (workdir / "two.json").write_text(
        '{"space": "euclidean:3", "param": "generic", "samples": [[0,0,0],[1,0,0]]}'
    )
    out = run_cli("analyze", "--in", "two.json", cwd=workdir)
    assert out.returncode == 3
    assert "at least 5" in out.stderr


def test_analyze_malformed_json_exit_three(workdir):
    (workdir / "broken.json").write_text('{"space": "euclidean:3",')
    out = run_cli("analyze", "--in", "broken.json", cwd=workdir)
    assert out.returncode == 3
    assert "line" in out.stderr


def test_analyze_missing_file_exit_three(workdir):
    out = run_cli("analyze", "--in", "nope.json", cwd=workdir)
    assert out.returncode == 3


def test_analyze_degenerate_exit_four(workdir):
    spec = gh.CurveSpec.analytic(
        gh.SpaceForm.euclidean(3),
        lambda t: np.stack([2 * np.asarray(t, float), 0 * t, 0 * t], axis=-1),
        (0.0, 1.0),
    )
    curve = gh.resample_by_arclength(spec, 100)
    gh.save_unit_curve(workdir / "line.json", spec.space, curve)
    out = run_cli("analyze", "--in", "line.json", "--report", "line.report.json", cwd=workdir)
    assert out.returncode == 4
    doc = json.loads((workdir / "line.report.json").read_text())
    assert doc["verdict"] == "Degenerate"
    assert "cause" in doc


def test_helix_tol_env_override(workdir):
    # A huge tolerance flips the perturbed curve's verdict to Helix.
    out = run_cli("analyze", "--in", "p.json", cwd=workdir, env_extra={"HELIX_TOL": "1e3"})
    assert out.returncode == 0
    # ... and the --tol flag wins over the environment.
    out = run_cli(
        "analyze", "--in", "p.json", "--tol", "1e-3", cwd=workdir,
        env_extra={"HELIX_TOL": "1e3"},
    )
    assert out.returncode == 1


def test_dump_profiles(workdir):
    out = run_cli(
        "analyze", "--in", "h.json", "--report", "d.report.json", "--dump-profiles",
        cwd=workdir,
    )
    assert out.returncode == 0
    apparatus = json.loads((workdir / "d.report.json.apparatus.json").read_text())
    assert set(apparatus) == {"s", "frames", "curvatures"}
    assert len(apparatus["s"]) == 2000
    assert len(apparatus["frames"][0]) == 3 and len(apparatus["frames"][0][0]) == 3
    profile = json.loads((workdir / "d.report.json.profile.json").read_text())
    assert set(profile) == {"s", "H", "criterion_residual"}


def test_verify_t7_small_deviation(workdir):
    # At 800 nodes the sum-of-squares noise floor sits below 1e-8.
    out = run_cli(
        "generate", "--kind", "circular-helix", "--params", "a=3,b=4",
        "--nodes", "800", "--out", "h800.json", cwd=workdir,
    )
    assert out.returncode == 0
    out = run_cli("verify", "--in", "h800.json", "--theorem", "T7", cwd=workdir)
    assert out.returncode == 0
    deviation = float(out.stdout.split("deviation=")[1].split()[0])
    assert deviation < 1e-8


def test_verify_t3_t6_pass(workdir):
    for theorem in ("T3", "T6"):
        out = run_cli("verify", "--in", "h.json", "--theorem", theorem, cwd=workdir)
        assert out.returncode == 0, out.stdout + out.stderr
        assert "pass" in out.stdout


def test_verify_t8c9_on_wcurve(workdir):
    out = run_cli(
        "generate",
        "--kind", "w-curve-5",
        "--params", f"a=1,p=0.5,b=0.6,q=1,c={math.sqrt(0.39)},t1=240",
        "--nodes", "2000",
        "--out", "w.json",
        cwd=workdir,
    )
    assert out.returncode == 0, out.stderr
    for selector in ("T8≡C9", "T8C9"):
        out = run_cli("verify", "--in", "w.json", "--theorem", selector, cwd=workdir)
        assert out.returncode == 0, out.stdout + out.stderr
    out = run_cli("verify", "--in", "w.json", "--theorem", "T10", cwd=workdir)
    assert out.returncode == 0


def test_verify_t8c9_inapplicable_in_even_dimension(workdir):
    # 4-dimensional curve file: the odd-dimension expansion must exit 2.
    def evaluator(t):
        t = np.asarray(t, dtype=float)
        return np.stack(
            [np.cos(0.5 * t), np.sin(0.5 * t), 0.6 * np.cos(t), 0.6 * np.sin(t)], axis=-1
        )

    spec = gh.CurveSpec.analytic(gh.SpaceForm.euclidean(4), evaluator, (0.0, 100.0))
    curve = gh.resample_by_arclength(spec, 600)
    gh.save_unit_curve(workdir / "e4.json", spec.space, curve)
    out = run_cli("verify", "--in", "e4.json", "--theorem", "T8≡C9", cwd=workdir)
    assert out.returncode == 2
    assert "inapplicable" in out.stdout


def test_verify_inapplicable_on_non_helix(workdir):
    out = run_cli("verify", "--in", "p.json", "--theorem", "T3", cwd=workdir)
    assert out.returncode == 2
    assert "inapplicable" in out.stdout


def test_verify_t10_inapplicable_when_ratios_vary(workdir):
    out = run_cli("verify", "--in", "p.json", "--theorem", "T10", cwd=workdir)
    assert out.returncode == 2


def test_round_trip_reports_are_bit_identical(workdir):
    spec = gh.load_curve(workdir / "h.json")
    gh.save_curve(workdir / "h_copy.json", spec)
    assert (workdir / "h.json").read_bytes() == (workdir / "h_copy.json").read_bytes()
    run_cli("analyze", "--in", "h.json", "--report", "r1.json", cwd=workdir)
    run_cli("analyze", "--in", "h_copy.json", "--report", "r2.json", cwd=workdir)
    assert (workdir / "r1.json").read_bytes() == (workdir / "r2.json").read_bytes()
