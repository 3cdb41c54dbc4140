import json
import os

import pytest

from neelwall.cli import main

FAST = ["--n", "257", "--half-width", "20", "--grad-tol", "1e-5"]


def run(argv):
    return main(argv)


@pytest.fixture(scope="module")
def solved_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("solve")
    code = run(["solve", "--nu", "1", "--h", "0.3", "--out-dir", str(out)] + FAST)
    assert code == 0
    return out


def test_solve_outputs(solved_dir):
    for name in ("profile.txt", "energy.json", "report.json"):
        assert (solved_dir / name).exists()
    report = json.loads((solved_dir / "report.json").read_text())
    assert report["converged"] is True
    assert report["final_grad_norm"] <= 1e-5
    energy = json.loads((solved_dir / "energy.json").read_text())
    assert energy["total"] > 0.0


def test_solve_not_converged(tmp_path):
    code = run(
        ["solve", "--nu", "1", "--out-dir", str(tmp_path), "--max-iter", "3"]
        + ["--n", "257", "--half-width", "20", "--grad-tol", "1e-12"]
    )
    assert code == 2
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["converged"] is False


def test_verify_pass(solved_dir, tmp_path):
    code = run(["verify", str(solved_dir / "profile.txt"), "--out-dir", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] is True
    assert report["checks"]["el_residual"]["passed"]


def test_verify_fail_on_corrupted(solved_dir, tmp_path):
    lines = (solved_dir / "profile.txt").read_text().splitlines(keepends=True)
    broken = tmp_path / "broken.txt"
    # bump a handful of interior samples to break stationarity
    out = []
    for i, line in enumerate(lines):
        if line.startswith("#") or not (60 <= i <= 64):
            out.append(line)
        else:
            x, th = line.split()
            out.append(f"{x} {float(th) + 0.05}\n")
    broken.write_text("".join(out))
    code = run(["verify", str(broken), "--out-dir", str(tmp_path)])
    assert code == 3
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] is False


def test_verify_missing_file(tmp_path):
    assert run(["verify", str(tmp_path / "nope.txt"), "--out-dir", str(tmp_path)]) == 1


def test_path_same_profile_coincides(solved_dir, tmp_path):
    prof = str(solved_dir / "profile.txt")
    code = run(["path", prof, prof, "--out-dir", str(tmp_path)])
    assert code == 0
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert cert["verdict"] == "COINCIDE"
    header = (tmp_path / "path.csv").read_text().splitlines()[0]
    assert header == "t,f,f_prime,f_second_fd,f_second_analytic"


def test_path_distinct_minimizers_coincide(solved_dir, tmp_path):
    out2 = tmp_path / "other"
    code = run(
        ["solve", "--nu", "1", "--h", "0.3", "--init", "perturbed", "--seed", "7"]
        + ["--out-dir", str(out2)]
        + FAST
    )
    assert code == 0
    code = run(
        [
            "path",
            str(solved_dir / "profile.txt"),
            str(out2 / "profile.txt"),
            "--out-dir",
            str(tmp_path),
        ]
    )
    assert code == 0
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert cert["verdict"] == "COINCIDE"


def test_sweep_csv(tmp_path):
    argv = (
        ["sweep", "--nu-list", "0,1", "--h-list", "0,0.5", "--out-dir", str(tmp_path)]
        + FAST
    )
    assert run(argv) == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "nu,h,exchange,potential,stray,total,decay_c,max_grad,converged"
    assert len(lines) == 5
    first = (tmp_path / "sweep.csv").read_bytes()
    assert run(argv) == 0
    assert (tmp_path / "sweep.csv").read_bytes() == first


def test_oracle(capsys):
    assert run(["oracle", "--n", "2049", "--half-width", "40"]) == 0
    assert "oracle: PASS" in capsys.readouterr().out


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 257\nhalf_width = 20  # trailing comment\nnu = 2.0\ngrad_tol = 1e-5\n")
    out = tmp_path / "out"
    code = run(["solve", "--config", str(cfg), "--nu", "1", "--h", "0.3", "--out-dir", str(out)])
    assert code == 0
    prof = (out / "profile.txt").read_text()
    # flag overrides the config nu; config n shapes the output
    assert len([ln for ln in prof.splitlines() if not ln.startswith("#")]) == 257


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    assert run(["solve", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 1


def test_invalid_parameter(tmp_path):
    assert run(["solve", "--h", "1.5", "--out-dir", str(tmp_path)] + FAST) == 1
