from __future__ import annotations

import json
import random
import subprocess
import sys

import pytest

from spinor10.cli import (
    EXIT_PASS,
    EXIT_REFUTED,
    EXIT_USAGE,
    SCHEMA,
    RunConfig,
    UsageError,
    main,
    run,
    strip_wall_clock,
)
from spinor10.clifford import pure_spinor, random_skew
from spinor10.fields import QQ


def _no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(_no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_no_floats(v) for v in obj)
    return True


def test_count_over_f2(tmp_path, capsys):
    out = tmp_path / "r.json"
    pts = tmp_path / "p.ndjson"
    code = main(["count", "--field", "2", "--seed", "0", "--trials", "0", "--out", str(out), "--points-out", str(pts)])
    assert code == EXIT_PASS
    report = json.loads(out.read_text())
    assert report["schema"] == SCHEMA and report["status"] == "pass"
    (claim,) = report["claims"]
    assert claim["claim"] == "sigma-count-f2" and claim["artifacts"]["total"] == "2295"
    assert len(pts.read_text().splitlines()) == 2295
    assert _no_floats(report)
    assert "sigma-count-f2: pass" in capsys.readouterr().out


def test_forms_classify_ninefold():
    rep = run(RunConfig("forms", seed=0, action="classify", family="ninefold", r=1))
    assert rep["status"] == "pass" and rep["claims"][0]["artifacts"]["count"] == "2"


def test_forms_construct_refuted_exit_code(capsys):
    code = main(["forms", "construct", "--seed", "0", "--rank", "10", "--hasse", "2", "--json"])
    assert code == EXIT_REFUTED
    report = json.loads(capsys.readouterr().out)
    assert report["claims"][0]["artifacts"]["inconsistent"] == "reciprocity"


def test_f2_lemma_reports_eight():
    rep = run(RunConfig("f2-lemma", seed=0, trials=50))
    claims = {c["claim"]: c for c in rep["claims"]}
    assert claims["f2-lemma-8"]["artifacts"]["maximum"] == "8"
    assert claims["f2-secant-bound"]["status"] == "pass"


def test_seed_is_required():
    with pytest.raises(UsageError):
        run(RunConfig("derive"))
    assert main(["count", "--field", "2"]) == EXIT_USAGE


def test_bad_arguments_exit_64():
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == EXIT_USAGE
    assert main(["count", "--field", "5", "--seed", "0"]) == EXIT_USAGE
    assert main(["audit-z-models", "--seed", "0", "--primes", "17"]) == EXIT_USAGE


def test_verify_plane_file(tmp_path, capsys):
    rng = random.Random(2)
    rows = [[str(x) for x in pure_spinor(random_skew(rng, QQ)).coords] for _ in range(6)]
    path = tmp_path / "plane.json"
    path.write_text(json.dumps({"basis": rows}))
    assert main(["verify-plane", str(path), "--json"]) == EXIT_REFUTED
    report = json.loads(capsys.readouterr().out)
    assert report["claims"][0]["artifacts"]["failure"] == "rational-count"


def test_malformed_plane_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[[1, 2], [3]]")
    assert main(["verify-plane", str(path)]) == EXIT_USAGE
    path.write_text("not json")
    assert main(["verify-plane", str(path)]) == EXIT_USAGE
    assert main(["verify-plane", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_reports_are_reproducible_up_to_timing():
    a = run(RunConfig("duality-test", seed=3, field="101", trials=20))
    b = run(RunConfig("duality-test", seed=3, field="101", trials=20))
    assert strip_wall_clock(a) == strip_wall_clock(b)
    assert "wall_clock" not in json.dumps(strip_wall_clock(a))


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spinor10.cli", "forms", "classify", "--family", "tenfold-O1", "--r", "2", "--seed", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "overall: pass" in proc.stdout
