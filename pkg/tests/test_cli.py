from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from wimanedge.cli import build_parser, jsonable, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_presentation(capsys):
    code, out, _ = run(capsys, "verify", "presentation")
    assert code == 0
    assert out.count("Verified presentation.sl-") == 12
    assert out.count("Verified presentation.psl-") == 7
    assert out.count("Verified presentation.delta-") == 3


def test_verify_chern_json(capsys):
    code, out, _ = run(capsys, "verify", "chern", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    obs = {c["id"]: c["observed"] for c in doc["suites"][0]["claims"]}
    assert obs["chern.c2"] == 56 and obs["chern.c12"] == 16 and obs["chern.chi"] == 6 and obs["chern.p-g"] == 5


def test_resolve(capsys, tmp_path):
    code, out, _ = run(capsys, "resolve", "lambda8")
    assert (code, out.strip()) == (0, "(-3, -3)")
    code, out, _ = run(capsys, "resolve", "lambda40")
    assert out.strip() == "(-3, -3)"
    svg = tmp_path / "l24.svg"
    code, out, _ = run(capsys, "resolve", "lambda24", "--svg", str(svg))
    cyc = [int(x) for x in out.strip()[1:-1].split(",")]
    assert len(cyc) == 16 and [i for i, b in enumerate(cyc) if b == -4] == [7, 15]
    assert svg.read_text().startswith("<?xml")


def test_resolve_unknown(capsys):
    code, _, err = run(capsys, "resolve", "lambda9")
    assert code != 0 and "unknown cusp" in err


def test_failing_suite_exit_code(capsys):
    # the plane suite carries one unattainable claim (printed candidate coefficient)
    code, out, err = run(capsys, "verify", "plane")
    assert code == 1
    assert err.strip() == "FAILED: plane.candidate-2-coefficients"
    assert "Failed   plane.candidate-2-coefficients" in out


def test_report_schema_and_determinism(capsys):
    code, first, _ = run(capsys, "report", "--format", "json")
    assert code == 0
    doc = json.loads(first)
    schema = json.loads(resources.files("wimanedge").joinpath("data/report.schema.json").read_text())
    jsonschema.validate(doc, schema)
    ids = [c["id"] for s in doc["suites"] for c in s["claims"]]
    assert len(ids) == len(set(ids))
    cusps = next(s for s in doc["suites"] if s["suite"] == "cusps")
    assert sorted(cusps["data"]["cusp orbits"]["orbit_sizes"]) == [8, 8, 24, 40, 40, 120]
    derived = {c["id"] for c in cusps["claims"] if c["status"] == "Derived"}
    assert "cusps.delta3-orbit-size-equals-index" in derived
    assert doc["summary"]["Failed"] == 1
    _, second, _ = run(capsys, "report", "--format", "json")
    assert first == second


def test_text_output_is_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "cover")
    _, b, _ = run(capsys, "verify", "cover", "--jobs", "4")
    assert a == b and "seconds" not in a


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "cover", "--format", "json", "--timing")
    assert "seconds" in json.loads(out)["suites"][0]


def test_cubics_and_orbits(capsys):
    _, out, _ = run(capsys, "cubics", "--format", "json")
    cubics = json.loads(out)["cubics"]
    assert len(cubics) == 2 and cubics[0]["z1*z2^2"] == "18 - 11*X"
    _, out, _ = run(capsys, "orbits", "--format", "json")
    doc = json.loads(out)
    assert doc["cosets"] == 240
    assert sorted(r["size"] for r in doc["orbits"]) == [8, 8, 24, 40, 40, 120]
    assert all(r["size"] * r["stabilizer"] == 960 for r in doc["orbits"])
    assert len({c["orbit"] for c in doc["classes"].values()}) == 6


def test_cache_flag(capsys, tmp_path):
    cache = tmp_path / "cache"
    code, _, _ = run(capsys, "verify", "torsion", "--cache", str(cache))
    assert code == 0 and any(cache.iterdir())


def test_parser_rejects_unknown_suite():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "nope"])


def test_jsonable():
    from fractions import Fraction

    import numpy as np

    from wimanedge.qfield import X

    assert jsonable({"a": {3, 1, 2}, "b": (X, Fraction(1, 2)), "c": np.int64(4)}) == {
        "a": [1, 2, 3],
        "b": ["X", "1/2"],
        "c": 4,
    }


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "wimanedge.cli", "resolve", "lambda8"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "(-3, -3)"
