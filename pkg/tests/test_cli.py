"""Command line: manifests, exit codes, byte-stable output and the report schema."""
import copy
import json
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from qbundle import cli
from qbundle import pipeline as pl

ROOT = Path(__file__).resolve().parents[1]
MANIFESTS = sorted((ROOT / "manifests").glob("*.json"))


def run(tmp_path, manifest, *extra):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(manifest))
    out = tmp_path / "r.json"
    code = cli.main(["run", str(path), "--out", str(out), *extra])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def load(name):
    return json.loads((ROOT / "manifests" / name).read_text())


@pytest.mark.parametrize("path", MANIFESTS, ids=[p.name for p in MANIFESTS])
def test_shipped_manifests_pass(path, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["run", str(path), "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    jsonschema.validate(report, cli.load_schema("report.schema.json"))
    assert report["status"] == "pass" and report["summary"]["fail"] == 0
    assert "PASS" in capsys.readouterr().out


@pytest.mark.parametrize("path", MANIFESTS, ids=[p.name for p in MANIFESTS])
def test_shipped_manifests_are_current_exports(path):
    doc = json.loads(path.read_text())
    src = doc["payload"]["source"]
    fresh = pl.export_manifest(src["preset"], kind=doc["kind"], **src["args"])
    assert cli.dumps(fresh) == path.read_text()


def test_export_byte_stable(capsys):
    assert cli.main(["export", "example26", "--n", "3"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["export", "example26", "--n", "3"]) == 0
    assert capsys.readouterr().out == first
    assert "zeta(3)" in first
    jsonschema.validate(json.loads(first), cli.load_schema("manifest.schema.json"))


@pytest.mark.parametrize("argv", [["example27", "--point", "3/5,4/5"], ["quaternions"], ["s3", "--kind", "entwining"]])
def test_export_presets(argv, capsys):
    assert cli.main(["export", *argv]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["payload"]["structure"]["psi"]


def test_export_rejects_bad_point(capsys):
    assert cli.main(["export", "example27", "--point", "1,1"]) == 2
    assert "unit circle" in capsys.readouterr().err


def test_reports_byte_identical(tmp_path):
    m = load("s3.json")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    p = tmp_path / "m.json"
    p.write_text(json.dumps(m))
    assert cli.main(["run", str(p), "--out", str(a), "--seed", "4"]) == 0
    assert cli.main(["run", str(p), "--out", str(b), "--seed", "4", "--jobs", "3", "--timings"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == 4


def test_malformed_scalar_reports_position(tmp_path, capsys):
    m = load("example26.json")
    m["payload"]["structure"]["P"]["mult"][2][3] = "1 + * q"
    code, _ = run(tmp_path, m)
    assert code == 2
    err = capsys.readouterr().err
    assert "payload.structure.P.mult[2]" in err and "position 4" in err


def test_schema_violation(tmp_path, capsys):
    m = load("example26.json")
    m["checks"][0]["weight"] = 3
    assert run(tmp_path, m)[0] == 2
    assert "schema violation" in capsys.readouterr().err


def test_unknown_check_and_bad_json(tmp_path):
    m = load("example26.json")
    m["checks"].append({"name": "curvature"})
    assert run(tmp_path, m)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli.main(["run", str(bad)]) == 2
    assert cli.main(["run", str(tmp_path / "missing.json")]) == 2


def test_failing_check_exits_one(tmp_path):
    m = load("example27.json")
    for c in m["checks"]:
        if c["name"] == "module_algebra":
            c["params"]["expect"] = True
    code, report = run(tmp_path, m)
    assert code == 1 and report["status"] == "fail"
    (bad,) = [c for c in report["checks"] if c["status"] == "fail"]
    assert bad["check"] == "module_algebra.module_algebra" and bad["witness"] is False


def test_tampered_structure_fails_with_witness(tmp_path):
    m = load("example26-n3.json")
    m["payload"]["structure"]["psi"][4][2] = "2"
    code, report = run(tmp_path, m)
    assert code == 1
    fails = [c for c in report["checks"] if c["status"] == "fail"]
    assert fails and any(c["check"].startswith("factorisation.") for c in fails)


def test_internal_error_exits_three(tmp_path, monkeypatch, capsys):
    def boom(inst, params):
        raise RuntimeError("boom")
    monkeypatch.setitem(pl.CHECKS, "copoint", boom)
    assert run(tmp_path, load("example26.json"))[0] == 3
    assert "RuntimeError" in capsys.readouterr().err


def test_preset_payload_form(tmp_path):
    m = {"kind": "factorisation", "name": "short", "payload": {"preset": {"name": "example26", "args": {"n": 2}}},
         "checks": [{"name": "factorisation"}, {"name": "chi_formula"}, {"name": "connection"}]}
    code, report = run(tmp_path, m)
    assert code == 0 and report["name"] == "example26-n2"


def test_no_copoint_needs_galois_is_input_error(tmp_path):
    m = {"kind": "factorisation", "payload": {"preset": {"name": "quaternions"}}, "checks": [{"name": "galois"}]}
    assert run(tmp_path, m)[0] == 2


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from(["0", "2", "-1", "1/3", "zeta(3)"]))
def test_tampering_never_crashes(tmp_path_factory, k, value):
    """Any single changed structure constant gives a verdict, not an internal error."""
    tmp = tmp_path_factory.mktemp("t")
    m = copy.deepcopy(load("example26-n3.json"))
    entries = m["payload"]["structure"]["psi"]
    entries[k % len(entries)][2] = value
    code, report = run(tmp, m)
    assert code in (0, 1, 2)
    if code != 2:
        jsonschema.validate(report, cli.load_schema("report.schema.json"))


def test_monopole_subcommand(tmp_path):
    out = tmp_path / "mono.json"
    code = cli.main(["monopole", "--n", "2", "--degree", "3", "--verify", "pi,grouplikes,omega",
                     "--specialize", "q=2,s=1/2", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["config"]["q"] == "2" and report["config"]["suites"] == ["pi", "grouplikes", "omega"]
    params = report["checks"][0]["params"]
    assert params["n"] == 2 and params["d"] == 3 and params["q0"] == "2" and params["s0"] == "1/2"


@pytest.mark.parametrize("argv", [["--verify", "holonomy"], ["--specialize", "q=2;s=1"], ["--specialize", "q=2,s=1/"]])
def test_monopole_bad_arguments(argv, capsys):
    assert cli.main(["monopole", "--degree", "2", *argv]) == 2
    assert "error" in capsys.readouterr().err


def test_monopole_manifest(tmp_path):
    m = {"kind": "monopole", "name": "m", "seed": 1,
         "payload": {"n": 2, "degree": 3, "specialize": {"q": "3/2", "s": "1/3"}},
         "checks": [{"name": "splitting"}, {"name": "connection"}]}
    code, report = run(tmp_path, m, "--jobs", "2")
    assert code == 0 and report["config"]["suites"] == ["splitting", "connection"]


@pytest.mark.parametrize("name", ["manifest.schema.json", "report.schema.json"])
def test_top_level_schemas_match_packaged(name):
    top = (Path(__file__).resolve().parents[1] / "schemas" / name).read_text()
    assert json.loads(top) == cli.load_schema(name)
