from __future__ import annotations

import json

import pytest

from golden_runner import EXPECTED, INPUTS, expected_path, load_cases, regenerating, run_case
from poisson_forge.cli import main
from poisson_forge.pbracket import PoissonStructure

CASES = load_cases()


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(case):
    got = run_case(case)
    assert got.startswith(f"exit: {case.get('exit', 0)}\n")
    path = expected_path(case)
    if regenerating():
        EXPECTED.mkdir(exist_ok=True)
        path.write_text(got)
    assert path.read_text() == got


def test_no_orphan_golden_files():
    names = {f"{c['name']}.txt" for c in CASES}
    assert {p.name for p in EXPECTED.iterdir()} == names


def _run(capsys, *argv) -> tuple[int, str, str]:
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse rejects usage before main returns
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_output_reloads(capsys, monkeypatch):
    for name, params in [("weyl", ["2"]), ("sl2", []), ("family5", ["-3"]), ("skew", ["1", "sqrt(2)", "-1"])]:
        code, out, _ = _run(capsys, "--format", "json", "catalog", name, *params)
        assert code == 0
        doc = json.loads(out)
        P = PoissonStructure.from_json(doc)
        assert P.to_json() == doc


def test_ore_build_output_reloads(capsys, monkeypatch):
    monkeypatch.chdir(INPUTS)
    code, out, _ = _run(capsys, "--format", "json", "ore", "build", "--tower", "weyl2_tower.json")
    assert code == 0
    doc = json.loads(out)
    assert PoissonStructure.from_json(doc["structure"]).n == 4


def test_format_flag_after_verb(capsys):
    a = _run(capsys, "--format", "json", "classify2", "--bracket", "x^2")
    b = _run(capsys, "classify2", "--bracket", "x^2", "--format", "json")
    assert a == b and a[0] == 0
    assert json.loads(a[1])["schema"] == 1


def test_jobs_preserve_order(capsys):
    brackets = ["x", "x^2", "3*x*y + 1", "x^2 + 1", "0"]
    argv = [arg for b in brackets for arg in ("--bracket", b)]
    serial = _run(capsys, "--format", "json", "classify2", *argv)
    parallel = _run(capsys, "--format", "json", "--jobs", "3", "classify2", *argv)
    assert serial == parallel
    labels = [r["label"] for r in json.loads(serial[1])["results"]]
    assert labels == ["C3", "C4a", "C5b", "C4b", "C1"]


def test_exit_codes(capsys, monkeypatch):
    monkeypatch.chdir(INPUTS)
    assert _run(capsys, "jacobi", "--structure", "bad.json")[0] == 0
    code, _, err = _run(capsys, "classify3", "--bracket", "x + t^2")
    assert code == 2 and json.loads(err)["error"] == "NotHomogeneous"
    assert _run(capsys, "nonsense")[0] == 1
    assert _run(capsys, "center", "--structure", "missing.json")[0] == 1
    assert _run(capsys, "stratiform", "not json")[0] == 1


def test_malformed_structure_is_usage_error(capsys, tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text(json.dumps({"schema": 1, "table": []}))
    assert _run(capsys, "center", "--structure", str(bad))[0] == 1


def test_degree_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("POISSON_FORGE_DEGREE_CAP", "2")
    code, _, err = _run(capsys, "ideal", "--bracket", "x*y^3", "--gens", "x,y")
    assert code == 2 and json.loads(err)["error"] == "DegreeCapExceeded"
