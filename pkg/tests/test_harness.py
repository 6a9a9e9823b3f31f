import json
from fractions import Fraction

import pytest

from qvfield import harness
from qvfield.cli import main
from qvfield.harness import REGISTRY, SuiteOptions, UnsupportedGroup, checks_for, run_suite
from qvfield.rtensor import UnsupportedDimension


def test_registry_ids_and_anchors():
    ids = [c.id for c in REGISTRY]
    assert len(ids) == len(set(ids))
    prefixes = [i.split("-")[0] for i in ids]
    assert prefixes == [f"G{k}" for k in range(1, 13)] + [f"C{k}" for k in range(1, 12)] + [f"S{k}" for k in range(1, 16)]
    assert all(c.anchor for c in REGISTRY)
    assert "G7-YY-braid" in ids


def test_group_mapping():
    assert [c.id.split("-")[0] for c in checks_for("glq")] == [f"G{k}" for k in range(1, 12)]
    assert len(checks_for("slq")) == 12
    assert len(checks_for("suq")) == 11
    assert len(checks_for("soq")) == 15


def test_glq2_symbolic():
    rep = run_suite("glq", 2, "symbolic")
    assert rep.passed and len(rep.checks) == 11
    assert rep.q_points == [] and rep.seed is None


@pytest.mark.parametrize("group,n", [("glq", 0), ("glq", 4), ("suq", 3), ("soq", 4), ("soq", 2)])
def test_unsupported_dimension(group, n):
    with pytest.raises(UnsupportedDimension):
        run_suite(group, n)


def test_unsupported_group():
    with pytest.raises(UnsupportedGroup):
        run_suite("spq", 2)


def test_bad_options():
    with pytest.raises(ValueError):
        run_suite("glq", 2, "fast")
    with pytest.raises(ValueError):
        run_suite("glq", 2, options=SuiteOptions(sigma=2))


def test_item_error_does_not_abort(monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("kaput")

    monkeypatch.setattr(harness, "build_matrix", boom)
    rep = run_suite("glq", 2, "symbolic")
    by = {c.id: c for c in rep.checks}
    assert by["G1-char"].status == "pass"
    assert by["G5-Yx"].status == "error"
    assert "kaput" in by["G5-Yx"].witness["message"]
    assert not rep.passed


def test_failure_witness_full_in_json():
    rep = run_suite("suq", 2, "symbolic", SuiteOptions(mutation="lambda_sign", only=("C7",)))
    c = rep.checks[0]
    assert c.status == "fail"
    j = rep.to_dict()["checks"][0]
    assert j["witness"]["index"][0] == "U braid"
    assert len(c.witness["terms"]) > 8
    assert j["witness"]["residual"] == " + ".join(c.witness["terms"])


def test_text_truncates_terms():
    rep = run_suite("suq", 2, "symbolic", SuiteOptions(mutation="lambda_sign", only=("C7",)))
    text = rep.to_text()
    assert "more terms" in text


def test_explicit_q_points():
    rep = run_suite("glq", 2, "numeric", SuiteOptions(q_points=[Fraction(7, 5)], max_degree=2))
    assert rep.q_points == ["7/5"] and rep.passed


def test_sigma_minus_one():
    rep = run_suite("soq", 3, "symbolic", SuiteOptions(sigma=-1, only=("S15",)))
    assert rep.passed


# --- CLI --------------------------------------------------------------------------------

def test_cli_json(capsys):
    code = main(["verify", "--group", "glq", "--n", "2", "--mode", "both", "--report", "json", "--max-degree", "2"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert set(out) >= {"group", "n", "root_order", "mode", "seed", "q_points", "checks", "pass"}
    assert set(out["checks"][0]) >= {"id", "paper_anchor", "status", "witness", "elapsed_ms"}
    assert out["pass"] is True and all(isinstance(q, str) for q in out["q_points"])


def test_cli_exit_codes(capsys, tmp_path):
    assert main(["verify", "--group", "glq", "--n", "0"]) == 2
    assert main(["verify", "--group", "nope", "--n", "2"]) == 2
    assert main(["verify", "--group", "glq", "--n", "2", "--mode", "numeric", "--q", "1"]) == 2
    assert main(["verify", "--group", "glq", "--n", "2", "--q", "x/y"]) == 2
    out = tmp_path / "r.txt"
    assert main(["verify", "--group", "slq", "--n", "2", "--out", str(out)]) == 0
    assert "G12" in out.read_text()


def test_cli_list_checks(capsys):
    assert main(["verify", "--group", "soq", "--n", "3", "--list-checks"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 15 and lines[0].startswith("S1-")


def test_cli_failure_exit(monkeypatch):
    real = harness.run_suite

    def mutated(group, n, mode, opts):
        opts.mutation = "lambda_sign"
        return real(group, n, mode, opts)

    monkeypatch.setattr("qvfield.cli.run_suite", mutated)
    assert main(["verify", "--group", "glq", "--n", "2"]) == 1


def test_so4_behind_flag():
    rep = run_suite("soq", 4, "symbolic", SuiteOptions(allow_large=True))
    assert rep.passed and len(rep.checks) == 15
