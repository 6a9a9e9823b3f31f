"""Acceptance criteria, one printed PASS/FAIL line each.

Run under pytest or directly: ``python3 tests/test_acceptance.py``.
All identities are exact; the only numeric tolerances are wall-clock limits.
"""

import json
import sys
import time

import pytest

from qvfield import build_algebra, derived_element, run_suite
from qvfield.harness import SuiteOptions
from qvfield.ncalg import check_local_confluence
from qvfield.vfields import build_matrix

LIMIT_GL2_S = 10.0
LIMIT_GL3_S = 300.0
LIMIT_SO3_S = 900.0
ORACLE_POINTS = 3
D_HOLO, D_COMPLEX = 4, 3

SHIPPED = [("glq", 1), ("glq", 2), ("glq", 3), ("slq", 1), ("slq", 2), ("slq", 3), ("suq", 1), ("suq", 2), ("soq", 3)]


@pytest.fixture
def line(capsys):
    def emit(k: int, ok: bool, info: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'}  {info}", flush=True)

    return emit


def _timed(group, n, mode="symbolic", opts=None):
    t0 = time.perf_counter()
    rep = run_suite(group, n, mode, opts)
    return rep, time.perf_counter() - t0


def _ids(rep):
    return {c.id.split("-")[0] for c in rep.checks if c.passed}


def test_criterion_1_gl_symbolic(line):
    want = {f"G{k}" for k in range(1, 12)}
    notes, ok = [], True
    for n, limit in ((1, LIMIT_GL2_S), (2, LIMIT_GL2_S), (3, LIMIT_GL3_S)):
        rep, dt = _timed("glq", n)
        good = rep.passed and _ids(rep) == want and dt < limit
        ok &= good
        notes.append(f"N={n} {'ok' if good else 'bad'} {dt:.2f}s")
    line(1, ok, "; ".join(notes))
    assert ok


def test_criterion_2_n1_degeneracy(line):
    s = build_algebra("glq_holo", 1)
    Y, mu = build_matrix("Y", s), derived_element("mu", s)
    ok = Y.n == 1 and Y[1, 1] == mu and Y.minus_scalar(mu)[1, 1].is_zero()
    line(2, ok, "Y = mu as a 1x1 matrix")
    assert ok


def test_criterion_3_complex_sector(line):
    want = {f"C{k}" for k in range(1, 12)}
    notes, ok = [], True
    for n in (1, 2):
        rep, dt = _timed("suq", n)
        good = rep.passed and _ids(rep) == want
        ok &= good
        notes.append(f"N={n} {'ok' if good else 'bad'} {dt:.2f}s")
    line(3, ok, "; ".join(notes) + " (C2 traces, C8 witness included)")
    assert ok


def test_criterion_4_so3(line):
    rep, dt = _timed("soq", 3)
    want = {f"S{k}" for k in range(1, 16)}
    ok = rep.passed and _ids(rep) == want and dt < LIMIT_SO3_S
    line(4, ok, f"S1-S15 {len(_ids(rep) & want)}/15 pass, {dt:.2f}s")
    assert ok


def test_criterion_5_confluence(line):
    notes, ok = [], True
    for sector, ns in (("glq_holo", (1, 2, 3)), ("glq_complex", (1, 2)), ("soq_real", (3,))):
        for n in ns:
            spec = build_algebra(sector, n, check_confluence=False)
            res = check_local_confluence(spec.rules)
            ok &= res.passed
            notes.append(f"{sector}/{n}:{res.status}")
    line(5, ok, " ".join(notes))
    assert ok


def test_criterion_6_oracle_replication(line):
    notes, ok = [], True
    for group, n in SHIPPED:
        D = D_COMPLEX if group == "suq" else D_HOLO
        rep, dt = _timed(group, n, "both", SuiteOptions(seed=2026, n_points=ORACLE_POINTS, max_degree=D))
        sym = {c.id for c in rep.checks if "/oracle" not in c.id and c.passed}
        orc = {c.id[: -len("/oracle")] for c in rep.checks if c.id.endswith("/oracle") and c.passed}
        numeric_items = {c.id for c in rep.checks if c.id.endswith("/oracle")}
        missing = {i for i in sym if i + "/oracle" in numeric_items and i not in orc}
        good = not missing and len(rep.q_points) == ORACLE_POINTS
        ok &= good
        notes.append(f"{group}{n}:{'ok' if good else sorted(missing)}")
    line(6, ok, " ".join(notes))
    assert ok


@pytest.mark.parametrize("mutation", ["lambda_sign", "rhat"])
def test_criterion_7_mutation(mutation, line):
    notes, ok = [], True
    for group, n in (("glq", 2), ("slq", 2), ("suq", 2), ("soq", 3)):
        rep = run_suite(group, n, "both", SuiteOptions(mutation=mutation))
        sym = sum(1 for c in rep.checks if "/oracle" not in c.id and c.status == "fail")
        orc = sum(1 for c in rep.checks if c.id.endswith("/oracle") and c.status == "fail")
        good = sym >= 1 and orc >= 1 and not rep.passed
        ok &= good
        notes.append(f"{group}{n}: {sym} symbolic / {orc} oracle failures")
    line(7, ok, f"{mutation}: " + "; ".join(notes))
    assert ok


def _strip(report_json: str) -> dict:
    d = json.loads(report_json)
    for c in d["checks"]:
        c.pop("elapsed_ms", None)
    return d


def test_criterion_8_determinism(line):
    ok = True
    for group, n in (("glq", 2), ("suq", 2), ("soq", 3)):
        opts = SuiteOptions(seed=11)
        a = _strip(run_suite(group, n, "both", opts).to_json())
        b = _strip(run_suite(group, n, "both", opts).to_json())
        ok &= a == b
    line(8, ok, "identical JSON apart from elapsed_ms (glq2, suq2, soq3, seed 11)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
