import json
from itertools import product

import pytest

from qvfield.qring import QField
from qvfield.rtensor import (
    UnsupportedDimension,
    build_glq_rhat,
    build_psi,
    build_soq_data,
    glq_rhat_inverse,
    p0_trace,
    prime,
    tensor_check,
)

F = QField(1)
q, lam = F.q, F.lam


def test_gl_n1():
    R = build_glq_rhat(1, F)
    assert dict(R.items()) == {(1, 1, 1, 1): q}


def test_gl_n2_entries():
    R = build_glq_rhat(2, F)
    want = {(1, 1, 1, 1): q, (2, 2, 2, 2): q, (1, 2, 2, 1): F.one, (2, 1, 1, 2): F.one, (1, 2, 1, 2): lam}
    assert dict(R.items()) == want


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("kind", ["gl_char", "braid", "symmetry"])
def test_gl_tensor_checks(n, kind):
    assert tensor_check(kind, build_glq_rhat(n, F)).passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gl_inverse(n):
    R = build_glq_rhat(n, F)
    Ri = glq_rhat_inverse(R)
    for a, b, c, d in product(range(1, n + 1), repeat=4):
        s = sum((R[(a, b, e, f)] * Ri[(e, f, c, d)] for e in range(1, n + 1) for f in range(1, n + 1)), F.zero)
        assert s == (F.one if (a, b) == (c, d) else F.zero)


def test_perturbed_char_fails_with_witness():
    R = build_glq_rhat(2, F).perturbed((1, 1, 1, 1), F.one)
    res = tensor_check("gl_char", R)
    assert not res.passed
    # (q+1)^2 - 1 - lam (q+1) at the perturbed corner
    assert res.witness["index"] == [1, 1, 1, 1]
    assert res.witness["residual"] == str(q + 1 + q**-1)


def test_so_requires_n3():
    with pytest.raises(UnsupportedDimension):
        build_soq_data(2)


@pytest.fixture(scope="module")
def so():
    return build_soq_data(3)


@pytest.mark.parametrize(
    "kind", ["so_char", "symmetry", "so_orthogonality", "braid", "projector_idempotence", "p0_metric", "metric_inverse"]
)
def test_so_tensor_checks(so, kind):
    assert tensor_check(kind, so).passed


def test_so_spectrum_and_nu(so):
    Fs = so.rhat.field
    qs = Fs.q
    assert set(so.eigenvalues) == {qs, -qs.inverse(), qs**-2}
    assert so.nu == Fs.lam / ((qs**3 - 1) * (qs**-2 + qs**-1))


def test_so_p0_rank_one(so):
    assert p0_trace(so).is_one()


def test_so_metric_antidiagonal(so):
    for (i, j), v in so.metric.g.items():
        assert j == prime(i, 3) and not v.is_zero()


def test_psi_traces_n2():
    psi = build_psi(2, F)
    assert sum((psi[(1, i, 1, i)] for i in (1, 2)), F.zero) == q**-3
    assert sum((psi[(i, 2, i, 2)] for i in (1, 2)), F.zero) == q**-3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_identities(n):
    R = build_glq_rhat(n, F)
    psi = build_psi(n, F, R)
    assert tensor_check("psi_contraction", (R, psi)).passed
    assert tensor_check("psi_traces", psi).passed


def test_json_dump():
    recs = json.loads(build_glq_rhat(2, F).to_json())
    assert {"i": 1, "j": 2, "k": 1, "l": 2, "value": "q - q^-1"} in recs
    assert len(recs) == 5
