import pytest

from qvfield.ncalg import bar
from qvfield.qspaces import WrongSector, build_algebra, derived_element
from qvfield.vfields import (
    InvalidPhase,
    OpMatrix,
    braid_relation,
    build_matrix,
    build_xihat,
    lower_vector_relation,
    quantum_trace,
    sandwich,
    symmetric_form,
)


def test_y_n1_is_mu():
    s = build_algebra("glq_holo", 1)
    Y = build_matrix("Y", s)
    assert Y[1, 1] == derived_element("mu", s)
    assert Y.minus_scalar(derived_element("mu", s))[1, 1].is_zero()


def test_y_entries(gl2):
    q, lam = gl2.field.q, gl2.field.lam
    Y = build_matrix("Y", gl2)
    for (i, j), e in Y.items():
        want = (gl2.d(i) * gl2.x(j)).scale(lam / q)
        if i == j:
            want = want + gl2.scalar(q**-2)
        assert e == want


def test_z_so_entries(so3):
    s = so3
    q, lam = s.field.q, s.field.lam
    L = derived_element("L", s)
    Z = build_matrix("Z_so", s)
    for (i, j), e in Z.items():
        want = (
            (s.d(i) * s.x(j)).scale(lam / q)
            - (s.x_up(i) * s.dh(j)).scale(q**-2 * lam)
            - (L * s.d(i) * s.dh(j)).scale(lam**2)
        )
        if i == j:
            want = want + s.scalar(q**-2)
        assert e == want


def test_ydag_is_conjugate_transpose(cx2):
    Y, Yd = build_matrix("Y", cx2), build_matrix("Ydag", cx2)
    for (i, j), e in Yd.items():
        assert e == bar(Y[j, i])


def test_wrong_sector(gl2, so3):
    with pytest.raises(WrongSector):
        build_matrix("Ydag", gl2)
    with pytest.raises(WrongSector):
        build_matrix("Z_so", gl2)
    with pytest.raises(WrongSector):
        build_xihat(gl2)
    with pytest.raises(WrongSector):
        build_matrix("Y", so3)


def test_xihat_phase(so3):
    with pytest.raises(InvalidPhase):
        build_xihat(so3, so3.field.q)
    plus = build_xihat(so3, 1)
    minus = build_xihat(so3, -1)
    assert all((a + b).is_zero() for a, b in zip(plus, minus))


def test_xihat_value(so3):
    s = so3
    Z = build_matrix("Z_so", s)
    Lam = derived_element("Lambda", s)
    xh = build_xihat(s, 1, Z)
    inner = sum((s.xi(k) * Z[k, 1] for k in s.range), s.zero)
    assert xh[0] == (Lam * inner).scale(s.field.q**3)


def test_traces_n2(gl2):
    q = gl2.field.q
    Y = build_matrix("Y", gl2)
    mu = derived_element("mu", gl2)
    t0, t1, t2 = (quantum_trace(Y, k) for k in range(3))
    assert t0 == gl2.scalar(1 + q**-2)
    assert t1 == gl2.scalar(q**-2) + mu
    assert t2 == t1.scale(q**-2) - mu.scale(q**-4) + mu * mu


def test_trace_rejects_negative(gl2):
    with pytest.raises(ValueError):
        quantum_trace(build_matrix("Y", gl2), -1)


def test_opmatrix_algebra(gl2):
    Y = build_matrix("Y", gl2)
    I = OpMatrix.identity(gl2)
    assert all(e == Y[k] for k, e in (Y @ I).items())
    assert all(e == Y[k] for k, e in Y.power(1).items())
    assert all(e.is_zero() for _, e in (Y - Y).items())
    assert Y.transpose()[1, 2] == Y[2, 1]


def test_lambda_flip_breaks_yx(gl2):
    Y = build_matrix("Y", gl2, lambda_sign=-1)
    xs = [gl2.x(i) for i in gl2.range]
    res = lower_vector_relation(Y, xs, sandwich(gl2.rhat, Y, gl2.rhat))
    assert any(not e.is_zero() for e in res.values())


def test_braid_relation_of_y(gl2):
    Y = build_matrix("Y", gl2)
    assert all(e.is_zero() for e in braid_relation(gl2.rhat, Y, gl2.rhat, Y).values())


def test_symmetric_form_is_real(so3):
    S = symmetric_form(so3)
    for (i, j), e in S.items():
        assert bar(S[j, i]) == e
