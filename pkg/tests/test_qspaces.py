import json
from itertools import product

import pytest

from qvfield.qspaces import ConfluenceFailure, WrongSector, build_algebra, derived_element
from qvfield.rtensor import UnsupportedDimension, build_glq_rhat
from qvfield.vfields import DhatRealization


def test_rosters(gl2, cx2, so3):
    assert [str(g) for g in gl2.generators] == ["x_1", "x_2", "d^1", "d^2"]
    assert gl2.families == ["xx", "dx", "dd"]
    assert len(cx2.generators) == 8 and len(cx2.families) == 10
    assert cx2.rules.scale is not None
    assert len(so3.generators) == 12
    assert {g.species for g in so3.generators} == {"X", "Xi", "Dx", "Dxhat"}


def test_specs_are_confluent(gl2, cx2, so3):
    for s in (gl2, cx2, so3):
        assert s.confluence.passed


def test_summary_serializes(so3):
    d = json.loads(json.dumps(so3.summary()))
    assert d["sector"] == "soq_real" and d["confluence"] == "pass"


def test_errors():
    with pytest.raises(UnsupportedDimension):
        build_algebra("soq_real", 2)
    with pytest.raises(UnsupportedDimension):
        build_algebra("glq_holo", 0)
    with pytest.raises(WrongSector):
        build_algebra("spq", 2)


def test_bad_rhat_is_rejected():
    R = build_glq_rhat(2)
    with pytest.raises(ConfluenceFailure):
        build_algebra("glq_holo", 2, rhat=R.perturbed((1, 2, 1, 2), R.field.one))


def test_mu(gl2):
    q, lam = gl2.field.q, gl2.field.lam
    want = gl2.one + (gl2.x(1) * gl2.d(1) + gl2.x(2) * gl2.d(2)).scale(q * lam)
    assert derived_element("mu", gl2) == want


def test_calL(cx2):
    assert derived_element("calL", cx2) == cx2.x(1) * cx2.xh(1) + cx2.x(2) * cx2.xh(2)


def test_lambda(so3):
    s = so3
    q, lam = s.field.q, s.field.lam
    xd = sum((s.x(i) * s.d(i) for i in s.range), s.zero)
    L, D = derived_element("L", s), derived_element("Delta", s)
    assert derived_element("Lambda", s) == s.one + xd.scale(q * lam) + (L * D).scale(q**3 * lam**2)


def test_wrong_sector(gl2):
    with pytest.raises(WrongSector):
        derived_element("Lambda", gl2)
    with pytest.raises(WrongSector):
        derived_element("mubar", gl2)


def test_mu_properties(cx2):
    s = cx2
    mu, mb, L = (derived_element(n, s) for n in ("mu", "mubar", "calL"))
    q2 = s.field.q ** 2
    for i in s.range:
        assert (s.d(i) * mu - (mu * s.d(i)).scale(q2)).is_zero()
        assert (mb * s.xh(i) - (s.xh(i) * mb).scale(q2.inverse())).is_zero()
        assert (mu * s.dh(i) - s.dh(i) * mu).is_zero()
        assert (mb * s.x(i) - s.x(i) * mb).is_zero()
    assert (mu * mb * L - L * mu * mb).is_zero()


def test_so_length_and_laplacian(so3):
    s = so3
    L, D, Lam = (derived_element(n, s) for n in ("L", "Delta", "Lambda"))
    q = s.field.q
    for i in s.range:
        assert (L * s.x(i) - s.x(i) * L).is_zero()
        assert (D * s.d(i) - s.d(i) * D).is_zero()
        assert (Lam * s.x(i) - (s.x(i) * Lam).scale(q**2)).is_zero()
        assert (s.d(i) * L - (L * s.d(i)).scale(q**2) - s.x_up(i).scale(q**-1)).is_zero()


def _hatted_exchange(s, mirrored):
    """Residuals of the hatted-derivative / coordinate exchange in two index placements."""
    q, Ri = s.field.q, s.rhat_inv
    out = {}
    for i, j in product(s.range, repeat=2):
        if mirrored:
            # dh^i x_j = delta + q^-1 (R^-1)^{ik}_{jl} x_k dh^l
            r = s.dh_up(i) * s.x(j)
            for k, l in product(s.range, repeat=2):
                c = Ri[(i, k, j, l)]
                if not c.is_zero():
                    r = r - (s.x(k) * s.dh_up(l)).scale(c / q)
        else:
            # dh_i x^j = delta + q^-1 (R^-1)^{jl}_{ik} x^k dh_l
            r = s.dh(i) * s.x_up(j)
            for k, l in product(s.range, repeat=2):
                c = Ri[(j, l, i, k)]
                if not c.is_zero():
                    r = r - (s.x_up(k) * s.dh(l)).scale(c / q)
        if i == j:
            r = r - s.one
        out[(i, j)] = r
    return out


def test_hatted_exchange_index_placement(so3):
    """The mirrored placement agrees with dh realized through Lambda^-1; the
    literal lower/upper placement does not (recorded in the ledger)."""
    rho = DhatRealization(so3)
    mirrored = _hatted_exchange(so3, True)
    literal = _hatted_exchange(so3, False)
    assert all(rho.residual(e).is_zero() for e in mirrored.values())
    assert any(not rho.residual(e).is_zero() for e in literal.values())
