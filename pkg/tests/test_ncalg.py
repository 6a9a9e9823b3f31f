from itertools import product

import pytest
from hypothesis import given, strategies as st

from qvfield.ncalg import Generator, MissingRule, altered, bar, check_local_confluence, derive_rules, normal_form
from qvfield.qring import QField
from qvfield.qspaces import derived_element


def _rules_between(spec, a, b):
    rs = spec.rules
    return {
        rs.word_str(k): {rs.word_str(w): c for w, c in v}
        for k, v in rs.rules.items()
        if {rs.generator(k[0]).species, rs.generator(k[1]).species} == {a, b}
    }


def test_gl_xx_rule(gl2_m1):
    q = gl2_m1.field.q
    assert _rules_between(gl2_m1, "X", "X") == {"x_2 x_1": {"x_1 x_2": q**-1}}


def test_so_xx_rules(so3):
    rules = _rules_between(so3, "X", "X")
    assert set(rules) == {"x_2 x_1", "x_3 x_2", "x_3 x_1"}
    assert "x_2 x_2" in rules["x_3 x_1"]


def test_so_xx_rules_kill_antisymmetric_part(so3):
    # x_k x_l (P-)^{kl}_{ij} = 0 must hold in the algebra
    pm, rng = so3.so.p_minus, so3.range
    for i, j in product(rng, repeat=2):
        e = so3.zero
        for k, l in product(rng, repeat=2):
            c = pm[(k, l, i, j)]
            if not c.is_zero():
                e = e + (so3.x(k) * so3.x(l)).scale(c)
        assert e.is_zero()


def test_empty_relations():
    F = QField(1)
    rs = derive_rules(F, [Generator("X", 1)], [])
    assert rs.rules == {}


def test_d1_x1(gl2_m1):
    s = gl2_m1
    q, lam = s.field.q, s.field.lam
    want = s.one + (s.x(1) * s.d(1)).scale(q**2) + (s.x(2) * s.d(2)).scale(q * lam)
    assert s.d(1) * s.x(1) == want


def test_normal_word_untouched(gl2):
    w = gl2.x(1) * gl2.x(1)
    assert list(w.terms) == [(gl2.rules.gen_id("X", 1),) * 2]


def test_mu_exchange_cancels(gl2):
    mu, q = derived_element("mu", gl2), gl2.field.q
    assert (mu * gl2.x(1) - (gl2.x(1) * mu).scale(q**2)).is_zero()


@pytest.mark.parametrize("fixture", ["gl2", "cx2", "so3"])
def test_shipped_sectors_confluent(fixture, request):
    assert check_local_confluence(request.getfixturevalue(fixture).rules).passed


def test_altered_rule_breaks_confluence(gl2):
    rs = gl2.rules
    pair = next(k for k in rs.rules if rs.generator(k[0]).species == "Dx" and rs.generator(k[1]).species == "X")
    res = check_local_confluence(altered(rs, pair, gl2.field.q))
    assert not res.passed
    assert res.witness["index"]


def test_missing_rule_for_dh_xi(so3):
    with pytest.raises(MissingRule):
        so3.dh(1) * so3.xi(2)


def test_bar_examples(cx2):
    assert bar(cx2.x(1)) == cx2.xh(1)
    assert bar(bar(cx2.d(1))) == cx2.d(1)
    assert bar(derived_element("mu", cx2)) == derived_element("mubar", cx2)


def test_mubar_form(cx2):
    s = cx2
    q, lam = s.field.q, s.field.lam
    want = s.one
    for i in s.range:
        want = want - (s.dh(i) * s.xh(i)).scale(q * lam)
    assert derived_element("mubar", s) == want


# --- properties --------------------------------------------------------------------

SPECIES = ("X", "Xhat", "Dxhat", "Dx")


def words(spec):
    letters = st.tuples(st.sampled_from(SPECIES), st.sampled_from(list(spec.range)))
    return st.lists(letters, min_size=1, max_size=3)


def _word(spec, w):
    e = spec.one
    for sp, i in w:
        e = e * spec.gen(sp, i)
    return e


@st.composite
def pair_of_words(draw):
    from qvfield import build_algebra

    spec = build_algebra("glq_complex", 2)
    return spec, draw(words(spec)), draw(words(spec)), draw(st.integers(-3, 3))


@given(pair_of_words())
def test_bar_anti_multiplicative(data):
    spec, a, b, _ = data
    A, B = _word(spec, a), _word(spec, b)
    assert bar(A * B) == bar(B) * bar(A)
    assert bar(bar(A)) == A


@given(pair_of_words())
def test_normal_form_linear_and_idempotent(data):
    spec, a, b, k = data
    rs = spec.rules
    ids_a = tuple(rs.gen_id(s, i) for s, i in a)
    ids_b = tuple(rs.gen_id(s, i) for s, i in b)
    c = spec.field.q ** k
    terms = {ids_a: c}
    terms[ids_b] = terms.get(ids_b, spec.field.zero) + 1
    raw = rs.raw(terms)
    nf = normal_form(raw)
    assert nf == _word(spec, a).scale(c) + _word(spec, b)
    assert normal_form(nf) == nf


@given(pair_of_words())
def test_normal_form_of_product(data):
    spec, a, b, _ = data
    rs = spec.rules
    ids = tuple(rs.gen_id(s, i) for s, i in a + b)
    assert normal_form(rs.raw({ids: spec.field.one})) == _word(spec, a) * _word(spec, b)
