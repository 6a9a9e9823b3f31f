"""Noncommutative polynomial algebras with quadratic exchange relations.

Generators are numbered in their canonical order; words are tuples of those
numbers and are compared degree-lexicographically.  Relations of degree two are
row-reduced into one rewrite rule per leading pair, and normal forms are
computed by inserting generators one at a time into already-normal words, with
memoisation on ``(word, generator)``.

Formal roots of the scaling operators (``zeta = mu^(1/N)``, ``zetabar``) are
handled as interned generators that always sort last; they commute with every
other generator up to a power of ``u``.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

from .checks import CheckResult, FAIL, PASS
from .qring import QField, RingElem

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

SPECIES = ("X", "Xhat", "Dx", "Dxhat", "Xi", "Xihat", "ScalePow")

_DISPLAY = {
    "X": "x_{}",
    "Xhat": "xh^{}",
    "Dx": "d^{}",
    "Dxhat": "dh_{}",
    "Xi": "xi_{}",
    "Xihat": "xih_{}",
}

STEP_BUDGET = 10**7

Word = tuple[int, ...]
Scalar = Union[RingElem, int]


class MissingRule(LookupError):
    def __init__(self, left, right):
        super().__init__(f"no exchange rule for {left} {right}")
        self.pair = (left, right)


class NonTermination(RuntimeError):
    pass


class UnderdeterminedRelations(ValueError):
    pass


class InconsistentRelations(ValueError):
    pass


class UnbarredGenerator(KeyError):
    pass


@dataclass(frozen=True, order=True)
class Generator:
    species: str
    index: Union[int, tuple[int, int]]

    def __post_init__(self):
        if self.species not in SPECIES:
            raise ValueError(f"unknown species {self.species!r}")
        if self.species == "ScalePow":
            a, b = self.index
            if not (isinstance(a, int) and isinstance(b, int)):
                raise ValueError("ScalePow exponents must be integers")

    def __str__(self):
        if self.species == "ScalePow":
            a, b = self.index
            parts = []
            if a:
                parts.append("zeta" if a == 1 else f"zeta^{a}")
            if b:
                parts.append("zetabar" if b == 1 else f"zetabar^{b}")
            return " ".join(parts) or "1"
        return _DISPLAY[self.species].format(self.index)


@dataclass(frozen=True)
class ScaleAction:
    """u-exponents picked up when zeta (resp. zetabar) moves right past each species."""

    zeta: Mapping[str, int]
    zetabar: Mapping[str, int]
    labels: tuple[str, str] = ("zeta", "zetabar")


class RuleSet:
    """A complete table of quadratic rewrite rules plus the reduction engine.

    ``rules`` maps an ordered pair of generator ids to the list of
    ``(word, coefficient)`` terms replacing it.
    """

    def __init__(
        self,
        field: QField,
        generators: Sequence[Generator],
        rules: Mapping[tuple[int, int], Sequence[tuple[Word, RingElem]]],
        unsupported: Iterable[tuple[str, str]] = (),
        scale: ScaleAction | None = None,
        budget: int = STEP_BUDGET,
    ):
        self.field = field
        self.generators = list(generators)
        self._base = len(self.generators)
        self.ids = {g: i for i, g in enumerate(self.generators)}
        self.rules = {k: tuple(v) for k, v in rules.items()}
        self.unsupported = frozenset(unsupported)
        self.scale = scale
        self.budget = budget
        self._scale_ids: dict[tuple[int, int], int] = {}
        self._scale_exps: list[tuple[int, int]] = []
        self._memo: dict[tuple[Word, int], dict[Word, RingElem]] = {}
        self._steps = 0
        self._bar_images: dict[int, "Element"] | None = None
        self._bar_memo: dict[Word, "Element"] = {}
        self.one = Element(self, {(): field.one})
        self.zero = Element(self, {})

    # -- generators ---------------------------------------------------------
    def gen_id(self, species: str, index) -> int:
        if species == "ScalePow":
            return self.scale_id(*index)
        return self.ids[Generator(species, index)]

    def generator(self, gid: int) -> Generator:
        if gid < self._base:
            return self.generators[gid]
        return Generator("ScalePow", self._scale_exps[gid - self._base])

    def is_scale(self, gid: int) -> bool:
        return gid >= self._base

    def scale_id(self, a: int, b: int) -> int:
        if self.scale is None:
            raise MissingRule("ScalePow", "(sector has no scaling roots)")
        if (a, b) == (0, 0):
            raise ValueError("zeta^0 zetabar^0 is the unit, not a generator")
        sid = self._scale_ids.get((a, b))
        if sid is None:
            sid = self._base + len(self._scale_exps)
            self._scale_exps.append((a, b))
            self._scale_ids[(a, b)] = sid
        return sid

    def gen(self, species: str, index) -> "Element":
        if species == "ScalePow" and tuple(index) == (0, 0):
            return self.one
        return Element(self, {(self.gen_id(species, index),): self.field.one})

    def scalar(self, c: Scalar) -> "Element":
        c = self.field(c)
        return Element(self, {(): c} if not c.is_zero() else {})

    def word_str(self, w: Word) -> str:
        return " ".join(self._gen_str(g) for g in w) or "1"

    def _gen_str(self, g: int) -> str:
        if not self.is_scale(g) or self.scale is None:
            return str(self.generator(g))
        parts = []
        for label, e in zip(self.scale.labels, self._scale_exps[g - self._base]):
            if e:
                parts.append(label if e == 1 else f"{label}^{e}")
        return " ".join(parts)

    # -- rule lookup ----------------------------------------------------------
    def rule(self, a: int, b: int):
        """Replacement terms for the adjacent pair (a, b), or None if the pair is normal."""
        base = self._base
        if a >= base:
            ea = self._scale_exps[a - base]
            if b >= base:
                eb = self._scale_exps[b - base]
                s = (ea[0] + eb[0], ea[1] + eb[1])
                return (((), self.field.one),) if s == (0, 0) else (((self.scale_id(*s),), self.field.one),)
            sp = self.generators[b].species
            k = ea[0] * self.scale.zeta.get(sp, 0) + ea[1] * self.scale.zetabar.get(sp, 0)
            return (((b, a), self.field.upow(k)),)
        if b >= base:
            return None
        r = self.rules.get((a, b))
        if r is None and a > b:
            raise MissingRule(self.generators[a], self.generators[b])
        return r

    # -- reduction ----------------------------------------------------------
    def _tick(self):
        self._steps += 1
        if self._steps > self.budget:
            raise NonTermination(f"rewrite budget of {self.budget} steps exceeded")

    def _insert(self, w: Word, g: int) -> dict[Word, RingElem]:
        key = (w, g)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        one = self.field.one
        if not w:
            res = {(g,): one}
        else:
            rhs = self.rule(w[-1], g)
            if rhs is None:
                res = {w + (g,): one}
            else:
                self._tick()
                prefix = w[:-1]
                res = {}
                for t, c in rhs:
                    cur = {prefix: one}
                    for h in t:
                        cur = self._fold(cur, h)
                    for ww, cc in cur.items():
                        v = res.get(ww)
                        res[ww] = c * cc if v is None else v + c * cc
                res = {k: v for k, v in res.items() if not v.is_zero()}
        self._memo[key] = res
        return res

    def _fold(self, cur: Mapping[Word, RingElem], g: int) -> dict[Word, RingElem]:
        out: dict[Word, RingElem] = {}
        for w, c in cur.items():
            for ww, cc in self._insert(w, g).items():
                v = out.get(ww)
                out[ww] = c * cc if v is None else v + c * cc
        return {k: v for k, v in out.items() if not v.is_zero()}

    def nf_word(self, w: Word, prefix: Word = ()) -> dict[Word, RingElem]:
        """Normal form of prefix * w, where prefix is already normal."""
        cur = {prefix: self.field.one}
        for g in w:
            cur = self._fold(cur, g)
        return cur

    def reduce_terms(self, terms: Mapping[Word, Scalar]) -> "Element":
        """Normal form of an arbitrary linear combination of words."""
        self._steps = 0
        out: dict[Word, RingElem] = {}
        zero = self.field.zero
        for w, c in terms.items():
            c = self.field(c)
            if c.is_zero():
                continue
            for ww, cc in self.nf_word(w).items():
                out[ww] = out.get(ww, zero) + c * cc
        return Element(self, out)

    def raw(self, terms: Mapping[Word, Scalar]) -> "RawElement":
        return RawElement(self, {w: self.field(c) for w, c in terms.items()})

    def word(self, *gens: tuple[str, object]) -> "Element":
        """Normal form of a product of generators given as (species, index) pairs."""
        w = tuple(self.gen_id(s, i) for s, i in gens)
        return self.reduce_terms({w: self.field.one})

    def is_normal(self, w: Word) -> bool:
        for a, b in zip(w, w[1:]):
            if self.rule(a, b) is not None:
                return False
        return True

    def mul(self, x: "Element", y: "Element") -> "Element":
        self._steps = 0
        out: dict[Word, RingElem] = {}
        zero = self.field.zero
        for wy, cy in y.terms.items():
            for wx, cx in x.terms.items():
                c = cx * cy
                for ww, cc in self.nf_word(wy, wx).items():
                    out[ww] = out.get(ww, zero) + c * cc
        return Element(self, out)

    # -- bar involution -------------------------------------------------------
    def set_bar(self, images: Mapping[int, "Element"]) -> None:
        self._bar_images = dict(images)
        self._bar_memo = {}

    def bar_word(self, w: Word) -> "Element":
        hit = self._bar_memo.get(w)
        if hit is not None:
            return hit
        if self._bar_images is None:
            raise UnbarredGenerator("sector defines no conjugation")
        out = self.one
        for g in reversed(w):
            if self.is_scale(g):
                a, b = self._scale_exps[g - self._base]
                img = self.gen("ScalePow", (b, a))
            else:
                img = self._bar_images.get(g)
                if img is None:
                    raise UnbarredGenerator(str(self.generators[g]))
            out = out * img
        self._bar_memo[w] = out
        return out

    def __repr__(self):
        return f"RuleSet({len(self.generators)} generators, {len(self.rules)} rules)"


class Element:
    """Normal-ordered linear combination of words over a RuleSet."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: RuleSet, terms: Mapping[Word, RingElem]):
        self.alg = alg
        self.terms = {w: c for w, c in terms.items() if not c.is_zero()}

    def _lift(self, other) -> "Element":
        if isinstance(other, Element):
            if other.alg is not self.alg:
                raise ValueError("elements of different algebras")
            return other
        if isinstance(other, (RingElem, int)):
            return self.alg.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        zero = self.alg.field.zero
        for w, c in other.terms.items():
            out[w] = out.get(w, zero) + c
        return Element(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Element":
        c = self.alg.field(c)
        if c.is_zero():
            return Element(self.alg, {})
        return Element(self.alg, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (RingElem, int)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.alg.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (RingElem, int)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = self.alg.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def coeff(self, w: Word) -> RingElem:
        return self.terms.get(w, self.alg.field.zero)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def term_strings(self) -> list[str]:
        out = []
        for w, c in self.sorted_terms():
            ws = self.alg.word_str(w)
            if not w:
                out.append(f"({c})")
            elif c.is_one():
                out.append(ws)
            else:
                out.append(f"({c})*{ws}")
        return out

    def __str__(self):
        return " + ".join(self.term_strings()) or "0"

    __repr__ = __str__


class RawElement:
    """Unreduced linear combination of words (input to normal_form)."""

    def __init__(self, alg: RuleSet, terms: Mapping[Word, RingElem]):
        self.alg = alg
        self.terms = dict(terms)


def normal_form(e: Union[Element, RawElement], rules: RuleSet | None = None) -> Element:
    """Fixed point of exhaustive rewriting."""
    rules = rules or e.alg
    return rules.reduce_terms(e.terms)


def bar(e: Element) -> Element:
    """Coefficient-fixing, product-reversing conjugation of the element's sector."""
    alg = e.alg
    out = alg.zero
    for w, c in e.terms.items():
        out = out + alg.bar_word(w).scale(c)
    return out


# --- rule derivation -------------------------------------------------------------

def _word_key(w: Word):
    return (len(w), w)


def derive_rules(
    field: QField,
    generators: Sequence[Generator],
    relations: Sequence[Mapping[Word, RingElem]],
    unsupported: Iterable[tuple[str, str]] = (),
    scale: ScaleAction | None = None,
    budget: int = STEP_BUDGET,
) -> RuleSet:
    """Row-reduce quadratic relations (each ``= 0``) into a complete RuleSet.

    Relations are grouped by the species pair of their quadratic words; each
    family is brought to reduced row echelon form with columns in descending
    degree-lexicographic order, so each row's pivot is its largest word.
    """
    unsupported = frozenset(unsupported)
    families: dict[frozenset, list[dict[Word, RingElem]]] = {}
    for rel in relations:
        rel = {w: c for w, c in rel.items() if not c.is_zero()}
        if not rel:
            continue
        quad = [w for w in rel if len(w) == 2]
        if not quad or any(len(w) > 2 for w in rel):
            raise InconsistentRelations("relations must be quadratic with a nonzero degree-2 part")
        key = {frozenset((generators[w[0]].species, generators[w[1]].species)) for w in quad}
        if len(key) != 1:
            raise ValueError(f"relation mixes species families: {key}")
        families.setdefault(key.pop(), []).append(rel)

    rules: dict[tuple[int, int], list[tuple[Word, RingElem]]] = {}
    for fam, rels in families.items():
        for pivot, rhs in _rref(field, rels):
            rules[pivot] = rhs

    # completeness: every out-of-order pair needs a rule unless declared unsupported
    for a, b in product(range(len(generators)), repeat=2):
        if a <= b:
            continue
        sa, sb = generators[a].species, generators[b].species
        if (sa, sb) in unsupported or (sb, sa) in unsupported:
            continue
        if (a, b) not in rules:
            raise UnderdeterminedRelations(f"no rule for out-of-order pair {generators[a]} {generators[b]}")
    return RuleSet(field, generators, rules, unsupported=unsupported, scale=scale, budget=budget)


def _rref(field: QField, rels: list[dict[Word, RingElem]]):
    cols = sorted({w for r in rels for w in r}, key=_word_key, reverse=True)
    pos = {w: i for i, w in enumerate(cols)}
    rows = [{pos[w]: c for w, c in r.items()} for r in rels]
    pivots: list[tuple[int, dict[int, RingElem]]] = []
    for row in rows:
        # reduce against existing pivots
        for p, prow in pivots:
            c = row.get(p)
            if c is not None and not c.is_zero():
                for k, v in prow.items():
                    row[k] = row.get(k, field.zero) - c * v
                row = {k: v for k, v in row.items() if not v.is_zero()}
        row = {k: v for k, v in row.items() if not v.is_zero()}
        if not row:
            continue
        p = min(row)
        if len(cols[p]) < 2:
            raise InconsistentRelations(f"relations imply a lower-degree identity {cols[p]}")
        inv = row[p].inverse()
        row = {k: v * inv for k, v in row.items()}
        # back-substitute into earlier pivot rows
        new = []
        for q_, qrow in pivots:
            c = qrow.get(p)
            if c is not None and not c.is_zero():
                for k, v in row.items():
                    qrow[k] = qrow.get(k, field.zero) - c * v
                qrow = {k: v for k, v in qrow.items() if not v.is_zero()}
            new.append((q_, qrow))
        pivots = new + [(p, row)]
    out = []
    for p, row in pivots:
        rhs = [(cols[k], -v) for k, v in sorted(row.items()) if k != p]
        out.append((cols[p], rhs))
    return out


# --- confluence ------------------------------------------------------------------

def check_local_confluence(rules: RuleSet, max_degree: int = 3, alphabet: Sequence[int] | None = None) -> CheckResult:
    """Resolve every overlap ambiguity a b c (rules on ab and bc) both ways and compare."""
    if max_degree != 3:
        raise ValueError("quadratic rules only have overlap ambiguities of length 3")
    if alphabet is None:
        alphabet = list(range(len(rules.generators)))
        if rules.scale is not None:
            alphabet += [rules.scale_id(*e) for e in ((1, 0), (-1, 0), (0, 1), (0, -1))]
    checked = blocked = 0
    for a, b, c in product(alphabet, repeat=3):
        try:
            r_ab = rules.rule(a, b)
            r_bc = rules.rule(b, c)
        except MissingRule:
            blocked += 1
            continue
        if r_ab is None or r_bc is None:
            continue
        try:
            left = _combine(rules, [(t + (c,), k) for t, k in r_ab])
            right = _combine(rules, [((a,) + t, k) for t, k in r_bc])
        except MissingRule:
            blocked += 1
            continue
        checked += 1
        diff = left - right
        if not diff.is_zero():
            w = (a, b, c)
            return CheckResult(
                "confluence",
                "confluence: every degree-3 overlap resolves to one normal form",
                FAIL,
                witness={
                    "index": rules.word_str(w),
                    "residual": str(diff),
                    "terms": diff.term_strings(),
                    "message": f"(ab)c -> {left}; a(bc) -> {right}",
                },
            )
    return CheckResult(
        "confluence",
        "confluence: every degree-3 overlap resolves to one normal form",
        PASS,
        detail=f"{checked} overlaps resolved, {blocked} words blocked by unsupported pairs",
    )


def _combine(rules: RuleSet, terms) -> Element:
    return rules.reduce_terms({w: k for w, k in _merge(rules, terms).items()})


def _merge(rules: RuleSet, terms):
    out: dict[Word, RingElem] = {}
    for w, k in terms:
        out[w] = out.get(w, rules.field.zero) + k
    return out


def altered(rules: RuleSet, pair: tuple[int, int], factor: RingElem) -> RuleSet:
    """Copy of ``rules`` with the first coefficient of one rule multiplied by ``factor``."""
    new = dict(rules.rules)
    terms = list(new[pair])
    w, c = terms[0]
    terms[0] = (w, c * factor)
    new[pair] = terms
    out = RuleSet(rules.field, rules.generators, new, rules.unsupported, rules.scale, rules.budget)
    return out
