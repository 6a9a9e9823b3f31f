"""The three calculus sectors: GL_q(N) plane, its complex extension, SO_q(N) Euclidean space."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any

from .checks import CheckResult
from .ncalg import (
    Element,
    Generator,
    RuleSet,
    ScaleAction,
    check_local_confluence,
    derive_rules,
)
from .qring import QField, RingElem
from .rtensor import (
    Metric,
    RTensor,
    SOData,
    UnsupportedDimension,
    build_glq_rhat,
    build_psi,
    build_soq_data,
    glq_rhat_inverse,
)

SECTORS = ("glq_holo", "glq_complex", "soq_real")

SPECIES_ORDER = {
    "glq_holo": ("X", "Dx"),
    "glq_complex": ("X", "Xhat", "Dxhat", "Dx"),
    "soq_real": ("X", "Xi", "Dx", "Dxhat"),
}


class WrongSector(ValueError):
    pass


class ConfluenceFailure(RuntimeError):
    def __init__(self, result: CheckResult):
        super().__init__(f"rule set is not locally confluent: {result.witness}")
        self.result = result


class IndexOps:
    """Metric index gymnastics and ranges shared by every calculus backend.

    Needs ``n``, ``metric``, ``zero`` and the generator accessors.
    """

    # raised/lowered SO indices, expanded through the metric
    def x_up(self, i: int) -> Element:
        """x^i = g^{ij} x_j"""
        return _lin(self, [(self.metric.upper(i, j), self.x(j)) for j in self.range])

    def d_low(self, i: int) -> Element:
        """d_i = g_{ij} d^j"""
        return _lin(self, [(self.metric.lower(i, j), self.d(j)) for j in self.range])

    def dh_up(self, i: int) -> Element:
        """dh^i = g^{ij} dh_j"""
        return _lin(self, [(self.metric.upper(i, j), self.dh(j)) for j in self.range])

    @property
    def range(self) -> range:
        return range(1, self.n + 1)


@dataclass
class AlgebraSpec(IndexOps):
    sector: str
    n: int
    root_order: int
    generators: list[Generator]
    rules: RuleSet
    rhat: RTensor
    rhat_inv: RTensor
    families: list[str]
    metric: Metric | None = None
    so: SOData | None = None
    psi: RTensor | None = None
    confluence: CheckResult | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    symbolic = True

    @property
    def field(self) -> QField:
        return self.rules.field

    @property
    def zero(self) -> Element:
        return self.rules.zero

    @property
    def one(self) -> Element:
        return self.rules.one

    def gen(self, species: str, index) -> Element:
        return self.rules.gen(species, index)

    def x(self, i: int) -> Element:
        return self.rules.gen("X", i)

    def d(self, i: int) -> Element:
        return self.rules.gen("Dx", i)

    def xh(self, i: int) -> Element:
        return self.rules.gen("Xhat", i)

    def dh(self, i: int) -> Element:
        return self.rules.gen("Dxhat", i)

    def xi(self, i: int) -> Element:
        return self.rules.gen("Xi", i)

    def scalar(self, c) -> Element:
        return self.rules.scalar(c)

    def summary(self) -> dict[str, Any]:
        return {
            "sector": self.sector,
            "n": self.n,
            "root_order": self.root_order,
            "generators": [str(g) for g in self.generators],
            "rule_count": len(self.rules.rules),
            "families": self.families,
            "confluence": None if self.confluence is None else self.confluence.status,
            "confluence_detail": None if self.confluence is None else self.confluence.detail,
        }


def _lin(spec: AlgebraSpec, terms) -> Element:
    out = spec.zero
    for c, e in terms:
        if not c.is_zero():
            out = out + e.scale(c)
    return out


def default_root_order(sector: str, n: int) -> int:
    # SO needs q^(1/2) for the metric; GL sectors need q^(1/N) for zeta
    return 2 if sector == "soq_real" else n


class _Rel:
    """Accumulates one relation (an expression equated to zero) as raw word terms."""

    def __init__(self, ids, field: QField):
        self.ids = ids
        self.field = field
        self.terms: dict[tuple[int, ...], RingElem] = {}

    def add(self, c: RingElem, *gens):
        if c.is_zero():
            return self
        w = tuple(self.ids[g] for g in gens)
        self.terms[w] = self.terms.get(w, self.field.zero) + c
        return self


def _roster(sector: str, n: int) -> list[Generator]:
    return [Generator(s, i) for s in SPECIES_ORDER[sector] for i in range(1, n + 1)]


def _gl_relations(n: int, F: QField, R: RTensor, Rinv: RTensor, ids, complex_: bool):
    q, one = F.q, F.one
    qi = q ** -1
    rng = range(1, n + 1)
    X = lambda i: Generator("X", i)
    D = lambda i: Generator("Dx", i)
    XH = lambda i: Generator("Xhat", i)
    DH = lambda i: Generator("Dxhat", i)
    rels = []
    for i, j in product(rng, repeat=2):
        # x_i x_j = q^-1 x_k x_l R^{kl}_{ij}
        r = _Rel(ids, F).add(one, X(i), X(j))
        for k, l in product(rng, repeat=2):
            r.add(-qi * R[(k, l, i, j)], X(k), X(l))
        rels.append(r.terms)
        # d^i x_j = delta + q R^{ik}_{jl} x_k d^l
        r = _Rel(ids, F).add(one, D(i), X(j))
        if i == j:
            r.terms[()] = -one
        for k, l in product(rng, repeat=2):
            r.add(-q * R[(i, k, j, l)], X(k), D(l))
        rels.append(r.terms)
        # (d_2 d_1)^{ij} = d^j d^i = q^-1 R^{ij}_{kl} d^l d^k
        r = _Rel(ids, F).add(one, D(j), D(i))
        for k, l in product(rng, repeat=2):
            r.add(-qi * R[(i, j, k, l)], D(l), D(k))
        rels.append(r.terms)
    if not complex_:
        return rels, ["xx", "dx", "dd"]
    for i, j in product(rng, repeat=2):
        # xh^j xh^i = q^-1 R^{ij}_{kl} xh^l xh^k
        r = _Rel(ids, F).add(one, XH(j), XH(i))
        for k, l in product(rng, repeat=2):
            r.add(-qi * R[(i, j, k, l)], XH(l), XH(k))
        rels.append(r.terms)
        # xh^j dh_i = -delta^j_i + q R^{jl}_{ik} dh_l xh^k
        r = _Rel(ids, F).add(one, XH(j), DH(i))
        if i == j:
            r.terms[()] = one
        for k, l in product(rng, repeat=2):
            r.add(-q * R[(j, l, i, k)], DH(l), XH(k))
        rels.append(r.terms)
        # dh_i dh_j = q^-1 dh_k dh_l R^{kl}_{ij}
        r = _Rel(ids, F).add(one, DH(i), DH(j))
        for k, l in product(rng, repeat=2):
            r.add(-qi * R[(k, l, i, j)], DH(k), DH(l))
        rels.append(r.terms)
        # xh^i x_j = q (R^-1)^{ik}_{jl} x_k xh^l
        r = _Rel(ids, F).add(one, XH(i), X(j))
        for k, l in product(rng, repeat=2):
            r.add(-q * Rinv[(i, k, j, l)], X(k), XH(l))
        rels.append(r.terms)
        # d^i xh^j = q (R^-1)^{ji}_{lk} xh^k d^l
        r = _Rel(ids, F).add(one, D(i), XH(j))
        for k, l in product(rng, repeat=2):
            r.add(-q * Rinv[(j, i, l, k)], XH(k), D(l))
        rels.append(r.terms)
        # dh_i x_j = q^-1 R^{kl}_{ij} x_k dh_l
        r = _Rel(ids, F).add(one, DH(i), X(j))
        for k, l in product(rng, repeat=2):
            r.add(-qi * R[(k, l, i, j)], X(k), DH(l))
        rels.append(r.terms)
        # d^i dh_j = q^-1 R^{ik}_{jl} dh_k d^l
        r = _Rel(ids, F).add(one, D(i), DH(j))
        for k, l in product(rng, repeat=2):
            r.add(-qi * R[(i, k, j, l)], DH(k), D(l))
        rels.append(r.terms)
    return rels, ["xx", "dx", "dd", "xhxh", "xhdh", "dhdh", "xhx", "dxh", "dhx", "ddh"]


def _so_relations(n: int, F: QField, so: SOData, ids):
    q, one = F.q, F.one
    qi = q ** -1
    rng = range(1, n + 1)
    R, Rinv, g = so.rhat, so.rhat_inv, so.metric
    Pm = so.p_minus
    Psym = so.p_plus + so.p_zero
    X = lambda i: Generator("X", i)
    D = lambda i: Generator("Dx", i)
    DH = lambda i: Generator("Dxhat", i)
    XI = lambda i: Generator("Xi", i)
    rels = []
    for i, j in product(rng, repeat=2):
        # x_k x_l (P^-)^{kl}_{ij} = 0
        r = _Rel(ids, F)
        for k, l in product(rng, repeat=2):
            r.add(Pm[(k, l, i, j)], X(k), X(l))
        rels.append(r.terms)
        # d^i x_j = delta + q R^{ik}_{jl} x_k d^l
        r = _Rel(ids, F).add(one, D(i), X(j))
        if i == j:
            r.terms[()] = -one
        for k, l in product(rng, repeat=2):
            r.add(-q * R[(i, k, j, l)], X(k), D(l))
        rels.append(r.terms)
        # (P^-)^{ij}_{kl} d^l d^k = 0
        r = _Rel(ids, F)
        for k, l in product(rng, repeat=2):
            r.add(Pm[(i, j, k, l)], D(l), D(k))
        rels.append(r.terms)
        # conjugate of d^i x_j = delta + q R^{ik}_{jl} x_k d^l under bar(x_j) = x^j,
        # bar(d^i) = -q^-N dh_i:  -q^-N x^j dh_i = delta^i_j - q^{1-N} R^{ik}_{jl} dh_l x^k
        r = _Rel(ids, F)
        for k, l in product(rng, repeat=2):
            c = q ** (1 - n) * R[(i, k, j, l)]
            for p in rng:
                r.add(c * g.upper(k, p), DH(l), X(p))
        for p in rng:
            r.add(-(q ** -n) * g.upper(j, p), X(p), DH(i))
        if i == j:
            r.terms[()] = -one
        rels.append(r.terms)
        # dh^i d^j = q R^{ji}_{lk} d^k dh^l, with dh^i = g^{ia} dh_a
        r = _Rel(ids, F)
        for a in rng:
            r.add(g.upper(i, a), DH(a), D(j))
        for k, l, b in product(rng, repeat=3):
            r.add(-q * R[(j, i, l, k)] * g.upper(l, b), D(k), DH(b))
        rels.append(r.terms)
        # conjugate of the dd relation: (P^-)^{ij}_{kl} dh_k dh_l = 0
        r = _Rel(ids, F)
        for k, l in product(rng, repeat=2):
            r.add(Pm[(i, j, k, l)], DH(k), DH(l))
        rels.append(r.terms)
        # xi_k xi_l (P^+ + P^0)^{kl}_{ij} = 0
        r = _Rel(ids, F)
        for k, l in product(rng, repeat=2):
            r.add(Psym[(k, l, i, j)], XI(k), XI(l))
        rels.append(r.terms)
        # x_i xi_j = q xi_k x_l R^{kl}_{ij}
        r = _Rel(ids, F).add(one, X(i), XI(j))
        for k, l in product(rng, repeat=2):
            r.add(-q * R[(k, l, i, j)], XI(k), X(l))
        rels.append(r.terms)
        # d^i xi_j = q^-1 (R^-1)^{ik}_{jl} xi_k d^l
        r = _Rel(ids, F).add(one, D(i), XI(j))
        for k, l in product(rng, repeat=2):
            r.add(-qi * Rinv[(i, k, j, l)], XI(k), D(l))
        rels.append(r.terms)
    return rels, ["xx", "dx", "dd", "dhx", "dhd", "dhdh", "xixi", "xxi", "dxi"]


def build_algebra(
    sector: str,
    n: int,
    *,
    root_order: int | None = None,
    check_confluence: bool = True,
    rhat: RTensor | None = None,
) -> AlgebraSpec:
    """Assemble and validate one calculus sector.

    ``rhat`` overrides the GL braid matrix (used by mutation tests); the result
    is then not guaranteed to be confluent.
    """
    if sector not in SECTORS:
        raise WrongSector(f"unknown sector {sector!r}")
    if sector == "soq_real":
        if n < 3:
            raise UnsupportedDimension(f"SO_q(N) needs N >= 3, got {n}")
    elif n < 1:
        raise UnsupportedDimension(f"GL_q(N) needs N >= 1, got {n}")
    M = root_order or default_root_order(sector, n)
    F = QField(M)
    gens = _roster(sector, n)
    ids = {g: i for i, g in enumerate(gens)}

    so = metric = psi = None
    unsupported: tuple = ()
    scale = None
    if sector == "soq_real":
        so = build_soq_data(n, F)
        R, Rinv, metric = so.rhat, so.rhat_inv, so.metric
        rels, families = _so_relations(n, F, so, ids)
        # no xi / dh exchange is available; reductions must never need it
        unsupported = (("Dxhat", "Xi"),)
    else:
        R = rhat or build_glq_rhat(n, F)
        Rinv = glq_rhat_inverse(R)
        complex_ = sector == "glq_complex"
        rels, families = _gl_relations(n, F, R, Rinv, ids, complex_)
        if complex_:
            psi = build_psi(n, F, R)
        w = 2 * M // n
        # zeta x = q^{2/N} x zeta, zeta d = q^{-2/N} d zeta; zetabar likewise on hatted generators
        scale = ScaleAction(
            zeta={"X": w, "Dx": -w},
            zetabar={"Xhat": -w, "Dxhat": w},
        )
    rules = derive_rules(F, gens, rels, unsupported=unsupported, scale=scale)
    spec = AlgebraSpec(
        sector=sector,
        n=n,
        root_order=M,
        generators=gens,
        rules=rules,
        rhat=R,
        rhat_inv=Rinv,
        families=families,
        metric=metric,
        so=so,
        psi=psi,
    )
    _install_bar(spec)
    if check_confluence:
        res = check_local_confluence(rules)
        spec.confluence = res
        if not res.passed:
            raise ConfluenceFailure(res)
    return spec


def _install_bar(spec: AlgebraSpec) -> None:
    rs = spec.rules
    F = spec.field
    images = {}
    if spec.sector == "glq_complex":
        for i in spec.range:
            images[rs.gen_id("X", i)] = spec.xh(i)
            images[rs.gen_id("Xhat", i)] = spec.x(i)
            images[rs.gen_id("Dx", i)] = -spec.dh(i)
            images[rs.gen_id("Dxhat", i)] = -spec.d(i)
    elif spec.sector == "soq_real":
        n = spec.n
        qN = F.q ** n
        for i in spec.range:
            images[rs.gen_id("X", i)] = spec.x_up(i)
            images[rs.gen_id("Dx", i)] = spec.dh(i).scale(-(qN.inverse()))
            images[rs.gen_id("Dxhat", i)] = spec.d(i).scale(-qN)
        # xi has a conjugate only through the xihat construction; left unbarred here
    else:
        return
    rs.set_bar(images)


def derived_element(name: str, spec: AlgebraSpec) -> Element:
    """mu, mubar, calL, L, Delta, Lambda as normal-ordered Elements."""
    F = spec.field
    q, lam = F.q, F.lam
    rng = spec.range
    if name == "mu":
        _need(spec, "glq_holo", "glq_complex")
        s = spec.zero
        for i in rng:
            s = s + spec.x(i) * spec.d(i)
        return spec.one + s.scale(q * lam)
    if name == "mubar":
        _need(spec, "glq_complex")
        s = spec.zero
        for i in rng:
            s = s + spec.dh(i) * spec.xh(i)
        return spec.one - s.scale(q * lam)
    if name == "calL":
        _need(spec, "glq_complex")
        s = spec.zero
        for i in rng:
            s = s + spec.x(i) * spec.xh(i)
        return s
    if name == "L":
        _need(spec, "soq_real")
        s = spec.zero
        for k in rng:
            s = s + spec.x(k) * spec.x_up(k)
        return s.scale(spec.so.alpha)
    if name == "Delta":
        _need(spec, "soq_real")
        s = spec.zero
        for i in rng:
            s = s + spec.d_low(i) * spec.d(i)
        return s.scale(spec.so.alpha)
    if name == "Lambda":
        _need(spec, "soq_real")
        s = spec.zero
        for i in rng:
            s = s + spec.x(i) * spec.d(i)
        return spec.one + s.scale(q * lam) + (derived_element("L", spec) * derived_element("Delta", spec)).scale(
            q ** spec.n * lam * lam
        )
    raise WrongSector(f"unknown derived element {name!r}")


def _need(spec: AlgebraSpec, *sectors: str) -> None:
    if spec.sector not in sectors:
        raise WrongSector(f"element needs sector {sectors}, spec is {spec.sector}")
