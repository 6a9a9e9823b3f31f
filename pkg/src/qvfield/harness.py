"""Suite registry, runner and report.

Each registered check produces named parts.  A part is either a family of
residuals (judged by the backend: exact normal form, or exact action on the
truncated module) or a precomputed list of failures.  The same check bodies
drive the symbolic pass and the oracle pass.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable

from .checks import ERROR, FAIL, PASS, CheckResult
from .ncalg import Element, bar
from .oracle import (
    NoModuleAction,
    NumericCalculus,
    format_vec,
    numeric_tensor_residuals,
    point_from_q,
    sample_points,
)
from .qring import RingElem
from .qspaces import AlgebraSpec, build_algebra, default_root_order, derived_element
from .rtensor import UnsupportedDimension, build_psi, glq_rhat_inverse, prime, tensor_check
from .vfields import (
    DhatRealization,
    OpMatrix,
    braid_relation,
    build_matrix,
    build_xihat,
    lower_vector_relation,
    quantum_trace,
    sandwich,
    so_orthogonality,
    symmetric_form,
    upper_vector_relation,
)

GROUPS = {"glq": "glq_holo", "slq": "glq_holo", "suq": "glq_complex", "soq": "soq_real"}
SUPPORTED_N = {"glq": (1, 2, 3), "slq": (1, 2, 3), "suq": (1, 2), "soq": (3,)}
LARGE_N = {"soq": (4,)}
MODES = ("symbolic", "numeric", "both")
MUTATIONS = (None, "lambda_sign", "rhat")


class UnsupportedGroup(ValueError):
    pass


@dataclass
class SuiteOptions:
    q_points: list[Fraction] = field(default_factory=list)
    max_degree: int | None = None
    seed: int = 0
    n_points: int = 3
    sigma: int = 1
    mutation: str | None = None
    allow_large: bool = False
    only: tuple[str, ...] = ()


@dataclass
class Part:
    name: str
    residuals: dict | None = None
    failures: list | None = None  # [(index, text)] when precomputed
    realized: bool = False  # SO: judge with dh realized through Lambda^{-1}
    expect_nonzero: bool = False


class Ctx:
    """Backend handle for one evaluation of the suite (symbolic, or one q point)."""

    def __init__(self, calc, spec: AlgebraSpec, options: SuiteOptions):
        self.s = calc
        self.spec = spec
        self.opts = options
        self.symbolic = calc.symbolic
        F = calc.field
        self.F = F
        R, Rinv = calc.rhat, calc.rhat_inv
        if options.mutation == "rhat":
            R = R.perturbed((1, 1, 1, 1), F.one)
            if calc.sector != "soq_real":
                Rinv = glq_rhat_inverse(R)
        self.R, self.Rinv = R, Rinv
        self.lambda_sign = -1 if options.mutation == "lambda_sign" else 1
        self._mats: dict[str, OpMatrix] = {}
        self._elems: dict[str, Any] = {}
        self._real: DhatRealization | None = None

    def mat(self, name: str) -> OpMatrix:
        m = self._mats.get(name)
        if m is None:
            m = self._mats[name] = build_matrix(name, self.s, lambda_sign=self.lambda_sign)
        return m

    def el(self, name: str):
        e = self._elems.get(name)
        if e is None:
            e = self._elems[name] = derived_element(name, self.s)
        return e

    @property
    def realization(self) -> DhatRealization:
        if self._real is None:
            self._real = DhatRealization(self.s)
        return self._real

    def vec(self, kind: str) -> list:
        get = {"x": self.s.x, "d": self.s.d, "xh": self.s.xh, "dh": self.s.dh, "dh_up": self.s.dh_up, "x_up": self.s.x_up}[kind]
        return [get(i) for i in self.s.range]

    # judgement -----------------------------------------------------------------
    def judge(self, part: Part) -> list:
        if part.failures is not None:
            return part.failures
        bad = []
        for idx, e in part.residuals.items():
            hit = self._nonzero(e, part.realized)
            if hit is not None:
                bad.append((idx, hit))
                if not part.expect_nonzero:
                    break
        if part.expect_nonzero:
            return [] if bad else [("all", ["every residual vanished; a nonzero one was expected"])]
        return bad

    def _nonzero(self, e, realized: bool):
        if self.symbolic:
            if isinstance(e, RingElem):
                return None if e.is_zero() else [str(e)]
            if isinstance(e, int):
                return None if e == 0 else [str(e)]
            if realized:
                e = self.realization.residual(e)
            return None if e.is_zero() else e.term_strings()
        if isinstance(e, (int, RingElem, Fraction)):
            v = self.s.num(e)
            return None if v == 0 else [str(v)]
        hit = self.s.nonzero(e)
        if hit is None:
            return None
        m, v = hit
        word = " ".join([f"x_{i}" for i in m[0]] + [f"xh^{i}" for i in m[1]]) or "1"
        return [f"on {word}:"] + format_vec(v)


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    groups: tuple[str, ...]
    body: Callable[[Ctx], list[Part]]
    numeric: bool = True  # has content the oracle can replicate


REGISTRY: list[Check] = []


def check(id: str, anchor: str, groups: tuple[str, ...], numeric: bool = True):
    def deco(fn):
        REGISTRY.append(Check(id, anchor, groups, fn, numeric))
        return fn

    return deco


GL = ("glq", "slq")
SU = ("suq",)
SO = ("soq",)


def _comm(a, b, c=1):
    """a b - c b a"""
    return a * b - (b * a).scale(c) if c != 1 else a * b - b * a


def _as_index(ix):
    return tuple(ix) if isinstance(ix, list) else ix


def _tensor_parts(ctx: Ctx, kinds: list[str], so: bool = False) -> list[Part]:
    parts = []
    for kind in kinds:
        if ctx.symbolic:
            if so:
                data = dataclasses.replace(ctx.s.so, rhat=ctx.R)
            elif kind == "psi":
                data = None
            else:
                data = ctx.R
            if kind == "psi":
                psi = build_psi(ctx.s.n, ctx.F, ctx.R)
                res = [tensor_check("psi_contraction", (ctx.R, psi)), tensor_check("psi_traces", psi)]
            else:
                res = [tensor_check(kind, data)]
            fails = [(_as_index(r.witness.get("index")), [r.witness.get("residual", "")]) for r in res if not r.passed]
            parts.append(Part(kind, failures=fails))
        else:
            nk = {"projector_idempotence": "projectors"}.get(kind, kind)
            if nk == "metric_inverse":
                continue  # folded into the numeric p0_metric check
            fails = [((name, *idx), [str(v)]) for name, (idx, v) in numeric_tensor_residuals(nk, ctx.s, rhat=ctx.R)]
            parts.append(Part(kind, failures=fails))
    return parts


def _relations_part(ctx: Ctx) -> list[Part]:
    """Symbolic: exhaustive degree-3 overlap check.  Numeric: every rewrite rule holds on the module."""
    if ctx.symbolic:
        res = ctx.spec.confluence
        if res is None:
            from .ncalg import check_local_confluence

            res = check_local_confluence(ctx.spec.rules)
        fails = [] if res.passed else [(_as_index(res.witness.get("index")), [res.witness.get("residual", "")])]
        return [Part("overlaps", failures=fails)]
    rs = ctx.spec.rules
    res = {}
    for (a, b), terms in rs.rules.items():
        try:
            lhs = ctx.s.element(Element(rs, {(a, b): ctx.F.one}))
            rhs = ctx.s.element(Element(rs, dict(terms)))
        except NoModuleAction:
            continue
        res[rs.word_str((a, b))] = lhs - rhs
    return [Part("rules on module", res)]


# --- GL holomorphic ----------------------------------------------------------------

@check("G1-char", "char: R^2 = 1 + lam R, lam = q - q^-1", GL)
def _g1(ctx):
    return _tensor_parts(ctx, ["gl_char"])


@check("G2-symmetry", "R^{ij}_{kl} = R^{kl}_{ij}", GL)
def _g2(ctx):
    return _tensor_parts(ctx, ["symmetry"])


@check("G3-braid", "R12 R23 R12 = R23 R12 R23", GL)
def _g3(ctx):
    return _tensor_parts(ctx, ["braid"])


@check("G4-confluence", "xx, px, pp: x1 x2 = q^-1 x1 x2 R12, d^i x_j = delta + q R^{ik}_{jl} x_k d^l, d2 d1 = q^-1 R12 d2 d1", GL)
def _g4(ctx):
    return _relations_part(ctx)


@check("G5-Yx", "Yx: Y^i_j x_k = x_m R^{im}_{ln} Y^n_r R^{lr}_{jk}", GL)
def _g5(ctx):
    Y = ctx.mat("Y")
    return [Part("Yx", lower_vector_relation(Y, ctx.vec("x"), sandwich(ctx.R, Y, ctx.R)))]


@check("G6-Yp", "Yp: d2 Y1 = R12 Y2 R12 d2", GL)
def _g6(ctx):
    Y = ctx.mat("Y")
    return [Part("Yp", upper_vector_relation(ctx.vec("d"), Y, sandwich(ctx.R, Y, ctx.R)))]


@check("G7-YY-braid", "YY: R12 Y2 R12 Y2 = Y2 R12 Y2 R12", GL)
def _g7(ctx):
    Y = ctx.mat("Y")
    return [Part("YY", braid_relation(ctx.R, Y, ctx.R, Y))]


@check("G8-mu-exchange", "mu = 1 + q lam x_i d^i; mu x_i = q^2 x_i mu, d^i mu = q^2 mu d^i", GL)
def _g8(ctx):
    mu, q2 = ctx.el("mu"), ctx.F.q ** 2
    s = ctx.s
    return [
        Part("mu x", {i: mu * s.x(i) - (s.x(i) * mu).scale(q2) for i in s.range}),
        Part("d mu", {i: s.d(i) * mu - (mu * s.d(i)).scale(q2) for i in s.range}),
    ]


@check("G9-characteristic-identity", "(Y - mu)(Y - q^-2) = 0", GL)
def _g9(ctx):
    Y, mu = ctx.mat("Y"), ctx.el("mu")
    P = Y.minus_scalar(mu) @ Y.minus_scalar(ctx.s.scalar(ctx.F.q ** -2))
    return [Part("(Y-mu)(Y-q^-2)", dict(P.items()))]


@check("G10-quantum-traces", "t_k = Tr D^-1 Y^k; t1 = [N] - 1 + mu = q^-2 t0 - q^-2N + mu; t2 = q^-2 t1 - mu q^-2N + mu^2; t3 = q^-2 t2 - mu^2 q^-2N + mu^3", GL)
def _g10(ctx):
    Y, mu, F, s = ctx.mat("Y"), ctx.el("mu"), ctx.F, ctx.s
    n, q = s.n, F.q
    t = [quantum_trace(Y, k) for k in range(4)]
    br = sum((q ** (-2 * k) for k in range(n)), F.zero)
    q2, q2n = q ** -2, q ** (-2 * n)
    return [
        Part("t0 = [N]", {0: t[0] - s.scalar(br)}),
        Part("t1 = [N] - 1 + mu", {1: t[1] - s.scalar(br - 1) - mu}),
        Part("t1 recursion", {1: t[1] - t[0].scale(q2) + s.scalar(q2n) - mu}),
        Part("t2 recursion", {2: t[2] - t[1].scale(q2) + mu.scale(q2n) - mu * mu}),
        Part("t3 recursion", {3: t[3] - t[2].scale(q2) + (mu * mu).scale(q2n) - mu * mu * mu}),
    ]


@check("G11-mu-commutes-with-Y", "mu Y^i_j = Y^i_j mu", GL)
def _g11(ctx):
    Y, mu = ctx.mat("Y"), ctx.el("mu")
    return [Part("[mu, Y]", {k: mu * y - y * mu for k, y in Y.items()})]


@check("G12-SL-normalization", "Z = mu^{-1/N} Y, realized as zeta^-1 Y; zeta^-1 commutes with Y and Z obeys the YY braid", ("slq",))
def _g12(ctx):
    Y, Z = ctx.mat("Y"), ctx.mat("Z_gl")
    zi = ctx.s.gen("ScalePow", (-1, 0))
    return [
        Part("[zeta^-1, Y]", {k: zi * y - y * zi for k, y in Y.items()}),
        Part("ZZ braid", braid_relation(ctx.R, Z, ctx.R, Z)),
    ]


# --- GL complex --------------------------------------------------------------------

@check("C1-complex-confluence", "mixed relations: xh^i x_j = q (R^-1)^{ik}_{jl} x_k xh^l, d^i xh^j = q (R^-1)^{ji}_{lk} xh^k d^l, dh_i x_j = q^-1 R^{kl}_{ij} x_k dh_l, d^i dh_j = q^-1 R^{ik}_{jl} dh_k d^l", SU)
def _c1(ctx):
    return _relations_part(ctx)


@check("C2-Psi", "Psi^{ir}_{js} = (R^-1)^{ri}_{sj} q^{2(j-r)}; R^{kj}_{li} Psi^{ir}_{js} = Psi^{kj}_{li} R^{ir}_{js} = delta^k_s delta^r_l; Psi^{ri}_{si} = delta^r_s q^{-2(N-r)-1}; Psi^{ir}_{is} = delta^r_s q^{-2(r-1)-1}", SU)
def _c2(ctx):
    return _tensor_parts(ctx, ["psi"])


@check("C3-dhxh-Psi-form", "dh_i xh^j = delta^j_i q^{-2i'} + q^-1 Psi^{jl}_{ik} xh^k dh_l, i' = N + 1 - i", SU)
def _c3(ctx):
    s, F = ctx.s, ctx.F
    n, q = s.n, F.q
    psi = s.psi if ctx.opts.mutation != "rhat" else build_psi(n, F, ctx.R)
    res = {}
    for i, j in product(s.range, repeat=2):
        r = s.dh(i) * s.xh(j)
        if i == j:
            r = r - s.scalar(q ** (-2 * prime(i, n)))
        for k, l in product(s.range, repeat=2):
            c = psi[(j, l, i, k)]
            if not c.is_zero():
                r = r - (s.xh(k) * s.dh(l)).scale(c / q)
        res[(i, j)] = r
    return [Part("dh xh", res)]


@check("C4-Yxh-Yph", "Yxh: xh2 Y1 = R12 Y2 R12^-1 xh2; Yph: Y1 dh2 = dh2 R12 Y2 R12^-1", SU)
def _c4(ctx):
    Y = ctx.mat("Y")
    M = sandwich(ctx.R, Y, ctx.Rinv)
    return [
        Part("Yxh", upper_vector_relation(ctx.vec("xh"), Y, M)),
        Part("Yph", lower_vector_relation(Y, ctx.vec("dh"), M)),
    ]


@check("C5-Ydag", "(Y^dag)^i_j = bar(Y^j_i) = q^-2 delta - q^-1 lam xh^i dh_j, with its conjugated actions on xh, dh, x, d", SU)
def _c5(ctx):
    Y, Yd = ctx.mat("Y"), ctx.mat("Ydag")
    R, Ri = ctx.R, ctx.Rinv
    parts = []
    if ctx.symbolic:
        parts.append(Part("Ydag = bar(Y)^t", {(i, j): e - bar(Y[j, i]) for (i, j), e in Yd.items()}))
    MRR = sandwich(R, Yd, R)
    MiR = sandwich(Ri, Yd, R)
    parts += [
        Part("xh2 Ydag1 = R Ydag2 R xh2", upper_vector_relation(ctx.vec("xh"), Yd, MRR)),
        Part("Ydag1 dh2 = dh2 R Ydag2 R", lower_vector_relation(Yd, ctx.vec("dh"), MRR)),
        Part("Ydag1 x2 = x2 R^-1 Ydag2 R", lower_vector_relation(Yd, ctx.vec("x"), MiR)),
        Part("d2 Ydag1 = R^-1 Ydag2 R d2", upper_vector_relation(ctx.vec("d"), Yd, MiR)),
    ]
    return parts


@check("C6-YhYh-YYh", "YhYh: R Ydag2 R Ydag2 = Ydag2 R Ydag2 R; YYh: R Y2 R^-1 Ydag2 = Ydag2 R Y2 R^-1", SU)
def _c6(ctx):
    Y, Yd = ctx.mat("Y"), ctx.mat("Ydag")
    return [
        Part("YhYh", braid_relation(ctx.R, Yd, ctx.R, Yd)),
        Part("YYh", braid_relation(ctx.R, Y, ctx.Rinv, Yd)),
    ]


@check("C7-U", "U = Y Ydag; R U2 R U2 = U2 R U2 R; U1 x2 = x2 R U2 R; xh2 U1 = R U2 R xh2", SU)
def _c7(ctx):
    U = ctx.mat("U")
    M = sandwich(ctx.R, U, ctx.R)
    return [
        Part("U braid", braid_relation(ctx.R, U, ctx.R, U)),
        Part("U x", lower_vector_relation(U, ctx.vec("x"), M)),
        Part("xh U", upper_vector_relation(ctx.vec("xh"), U, M)),
    ]


@check("C8-U-length", "calL = x_i xh^i commutes with U but not with Y", SU)
def _c8(ctx):
    U, Y, L = ctx.mat("U"), ctx.mat("Y"), ctx.el("calL")
    return [
        Part("[U, calL]", {k: u * L - L * u for k, u in U.items()}),
        Part("[Y, calL] != 0", {k: y * L - L * y for k, y in Y.items()}, expect_nonzero=True),
    ]


@check("C9-Uxp", "Uxp: q^2 U^i_j = q^-2 delta + q^-1 lam d^i x_j - q^-1 lam xh^i dh_j - lam^2 d^i calL dh_j", SU)
def _c9(ctx):
    s, F = ctx.s, ctx.F
    q, lam = F.q, F.lam
    U, L = ctx.mat("U"), ctx.el("calL")
    res = {}
    for (i, j), u in U.items():
        rhs = (s.d(i) * s.x(j)).scale(lam / q) - (s.xh(i) * s.dh(j)).scale(lam / q) - (s.d(i) * L * s.dh(j)).scale(lam * lam)
        if i == j:
            rhs = rhs + s.scalar(q ** -2)
        res[(i, j)] = u.scale(q * q) - rhs
    return [Part("Uxp", res)]


@check("C10-mubar", "mubar = 1 - q lam dh_i xh^i = bar(mu); mubar xh = q^-2 xh mubar, dh mubar = q^-2 mubar dh; commutation with x, d, Y, Ydag; mu with xh, dh, Ydag; mu mubar with calL", SU)
def _c10(ctx):
    s, F = ctx.s, ctx.F
    mu, mb, L = ctx.el("mu"), ctx.el("mubar"), ctx.el("calL")
    Y, Yd = ctx.mat("Y"), ctx.mat("Ydag")
    qm2 = F.q ** -2
    rng = s.range
    parts = []
    if ctx.symbolic:
        parts.append(Part("bar(mu) = mubar", {0: bar(mu) - mb}))
    parts += [
        Part("mubar xh", {i: mb * s.xh(i) - (s.xh(i) * mb).scale(qm2) for i in rng}),
        Part("dh mubar", {i: s.dh(i) * mb - (mb * s.dh(i)).scale(qm2) for i in rng}),
        Part("[mubar, x]", {i: _comm(mb, s.x(i)) for i in rng}),
        Part("[mubar, d]", {i: _comm(mb, s.d(i)) for i in rng}),
        Part("[mubar, Y]", {k: _comm(mb, y) for k, y in Y.items()}),
        Part("[mubar, Ydag]", {k: _comm(mb, y) for k, y in Yd.items()}),
        Part("[mu, xh]", {i: _comm(mu, s.xh(i)) for i in rng}),
        Part("[mu, dh]", {i: _comm(mu, s.dh(i)) for i in rng}),
        Part("[mu, Ydag]", {k: _comm(mu, y) for k, y in Yd.items()}),
        Part("[mu mubar, calL]", {0: _comm(mu * mb, L)}),
    ]
    return parts


@check("C11-ZZdag-hermitian", "Z Z^dag = U / (mu mubar)^{1/N}, realized as zeta^-1 zetabar^-1 U; bar((ZZ^dag)^i_j) = (ZZ^dag)^j_i; commutes with calL", SU)
def _c11(ctx):
    W, L = ctx.mat("ZZdag"), ctx.el("calL")
    parts = []
    if ctx.symbolic:
        parts.append(Part("hermitian", {(i, j): bar(e) - W[j, i] for (i, j), e in W.items()}))
    parts.append(Part("[ZZdag, calL]", {k: _comm(w, L) for k, w in W.items()}))
    return parts


# --- SO -------------------------------------------------------------------------------

@check("S1-SO-R", "R = q P+ - q^-1 P- + q^{1-N} P0; R^{ij}_{kl} = R^{kl}_{ij}; (R^-1)^{ij}_{kl} = g^{im} R^{jn}_{mk} g_{nl} = g_{km} R^{mi}_{ln} g^{nj}; braid", SO)
def _s1(ctx):
    return _tensor_parts(ctx, ["so_char", "symmetry", "so_orthogonality", "braid"], so=True)


@check("S2-projectors", "P+ + P- + P0 = 1, P^a P^b = delta^{ab} P^a; (P0)^{ij}_{kl} = nu g^{ij} g_{kl}, nu = lam / ((q^N - 1)(q^{1-N} + q^-1)); g g^-1 = 1", SO)
def _s2(ctx):
    return _tensor_parts(ctx, ["projector_idempotence", "p0_metric", "metric_inverse"], so=True)


@check("S3-SO-confluence", "x_k x_l (P-)^{kl}_{ij} = 0; d^i x_j = delta + q R^{ik}_{jl} x_k d^l; (P-)^{ij}_{kl} d^l d^k = 0; xi relations; dh relations", SO)
def _s3(ctx):
    return _relations_part(ctx)


@check("S4-L-central", "L = alpha x.x, alpha = 1/(1 + q^{N-2}); L x_i = x_i L", SO)
def _s4(ctx):
    L, s = ctx.el("L"), ctx.s
    return [Part("[L, x]", {i: _comm(L, s.x(i)) for i in s.range})]


@check("S5-Laplacian", "Delta = alpha g_{ij} d^j d^i; Delta d^i = d^i Delta", SO)
def _s5(ctx):
    D, s = ctx.el("Delta"), ctx.s
    return [Part("[Delta, d]", {i: _comm(D, s.d(i)) for i in s.range})]


@check("S6-Lambda-scaling", "Lambda = 1 + q lam x_i d^i + q^N lam^2 L Delta; Lambda x_i = q^2 x_i Lambda, d^i Lambda = q^2 Lambda d^i", SO)
def _s6(ctx):
    Lam, s, q2 = ctx.el("Lambda"), ctx.s, ctx.F.q ** 2
    return [
        Part("Lambda x", {i: Lam * s.x(i) - (s.x(i) * Lam).scale(q2) for i in s.range}),
        Part("d Lambda", {i: s.d(i) * Lam - (Lam * s.d(i)).scale(q2) for i in s.range}),
    ]


@check("S7-pL", "pL: d^i L = q^2 L d^i + q^{2-N} x^i", SO)
def _s7(ctx):
    L, s, q = ctx.el("L"), ctx.s, ctx.F.q
    return [Part("pL", {i: s.d(i) * L - (L * s.d(i)).scale(q * q) - s.x_up(i).scale(q ** (2 - s.n)) for i in s.range})]


def _lambda_dh(ctx: Ctx):
    """(delta^i_j + q^{N-1} lam alpha x^i d_j) d^j for each i."""
    s, F = ctx.s, ctx.F
    c = F.q ** (s.n - 1) * F.lam * s.so.alpha
    out = {}
    for i in s.range:
        e = s.zero
        for j in s.range:
            t = (s.x_up(i) * s.d_low(j)).scale(c)
            if i == j:
                t = t + s.scalar(1)
            e = e + t * s.d(j)
        out[i] = e
    return out


@check("S8-ph", "ph: dh^i = Lambda^-1 (delta^i_j + q^{N-1} lam alpha x^i d_j) d^j, checked as Lambda dh^i = (...) d^j; the realized dh obeys every dh exchange rule", SO)
def _s8(ctx):
    s, Lam = ctx.s, ctx.el("Lambda")
    rhs = _lambda_dh(ctx)
    parts = [Part("Lambda dh", {i: Lam * s.dh_up(i) - rhs[i] for i in s.range}, realized=True)]
    if ctx.symbolic:
        rs = s.rules
        res = {}
        for (a, b), terms in rs.rules.items():
            if "Dxhat" in (rs.generator(a).species, rs.generator(b).species):
                res[rs.word_str((a, b))] = Element(rs, {(a, b): ctx.F.one}) - Element(rs, dict(terms))
        parts.append(Part("dh rules respected", res, realized=True))
    return parts


@check("S9-dh-d-exchange", "dh^i d^j = q R^{ji}_{lk} d^k dh^l", SO)
def _s9(ctx):
    s, q = ctx.s, ctx.F.q
    R = ctx.R
    res = {}
    for i, j in product(s.range, repeat=2):
        r = s.dh_up(i) * s.d(j)
        for l, k in product(s.range, repeat=2):
            c = R[(j, i, l, k)]
            if not c.is_zero():
                r = r - (s.d(k) * s.dh_up(l)).scale(q * c)
        res[(i, j)] = r
    return [Part("dh d", res, realized=True)]


@check("S10-Zx-pZ-phZ", "Zx: Z^i_j x_k = x_m R^{im}_{ln} Z^n_r R^{lr}_{jk}; pZ: d^i Z^j_k = R^{ji}_{lm} Z^m_n R^{ln}_{kr} d^r; phZ: dh^i Z^j_k = R^{ji}_{lm} Z^m_n R^{ln}_{kr} dh^r", SO)
def _s10(ctx):
    Z = ctx.mat("Z_so")
    M = sandwich(ctx.R, Z, ctx.R)
    return [
        Part("Zx", lower_vector_relation(Z, ctx.vec("x"), M), realized=True),
        Part("pZ", upper_vector_relation(ctx.vec("d"), Z, M), realized=True),
        Part("phZ", upper_vector_relation(ctx.vec("dh_up"), Z, M), realized=True),
    ]


@check("S11-ZZ-braid", "ZZ: R12 Z2 R12 Z2 = Z2 R12 Z2 R12", SO)
def _s11(ctx):
    Z = ctx.mat("Z_so")
    return [Part("ZZ", braid_relation(ctx.R, Z, ctx.R, Z), realized=True)]


@check("S12-orthogonality", "gZZ: g_{ij} (Z2 R12 Z2)^{ij}_{kl} = q^{1-N} g_{kl}; ZZg: (Z2 R12 Z2)^{ij}_{kl} g^{kl} = q^{1-N} g^{ij}", SO)
def _s12(ctx):
    Z = ctx.mat("Z_so")
    return [
        Part("gZZ", so_orthogonality(Z, True, ctx.R), realized=True),
        Part("ZZg", so_orthogonality(Z, False, ctx.R), realized=True),
    ]


@check("S13-Z-reality", "Z^dag = Z: bar(Z^j_i) = Z^i_j, and bar maps the symmetric form to its transpose", SO, numeric=False)
def _s13(ctx):
    Z = ctx.mat("Z_so")
    S = symmetric_form(ctx.s)
    return [
        Part("bar(Z)^t = Z", {(i, j): bar(Z[j, i]) - e for (i, j), e in Z.items()}),
        Part("bar(S)^t = S", {(i, j): bar(S[j, i]) - e for (i, j), e in S.items()}),
    ]


@check("S14-symmetric-form", "q^2 Z^i_j = delta + q lam d^i x_j + q lam bar(x_i) bar(d^j) + alpha q^N lam^2 d^i x_k bar(x_k) bar(d^j)", SO)
def _s14(ctx):
    Z = ctx.mat("Z_so")
    S = symmetric_form(ctx.s)
    q2 = ctx.F.q ** 2
    return [Part("q^2 Z - S", {k: z.scale(q2) - S[k] for k, z in Z.items()})]


@check("S15-xihat", "xih_i = sigma q^N Lambda xi_k Z^k_i; xih_i x_j = q x_k xih_l R^{kl}_{ij}", SO, numeric=False)
def _s15(ctx):
    s, q = ctx.s, ctx.F.q
    xh = build_xihat(s, ctx.opts.sigma, ctx.mat("Z_so"))
    res = {}
    for i, j in product(s.range, repeat=2):
        r = xh[i - 1] * s.x(j)
        for k, l in product(s.range, repeat=2):
            c = ctx.R[(k, l, i, j)]
            if not c.is_zero():
                r = r - (s.x(k) * xh[l - 1]).scale(q * c)
        res[(i, j)] = r
    return [Part("xihx", res)]


def checks_for(group: str) -> list[Check]:
    return [c for c in REGISTRY if group in c.groups]


# --- running ---------------------------------------------------------------------------

@dataclass
class Report:
    group: str
    n: int
    root_order: int
    mode: str
    seed: int | None
    q_points: list[str]
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "n": self.n,
            "root_order": self.root_order,
            "mode": self.mode,
            "seed": self.seed,
            "q_points": self.q_points,
            "checks": [c.to_json() for c in self.checks],
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        head = f"{self.group} N={self.n} mode={self.mode} root_order={self.root_order}"
        if self.q_points:
            head += f" q={', '.join(self.q_points)} seed={self.seed}"
        lines = [head]
        lines += [c.to_text() for c in self.checks]
        n_ok = sum(c.passed for c in self.checks)
        lines.append(f"{'PASS' if self.passed else 'FAIL'}: {n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _evaluate(chk: Check, ctxs: list[tuple[str, Ctx]], id_suffix: str = "") -> CheckResult:
    t0 = time.perf_counter()
    try:
        realized = False
        for label, ctx in ctxs:
            for part in chk.body(ctx):
                realized |= part.realized
                bad = ctx.judge(part)
                if bad:
                    idx, terms = bad[0]
                    index = [part.name] + (list(idx) if isinstance(idx, tuple) else [idx])
                    if label:
                        index.append(label)
                    w = {"index": [str(i) if not isinstance(i, (int, str)) else i for i in index], "residual": " + ".join(terms), "terms": terms}
                    return CheckResult(chk.id + id_suffix, chk.anchor, FAIL, witness=w, elapsed_ms=_ms(t0))
        detail = "dh realized via Lambda^-1" if realized and ctxs[0][1].symbolic else ""
        return CheckResult(chk.id + id_suffix, chk.anchor, PASS, elapsed_ms=_ms(t0), detail=detail)
    except Exception as exc:  # any module error becomes an item error
        w = {"index": None, "residual": "", "message": f"{type(exc).__name__}: {exc}"}
        return CheckResult(chk.id + id_suffix, chk.anchor, ERROR, witness=w, elapsed_ms=_ms(t0))


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def group_root_order(group: str, n: int) -> int:
    """glq has no fractional powers of q, so its oracle points are arbitrary rationals."""
    return 1 if group == "glq" else default_root_order(GROUPS[group], n)


def validate(group: str, n: int, mode: str, options: SuiteOptions) -> None:
    if group not in GROUPS:
        raise UnsupportedGroup(f"unknown group {group!r}; expected one of {sorted(GROUPS)}")
    ok = SUPPORTED_N[group] + (LARGE_N.get(group, ()) if options.allow_large else ())
    if n not in ok:
        raise UnsupportedDimension(f"{group} supports N in {ok}, got {n}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if options.mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {options.mutation!r}")
    if options.sigma not in (1, -1):
        raise ValueError("sigma must be 1 or -1")


def run_suite(group: str, n: int, mode: str = "symbolic", options: SuiteOptions | None = None) -> Report:
    options = options or SuiteOptions()
    validate(group, n, mode, options)
    sector = GROUPS[group]
    M = group_root_order(group, n)
    items = checks_for(group)
    if options.only:
        items = [c for c in items if c.id in options.only or c.id.split("-")[0] in options.only]
    results: list[CheckResult] = []

    spec = None
    spec_error = None
    try:
        spec = build_algebra(sector, n, root_order=M, check_confluence=mode != "numeric")
    except Exception as exc:
        spec_error = exc

    def failed_all(suffix=""):
        return [
            CheckResult(c.id + suffix, c.anchor, ERROR, witness={"index": None, "residual": "", "message": f"{type(spec_error).__name__}: {spec_error}"})
            for c in items
        ]

    if mode in ("symbolic", "both"):
        if spec is None:
            results += failed_all()
        else:
            ctx = Ctx(spec, spec, options)
            results += [_evaluate(c, [("", ctx)]) for c in items]

    q_labels: list[str] = []
    seed = None
    if mode in ("numeric", "both"):
        if options.q_points:
            u_points = [point_from_q(q, M) for q in options.q_points]
        else:
            seed = options.seed
            u_points = sample_points(options.seed, options.n_points, M)
        q_labels = [str(u ** M) for u in u_points]
        D = options.max_degree if options.max_degree is not None else (3 if sector == "glq_complex" else 4)
        if spec is None:
            results += failed_all("/oracle")
        else:
            ctxs = [(f"q={u ** M}", Ctx(NumericCalculus(sector, n, u, root_order=M, max_degree=D), spec, options)) for u in u_points]
            for c in items:
                if c.numeric:
                    results.append(_evaluate(c, ctxs, "/oracle"))
    return Report(group, n, M, mode, seed if mode != "symbolic" else None, q_labels, results)


def oracle_verify(check_id: str, q0, D: int, *, group: str, n: int, options: SuiteOptions | None = None) -> CheckResult:
    """Replicate one suite item on the truncated module at a single rational q."""
    options = options or SuiteOptions()
    validate(group, n, "numeric", options)
    chk = next((c for c in checks_for(group) if c.id == check_id or c.id.split("-")[0] == check_id), None)
    if chk is None:
        raise KeyError(f"no check {check_id!r} for {group}")
    sector, M = GROUPS[group], group_root_order(group, n)
    u0 = point_from_q(q0, M)
    spec = build_algebra(sector, n, root_order=M, check_confluence=False)
    ctx = Ctx(NumericCalculus(sector, n, u0, root_order=M, max_degree=D), spec, options)
    return _evaluate(chk, [(f"q={Fraction(q0)}", ctx)], "/oracle")
