"""Vector-field matrices as pseudodifferential operators, and the identities they satisfy.

Index conventions: ``M[a, b, c, d]`` is M^{ab}_{cd} on V (x) V.  ``Y_2`` denotes
id (x) Y, so (Y_2)^{ab}_{cd} = delta^a_c Y^b_d.  A lower-index vector (x_i,
dh_i) contracts the upper leg-2 index from the left; an upper-index vector
(d^i, xh^i) contracts the lower leg-2 index from the right.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Sequence

from .ncalg import Element, RuleSet, ScaleAction, bar
from .qring import RingElem
from .qspaces import AlgebraSpec, WrongSector, derived_element
from .rtensor import RTensor

MATRICES = ("Y", "Ydag", "U", "Z_gl", "ZZdag", "Z_so")


class InvalidPhase(ValueError):
    pass


class ConjugationMismatch(RuntimeError):
    pass


@dataclass
class OpMatrix:
    n: int
    entries: list[list[Element]]
    spec: AlgebraSpec

    def __getitem__(self, ij: tuple[int, int]) -> Element:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def items(self) -> Iterator[tuple[tuple[int, int], Element]]:
        for i, j in product(range(1, self.n + 1), repeat=2):
            yield (i, j), self[i, j]

    @classmethod
    def build(cls, spec: AlgebraSpec, fn: Callable[[int, int], Element]) -> "OpMatrix":
        n = spec.n
        return cls(n, [[fn(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)], spec)

    @classmethod
    def identity(cls, spec: AlgebraSpec, c=None) -> "OpMatrix":
        one = spec.scalar(1) if c is None else c
        zero = spec.zero
        return cls.build(spec, lambda i, j: one if i == j else zero)

    def __matmul__(self, other: "OpMatrix") -> "OpMatrix":
        rng = range(1, self.n + 1)

        def entry(i, j):
            s = self.spec.zero
            for k in rng:
                a, b = self[i, k], other[k, j]
                if a and b:
                    s = s + a * b
            return s

        return OpMatrix.build(self.spec, entry)

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        return OpMatrix.build(self.spec, lambda i, j: self[i, j] + other[i, j])

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        return OpMatrix.build(self.spec, lambda i, j: self[i, j] - other[i, j])

    def scale(self, c) -> "OpMatrix":
        return OpMatrix.build(self.spec, lambda i, j: self[i, j].scale(c))

    def left_mul(self, e: Element) -> "OpMatrix":
        return OpMatrix.build(self.spec, lambda i, j: e * self[i, j])

    def transpose(self) -> "OpMatrix":
        return OpMatrix.build(self.spec, lambda i, j: self[j, i])

    def minus_scalar(self, e: Element) -> "OpMatrix":
        """self - e * identity"""
        return OpMatrix.build(self.spec, lambda i, j: self[i, j] - e if i == j else self[i, j])

    def power(self, k: int) -> "OpMatrix":
        out = OpMatrix.identity(self.spec)
        for _ in range(k):
            out = out @ self
        return out


# --- construction ------------------------------------------------------------------

def _need(spec: AlgebraSpec, *sectors: str) -> None:
    if spec.sector not in sectors:
        raise WrongSector(f"needs sector {sectors}, got {spec.sector}")


def build_matrix(name: str, spec: AlgebraSpec, *, lambda_sign: int = 1) -> OpMatrix:
    """Y, Ydag, U, Z_gl, ZZdag (GL sectors) or Z_so (SO sector).

    ``lambda_sign=-1`` flips the sign of the lambda term in Y (mutation testing).
    """
    F = spec.field
    q, lam = F.q, F.lam
    qi2 = q ** -2
    if name == "Y":
        _need(spec, "glq_holo", "glq_complex")
        c = q ** -1 * lam * lambda_sign
        return OpMatrix.build(
            spec, lambda i, j: (spec.d(i) * spec.x(j)).scale(c) + (spec.scalar(qi2) if i == j else 0)
        )
    if name == "Ydag":
        _need(spec, "glq_complex")
        c = -(q ** -1) * lam * lambda_sign
        ydag = OpMatrix.build(
            spec, lambda i, j: (spec.xh(i) * spec.dh(j)).scale(c) + (spec.scalar(qi2) if i == j else 0)
        )
        if not spec.symbolic:
            return ydag
        y = build_matrix("Y", spec, lambda_sign=lambda_sign)
        for (i, j), e in ydag.items():
            if not (bar(y[j, i]) - e).is_zero():
                raise ConjugationMismatch(f"Ydag[{i},{j}] != bar(Y[{j},{i}])")
        return ydag
    if name == "U":
        _need(spec, "glq_complex")
        return build_matrix("Y", spec, lambda_sign=lambda_sign) @ build_matrix("Ydag", spec, lambda_sign=lambda_sign)
    if name == "Z_gl":
        _need(spec, "glq_holo", "glq_complex")
        zinv = spec.gen("ScalePow", (-1, 0))
        return build_matrix("Y", spec, lambda_sign=lambda_sign).left_mul(zinv)
    if name == "ZZdag":
        _need(spec, "glq_complex")
        s = spec.gen("ScalePow", (-1, -1))
        return build_matrix("U", spec, lambda_sign=lambda_sign).left_mul(s)
    if name == "Z_so":
        _need(spec, "soq_real")
        n = spec.n
        L = derived_element("L", spec)
        c1 = q ** -1 * lam * lambda_sign
        c2 = -(q ** (1 - n)) * lam
        c3 = -(lam * lam)

        def entry(i, j):
            e = (spec.d(i) * spec.x(j)).scale(c1)
            e = e + (spec.x_up(i) * spec.dh(j)).scale(c2)
            e = e + (L * spec.d(i) * spec.dh(j)).scale(c3)
            if i == j:
                e = e + spec.scalar(qi2)
            return e

        return OpMatrix.build(spec, entry)
    raise WrongSector(f"unknown matrix {name!r}")


def build_xihat(spec: AlgebraSpec, sigma=1, Z: OpMatrix | None = None) -> list[Element]:
    """xihat_i = sigma q^N Lambda xi_k Z^k_i, entries indexed 0..N-1 for i = 1..N."""
    _need(spec, "soq_real")
    F = spec.field
    if isinstance(sigma, RingElem):
        if sigma == F.one:
            sigma = 1
        elif sigma == -F.one:
            sigma = -1
    if sigma not in (1, -1):
        raise InvalidPhase(f"sigma must be a phase (+1 or -1 over the reals), got {sigma}")
    Z = Z or build_matrix("Z_so", spec)
    Lam = derived_element("Lambda", spec)
    c = F.q ** spec.n * sigma
    out = []
    for i in spec.range:
        s = spec.zero
        for k in spec.range:
            s = s + spec.xi(k) * Z[k, i]
        out.append((Lam * s).scale(c))
    return out


def quantum_trace(m: OpMatrix, k: int) -> Element:
    """t_k = Tr D^{-1} m^k with D = diag(1, q^2, ..., q^{2(N-1)})."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    F = m.spec.field
    mk = m.power(k)
    s = m.spec.zero
    for i in range(1, m.n + 1):
        s = s + mk[i, i].scale(F.q ** (-2 * (i - 1)))
    return s


# --- dh realized through the nonlinear formula -------------------------------------

class DhatRealization:
    """dh^i -> W (delta^i_j + q^{N-1} lam alpha x^i d_j) d^j with W = Lambda^{-1}.

    W is a formal scaling generator: W x = q^-2 x W, W d = q^2 d W, W xi = xi W.
    A combination sum_k P_k W^k vanishes iff sum_k P_k Lambda^{K-k} does (K = top
    power), which is an ordinary normal-form test in x, xi, d.
    """

    def __init__(self, spec: AlgebraSpec):
        _need(spec, "soq_real")
        self.spec = spec
        F = spec.field
        M = spec.root_order
        src = spec.rules
        self.rules = RuleSet(
            F,
            src.generators,
            src.rules,
            src.unsupported,
            scale=ScaleAction(zeta={"X": -2 * M, "Dx": 2 * M}, zetabar={}, labels=("Lambda^-1", "")),
            budget=src.budget,
        )
        self.Lambda = self.lift(derived_element("Lambda", spec))
        self.W = self.rules.gen("ScalePow", (1, 0))
        q, lam, n = F.q, F.lam, spec.n
        c = q ** (n - 1) * lam * spec.so.alpha
        upper = {}
        for i in spec.range:
            s = spec.zero
            for j in spec.range:
                t = (spec.x_up(i) * spec.d_low(j)).scale(c)
                if i == j:
                    t = t + spec.scalar(1)
                s = s + t * spec.d(j)
            upper[i] = s  # Lambda dh^i
        self.lambda_dh_up = upper
        self._images = {}
        for i in spec.range:
            img = self.rules.zero
            for j in spec.range:
                g = spec.metric.lower(i, j)
                if not g.is_zero():
                    img = img + (self.W * self.lift(upper[j])).scale(g)
            self._images[src.gen_id("Dxhat", i)] = img
        self._memo: dict = {}

    def lift(self, e: Element) -> Element:
        """Reinterpret a dh-free element inside the realization."""
        return Element(self.rules, e.terms)

    def image(self, e: Element) -> Element:
        out = self.rules.zero
        for w, c in e.terms.items():
            p = self._memo.get(w)
            if p is None:
                p = self.rules.one
                for g in w:
                    p = p * (self._images.get(g) or Element(self.rules, {(g,): self.spec.field.one}))
                self._memo[w] = p
            out = out + p.scale(c)
        return out

    def cleared(self, e: Element) -> Element:
        """Multiply an image on the right by the top power of Lambda and collect."""
        rs = self.rules
        groups: dict[int, dict] = {}
        for w, c in e.terms.items():
            k = 0
            if w and rs.is_scale(w[-1]):
                k = rs.generator(w[-1]).index[0]
                w = w[:-1]
            groups.setdefault(k, {})[w] = c
        if not groups:
            return rs.zero
        top = max(groups)
        out = rs.zero
        for k, t in groups.items():
            out = out + Element(rs, t) * (self.Lambda ** (top - k))
        return out

    def residual(self, e: Element) -> Element:
        return self.cleared(self.image(e))

    def residuals(self, res: dict) -> dict:
        return {k: self.residual(v) for k, v in res.items()}


# --- identity residuals ------------------------------------------------------------
# Each returns a dict index -> Element whose entries all vanish iff the identity holds.

def sandwich(R1: RTensor, Y: OpMatrix, R2: RTensor) -> dict:
    """(R1 Y_2 R2)^{ab}_{cd} = R1^{ab}_{ef} Y^f_h R2^{eh}_{cd}."""
    zero = Y.spec.zero
    by_first = {}
    for (e, h, c, d), v in R2.items():
        by_first.setdefault(e, []).append((h, c, d, v))
    out: dict = {}
    for (a, b, e, f), u in R1.items():
        for h, c, d, v in by_first.get(e, ()):
            y = Y[f, h]
            if y:
                key = (a, b, c, d)
                out[key] = out.get(key, zero) + y.scale(u * v)
    return out


def _get(M: dict, key, zero):
    return M.get(key, zero)


def lower_vector_relation(Y: OpMatrix, vec: Sequence[Element], M: dict) -> dict:
    """Y^i_j v_k - v_m M^{im}_{jk}."""
    spec = Y.spec
    rng = spec.range
    out = {}
    for i, j, k in product(rng, repeat=3):
        r = Y[i, j] * vec[k - 1]
        for m in rng:
            c = M.get((i, m, j, k))
            if c:
                r = r - vec[m - 1] * c
        out[(i, j, k)] = r
    return out


def upper_vector_relation(vec: Sequence[Element], Y: OpMatrix, M: dict) -> dict:
    """v^a Y^i_j - M^{ia}_{jb} v^b."""
    spec = Y.spec
    rng = spec.range
    out = {}
    for a, i, j in product(rng, repeat=3):
        r = vec[a - 1] * Y[i, j]
        for b in rng:
            c = M.get((i, a, j, b))
            if c:
                r = r - c * vec[b - 1]
        out[(a, i, j)] = r
    return out


def braid_relation(R1: RTensor, A: OpMatrix, R2: RTensor, B: OpMatrix) -> dict:
    """R1 A_2 R2 B_2 - B_2 R1 A_2 R2."""
    spec = A.spec
    zero = spec.zero
    rng = spec.range
    M = sandwich(R1, A, R2)
    out = {}
    for a, b, c, d in product(rng, repeat=4):
        r = zero
        for f in rng:
            m1 = M.get((a, b, c, f))
            if m1 and B[f, d]:
                r = r + m1 * B[f, d]
            m2 = M.get((a, f, c, d))
            if m2 and B[b, f]:
                r = r - B[b, f] * m2
        out[(a, b, c, d)] = r
    return out


def so_orthogonality(Z: OpMatrix, lower: bool, rhat=None) -> dict:
    """g_{ij}(Z_2 R Z_2)^{ij}_{kl} - q^{1-N} g_{kl}  (lower) or
    (Z_2 R Z_2)^{ij}_{kl} g^{kl} - q^{1-N} g^{ij}   (upper)."""
    spec = Z.spec
    F = spec.field
    R, g, n = rhat or spec.rhat, spec.metric, spec.n
    rng = spec.range
    zero = spec.zero
    # (Z_2 R Z_2)^{ij}_{kl} = Z^j_b R^{ib}_{kd} Z^d_l
    prods = {(j, b, d, l): Z[j, b] * Z[d, l] for j, b, d, l in product(rng, repeat=4) if Z[j, b] and Z[d, l]}

    def zrz(i, j, k, l):
        s = zero
        for b, d in product(rng, repeat=2):
            c = R[(i, b, k, d)]
            if not c.is_zero():
                p = prods.get((j, b, d, l))
                if p is not None:
                    s = s + p.scale(c)
        return s

    f = F.q ** (1 - n)
    out = {}
    if lower:
        for k, l in product(rng, repeat=2):
            s = spec.scalar(-f * g.lower(k, l))
            for i, j in product(rng, repeat=2):
                if not g.lower(i, j).is_zero():
                    s = s + zrz(i, j, k, l).scale(g.lower(i, j))
            out[(k, l)] = s
    else:
        for i, j in product(rng, repeat=2):
            s = spec.scalar(-f * g.upper(i, j))
            for k, l in product(rng, repeat=2):
                if not g.upper(k, l).is_zero():
                    s = s + zrz(i, j, k, l).scale(g.upper(k, l))
            out[(i, j)] = s
    return out


def commutator_residuals(A: OpMatrix, e: Element) -> dict:
    """A^i_j e - e A^i_j."""
    return {(i, j): A[i, j] * e - e * A[i, j] for (i, j), _ in A.items()}


def symmetric_form(spec) -> OpMatrix:
    """delta + q lam d^i x_j + q lam bar(x_i) bar(d^j) + alpha q^N lam^2 d^i x_k bar(x_k) bar(d^j),

    with bar(x_i) = x^i and bar(d^j) = -q^-N dh_j substituted, so the entries are
    plain calculus elements (and the oracle can evaluate them)."""
    _need(spec, "soq_real")
    F = spec.field
    q, lam, n = F.q, F.lam, spec.n
    alpha = spec.so.alpha
    qmn = -(q ** -n)
    xx = spec.zero
    for k in spec.range:
        xx = xx + spec.x(k) * spec.x_up(k)

    def entry(i, j):
        e = (spec.d(i) * spec.x(j)).scale(q * lam)
        e = e + (spec.x_up(i) * spec.dh(j)).scale(q * lam * qmn)
        e = e + (spec.d(i) * xx * spec.dh(j)).scale(alpha * q ** n * lam * lam * qmn)
        if i == j:
            e = e + spec.scalar(1)
        return e

    return OpMatrix.build(spec, entry)
