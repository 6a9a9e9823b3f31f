"""Numeric cross-check: operators as exact linear maps on polynomial modules at rational q.

Generators act on ordered coordinate monomials by structural recursion on the
first letter of the monomial, using the printed exchange relations directly.
The rewrite engine is not involved; only the braid tables and the scalar field
are shared with the symbolic path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .ncalg import Element
from .qring import PoleAtPoint, QField, RingElem, eval_at_u, rational_root
from .qspaces import IndexOps, SPECIES_ORDER, default_root_order
from .rtensor import (
    RTensor,
    build_glq_rhat,
    build_psi,
    build_soq_data,
    glq_rhat_inverse,
    prime,
    so_rho,
)

Mono = tuple[tuple[int, ...], tuple[int, ...]]  # (x word, xhat word), each normal-ordered
Vec = dict[Mono, Fraction]

ONE: Mono = ((), ())


class DegreeOverflow(ValueError):
    pass


class NoModuleAction(ValueError):
    """The generator (e.g. a differential xi) has no action on the coordinate module."""


def _axpy(out: Vec, c: Fraction, v: Mapping[Mono, Fraction]) -> None:
    for m, a in v.items():
        s = out.get(m, 0) + c * a
        if s:
            out[m] = s
        else:
            out.pop(m, None)


def degree(m: Mono) -> int:
    return len(m[0]) + len(m[1])


@dataclass
class PolyVector:
    coeffs: dict[Mono, Fraction]
    q0: Fraction
    D: int

    def __post_init__(self):
        for m in self.coeffs:
            if degree(m) > self.D:
                raise DegreeOverflow(f"monomial {m} beyond truncation degree {self.D}")

    def __eq__(self, other):
        return isinstance(other, PolyVector) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs


# --- quadratic coordinate algebras --------------------------------------------------

class _Ordering:
    """Normal ordering of words in one quadratic coordinate algebra.

    Rules come from row-reducing the defining quadratic relations at the
    numeric point; the largest word of each reduced row is rewritten.
    """

    def __init__(self, n: int, relations: Iterable[dict[tuple[int, int], Fraction]]):
        rows = [dict(r) for r in relations if any(r.values())]
        pivots: dict[tuple[int, int], dict] = {}
        reduced = []
        for r in rows:
            r = {k: v for k, v in r.items() if v}
            for p, pr in pivots.items():
                if p in r:
                    c = r[p]
                    for k, v in pr.items():
                        r[k] = r.get(k, 0) - c * v
                    r = {k: v for k, v in r.items() if v}
            if not r:
                continue
            lead = max(r)
            c = r[lead]
            r = {k: v / c for k, v in r.items()}
            for p in list(pivots):
                pr = pivots[p]
                if lead in pr:
                    c2 = pr[lead]
                    for k, v in r.items():
                        pr[k] = pr.get(k, 0) - c2 * v
                    pivots[p] = {k: v for k, v in pr.items() if v}
            pivots[lead] = r
            reduced.append(lead)
        expected = {(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a > b}
        if set(pivots) != expected:
            raise ValueError(f"coordinate relations are not of PBW type at this point: pivots {sorted(pivots)}")
        self.rules = {p: {k: -v for k, v in r.items() if k != p} for p, r in pivots.items()}
        self._memo: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}

    def normal(self, w: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                out: dict = {}
                for (a, b), c in self.rules[(w[i], w[i + 1])].items():
                    for ww, cc in self.normal(w[:i] + (a, b) + w[i + 2:]).items():
                        s = out.get(ww, 0) + c * cc
                        if s:
                            out[ww] = s
                        else:
                            out.pop(ww, None)
                break
        else:
            out = {w: Fraction(1)}
        self._memo[w] = out
        return out


def _fr(t: RTensor, u0: Fraction) -> dict[tuple[int, int, int, int], Fraction]:
    return {k: eval_at_u(v, u0) for k, v in t.items()}


# --- operators -----------------------------------------------------------------------

class LinOp:
    """Exact linear operator on the module, evaluated lazily and cached per monomial."""

    def __init__(self, calc: "NumericCalculus"):
        self.calc = calc
        self._cache: dict[Mono, Vec] = {}

    def apply(self, m: Mono) -> Vec:
        hit = self._cache.get(m)
        if hit is None:
            hit = self._cache[m] = self._apply(m)
        return hit

    def _apply(self, m: Mono) -> Vec:
        raise NotImplementedError

    def apply_vec(self, v: Mapping[Mono, Fraction]) -> Vec:
        out: Vec = {}
        for m, c in v.items():
            _axpy(out, c, self.apply(m))
        return out

    # arithmetic mirrors Element so the same identity code drives both backends
    def _lift(self, other) -> "LinOp":
        if isinstance(other, LinOp):
            return other
        return self.calc.scalar(other)

    def __add__(self, other):
        other = self._lift(other)
        if isinstance(other, _Zero):
            return self
        if isinstance(self, _Zero):
            return other
        return _Sum(self.calc, [(Fraction(1), self), (Fraction(1), other)])

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "LinOp":
        c = self.calc.num(c)
        if c == 0 or isinstance(self, _Zero):
            return self.calc.zero
        if c == 1:
            return self
        return _Sum(self.calc, [(c, self)])

    def __mul__(self, other):
        if not isinstance(other, LinOp):
            return self.scale(other)
        if isinstance(self, _Zero) or isinstance(other, _Zero):
            return self.calc.zero
        return _Prod(self.calc, [self, other])

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = self.calc.one
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self):
        return True


class _Zero(LinOp):
    def _apply(self, m):
        return {}

    def __bool__(self):
        return False


class _Scalar(LinOp):
    def __init__(self, calc, c: Fraction):
        super().__init__(calc)
        self.c = c

    def _apply(self, m):
        return {m: self.c}


class _Sum(LinOp):
    def __init__(self, calc, parts):
        super().__init__(calc)
        flat = []
        for c, op in parts:
            if isinstance(op, _Sum) and not op._cache:
                flat.extend((c * cc, o) for cc, o in op.parts)
            else:
                flat.append((c, op))
        self.parts = flat

    def _apply(self, m):
        out: Vec = {}
        for c, op in self.parts:
            _axpy(out, c, op.apply(m))
        return out


class _Prod(LinOp):
    def __init__(self, calc, factors):
        super().__init__(calc)
        fl = []
        for f in factors:
            fl.extend(f.factors if isinstance(f, _Prod) else [f])
        self.factors = fl

    def _apply(self, m):
        v: Vec = {m: Fraction(1)}
        for f in reversed(self.factors):
            v = f.apply_vec(v)
            if not v:
                break
        return v


class _Gen(LinOp):
    def __init__(self, calc, species: str, index):
        super().__init__(calc)
        self.species = species
        self.index = index

    def _apply(self, m):
        return self.calc.act(self.species, self.index, m)


# --- the numeric calculus --------------------------------------------------------

class NumericCalculus(IndexOps):
    """The calculus of one sector realized on its coordinate module at q0 = u0^M."""

    symbolic = False

    def __init__(self, sector: str, n: int, u0, *, root_order: int | None = None, max_degree: int = 4):
        self.sector = sector
        self.n = n
        self.root_order = root_order or default_root_order(sector, n)
        self.field = QField(self.root_order)
        self.u0 = Fraction(u0)
        if self.u0 <= 0 or self.u0 == 1:
            raise PoleAtPoint(f"u0 = {self.u0} is not an admissible point")
        self.q0 = self.u0 ** self.root_order
        self.D = max_degree
        F = self.field
        self.metric = self.so = self.psi = None
        if sector == "soq_real":
            self.so = build_soq_data(n, F)
            self.rhat, self.rhat_inv, self.metric = self.so.rhat, self.so.rhat_inv, self.so.metric
        else:
            self.rhat = build_glq_rhat(n, F)
            self.rhat_inv = glq_rhat_inverse(self.rhat)
            if sector == "glq_complex":
                self.psi = build_psi(n, F, self.rhat)
        self._R = _fr(self.rhat, self.u0)
        self._Ri = _fr(self.rhat_inv, self.u0)
        q = self.q0
        rng = range(1, n + 1)
        R = self._R
        if sector == "soq_real":
            pm = _fr(self.so.p_minus, self.u0)
            xrels = [{(k, l): pm.get((k, l, i, j), 0) for k in rng for l in rng} for i in rng for j in rng]
        else:
            # x_k x_l (R - q)^{kl}_{ij} = 0
            xrels = [
                {(k, l): R.get((k, l, i, j), 0) - (q if (k, l) == (i, j) else 0) for k in rng for l in rng}
                for i in rng
                for j in rng
            ]
        self._xord = _Ordering(n, xrels)
        if sector == "glq_complex":
            # (R - q)^{ij}_{kl} xh^l xh^k = 0
            hrels = [
                {(l, k): R.get((i, j, k, l), 0) - (q if (k, l) == (i, j) else 0) for k in rng for l in rng}
                for i in rng
                for j in rng
            ]
            self._hord = _Ordering(n, hrels)
            self._dh_xh = self._invert_xhph()
        if sector == "soq_real":
            self._g_low = {(i, j): eval_at_u(self.metric.lower(i, j), self.u0) for i in rng for j in rng}
        self.zero = _Zero(self)
        self.one = _Scalar(self, Fraction(1))
        self._gens: dict = {}
        self._act_memo: dict = {}

    # scalars
    def num(self, c) -> Fraction:
        if isinstance(c, RingElem):
            return eval_at_u(c, self.u0)
        return Fraction(c)

    def scalar(self, c) -> LinOp:
        c = self.num(c)
        return self.zero if c == 0 else _Scalar(self, c)

    # generators
    def gen(self, species: str, index) -> LinOp:
        if species == "ScalePow" and tuple(index) == (0, 0):
            return self.one
        key = (species, index)
        g = self._gens.get(key)
        if g is None:
            if species not in SPECIES_ORDER[self.sector] and species != "ScalePow":
                raise NoModuleAction(f"{species} does not act in sector {self.sector}")
            if species == "Xi":
                raise NoModuleAction("differentials have no action on the coordinate module")
            g = self._gens[key] = _Gen(self, species, index)
        return g

    def x(self, i):
        return self.gen("X", i)

    def d(self, i):
        return self.gen("Dx", i)

    def xh(self, i):
        return self.gen("Xhat", i)

    def dh(self, i):
        return self.gen("Dxhat", i)

    def xi(self, i):
        raise NoModuleAction("differentials have no action on the coordinate module")

    # module
    def basis(self, D: int | None = None) -> list[Mono]:
        D = self.D if D is None else D
        n = self.n
        out = []
        hat = self.sector == "glq_complex"
        for total in range(D + 1):
            for a in range(total + 1):
                b = total - a
                if b and not hat:
                    continue
                for xw in itertools.combinations_with_replacement(range(1, n + 1), a):
                    for hw in itertools.combinations_with_replacement(range(1, n + 1), b):
                        out.append((xw, hw))
        return out

    def _invert_xhph(self):
        """Solve xh^j dh_i = -delta^j_i + q R^{jl}_{ik} dh_l xh^k for dh_l xh^k."""
        n, q, R = self.n, self.q0, self._R
        pairs = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
        T = np.empty((n * n, n * n), dtype=object)
        for r, (j, i) in enumerate(pairs):
            for c, (l, k) in enumerate(pairs):
                T[r, c] = q * R.get((j, l, i, k), Fraction(0))
        Tinv = _inverse(T)
        # dh_l xh^k = sum_{(j,i)} Tinv[(l,k),(j,i)] (xh^j dh_i + delta^j_i)
        return {
            pairs[r]: [(pairs[c], Tinv[r, c]) for c in range(n * n) if Tinv[r, c] != 0]
            for r in range(n * n)
        }

    def _xmul(self, k: int, v: Mapping[Mono, Fraction]) -> Vec:
        out: Vec = {}
        for (xw, hw), c in v.items():
            for w, cc in self._xord.normal((k,) + xw).items():
                _axpy(out, c * cc, {(w, hw): Fraction(1)})
        return out

    def _hmul_pure(self, k: int, v: Mapping[Mono, Fraction]) -> Vec:
        out: Vec = {}
        for (xw, hw), c in v.items():
            assert not xw
            for w, cc in self._hord.normal((k,) + hw).items():
                _axpy(out, c * cc, {((), w): Fraction(1)})
        return out

    def act(self, species: str, index, m: Mono) -> Vec:
        key = (species, index, m)
        hit = self._act_memo.get(key)
        if hit is None:
            hit = self._act_memo[key] = self._act(species, index, m)
        return hit

    def _act(self, species, index, m: Mono) -> Vec:
        n, q = self.n, self.q0
        xw, hw = m
        rng = range(1, n + 1)
        R, Ri = self._R, self._Ri
        if species == "X":
            return self._xmul(index, {m: Fraction(1)})
        if species == "ScalePow":
            a, b = index
            w = Fraction(2 * self.root_order, n)
            e = w * (a * len(xw) - b * len(hw))
            if e.denominator != 1:
                raise NoModuleAction(f"scale power {e} is fractional; use a larger root order")
            return {m: self.u0 ** int(e)}
        i = index
        if species == "Xhat":
            if not xw:
                return self._hmul_pure(i, {m: Fraction(1)})
            # xh^i x_j = q (R^-1)^{ik}_{jl} x_k xh^l
            j, rest = xw[0], (xw[1:], hw)
            out: Vec = {}
            for k in rng:
                for l in rng:
                    c = Ri.get((i, k, j, l), 0)
                    if c:
                        _axpy(out, q * c, self._xmul(k, self.act("Xhat", l, rest)))
            return out
        if species == "Dx":
            if xw:
                # d^i x_j = delta + q R^{ik}_{jl} x_k d^l
                j, rest = xw[0], (xw[1:], hw)
                out = {rest: Fraction(1)} if i == j else {}
                for k in rng:
                    for l in rng:
                        c = R.get((i, k, j, l), 0)
                        if c:
                            _axpy(out, q * c, self._xmul(k, self.act("Dx", l, rest)))
                return out
            if hw:
                # d^i xh^j = q (R^-1)^{ji}_{lk} xh^k d^l
                j, rest = hw[0], ((), hw[1:])
                out = {}
                for k in rng:
                    for l in rng:
                        c = Ri.get((j, i, l, k), 0)
                        if c:
                            _axpy(out, q * c, self._hmul_pure(k, self.act("Dx", l, rest)))
                return out
            return {}
        if species == "Dxhat":
            if self.sector == "soq_real":
                # dh_i = g_{ij} dh^j
                out = {}
                for j in rng:
                    g = self._g_low.get((i, j), 0)
                    if g:
                        _axpy(out, g, self.act("DxhatUp", j, m))
                return out
            if xw:
                # dh_i x_j = q^-1 R^{kl}_{ij} x_k dh_l
                j, rest = xw[0], (xw[1:], hw)
                out = {}
                for k in rng:
                    for l in rng:
                        c = R.get((k, l, i, j), 0)
                        if c:
                            _axpy(out, c / q, self._xmul(k, self.act("Dxhat", l, rest)))
                return out
            if hw:
                k, rest = hw[0], ((), hw[1:])
                out = {}
                for (j, ii), c in self._dh_xh[(i, k)]:
                    inner = self._hmul_pure(j, self.act("Dxhat", ii, rest))
                    if j == ii:
                        _axpy(inner, Fraction(1), {rest: Fraction(1)})
                    _axpy(out, c, inner)
                return out
            return {}
        if species == "DxhatUp":
            # dh^i x_j = delta^i_j + q^-1 (R^-1)^{ik}_{jl} x_k dh^l
            if not xw:
                return {}
            j, rest = xw[0], (xw[1:], hw)
            out = {rest: Fraction(1)} if i == j else {}
            for k in rng:
                for l in rng:
                    c = Ri.get((i, k, j, l), 0)
                    if c:
                        _axpy(out, c / q, self._xmul(k, self.act("DxhatUp", l, rest)))
            return out
        raise NoModuleAction(species)

    def lambda_inverse(self) -> LinOp:
        """Lambda^{-1}, diagonal on homogeneous polynomials (Lambda scales degree d by q^{2d})."""
        return _DegreeScale(self, self.q0 ** -2)

    # element translation
    def element(self, e: Element) -> LinOp:
        """An engine Element as an operator (words act right to left)."""
        rs = e.alg
        out = self.zero
        for w, c in e.terms.items():
            ops = []
            for g in w:
                gen = rs.generator(g)
                ops.append(self.gen(gen.species, gen.index))
            p = self.one
            for o in ops:
                p = p * o
            out = out + p.scale(c)
        return out

    # judgement
    def nonzero(self, op: LinOp, D: int | None = None):
        """First basis monomial of degree <= D on which op does not vanish, with the image."""
        for m in self.basis(D):
            v = op.apply(m)
            if v:
                return m, v
        return None


class _DegreeScale(LinOp):
    def __init__(self, calc, base: Fraction):
        super().__init__(calc)
        self.base = base

    def _apply(self, m):
        return {m: self.base ** degree(m)}


def _inverse(T: np.ndarray) -> np.ndarray:
    """Exact Gauss-Jordan inverse of an object array of Fractions."""
    n = T.shape[0]
    A = np.concatenate([T.copy(), np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)], axis=1)
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r, col] != 0)
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
        A[col] = A[col] / A[col, col]
        for r in range(n):
            if r != col and A[r, col] != 0:
                A[r] = A[r] - A[r, col] * A[col]
    return A[:, n:]


def format_vec(v: Mapping[Mono, Fraction], limit: int = 8) -> list[str]:
    terms = []
    for (xw, hw), c in sorted(v.items()):
        word = " ".join([f"x_{i}" for i in xw] + [f"xh^{i}" for i in hw]) or "1"
        terms.append(f"({c})*{word}")
    return terms


def oracle_act(e: Element, v: PolyVector, calc: NumericCalculus) -> PolyVector:
    """Apply an engine Element to a truncated polynomial through the recursive action."""
    if calc.q0 != v.q0:
        raise ValueError("module and calculus sit at different points")
    out = calc.element(e).apply_vec(v.coeffs)
    for m in out:
        if degree(m) > v.D:
            raise DegreeOverflow(f"result needs degree {degree(m)} > {v.D}")
    return PolyVector(out, v.q0, v.D)


def point_from_q(q0, root_order: int) -> Fraction:
    """u0 with u0^M = q0, or PoleAtPoint/ValueError when q0 is not admissible."""
    q0 = Fraction(q0)
    if q0 == 1:
        raise PoleAtPoint("q = 1 degenerates the calculus (lambda = 0)")
    if q0 <= 0:
        raise ValueError(f"q must be positive, got {q0}")
    u0 = rational_root(q0, root_order)
    if u0 is None:
        raise ValueError(f"q = {q0} has no rational {root_order}-th root; exact evaluation needs one")
    return u0


def sample_points(seed: int, count: int, root_order: int, bound: int = 20) -> list[Fraction]:
    """Seeded distinct u0 = a/b with 1 <= a, b <= bound, u0 != 1; q0 = u0^M."""
    import random

    rnd = random.Random(seed)
    seen: list[Fraction] = []
    while len(seen) < count:
        u = Fraction(rnd.randint(1, bound), rnd.randint(1, bound))
        if u != 1 and u not in seen:
            seen.append(u)
    return seen


# --- numeric tensor identities (independent of the RTensor contraction code) ---------

def tensor_matrix(t: Mapping[tuple[int, int, int, int], Fraction], n: int) -> np.ndarray:
    A = np.full((n * n, n * n), Fraction(0), dtype=object)
    for (i, j, k, l), v in t.items():
        A[(i - 1) * n + (j - 1), (k - 1) * n + (l - 1)] = v
    return A


def _eye(d: int) -> np.ndarray:
    return np.array([[Fraction(int(i == j)) for j in range(d)] for i in range(d)], dtype=object)


def _first_bad(A: np.ndarray):
    nz = np.argwhere(A != 0)
    if len(nz):
        return tuple(int(x) for x in nz[0]), A[tuple(nz[0])]
    return None


def numeric_tensor_residuals(kind: str, calc: NumericCalculus, rhat=None) -> list[tuple[str, object]]:
    """Named failures for a tensor identity evaluated at the calculus point (empty when it holds)."""
    n, q = calc.n, calc.q0
    lam = q - 1 / q
    Rt = _fr(rhat, calc.u0) if rhat is not None else calc._R
    R = tensor_matrix(Rt, n)
    I = _eye(n * n)
    bad = []

    def chk(name, A):
        b = _first_bad(A)
        if b:
            bad.append((name, b))

    if kind == "gl_char":
        chk("R^2 - 1 - lam R", R.dot(R) - I - lam * R)
    elif kind == "symmetry":
        chk("R - R^t", R - R.T)
    elif kind == "braid":
        In = _eye(n)
        r12, r23 = np.kron(R, In), np.kron(In, R)
        chk("R12 R23 R12 - R23 R12 R23", r12.dot(r23).dot(r12) - r23.dot(r12).dot(r23))
    elif kind in ("so_char", "projectors", "so_orthogonality", "p0_metric"):
        e = [q, -1 / q, q ** (1 - n)]
        cub = (R - e[0] * I).dot(R - e[1] * I).dot(R - e[2] * I)
        P = []
        for a in range(3):
            o = [b for b in range(3) if b != a]
            P.append((R - e[o[0]] * I).dot(R - e[o[1]] * I) / ((e[a] - e[o[0]]) * (e[a] - e[o[1]])))
        rho = so_rho(n)
        G = np.full((n, n), Fraction(0), dtype=object)
        for i in range(1, n + 1):
            p = -calc.root_order * rho[i]  # q^{-rho} = u^{-M rho}, kept exact
            if p.denominator != 1:
                raise NoModuleAction(f"q^{-rho[i]} is not in Q(u) at root order {calc.root_order}")
            G[i - 1, prime(i, n) - 1] = calc.u0 ** int(p)
        if kind == "so_char":
            chk("cubic", cub)
            chk("R - sum e P", R - sum(ea * Pa for ea, Pa in zip(e, P)))
        elif kind == "projectors":
            chk("sum P - 1", P[0] + P[1] + P[2] - I)
            for a in range(3):
                for b in range(3):
                    chk(f"P{a} P{b}", P[a].dot(P[b]) - (P[a] if a == b else 0 * I))
        elif kind == "p0_metric":
            nu = lam / ((q ** n - 1) * (q ** (1 - n) + 1 / q))
            want = np.full((n * n, n * n), Fraction(0), dtype=object)
            for i, j, k, l in itertools.product(range(n), repeat=4):
                want[i * n + j, k * n + l] = nu * G[i, j] * G[k, l]
            chk("P0 - nu g g", P[2] - want)
            chk("g g^-1 - 1", G.dot(G) - _eye(n))
        else:
            Rinv = _inverse(R)
            f1 = np.full((n * n, n * n), Fraction(0), dtype=object)
            f2 = np.full((n * n, n * n), Fraction(0), dtype=object)
            for i, j, k, l in itertools.product(range(n), repeat=4):
                f1[i * n + j, k * n + l] = sum(G[i, m] * R[j * n + nn, m * n + k] * G[nn, l] for m in range(n) for nn in range(n))
                f2[i * n + j, k * n + l] = sum(G[k, m] * R[m * n + i, l * n + nn] * G[nn, j] for m in range(n) for nn in range(n))
            chk("first orthogonality form", f1 - Rinv)
            chk("second orthogonality form", f2 - Rinv)
    elif kind == "psi":
        Rinv = R - lam * I
        psi = np.full((n * n, n * n), Fraction(0), dtype=object)
        for i, r, j, s in itertools.product(range(1, n + 1), repeat=4):
            psi[(i - 1) * n + r - 1, (j - 1) * n + s - 1] = Rinv[(r - 1) * n + i - 1, (s - 1) * n + j - 1] * q ** (2 * (j - r))
        # R^{kj}_{li} Psi^{ir}_{js} = delta^k_s delta^r_l: contract over (i, j)
        a = np.full((n * n, n * n), Fraction(0), dtype=object)
        b = np.full((n * n, n * n), Fraction(0), dtype=object)
        want = np.full((n * n, n * n), Fraction(0), dtype=object)
        for k, r, l, s in itertools.product(range(n), repeat=4):
            a[k * n + r, l * n + s] = sum(R[k * n + j, l * n + i] * psi[i * n + r, j * n + s] for i in range(n) for j in range(n))
            b[k * n + r, l * n + s] = sum(psi[k * n + j, l * n + i] * R[i * n + r, j * n + s] for i in range(n) for j in range(n))
            want[k * n + r, l * n + s] = Fraction(int(k == s and r == l))
        chk("R.Psi", a - want)
        chk("Psi.R", b - want)
        for r, s in itertools.product(range(n), repeat=2):
            t1 = sum(psi[r * n + i, s * n + i] for i in range(n))
            t2 = sum(psi[i * n + r, i * n + s] for i in range(n))
            e1 = q ** (-2 * (n - 1 - r) - 1) if r == s else 0
            e2 = q ** (-2 * r - 1) if r == s else 0
            if t1 != e1:
                bad.append(("Psi^{ri}_{si}", ((r + 1, s + 1), t1 - e1)))
            if t2 != e2:
                bad.append(("Psi^{ir}_{is}", ((r + 1, s + 1), t2 - e2)))
    else:
        raise ValueError(f"no numeric tensor check {kind!r}")
    return bad


def oracle_verify(check_id: str, q0, D: int, *, group: str, n: int, options=None):
    """Numeric replication of one suite item; see harness.oracle_verify."""
    from .harness import oracle_verify as run

    return run(check_id, q0, D, group=group, n=n, options=options)
