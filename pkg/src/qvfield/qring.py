"""Exact rational functions in a formal root ``u`` of the deformation parameter.

Every scalar is ``u**shift * num(u) / den(u)`` with ``q = u**M``.  ``num`` and
``den`` are integer polynomials (``flint.fmpz_poly``) with nonzero constant
terms, coprime over Z[u], and ``den`` has a positive leading coefficient.  That
representative is unique, so equality is a field-by-field comparison.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union

from flint import fmpz_poly, fmpq

__all__ = [
    "RingElem",
    "QField",
    "ZeroDenominator",
    "PoleAtPoint",
    "UnknownConstant",
    "RootOrderMismatch",
    "canonicalize",
    "eval_at",
    "eval_at_u",
    "special_const",
    "rational_root",
]


class ZeroDenominator(ZeroDivisionError):
    pass


class PoleAtPoint(ArithmeticError):
    pass


class UnknownConstant(KeyError):
    pass


class RootOrderMismatch(ValueError):
    pass


_ONE_POLY = fmpz_poly([1])
_ZERO_POLY = fmpz_poly([])


def _valuation(p: fmpz_poly) -> int:
    """Index of the lowest nonzero coefficient (p must be nonzero)."""
    if p[0] != 0:
        return 0
    for k, c in enumerate(p.coeffs()):
        if c != 0:
            return k
    raise ValueError("zero polynomial has no valuation")


def _laurent_to_poly(terms: dict[int, int]) -> tuple[fmpz_poly, int]:
    terms = {e: c for e, c in terms.items() if c}
    if not terms:
        return _ZERO_POLY, 0
    lo = min(terms)
    coeffs = [0] * (max(terms) - lo + 1)
    for e, c in terms.items():
        coeffs[e - lo] = c
    return fmpz_poly(coeffs), lo


class RingElem:
    """Immutable element of Q(u), q = u**root_order."""

    __slots__ = ("num", "den", "shift", "root_order", "_hash")

    def __init__(self, num: fmpz_poly, den: fmpz_poly, shift: int, root_order: int):
        # trusted constructor: callers pass canonical data (see canonicalize)
        self.num = num
        self.den = den
        self.shift = shift
        self.root_order = root_order
        self._hash = None

    # -- construction -------------------------------------------------------
    @staticmethod
    def _make(num: fmpz_poly, den: fmpz_poly, shift: int, m: int, reduce: bool = True) -> "RingElem":
        if num.is_zero():
            return RingElem(_ZERO_POLY, _ONE_POLY, 0, m)
        if num[0] == 0:
            k = _valuation(num)
            num = num.right_shift(k)
            shift += k
        if den[0] == 0:
            k = _valuation(den)
            den = den.right_shift(k)
            shift -= k
        if reduce and not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
        if den.leading_coefficient() < 0:
            num = -num
            den = -den
        return RingElem(num, den, shift, m)

    # -- accessors ----------------------------------------------------------
    @property
    def numerator(self) -> dict[int, int]:
        """Laurent numerator as {exponent of u: integer coefficient}."""
        return {k + self.shift: int(c) for k, c in enumerate(self.num.coeffs()) if c != 0}

    @property
    def denominator(self) -> dict[int, int]:
        return {k: int(c) for k, c in enumerate(self.den.coeffs()) if c != 0}

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.shift == 0 and self.num.is_one() and self.den.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def _check(self, other: "RingElem") -> None:
        if other.root_order != self.root_order:
            raise RootOrderMismatch(f"root orders {self.root_order} and {other.root_order} differ")

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            self._check(other)
            return other
        if isinstance(other, int):
            return QField(self.root_order)(other)
        if isinstance(other, Fraction):
            return QField(self.root_order)(other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        m = self.root_order
        lo = min(self.shift, other.shift)
        a = self.num.left_shift(self.shift - lo) if self.shift != lo else self.num
        b = other.num.left_shift(other.shift - lo) if other.shift != lo else other.num
        if self.den == other.den:
            return RingElem._make(a + b, self.den, lo, m)
        return RingElem._make(a * other.den + b * self.den, self.den * other.den, lo, m)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(-self.num, self.den, self.shift, self.root_order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = self.root_order
        if self.num.is_zero() or other.num.is_zero():
            return RingElem(_ZERO_POLY, _ONE_POLY, 0, m)
        shift = self.shift + other.shift
        if self.den.is_one() and other.den.is_one():
            return RingElem(self.num * other.num, _ONE_POLY, shift, m)
        # cross-cancel keeps intermediate degrees small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        num = (self.num // g1) * (other.num // g2)
        den = (self.den // g2) * (other.den // g1)
        return RingElem._make(num, den, shift, m, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RingElem":
        if self.num.is_zero():
            raise ZeroDenominator("inverse of zero")
        return RingElem._make(self.den, self.num, -self.shift, self.root_order, reduce=False)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QField(self.root_order).one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.num.is_zero()
            other = QField(self.root_order)(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return (
            self.root_order == other.root_order
            and self.shift == other.shift
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shift, tuple(self.num.coeffs()), tuple(self.den.coeffs()), self.root_order))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    # -- display ------------------------------------------------------------
    def _poly_str(self, terms: dict[int, int]) -> str:
        m = self.root_order
        parts = []
        for e in sorted(terms, reverse=True):
            c = terms[e]
            if e % m == 0:
                k = e // m
                mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            else:
                mono = f"q^({Fraction(e, m)})"
            if mono == "":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts).replace("+ -", "- ")
        return s or "0"

    def __str__(self):
        if self.num.is_zero():
            return "0"
        n = self._poly_str(self.numerator)
        if self.den.is_one():
            return n
        d = self._poly_str(self.denominator)
        return f"({n})/({d})"

    def __repr__(self):
        return f"RingElem({self})"


class QField:
    """Factory for RingElems of one root order ``M`` (q = u**M)."""

    _cache: dict[int, "QField"] = {}

    def __new__(cls, root_order: int):
        if root_order < 1:
            raise ValueError("root_order must be positive")
        inst = cls._cache.get(root_order)
        if inst is None:
            inst = super().__new__(cls)
            inst.root_order = root_order
            inst.zero = RingElem(_ZERO_POLY, _ONE_POLY, 0, root_order)
            inst.one = RingElem(_ONE_POLY, _ONE_POLY, 0, root_order)
            inst.u = RingElem(_ONE_POLY, _ONE_POLY, 1, root_order)
            inst.q = RingElem(_ONE_POLY, _ONE_POLY, root_order, root_order)
            inst.lam = inst.q - inst.q.inverse()
            cls._cache[root_order] = inst
        return inst

    def __call__(self, value: Union[int, Fraction, RingElem]) -> RingElem:
        if isinstance(value, RingElem):
            if value.root_order != self.root_order:
                raise RootOrderMismatch("root order mismatch")
            return value
        if isinstance(value, Fraction):
            return canonicalize({0: value.numerator}, {0: value.denominator}, self.root_order)
        value = int(value)
        if value == 0:
            return self.zero
        return RingElem(fmpz_poly([value]), _ONE_POLY, 0, self.root_order)

    def qpow(self, k: Union[int, Fraction]) -> RingElem:
        """q**k; k may be fractional when M*k is an integer."""
        e = Fraction(k) * self.root_order
        if e.denominator != 1:
            raise ValueError(f"q^{k} is not in the ring with root order {self.root_order}")
        return RingElem(_ONE_POLY, _ONE_POLY, int(e), self.root_order)

    def upow(self, k: int) -> RingElem:
        return RingElem(_ONE_POLY, _ONE_POLY, int(k), self.root_order)

    def laurent(self, terms: dict[int, int]) -> RingElem:
        """Laurent polynomial in q given {q-exponent: coefficient}."""
        return canonicalize({e * self.root_order: c for e, c in terms.items()}, {0: 1}, self.root_order)

    def __repr__(self):
        return f"QField(M={self.root_order})"


def canonicalize(num: dict[int, int], den: dict[int, int], root_order: int) -> RingElem:
    """Reduce ``num/den`` (Laurent dicts in u) to its canonical RingElem."""
    n, ns = _laurent_to_poly(num)
    d, ds = _laurent_to_poly(den)
    if d.is_zero():
        raise ZeroDenominator("denominator is zero")
    return RingElem._make(n, d, ns - ds, root_order)


def rational_root(x: Fraction, m: int) -> Fraction | None:
    """Exact positive rational m-th root of x, or None."""
    if x <= 0:
        return None

    def iroot(n: int) -> int | None:
        r = round(n ** (1.0 / m)) if n < 2**1000 else None
        if r is None:
            lo, hi = 0, 1 << (n.bit_length() // m + 1)
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if mid**m <= n:
                    lo = mid
                else:
                    hi = mid - 1
            r = lo
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**m == n:
                return cand
        return None

    a, b = iroot(x.numerator), iroot(x.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _eval_poly(p: fmpz_poly, x: fmpq) -> fmpq:
    return fmpq(p(x)) if not p.is_zero() else fmpq(0)


def eval_at_u(e: RingElem, u0: Fraction) -> Fraction:
    """Exact value of e at u = u0."""
    u0 = Fraction(u0)
    if u0 == 0:
        raise PoleAtPoint("u = 0")
    x = fmpq(u0.numerator, u0.denominator)
    if e.num.is_zero():
        return Fraction(0)
    d = _eval_poly(e.den, x)
    if d == 0:
        raise PoleAtPoint(f"denominator vanishes at u = {u0}")
    v = _eval_poly(e.num, x) / d * x**e.shift
    return Fraction(int(v.p), int(v.q))


def _in_q(e: RingElem) -> bool:
    m = e.root_order
    return (
        e.shift % m == 0
        and all(k % m == 0 for k in e.numerator)
        and all(k % m == 0 for k in e.denominator)
    )


def eval_at(e: RingElem, q0: Fraction) -> Fraction:
    """Exact value of e at q = q0.

    q0 = 1 is the classical point where the calculus degenerates and is
    rejected even when the canonical form happens to be regular there.
    """
    q0 = Fraction(q0)
    if q0 <= 0:
        raise ValueError("q0 must be positive")
    if q0 == 1:
        raise PoleAtPoint("q = 1 (lambda = 0)")
    m = e.root_order
    if m == 1:
        return eval_at_u(e, q0)
    u0 = rational_root(q0, m)
    if u0 is not None:
        return eval_at_u(e, u0)
    if not _in_q(e):
        raise ValueError(f"q0 = {q0} has no rational {m}-th root and e involves fractional powers of q")
    # every exponent is a multiple of m: substitute q directly
    down = RingElem(
        fmpz_poly(e.num.coeffs()[::m]) if not e.num.is_zero() else _ZERO_POLY,
        fmpz_poly(e.den.coeffs()[::m]),
        e.shift // m,
        1,
    )
    return eval_at_u(down, q0)


@lru_cache(maxsize=None)
def special_const(name: str, n: int, root_order: int = 1) -> RingElem:
    """Named constants: lambda, alpha, nu, qbracket ([N] = sum q^{-2k}, k < N)."""
    if n < 1:
        raise ValueError("N must be >= 1")
    F = QField(root_order)
    q = F.q
    if name == "lambda":
        return F.lam
    if name == "alpha":
        return (F.one + q ** (n - 2)).inverse()
    if name == "nu":
        return F.lam / ((q**n - 1) * (q ** (1 - n) + q ** (-1)))
    if name == "qbracket":
        out = F.zero
        for k in range(n):
            out = out + q ** (-2 * k)
        return out
    raise UnknownConstant(name)
