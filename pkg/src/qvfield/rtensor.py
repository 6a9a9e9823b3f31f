"""R-matrices, metrics, projectors and the Psi matrix for GL_q(N) and SO_q(N).

Tensors are indexed ``T[i, j, k, l]`` = T^{ij}_{kl}, indices 1..N, and act as
N^2 x N^2 matrices with row pair (i, j) and column pair (k, l).
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping

from .checks import CheckResult, FAIL, PASS
from .qring import QField, RingElem, special_const

Index4 = tuple[int, int, int, int]


class UnsupportedDimension(ValueError):
    pass


class ConventionError(RuntimeError):
    """A constructed table violates a constraint it must satisfy."""


@dataclass(frozen=True)
class RTensor:
    n: int
    entries: Mapping[Index4, RingElem]
    field: QField

    def __post_init__(self):
        clean = {k: v for k, v in self.entries.items() if not v.is_zero()}
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, idx: Index4) -> RingElem:
        return self.entries.get(idx, self.field.zero)

    def items(self):
        return self.entries.items()

    def indices(self) -> Iterator[Index4]:
        return product(range(1, self.n + 1), repeat=4)

    @classmethod
    def identity(cls, n: int, field: QField) -> "RTensor":
        return cls(n, {(i, j, i, j): field.one for i in range(1, n + 1) for j in range(1, n + 1)}, field)

    def _rows(self) -> dict[tuple[int, int], list[tuple[tuple[int, int], RingElem]]]:
        rows = defaultdict(list)
        for (i, j, k, l), v in self.entries.items():
            rows[(i, j)].append(((k, l), v))
        return rows

    def compose(self, other: "RTensor") -> "RTensor":
        """(A B)^{ij}_{kl} = A^{ij}_{ab} B^{ab}_{kl}."""
        rows = other._rows()
        out: dict[Index4, RingElem] = {}
        zero = self.field.zero
        for (i, j, a, b), v in self.entries.items():
            for (k, l), w in rows.get((a, b), ()):
                key = (i, j, k, l)
                out[key] = out.get(key, zero) + v * w
        return RTensor(self.n, out, self.field)

    __matmul__ = compose

    def transpose(self) -> "RTensor":
        return RTensor(self.n, {(k, l, i, j): v for (i, j, k, l), v in self.entries.items()}, self.field)

    def scale(self, c: RingElem) -> "RTensor":
        return RTensor(self.n, {k: c * v for k, v in self.entries.items()}, self.field)

    def __add__(self, other: "RTensor") -> "RTensor":
        out = dict(self.entries)
        zero = self.field.zero
        for k, v in other.entries.items():
            out[k] = out.get(k, zero) + v
        return RTensor(self.n, out, self.field)

    def __sub__(self, other: "RTensor") -> "RTensor":
        return self + other.scale(-self.field.one)

    def add_identity(self, c: RingElem) -> "RTensor":
        return self + RTensor.identity(self.n, self.field).scale(c)

    def is_zero(self) -> bool:
        return not self.entries

    def perturbed(self, idx: Index4, delta: RingElem) -> "RTensor":
        out = dict(self.entries)
        out[idx] = self[idx] + delta
        return RTensor(self.n, out, self.field)

    def to_json(self) -> str:
        recs = [
            {"i": i, "j": j, "k": k, "l": l, "value": str(v)}
            for (i, j, k, l), v in sorted(self.entries.items())
        ]
        return json.dumps(recs)


@dataclass(frozen=True)
class Metric:
    n: int
    g: Mapping[tuple[int, int], RingElem]
    g_inv: Mapping[tuple[int, int], RingElem]
    field: QField

    def lower(self, i: int, j: int) -> RingElem:
        """g_{ij}"""
        return self.g.get((i, j), self.field.zero)

    def upper(self, i: int, j: int) -> RingElem:
        """g^{ij}"""
        return self.g_inv.get((i, j), self.field.zero)


@dataclass(frozen=True)
class SOData:
    rhat: RTensor
    rhat_inv: RTensor
    metric: Metric
    p_plus: RTensor
    p_minus: RTensor
    p_zero: RTensor
    nu: RingElem
    alpha: RingElem
    eigenvalues: tuple[RingElem, RingElem, RingElem] = field(default=None)


def prime(i: int, n: int) -> int:
    """i' = N + 1 - i"""
    return n + 1 - i


# --- GL_q(N) -----------------------------------------------------------------

def build_glq_rhat(n: int, field: QField | None = None) -> RTensor:
    """Standard GL_q(N) braid matrix; lambda sits at (ij, ij) with i < j."""
    if n < 1:
        raise UnsupportedDimension(f"GL_q(N) needs N >= 1, got {n}")
    F = field or QField(n)
    ent: dict[Index4, RingElem] = {}
    for i in range(1, n + 1):
        ent[(i, i, i, i)] = F.q
        for j in range(1, n + 1):
            if i != j:
                ent[(i, j, j, i)] = F.one
            if i < j:
                ent[(i, j, i, j)] = F.lam
    return RTensor(n, ent, F)


def glq_rhat_inverse(rhat: RTensor) -> RTensor:
    """R^-1 = R - lambda, valid whenever R^2 = 1 + lambda R."""
    return rhat.add_identity(-rhat.field.lam)


def build_psi(n: int, field: QField | None = None, rhat: RTensor | None = None) -> RTensor:
    """Psi^{ir}_{js} = (R^-1)^{ri}_{sj} q^{2(j-r)}."""
    F = field or QField(n)
    R = rhat or build_glq_rhat(n, F)
    Rinv = glq_rhat_inverse(R)
    ent = {}
    for (r, i, s, j), v in Rinv.items():
        ent[(i, r, j, s)] = v * F.q ** (2 * (j - r))
    return RTensor(n, ent, F)


# --- SO_q(N) -----------------------------------------------------------------

def so_rho(n: int) -> dict[int, Fraction]:
    """Half-integer weight string: N/2 - i on the first half, antisymmetric under i -> i'."""
    rho = {}
    for i in range(1, n + 1):
        ip = prime(i, n)
        if i < ip:
            rho[i] = Fraction(n, 2) - i
        elif i == ip:
            rho[i] = Fraction(0)
        else:
            rho[i] = -(Fraction(n, 2) - ip)
    return rho


def _so_rhat_table(n: int, F: QField) -> RTensor:
    q, lam = F.q, F.lam
    rho = so_rho(n)
    ent: dict[Index4, RingElem] = defaultdict(lambda: F.zero)
    # non-braided R written as sums of E_ab (x) E_cd, stored at R^{ac}_{bd}
    R: dict[Index4, RingElem] = defaultdict(lambda: F.zero)
    for i, j in product(range(1, n + 1), repeat=2):
        if i == j:
            R[(i, i, i, i)] += q if i != prime(i, n) else F.one
        elif j == prime(i, n):
            R[(i, j, i, j)] += q ** -1
        else:
            R[(i, j, i, j)] += F.one
    for i, j in product(range(1, n + 1), repeat=2):
        if i > j:
            R[(i, j, j, i)] += lam
            R[(i, prime(i, n), j, prime(j, n))] -= lam * F.qpow(rho[i] - rho[j])
    for (i, j, k, l), v in R.items():
        ent[(j, i, k, l)] += v
    return RTensor(n, dict(ent), F)


def _lagrange_projector(R: RTensor, target: RingElem, others: list[RingElem]) -> RTensor:
    out = RTensor.identity(R.n, R.field)
    den = R.field.one
    for e in others:
        out = out @ R.add_identity(-e)
        den = den * (target - e)
    return out.scale(den.inverse())


def build_soq_data(n: int, field: QField | None = None) -> SOData:
    """R-matrix, metric, projectors of SO_q(N); raises ConventionError if any constraint fails."""
    if n < 3:
        raise UnsupportedDimension(f"SO_q(N) needs N >= 3, got {n}")
    F = field or QField(2)
    q = F.q
    R = _so_rhat_table(n, F)
    e_plus, e_minus, e_zero = q, -(q ** -1), q ** (1 - n)
    p_plus = _lagrange_projector(R, e_plus, [e_minus, e_zero])
    p_minus = _lagrange_projector(R, e_minus, [e_plus, e_zero])
    p_zero = _lagrange_projector(R, e_zero, [e_plus, e_minus])
    # inverse from the cubic: R^-1 = (R^2 - s1 R + s2) / s3
    s1 = e_plus + e_minus + e_zero
    s2 = e_plus * e_minus + e_plus * e_zero + e_minus * e_zero
    s3 = e_plus * e_minus * e_zero
    R_inv = (R @ R - R.scale(s1)).add_identity(s2).scale(s3.inverse())
    rho = so_rho(n)
    g = {(i, prime(i, n)): F.qpow(-rho[i]) for i in range(1, n + 1)}
    metric = Metric(n, g, dict(g), F)
    data = SOData(
        rhat=R,
        rhat_inv=R_inv,
        metric=metric,
        p_plus=p_plus,
        p_minus=p_minus,
        p_zero=p_zero,
        nu=special_const("nu", n, F.root_order),
        alpha=special_const("alpha", n, F.root_order),
        eigenvalues=(e_plus, e_minus, e_zero),
    )
    for kind in ("so_char", "symmetry", "so_orthogonality", "projector_idempotence", "p0_metric", "metric_inverse"):
        res = tensor_check(kind, data)
        if not res.passed:
            raise ConventionError(f"SO_q({n}) table fails {kind}: {res.witness}")
    return data


# --- checks --------------------------------------------------------------------

def _first_nonzero(t: RTensor, check_id: str, anchor: str) -> CheckResult:
    if t.is_zero():
        return CheckResult(check_id, anchor, PASS)
    idx = min(t.entries)
    return CheckResult(check_id, anchor, FAIL, witness={"index": list(idx), "residual": str(t.entries[idx])})


def _leg_mul(A: dict, B: dict, zero: RingElem) -> dict:
    rows = defaultdict(list)
    for k, v in B.items():
        rows[k[:3]].append((k[3:], v))
    out: dict = {}
    for k, v in A.items():
        for kk, w in rows.get(k[3:], ()):
            key = k[:3] + kk
            out[key] = out.get(key, zero) + v * w
    return {k: v for k, v in out.items() if not v.is_zero()}


def braid_residual(R: RTensor) -> dict:
    """R12 R23 R12 - R23 R12 R23 on V^{(x)3}, keyed by 6-index tuples."""
    n = R.n
    r12, r23 = {}, {}
    for (i, j, k, l), v in R.items():
        for m in range(1, n + 1):
            r12[(i, j, m, k, l, m)] = v
            r23[(m, i, j, m, k, l)] = v
    z = R.field.zero
    lhs = _leg_mul(_leg_mul(r12, r23, z), r12, z)
    rhs = _leg_mul(_leg_mul(r23, r12, z), r23, z)
    out = dict(lhs)
    for k, v in rhs.items():
        out[k] = out.get(k, z) - v
    return {k: v for k, v in out.items() if not v.is_zero()}


ANCHORS = {
    "braid": "braid: R12 R23 R12 = R23 R12 R23",
    "gl_char": "char: R^2 = 1 + lam R",
    "so_char": "so-char: R = q P+ - q^-1 P- + q^{1-N} P0",
    "symmetry": "symmetry: R^{ij}_{kl} = R^{kl}_{ij}",
    "so_orthogonality": "so-orth: (R^-1)^{ij}_{kl} = g^{im} R^{jn}_{mk} g_{nl} = g_{km} R^{mi}_{ln} g^{nj}",
    "projector_idempotence": "projectors: P+ + P- + P0 = 1, P^a P^b = delta^{ab} P^a",
    "p0_metric": "P0: (P0)^{ij}_{kl} = nu g^{ij} g_{kl}",
    "metric_inverse": "metric: g_{ij} = g^{ij}, g g^-1 = 1",
    "psi_contraction": "Psi: R^{kj}_{li} Psi^{ir}_{js} = Psi^{kj}_{li} R^{ir}_{js} = delta^k_s delta^r_l",
    "psi_traces": "Psi traces: Psi^{ri}_{si} = delta^r_s q^{-2(N-r)-1}, Psi^{ir}_{is} = delta^r_s q^{-2(r-1)-1}",
}


def tensor_check(kind: str, data) -> CheckResult:
    """Validate one tensor identity. ``data`` is an RTensor (GL checks) or SOData."""
    anchor = ANCHORS.get(kind, kind)
    check_id = f"tensor:{kind}"
    if kind == "braid":
        R = data.rhat if isinstance(data, SOData) else data
        res = braid_residual(R)
        if not res:
            return CheckResult(check_id, anchor, PASS)
        idx = min(res)
        return CheckResult(check_id, anchor, FAIL, witness={"index": list(idx), "residual": str(res[idx])})
    if kind == "gl_char":
        R = data
        return _first_nonzero((R @ R - R.scale(R.field.lam)).add_identity(-R.field.one), check_id, anchor)
    if kind == "symmetry":
        R = data.rhat if isinstance(data, SOData) else data
        return _first_nonzero(R - R.transpose(), check_id, anchor)
    if kind == "gl_inverse":
        R = data
        return _first_nonzero((R @ glq_rhat_inverse(R)).add_identity(-R.field.one), check_id, anchor)
    if kind == "psi_contraction":
        R, psi = data
        n, F = R.n, R.field
        bad = {}
        for k, r, l, s in product(range(1, n + 1), repeat=4):
            a = sum((R[(k, j, l, i)] * psi[(i, r, j, s)] for i in range(1, n + 1) for j in range(1, n + 1)), F.zero)
            b = sum((psi[(k, j, l, i)] * R[(i, r, j, s)] for i in range(1, n + 1) for j in range(1, n + 1)), F.zero)
            target = F.one if (k == s and r == l) else F.zero
            for tag, val in (("R.Psi", a), ("Psi.R", b)):
                if val != target:
                    bad[(tag, k, r, l, s)] = val - target
        if not bad:
            return CheckResult(check_id, anchor, PASS)
        idx = min(bad)
        return CheckResult(check_id, anchor, FAIL, witness={"index": list(idx), "residual": str(bad[idx])})
    if kind == "psi_traces":
        psi = data
        n, F = psi.n, psi.field
        for r, s in product(range(1, n + 1), repeat=2):
            t1 = sum((psi[(r, i, s, i)] for i in range(1, n + 1)), F.zero)
            t2 = sum((psi[(i, r, i, s)] for i in range(1, n + 1)), F.zero)
            e1 = F.q ** (-2 * (n - r) - 1) if r == s else F.zero
            e2 = F.q ** (-2 * (r - 1) - 1) if r == s else F.zero
            if t1 != e1:
                return CheckResult(check_id, anchor, FAIL, witness={"index": ["Psi^{ri}_{si}", r, s], "residual": str(t1 - e1)})
            if t2 != e2:
                return CheckResult(check_id, anchor, FAIL, witness={"index": ["Psi^{ir}_{is}", r, s], "residual": str(t2 - e2)})
        return CheckResult(check_id, anchor, PASS)

    # SO-only checks
    d: SOData = data
    R, F = d.rhat, d.rhat.field
    if kind == "so_char":
        cub = R.add_identity(-d.eigenvalues[0]) @ R.add_identity(-d.eigenvalues[1]) @ R.add_identity(-d.eigenvalues[2])
        res = _first_nonzero(cub, check_id, anchor)
        if not res.passed:
            return res
        # R = q P+ - q^{-1} P- + q^{1-N} P0
        recon = d.p_plus.scale(d.eigenvalues[0]) + d.p_minus.scale(d.eigenvalues[1]) + d.p_zero.scale(d.eigenvalues[2])
        return _first_nonzero(R - recon, check_id, anchor)
    if kind == "so_orthogonality":
        n = R.n
        g, rng = d.metric, range(1, n + 1)
        inv = d.rhat_inv
        if not (R @ inv).add_identity(-F.one).is_zero():
            return _first_nonzero((R @ inv).add_identity(-F.one), check_id, anchor)
        for i, j, k, l in product(rng, repeat=4):
            f1 = sum((g.upper(i, m) * R[(j, nn, m, k)] * g.lower(nn, l) for m in rng for nn in rng), F.zero)
            f2 = sum((g.lower(k, m) * R[(m, i, l, nn)] * g.upper(nn, j) for m in rng for nn in rng), F.zero)
            if f1 != inv[(i, j, k, l)]:
                return CheckResult(check_id, anchor, FAIL, witness={"index": ["first form", i, j, k, l], "residual": str(f1 - inv[(i, j, k, l)])})
            if f2 != inv[(i, j, k, l)]:
                return CheckResult(check_id, anchor, FAIL, witness={"index": ["second form", i, j, k, l], "residual": str(f2 - inv[(i, j, k, l)])})
        return CheckResult(check_id, anchor, PASS)
    if kind == "projector_idempotence":
        I = RTensor.identity(R.n, F)
        ps = {"P+": d.p_plus, "P-": d.p_minus, "P0": d.p_zero}
        res = _first_nonzero(d.p_plus + d.p_minus + d.p_zero - I, check_id, anchor)
        if not res.passed:
            return res
        for a, pa in ps.items():
            for b, pb in ps.items():
                prod_ = pa @ pb
                want = pa if a == b else RTensor(R.n, {}, F)
                diff = prod_ - want
                if not diff.is_zero():
                    idx = min(diff.entries)
                    return CheckResult(check_id, anchor, FAIL, witness={"index": [a, b] + list(idx), "residual": str(diff.entries[idx])})
        return CheckResult(check_id, anchor, PASS)
    if kind == "p0_metric":
        g = d.metric
        want = {
            (i, j, k, l): d.nu * g.upper(i, j) * g.lower(k, l)
            for i, j, k, l in product(range(1, R.n + 1), repeat=4)
        }
        return _first_nonzero(d.p_zero - RTensor(R.n, want, F), check_id, anchor)
    if kind == "metric_inverse":
        g, rng = d.metric, range(1, R.n + 1)
        for i, j in product(rng, repeat=2):
            s = sum((g.lower(i, k) * g.upper(k, j) for k in rng), F.zero)
            if s != (F.one if i == j else F.zero):
                return CheckResult(check_id, anchor, FAIL, witness={"index": [i, j], "residual": str(s)})
            if (g.lower(i, j) != F.zero) != (j == prime(i, R.n)):
                return CheckResult(check_id, anchor, FAIL, witness={"index": [i, j], "residual": "metric not antidiagonal"})
        return CheckResult(check_id, anchor, PASS)
    raise ValueError(f"unknown tensor check {kind!r}")


def p0_trace(d: SOData) -> RingElem:
    """Full contraction (P0)^{ij}_{ij}."""
    F = d.rhat.field
    return sum((d.p_zero[(i, j, i, j)] for i in range(1, d.rhat.n + 1) for j in range(1, d.rhat.n + 1)), F.zero)
