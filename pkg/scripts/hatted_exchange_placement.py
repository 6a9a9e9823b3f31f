"""Compare two index placements of the SO hatted-derivative/coordinate exchange.

The hatted derivative is realized through the nonlinear formula
dh^i = Lambda^-1 (delta^i_j + q^{N-1} lam alpha x^i d_j) d^j, and each candidate
exchange rule is tested against that realization entry by entry.
"""

from itertools import product

from qvfield import build_algebra
from qvfield.vfields import DhatRealization


def residuals(s, mirrored):
    q, Ri = s.field.q, s.rhat_inv
    out = {}
    for i, j in product(s.range, repeat=2):
        if mirrored:
            r, pick, left, right = s.dh_up(i) * s.x(j), (lambda k, l: Ri[(i, k, j, l)]), s.x, s.dh_up
        else:
            r, pick, left, right = s.dh(i) * s.x_up(j), (lambda k, l: Ri[(j, l, i, k)]), s.x_up, s.dh
        for k, l in product(s.range, repeat=2):
            c = pick(k, l)
            if not c.is_zero():
                r = r - (left(k) * right(l)).scale(c / q)
        if i == j:
            r = r - s.one
        out[(i, j)] = r
    return out


def main():
    s = build_algebra("soq_real", 3)
    rho = DhatRealization(s)
    for label, mirrored in (("dh^i x_j = delta + q^-1 (R^-1)^{ik}_{jl} x_k dh^l", True),
                            ("dh_i x^j = delta + q^-1 (R^-1)^{jl}_{ik} x^k dh_l", False)):
        bad = [ij for ij, e in residuals(s, mirrored).items() if not rho.residual(e).is_zero()]
        print(f"{label}\n  entries violated: {len(bad)}/9 {bad}")


if __name__ == "__main__":
    main()
