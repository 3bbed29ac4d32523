"""Independent reference values for the projective line and plane."""
from __future__ import annotations

from math import comb, factorial

from gmpy2 import mpq

from .numeric.jet import Jet, rational


def kontsevich(dmax: int) -> list:
    """Plane rational curve counts ``N_1..N_dmax`` through ``3d-1`` points."""
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    N = [0, 1]
    for d in range(2, dmax + 1):
        total = 0
        for d1 in range(1, d):
            d2 = d - d1
            total += (d1 * d1 * d2
                      * (d2 * comb(3 * d - 4, 3 * d1 - 2) - d1 * comb(3 * d - 4, 3 * d1 - 1))
                      * N[d1] * N[d2])
        N.append(total)
    return N[1:]


def p1_solution(q, order: int) -> Jet:
    """``q exp(t_1)`` truncated: the solution of ``dy_11 = y_11 dx_1``."""
    q = rational(q)
    if not q:
        raise ValueError("q must be nonzero")
    return Jet(1, order, [q * mpq(1, factorial(m)) for m in range(order + 1)])


def p2_closed_r(x2, y11, y12, y22):
    """Closed-form reduced structure functions ``(r111, r112, r122, r222)`` of the plane."""
    x2, y11, y12, y22 = map(rational, (x2, y11, y12, y22))
    den = 27 + 3 * x2 * y11 - 2 * x2 ** 2 * y12
    if not den:
        raise ZeroDivisionError("denominator 27 + 3 x2 y11 - 2 x2^2 y12 vanishes")
    r111 = (9 * y11 + x2 * (y11 ** 2 + 6 * y12) + 3 * x2 ** 2 * y22) / den
    r112 = (18 * y12 + x2 * (2 * y11 * y12 + 9 * y22)) / den
    r122 = (27 * y22 + 4 * x2 * y12 ** 2) / den
    r222 = (12 * y12 ** 2 - 9 * y11 * y22 + 6 * x2 * y12 * y22) / den
    return r111, r112, r122, r222
