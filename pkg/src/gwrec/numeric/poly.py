"""Univariate polynomials as coefficient lists, lowest degree first.

The ring operations work for any coefficient type with ``+`` and ``*``
(rationals or jets); resultants and discriminants are rational only.
"""
from __future__ import annotations

from .jet import ONE, ZERO, rational
from .matrix import rat_det


def poly_add(p, q):
    if len(p) < len(q):
        p, q = q, p
    return [a + b for a, b in zip(p, q)] + list(p[len(q):])


def poly_neg(p):
    return [-a for a in p]


def poly_mul(p, q):
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            term = a * b
            out[i + j] = term if out[i + j] is None else out[i + j] + term
    return out


def poly_eval(p, t):
    acc = None
    for c in reversed(p):
        acc = c if acc is None else acc * t + c
    return acc


def rat_poly(p):
    """Normalize to rationals and strip trailing zeros (zero poly is ``[]``)."""
    p = [rational(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def poly_derivative(p):
    return [k * c for k, c in enumerate(p)][1:]


def poly_divmod(p, q):
    p, q = rat_poly(p), rat_poly(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [ZERO] * max(len(p) - len(q) + 1, 0)
    rem = list(p)
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        f = rem[-1] / q[-1]
        quot[shift] = f
        for i, c in enumerate(q):
            rem[i + shift] -= f * c
        rem = rat_poly(rem)
    return quot, rem


def poly_gcd(p, q):
    p, q = rat_poly(p), rat_poly(q)
    while q:
        p, q = q, poly_divmod(p, q)[1]
    if not p:
        return []
    lead = p[-1]
    return [c / lead for c in p]


def sylvester_matrix(p, q):
    p, q = rat_poly(p), rat_poly(q)
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    hp, hq = list(reversed(p)), list(reversed(q))
    for i in range(n):
        rows.append([ZERO] * i + hp + [ZERO] * (size - i - len(hp)))
    for i in range(m):
        rows.append([ZERO] * i + hq + [ZERO] * (size - i - len(hq)))
    return rows


def resultant(p, q):
    """Resultant via the Sylvester determinant; ``prod p(roots of q)`` up to sign conventions."""
    p, q = rat_poly(p), rat_poly(q)
    if not p or not q:
        return ZERO
    if len(p) == 1 and len(q) == 1:
        return ONE
    if len(p) == 1:
        return p[0] ** (len(q) - 1)
    if len(q) == 1:
        return q[0] ** (len(p) - 1)
    return rat_det(sylvester_matrix(p, q))


def discriminant(p):
    """``prod_{i<j} (r_i - r_j)^2`` times ``lead^(2n-2)``; zero iff a repeated root."""
    p = rat_poly(p)
    n = len(p) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return ONE
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(p, poly_derivative(p)) / p[-1]
