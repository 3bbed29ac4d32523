"""Rational structure functions of semi-simple quantum cohomology.

Given the symmetric matrix ``Y`` of second derivatives of the generating
function, the third derivatives are recovered as a root sum over the
eigenvectors of the Euler matrix ``A = B gbar`` with
``B_ab = c_ab + K_ab Y_ab``::

    R_abg(Y) = sum_i z_ia z_ib z_ig / (sum gbar_de z_id z_ie z_i0)

Eigenvectors are never computed.  A frame of signed minors ``z(t)`` gives
an eigenvector ``z(a_i)`` for every eigenvalue, so the root sum of the
rational function ``N(t)/D(t)`` equals ``tr(D(A)^-1 N(A))`` whenever ``A``
has simple spectrum.  Everything stays polynomial in the entries of ``Y``
and hence works verbatim over the jet ring.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations

from gmpy2 import mpq

from .errors import DegenerateFrameError, DimensionError, NonTameError
from .model import FanoModel
from .numeric.jet import ONE, ZERO, Jet, rational
from .numeric.matrix import (JetMatrix, charpoly, jetmat_solve, rat_matmul,
                             trace_of_product)
from .numeric.poly import (discriminant, poly_add, poly_derivative, poly_divmod,
                           poly_gcd, poly_mul, rat_poly, resultant)


@dataclass(frozen=True)
class EulerMatrix:
    A: JetMatrix
    B: JetMatrix
    K: tuple
    ginv: tuple

    @property
    def size(self):
        return self.A.rows


@dataclass(frozen=True)
class MinorFrame:
    rows: tuple
    z: tuple  # z[alpha] is a polynomial in t (list of jets, low degree first)

    def constant_polys(self):
        return [rat_poly([c.coeffs[0] for c in poly]) for poly in self.z]


@dataclass(frozen=True)
class TamenessReport:
    semisimple: bool
    tame: bool
    disc: mpq
    charpoly: tuple


# -- input normalization ---------------------------------------------------

def _shape_of(values):
    for v in values:
        if isinstance(v, Jet):
            return v.nvars, v.order
    return None


def _to_jet(v, nvars, order):
    if isinstance(v, Jet):
        if v.nvars != nvars:
            raise DimensionError("jets disagree on nvars")
        return v.truncate(order) if v.order > order else v
    return Jet.constant(nvars, order, v)


def normalize_point(m: FanoModel, x, y):
    """Return ``(x, y, scalar)`` with ``x`` a list ``x_1..x_sigma`` and ``y`` a
    full symmetric dict over ``1..sigma``, all as jets of one common shape.

    ``scalar`` is true when every input was a plain rational, in which case
    results should be unwrapped back to rationals.
    """
    sigma = m.sigma
    x = list(x)
    if len(x) != sigma:
        raise DimensionError(f"x needs {sigma} entries x_1..x_sigma, got {len(x)}")
    if isinstance(y, dict):
        ydict = {}
        for (a, b), v in y.items():
            if not (1 <= a <= sigma and 1 <= b <= sigma):
                raise DimensionError(f"y index ({a},{b}) out of range")
            if (b, a) in ydict and ydict[(b, a)] is not v and ydict[(b, a)] != v:
                raise DimensionError(f"y not symmetric at ({a},{b})")
            ydict[(a, b)] = ydict[(b, a)] = v
    else:
        rows = [list(r) for r in y]
        if len(rows) != sigma or any(len(r) != sigma for r in rows):
            raise DimensionError(f"y must be {sigma}x{sigma}")
        ydict = {}
        for a in range(1, sigma + 1):
            for b in range(1, sigma + 1):
                if rows[a - 1][b - 1] != rows[b - 1][a - 1]:
                    raise DimensionError(f"y not symmetric at ({a},{b})")
                ydict[(a, b)] = rows[a - 1][b - 1]
    values = x + list(ydict.values())
    shape = _shape_of(values)
    scalar = shape is None
    if scalar:
        shape = (1, 0)
    else:
        jets = [v for v in values if isinstance(v, Jet)]
        shape = (shape[0], min(j.order for j in jets))
    nvars, order = shape
    zero = Jet(nvars, order)
    xj = [_to_jet(v, nvars, order) for v in x]
    yj = {(a, b): _to_jet(ydict.get((a, b), zero), nvars, order)
          for a in range(1, sigma + 1) for b in range(1, sigma + 1)}
    return xj, yj, scalar


def _unwrap(value, scalar):
    if not scalar:
        return value
    if isinstance(value, dict):
        return {k: _unwrap(v, scalar) for k, v in value.items()}
    return value.coeffs[0]


# -- operations ------------------------------------------------------------

def assemble_bigY(m: FanoModel, x, y):
    """``Y_ab = sum_{g>=1} g_abg x_g`` plus ``y_ab`` on the latin block (``x_0 = 0``)."""
    xj, yj, scalar = normalize_point(m, x, y)
    Y = _assemble(m, xj, yj)
    if scalar:
        return [[e.coeffs[0] for e in row] for row in Y]
    return Y


def _assemble(m, xj, yj):
    s = m.size
    nvars, order = xj[0].nvars, xj[0].order
    Y = [[None] * s for _ in range(s)]
    for a in range(s):
        for b in range(a, s):
            acc = Jet(nvars, order)
            for g in range(1, s):
                coef = m.g3[a][b][g]
                if coef:
                    acc = acc + xj[g - 1] * coef
            if a >= 1 and b >= 1:
                acc = acc + yj[(a, b)]
            Y[a][b] = Y[b][a] = acc
    return Y


def euler_matrix(m: FanoModel, Y) -> EulerMatrix:
    """``B = c + K o Y`` (entrywise) and ``A = B gbar``."""
    s = m.size
    nvars, order = _shape_of([e for row in Y for e in row]) or (1, 0)
    Y = [[_to_jet(v, nvars, order) for v in row] for row in Y]
    K = m.weights
    B = JetMatrix([[Y[a][b] * K[a][b] + m.c2[a][b] for b in range(s)]
                   for a in range(s)])
    nvars, order = B.nvars, B.order
    G = JetMatrix.from_rational(m.metric_inverse, nvars, order)
    return EulerMatrix(A=B @ G, B=B, K=K, ginv=m.metric_inverse)


def _minor_polys(A: JetMatrix, rows):
    """Signed sigma-minors of ``(A - tI)`` restricted to ``rows``."""
    s = A.rows
    nvars, order = A.nvars, A.order
    one = Jet.constant(nvars, order, 1)

    def entry(i, j):
        if i == j:
            return [A.entries[i][j], -one]
        return [A.entries[i][j]]

    memo = {}

    def minor(cols):
        # determinant of rows[:len(cols)] x cols, Laplace along the last row
        if cols in memo:
            return memo[cols]
        k = len(cols)
        r = rows[k - 1]
        if k == 1:
            result = entry(r, cols[0])
        else:
            result = None
            for pos, col in enumerate(cols):
                e = entry(r, col)
                if all(c.is_zero() for c in e):
                    continue
                sub = minor(cols[:pos] + cols[pos + 1:])
                term = poly_mul(e, sub)
                if (k - 1 + pos) % 2:
                    term = [-c for c in term]
                result = term if result is None else poly_add(result, term)
            if result is None:
                result = [Jet(nvars, order)]
        memo[cols] = result
        return result

    z = []
    for alpha in range(s):
        cols = tuple(c for c in range(s) if c != alpha)
        poly = minor(cols)
        if alpha % 2:
            poly = [-c for c in poly]
        z.append(tuple(poly))
    return tuple(z)


def _rat_charpoly(a0):
    n = len(a0)
    jm = JetMatrix.from_rational(a0, 1, 0)
    return rat_poly([c.coeffs[0] for c in charpoly(jm)]) if n else [ONE]


def frame_is_valid(em: EulerMatrix, frame: MinorFrame) -> bool:
    """Simple spectrum and nonvanishing root-sum denominators, at the constant term."""
    chi = _rat_charpoly(em.A.constant_term())
    if discriminant(chi) == 0:
        return False
    den = rat_poly(_denominator_poly_rational(frame.constant_polys(), em.ginv))
    if not den:
        return False
    return resultant(chi, den) != 0


def _denominator_poly_rational(z, ginv):
    s = len(z)
    acc = [ZERO]
    for d in range(s):
        for e in range(s):
            w = ginv[d][e]
            if w and z[d] and z[e]:
                acc = poly_add(acc, [c * w for c in poly_mul(z[d], z[e])])
    if not z[0]:
        return []
    return poly_mul(acc, z[0])


def minor_frame(em, rows=None) -> MinorFrame:
    """Frame of signed minors; with ``rows=None`` the first valid subset in lex order."""
    if isinstance(em, JetMatrix):
        A, check = em, None
    else:
        A, check = em.A, em
    s = A.rows
    if rows is not None:
        rows = tuple(rows)
        if len(rows) != s - 1 or len(set(rows)) != len(rows) or not all(
                0 <= r < s for r in rows):
            raise DimensionError(f"frame needs {s - 1} distinct rows in 0..{s - 1}")
        return MinorFrame(rows=rows, z=_minor_polys(A, rows))
    if check is None:
        raise ValueError("automatic row selection needs an EulerMatrix")
    for cand in combinations(range(s), s - 1):
        frame = MinorFrame(rows=cand, z=_minor_polys(A, cand))
        if frame_is_valid(check, frame):
            return frame
    raise DegenerateFrameError(
        "degenerate frame: no row subset gives a valid frame (point not tame?)")


def _rootsum(em: EulerMatrix, frame: MinorFrame, ordered=False):
    A = em.A
    s = A.rows
    nvars, order = A.nvars, A.order
    powers = [JetMatrix.identity(s, nvars, order)]
    degree = max(len(p) for p in frame.z) - 1
    for _ in range(degree):
        powers.append(powers[-1] @ A)
    Z = []
    for poly in frame.z:
        acc = None
        for k, c in enumerate(poly):
            if c.is_zero():
                continue
            term = powers[k].scale(c)
            acc = term if acc is None else acc + term
        Z.append(acc if acc is not None else JetMatrix.zeros(s, s, nvars, order))

    ginv = em.ginv
    pair = {}

    def prod(a, b):
        key = (min(a, b), max(a, b))
        if key not in pair:
            pair[key] = Z[key[0]] @ Z[key[1]]
        return pair[key]

    gram = None
    for d in range(s):
        for e in range(d, s):
            w = ginv[d][e]
            if not w:
                continue
            term = prod(d, e).scale(w if d == e else 2 * w)
            gram = term if gram is None else gram + term
    den = gram @ Z[0]
    try:
        dinv = jetmat_solve(den, JetMatrix.identity(s, nvars, order))
    except DegenerateFrameError:
        raise NonTameError("non-tame base point: root-sum denominator vanishes") from None
    W = [dinv @ z for z in Z]

    R = {}
    if ordered:
        for idx in ((a, b, g) for a in range(s) for b in range(s) for g in range(s)):
            a, b, g = idx
            R[idx] = trace_of_product(Z[a] @ Z[b], W[g])
        return R
    for a, b, g in combinations_with_replacement(range(s), 3):
        value = trace_of_product(prod(a, b), W[g])
        for idx in set(permutations((a, b, g))):
            R[idx] = value
    return R


def rootsum_R(m: FanoModel, Y, rows=None, ordered=False):
    """Full tensor ``R_abg(Y)`` keyed by ordered index triples ``0..sigma``.

    ``Y`` is a ``(sigma+1)x(sigma+1)`` symmetric matrix of rationals or jets.
    With ``ordered=True`` every ordered triple is computed independently
    (used to test symmetry); otherwise one value per multiset is shared.
    """
    flat = [e for row in Y for e in row]
    shape = _shape_of(flat)
    scalar = shape is None
    nvars, order = shape if shape else (1, 0)
    if not scalar:
        order = min(e.order for e in flat if isinstance(e, Jet))
    Yj = [[_to_jet(v, nvars, order) for v in row] for row in Y]
    em = euler_matrix(m, Yj)
    frame = minor_frame(em, rows)
    if rows is not None and not frame_is_valid(em, frame):
        raise DegenerateFrameError(f"degenerate frame for rows {frame.rows}")
    return _unwrap(_rootsum(em, frame, ordered), scalar)


class StructureEvaluator:
    """Evaluates ``r_abc(x, y)`` repeatedly with a frame fixed at the first call.

    Frame validity depends only on constant terms, so a frame certified at the
    base point stays valid along a jet expansion around it.
    """

    def __init__(self, m: FanoModel, rows=None):
        self.model = m
        self.rows = tuple(rows) if rows is not None else None

    def full(self, xj, yj):
        m = self.model
        Y = _assemble(m, xj, yj)
        em = euler_matrix(m, Y)
        frame = minor_frame(em, self.rows)
        if self.rows is None:
            self.rows = frame.rows
        elif not frame_is_valid(em, frame):
            raise DegenerateFrameError(f"degenerate frame for rows {frame.rows}")
        return _rootsum(em, frame)

    def reduced(self, xj, yj):
        m = self.model
        R = self.full(xj, yj)
        rng = range(1, m.sigma + 1)
        return {(a, b, c): R[(a, b, c)] - m.g3[a][b][c]
                for a in rng for b in rng for c in rng}


def reduced_r(m: FanoModel, x, y, rows=None):
    """``r_abc(x, y) = R_abc(Y(x, y)) - g_abc`` for latin indices ``1..sigma``."""
    xj, yj, scalar = normalize_point(m, x, y)
    r = StructureEvaluator(m, rows).reduced(xj, yj)
    return _unwrap(r, scalar)


def constraint_from_r(m: FanoModel, xj, yj, r):
    """``sum_c E_c(x) r_abc - K_ab y_ab`` for every latin pair ``(a, b)``."""
    sigma = m.sigma
    E = m.euler
    out = {}
    for a in range(1, sigma + 1):
        for b in range(a, sigma + 1):
            acc = yj[(a, b)] * (-m.weights[a][b])
            for c in range(1, sigma + 1):
                acc = acc + r[(a, b, c)] * E(c, xj[c - 1])
            out[(a, b)] = out[(b, a)] = acc
    return out


def constraint_residual(m: FanoModel, x, y, rows=None):
    """Residual of the quasi-homogeneity constraint on the reduced system.

    Zero exactly when ``sum_c (c_c + (1-p_c) x_c) r_abc = (1-n+p_a+p_b) y_ab``,
    which is ``E(f) = (3-n) f`` differentiated twice.
    """
    xj, yj, scalar = normalize_point(m, x, y)
    r = StructureEvaluator(m, rows).reduced(xj, yj)
    return _unwrap(constraint_from_r(m, xj, yj, r), scalar)


def associativity_from_R(m: FanoModel, R):
    s = m.size
    ginv = m.metric_inverse
    sample = next(iter(R.values()))
    zero = sample * 0
    C = {}
    for a in range(s):
        for b in range(s):
            for e in range(s):
                acc = zero
                for d in range(s):
                    if ginv[d][e]:
                        acc = acc + R[(a, b, d)] * ginv[d][e]
                C[(a, b, e)] = acc
    out = {}
    for a in range(s):
        for b in range(s):
            for g in range(s):
                for d in range(s):
                    acc = zero
                    for e in range(s):
                        acc = acc + C[(a, b, e)] * C[(e, g, d)] - C[(b, g, e)] * C[(e, a, d)]
                    out[(a, b, g, d)] = acc
    return out


def associativity_residual(m: FanoModel, x, y, rows=None):
    """``sum_e C_ab^e C_eg^d - C_bg^e C_ea^d`` with ``C_ab^e = sum_d R_abd gbar^de``."""
    xj, yj, scalar = normalize_point(m, x, y)
    R = StructureEvaluator(m, rows).full(xj, yj)
    return _unwrap(associativity_from_R(m, R), scalar)


def _rat_matpoly_is_zero(p, a0):
    n = len(a0)
    acc = [[ZERO] * n for _ in range(n)]
    for c in reversed(p):
        acc = rat_matmul(acc, a0)
        for i in range(n):
            acc[i][i] += c
    return not any(v for row in acc for v in row)


def tameness_report(m: FanoModel, x, y) -> TamenessReport:
    """Tame iff the Euler matrix at the constant term has distinct eigenvalues.

    Semi-simplicity is reported as diagonalizability of that matrix: its
    square-free part annihilates it.
    """
    xj, yj, _ = normalize_point(m, x, y)
    Y = _assemble(m, [v.truncate(0) for v in xj],
                  {k: v.truncate(0) for k, v in yj.items()})
    a0 = euler_matrix(m, Y).A.constant_term()
    chi = _rat_charpoly(a0)
    disc = discriminant(chi)
    if disc:
        semisimple = True
    else:
        sqf, rem = poly_divmod(chi, poly_gcd(chi, poly_derivative(chi)))
        semisimple = not rem and _rat_matpoly_is_zero(sqf, a0)
    return TamenessReport(semisimple=semisimple, tame=disc != 0, disc=mpq(disc),
                          charpoly=tuple(chi))


def rational_point(m: FanoModel, values: dict):
    """Build ``(x, y)`` from ``{"x2": 1, "y11": "1/2", ...}``; missing entries are 0."""
    sigma = m.sigma
    x = [ZERO] * sigma
    y = {}
    for key, v in values.items():
        v = rational(v)
        if key.startswith("x") and key[1:].isdigit():
            a = int(key[1:])
            if not 1 <= a <= sigma:
                raise DimensionError(f"{key} out of range")
            x[a - 1] = v
        elif key.startswith("y") and key[1:].isdigit() and len(key) == 3:
            a, b = int(key[1]), int(key[2])
            if not (1 <= a <= sigma and 1 <= b <= sigma):
                raise DimensionError(f"{key} out of range")
            y[(a, b)] = y[(b, a)] = v
        else:
            raise ValueError(f"unknown coordinate {key!r}")
    return x, y
