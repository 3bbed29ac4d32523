"""Matrices over the jet ring and exact rational linear algebra."""
from __future__ import annotations

from gmpy2 import mpq

from ..errors import DegenerateFrameError, DimensionError
from .jet import ONE, ZERO, Jet, rational


class JetMatrix:
    """Dense matrix of :class:`Jet` entries sharing ``nvars`` and ``order``."""

    __slots__ = ("rows", "cols", "entries", "nvars", "order")

    def __init__(self, entries):
        entries = [list(row) for row in entries]
        if not entries or not entries[0]:
            raise DimensionError("empty jet matrix")
        self.rows = len(entries)
        self.cols = len(entries[0])
        if any(len(row) != self.cols for row in entries):
            raise DimensionError("ragged jet matrix")
        first = entries[0][0]
        self.nvars = first.nvars
        self.order = min(e.order for row in entries for e in row)
        for row in entries:
            for i, e in enumerate(row):
                if e.nvars != self.nvars:
                    raise DimensionError("jet matrix entries disagree on nvars")
                if e.order != self.order:
                    row[i] = e.truncate(self.order)
        self.entries = entries

    @classmethod
    def zeros(cls, rows, cols, nvars, order):
        return cls([[Jet(nvars, order) for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def identity(cls, size, nvars, order):
        return cls.from_rational([[ONE if i == j else ZERO for j in range(size)]
                                  for i in range(size)], nvars, order)

    @classmethod
    def from_rational(cls, values, nvars, order):
        return cls([[Jet.constant(nvars, order, v) for v in row] for row in values])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self):
        return self.rows, self.cols

    def constant_term(self):
        return [[e.coeffs[0] for e in row] for row in self.entries]

    def truncate(self, order):
        return JetMatrix([[e.truncate(order) for e in row] for row in self.entries])

    def transpose(self):
        return JetMatrix([list(col) for col in zip(*self.entries)])

    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return JetMatrix([[a + b for a, b in zip(r, s)]
                          for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check_same(other)
        return JetMatrix([[a - b for a, b in zip(r, s)]
                          for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return JetMatrix([[-a for a in r] for r in self.entries])

    def scale(self, value):
        """Multiply every entry by a rational or by a scalar jet."""
        return JetMatrix([[a * value for a in r] for r in self.entries])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        cols = list(zip(*other.entries))
        for row in self.entries:
            new_row = []
            for col in cols:
                acc = None
                for a, b in zip(row, col):
                    if a.is_zero() or b.is_zero():
                        continue
                    term = a * b
                    acc = term if acc is None else acc + term
                if acc is None:
                    acc = Jet(self.nvars, min(self.order, other.order))
                new_row.append(acc)
            out.append(new_row)
        return JetMatrix(out)

    def add_scalar(self, value):
        """``self + value * I`` for a rational or scalar-jet ``value``."""
        if self.rows != self.cols:
            raise DimensionError("add_scalar needs a square matrix")
        return JetMatrix([[a + value if i == j else a for j, a in enumerate(r)]
                          for i, r in enumerate(self.entries)])

    def trace(self):
        if self.rows != self.cols:
            raise DimensionError("trace needs a square matrix")
        acc = self.entries[0][0]
        for i in range(1, self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def __eq__(self, other):
        if not isinstance(other, JetMatrix) or self.shape != other.shape:
            return False
        return all(a == b for r, s in zip(self.entries, other.entries)
                   for a, b in zip(r, s))

    __hash__ = None

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)


def trace_of_product(a: JetMatrix, b: JetMatrix) -> Jet:
    """``tr(a @ b)`` without forming the product."""
    acc = None
    for i in range(a.rows):
        for j in range(a.cols):
            x, y = a.entries[i][j], b.entries[j][i]
            if x.is_zero() or y.is_zero():
                continue
            term = x * y
            acc = term if acc is None else acc + term
    return acc if acc is not None else Jet(a.nvars, min(a.order, b.order))


def jetmat_solve(m: JetMatrix, b: JetMatrix) -> JetMatrix:
    """Solve ``m @ z = b`` by Gaussian elimination over the jet ring.

    A jet is a unit exactly when its constant term is nonzero, so pivots are
    chosen by their constant term; the elimination then proceeds with jet
    inverses, which corrects all higher coefficients at once.
    """
    if m.rows != m.cols:
        raise DimensionError("jetmat_solve needs a square matrix")
    if b.rows != m.rows:
        raise DimensionError(f"right-hand side has {b.rows} rows, need {m.rows}")
    order = min(m.order, b.order)
    n = m.rows
    a = [[e.truncate(order) for e in row] + [e.truncate(order) for e in rhs]
         for row, rhs in zip(m.entries, b.entries)]
    width = len(a[0])
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col].coeffs[0]), None)
        if pivot is None:
            raise DegenerateFrameError(
                "degenerate frame: constant-term matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        a[col] = [e * inv for e in a[col]]
        for r in range(n):
            if r == col:
                continue
            factor = a[r][col]
            if factor.is_zero():
                continue
            a[r] = [x - factor * y if not y.is_zero() else x
                    for x, y in zip(a[r], a[col])]
    return JetMatrix([row[n:width] for row in a])


def matrix_poly_eval(coeffs, a: JetMatrix) -> JetMatrix:
    """Horner evaluation of ``sum coeffs[k] t^k`` at the matrix ``a``.

    Coefficients may be rationals or scalar jets.
    """
    if a.rows != a.cols:
        raise DimensionError("matrix_poly_eval needs a square matrix")
    coeffs = list(coeffs)
    result = JetMatrix.zeros(a.rows, a.cols, a.nvars, a.order)
    for c in reversed(coeffs):
        result = (result @ a).add_scalar(c)
    return result


def charpoly(m: JetMatrix):
    """Coefficients ``c_0..c_s`` of ``det(t I - m)`` (Faddeev-LeVerrier)."""
    if m.rows != m.cols:
        raise DimensionError("charpoly needs a square matrix")
    s = m.rows
    coeffs = [None] * (s + 1)
    coeffs[s] = Jet.constant(m.nvars, m.order, 1)
    mk = JetMatrix.zeros(s, s, m.nvars, m.order)
    for k in range(1, s + 1):
        mk = (m @ mk).add_scalar(coeffs[s - k + 1])
        coeffs[s - k] = (m @ mk).trace().scale(mpq(-1, k))
    return coeffs


# -- exact rational linear algebra ----------------------------------------

def _rat_matrix(values):
    return [[rational(v) for v in row] for row in values]


def rat_det(values) -> mpq:
    a = _rat_matrix(values)
    n = len(a)
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def rat_solve(m, b):
    """Solve ``m z = b`` exactly; ``b`` is a list of rows.  Raises on singular ``m``."""
    a = [row + rhs for row, rhs in zip(_rat_matrix(m), _rat_matrix(b))]
    n = len(a)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("singular rational matrix")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def rat_inverse(m):
    n = len(m)
    return rat_solve(m, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])


def rat_rank(values) -> int:
    a = _rat_matrix(values)
    rank = 0
    cols = len(a[0]) if a else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, len(a)):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def rat_matmul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in zip(*b)]
            for row in a]
