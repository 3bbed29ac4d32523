"""Dense truncated multivariate power series over exact rationals.

Coefficients are stored in a flat list indexed by monomials in graded
order: all monomials of total degree 0, then degree 1, and so on, each
degree block listed in descending lexicographic order.  Because the
ordering of a degree block does not depend on the truncation order, the
coefficients of a jet truncated at order ``d`` form a prefix of the
coefficients of the same jet at any higher order.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping

from gmpy2 import mpq

from ..errors import DimensionError, NonInvertibleJetError

ZERO = mpq(0)
ONE = mpq(1)


def rational(value) -> mpq:
    """Coerce ints, Fractions, strings like ``"3/4"`` and mpq to mpq."""
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


def n_monomials(nvars: int, order: int) -> int:
    return comb(order + nvars, nvars)


def _degree_block(nvars: int, degree: int):
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in _degree_block(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def monomials(nvars: int, order: int) -> tuple:
    """Exponent tuples of all monomials up to ``order`` in storage order."""
    out = []
    for d in range(order + 1):
        out.extend(_degree_block(nvars, d))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, order: int) -> dict:
    return {e: i for i, e in enumerate(monomials(nvars, order))}


@lru_cache(maxsize=None)
def degree_offsets(nvars: int, order: int) -> tuple:
    """``offsets[d]`` is the first storage index of degree ``d``."""
    return tuple(n_monomials(nvars, d - 1) if d else 0 for d in range(order + 2))


@lru_cache(maxsize=None)
def _product_table(nvars: int, order: int) -> tuple:
    # table[i][j] = index of monomial_i * monomial_j, for all j whose degree
    # keeps the product within the truncation order
    mons = monomials(nvars, order)
    index = monomial_index(nvars, order)
    offs = degree_offsets(nvars, order)
    table = []
    for ei in mons:
        limit = offs[order - sum(ei) + 1]
        table.append(tuple(
            index[tuple(a + b for a, b in zip(ei, mons[j]))] for j in range(limit)))
    return tuple(table)


class Jet:
    """Truncated power series in ``nvars`` variables up to total degree ``order``.

    Values are treated as immutable; every operation returns a new jet.
    """

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs=None):
        if nvars < 1 or order < 0:
            raise DimensionError(f"bad jet shape nvars={nvars} order={order}")
        size = n_monomials(nvars, order)
        self.nvars = nvars
        self.order = order
        if coeffs is None:
            self.coeffs = [ZERO] * size
        else:
            coeffs = list(coeffs)
            if len(coeffs) > size:
                coeffs = coeffs[:size]
            elif len(coeffs) < size:
                coeffs.extend([ZERO] * (size - len(coeffs)))
            self.coeffs = coeffs

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, nvars: int, order: int, value=0) -> "Jet":
        jet = cls(nvars, order)
        jet.coeffs[0] = rational(value)
        return jet

    @classmethod
    def variable(cls, nvars: int, order: int, c: int, shift=0) -> "Jet":
        """The jet ``shift + t_c`` (``c`` is 1-based)."""
        if not 1 <= c <= nvars:
            raise DimensionError(f"direction {c} out of range 1..{nvars}")
        jet = cls.constant(nvars, order, shift)
        if order >= 1:
            jet.coeffs[c] = ONE
        return jet

    @classmethod
    def from_dict(cls, nvars: int, order: int, terms: Mapping) -> "Jet":
        index = monomial_index(nvars, order)
        jet = cls(nvars, order)
        for exps, value in terms.items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise DimensionError(f"exponent {exps} has wrong length")
            if sum(exps) <= order:
                jet.coeffs[index[exps]] += rational(value)
        return jet

    # -- access -------------------------------------------------------
    def coeff(self, exps: Iterable[int]) -> mpq:
        exps = tuple(exps)
        if sum(exps) > self.order:
            raise IndexError(f"monomial {exps} exceeds order {self.order}")
        return self.coeffs[monomial_index(self.nvars, self.order)[exps]]

    def constant_term(self) -> mpq:
        return self.coeffs[0]

    def to_dict(self) -> dict:
        mons = monomials(self.nvars, self.order)
        return {mons[i]: c for i, c in enumerate(self.coeffs) if c}

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise DimensionError("cannot raise the order of a jet by truncation")
        return Jet(self.nvars, order, self.coeffs[:n_monomials(self.nvars, order)])

    def extend(self, order: int) -> "Jet":
        """Same coefficients viewed at a higher order (new slots are zero)."""
        return Jet(self.nvars, order, self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # -- arithmetic ---------------------------------------------------
    def _common(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise DimensionError(
                    f"nvars mismatch: {self.nvars} vs {other.nvars}")
            order = min(self.order, other.order)
            size = n_monomials(self.nvars, order)
            return order, self.coeffs[:size], other.coeffs[:size]
        return None

    def __add__(self, other):
        common = self._common(other)
        if common is None:
            out = Jet(self.nvars, self.order, self.coeffs)
            out.coeffs[0] = out.coeffs[0] + rational(other)
            return out
        order, a, b = common
        return Jet(self.nvars, order, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.nvars, self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "Jet":
        value = rational(value)
        if not value:
            return Jet(self.nvars, self.order)
        return Jet(self.nvars, self.order, [value * x for x in self.coeffs])

    def __mul__(self, other):
        common = self._common(other)
        if common is None:
            return self.scale(other)
        order, a, b = common
        out = [ZERO] * len(a)
        table = _product_table(self.nvars, order)
        for i, ai in enumerate(a):
            if ai:
                for bj, k in zip(b, table[i]):
                    if bj:
                        out[k] += ai * bj
        return Jet(self.nvars, order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.inverse()
        return self.scale(ONE / rational(other))

    def inverse(self) -> "Jet":
        """Multiplicative inverse by Newton iteration ``b <- b (2 - a b)``."""
        a0 = self.coeffs[0]
        if not a0:
            raise NonInvertibleJetError("non-invertible jet: zero constant term")
        b = Jet.constant(self.nvars, self.order, ONE / a0)
        precision = 0
        while precision < self.order:
            precision = min(2 * precision + 1, self.order)
            b = b.truncate(precision) if b.order > precision else b.extend(precision)
            a = self.truncate(precision)
            b = b * (2 - a * b)
        return b

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Jet.constant(self.nvars, self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Jet):
            common = self._common(other)
            return common[1] == common[2]
        try:
            value = rational(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.coeffs[0] == value and not any(self.coeffs[1:])

    __hash__ = None

    def __repr__(self):
        return f"Jet({self.nvars}, {self.order}, {format_jet(self)})"


def jet_add(a: Jet, b: Jet) -> Jet:
    return a + b


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_inv(a: Jet) -> Jet:
    return a.inverse()


def jet_exp_direction(c: int, order: int, nvars: int | None = None) -> Jet:
    """Truncated exponential series ``sum_{m <= order} t_c^m / m!``."""
    nvars = c if nvars is None else nvars
    if not 1 <= c <= nvars:
        raise DimensionError(f"direction {c} out of range 1..{nvars}")
    terms = {}
    for m in range(order + 1):
        e = [0] * nvars
        e[c - 1] = m
        terms[tuple(e)] = mpq(1, factorial(m))
    return Jet.from_dict(nvars, order, terms)


def format_jet(jet: Jet, names=None) -> str:
    names = names or [f"t{i + 1}" for i in range(jet.nvars)]
    parts = []
    for exps, c in jet.to_dict().items():
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"
