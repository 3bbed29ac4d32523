"""Gromov-Witten numbers from derivatives of the quantum potential.

At the base point, a derivative of ``f`` with divisor orders ``m`` and
non-divisor orders ``k'`` equals ``sum_l l^m q^l N_{l,k'}`` over the finitely
many divisor classes ``l`` allowed by the grading.  A polynomial ``P_k`` with
``P_k(l) = delta_kl`` on those nodes therefore isolates ``q^k N_{k,k'}``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import product

from gmpy2 import mpq

from .errors import GradingError, InsufficientOrderError
from .grading import InitialData, on_grading, solve_grading
from .integrator import BasePoint, SolutionJet, jet_f_derivative
from .model import FanoModel
from .numeric.jet import ONE, ZERO, monomials
from .numeric.matrix import rat_rank, rat_solve


class NonIntegralWarning(UserWarning):
    pass


class CrossCheckError(AssertionError):
    pass


def _poly_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, ZERO) + c1 * c2
    return {e: c for e, c in out.items() if c}


def poly_value(poly, point):
    total = ZERO
    for exps, c in poly.items():
        term = c
        for v, e in zip(point, exps):
            term *= mpq(v) ** e
        total += term
    return total


@dataclass(frozen=True)
class InterpolationBasis:
    nodes: tuple
    polys: dict     # node -> {exponent tuple: coefficient}

    def coefficients(self, node):
        return self.polys[tuple(node)]

    def is_kronecker(self):
        return all(poly_value(self.polys[l], k) == (ONE if k == l else ZERO)
                   for l in self.nodes for k in self.nodes)

    def max_degree(self, node):
        return max(sum(e) for e in self.polys[tuple(node)])


def lagrange_basis(nodes, lift: int = 0) -> InterpolationBasis:
    """Kronecker polynomials on lattice ``nodes`` built from separating coordinates.

    For each other node ``l'`` the factor uses the first coordinate where it
    differs from ``l``.  With ``lift > 0`` each polynomial is multiplied by
    ``(t_a / l_a)^lift`` for the first nonzero coordinate ``a`` of ``l``, so
    every monomial has degree at least ``lift``; this keeps the Kronecker
    property on nodes without a zero vector.
    """
    nodes = tuple(tuple(int(v) for v in n) for n in nodes)
    if not nodes:
        raise ValueError("lagrange_basis needs at least one node")
    if len(set(nodes)) != len(nodes):
        raise ValueError("duplicate interpolation nodes")
    dim = len(nodes[0])
    zero = (0,) * dim
    polys = {}
    for l in nodes:
        poly = {zero: ONE}
        for other in nodes:
            if other == l:
                continue
            a = next(i for i in range(dim) if l[i] != other[i])
            denom = mpq(l[a] - other[a])
            unit = tuple(1 if i == a else 0 for i in range(dim))
            factor = {unit: ONE / denom}
            if other[a]:
                factor[zero] = mpq(-other[a]) / denom
            poly = _poly_mul(poly, factor)
        if lift:
            a = next((i for i in range(dim) if l[i]), None)
            if a is None:
                raise ValueError("cannot lift the interpolation polynomial of the zero node")
            unit = tuple(lift if i == a else 0 for i in range(dim))
            poly = _poly_mul(poly, {unit: ONE / mpq(l[a]) ** lift})
        polys[l] = poly
    basis = InterpolationBasis(nodes=nodes, polys=polys)
    if not basis.is_kronecker():
        raise ArithmeticError("interpolation basis lost the Kronecker property")
    return basis


@dataclass
class GWTable:
    model: str
    base: BasePoint
    order: int
    rho: int = 1
    values: dict = field(default_factory=dict)   # full multi-index -> rational

    def sorted_items(self):
        return sorted(self.values.items(),
                      key=lambda kv: (sum(kv[0][:self.rho]), kv[0]))

    def to_tsv(self) -> str:
        sigma = len(self.base.xi)
        lines = [
            f"# model\t{self.model}",
            "# base\txi=" + ",".join(map(str, self.base.xi))
            + "\tq=" + ",".join(map(str, self.base.q)),
            f"# order\t{self.order}",
            "\t".join([f"k{i}" for i in range(1, sigma + 1)] + ["N"]),
        ]
        for k, v in self.sorted_items():
            lines.append("\t".join([*map(str, k), str(v)]))
        return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> dict:
    values = {}
    for line in text.splitlines():
        if not line or line.startswith("#") or line.startswith("k"):
            continue
        *k, v = line.split("\t")
        values[tuple(int(x) for x in k)] = mpq(v)
    return values


def _split(m: FanoModel, k):
    k = tuple(int(v) for v in k)
    if len(k) != m.sigma:
        raise GradingError(f"target needs {m.sigma} entries, got {len(k)}")
    if min(k) < 0:
        raise GradingError(f"negative multiplicity in {k}")
    if not on_grading(m, k) or not any(k[:m.rho]):
        raise GradingError(f"target {k} does not satisfy the degree condition")
    return k[:m.rho], k[m.rho:]


def target_plan(m: FanoModel, k):
    """``(basis, nondiv, required_order)`` used to extract target ``k``."""
    kdiv, nondiv = _split(m, k)
    nodes = solve_grading(m, nondiv)
    lift = max(0, 2 - sum(nondiv))
    basis = lagrange_basis(nodes, lift=lift)
    required = basis.max_degree(kdiv) + sum(nondiv) - 2
    return basis, nondiv, required


def extract_one(m: FanoModel, sol: SolutionJet, k) -> mpq:
    basis, nondiv, required = target_plan(m, k)
    if required > sol.order:
        raise InsufficientOrderError(required, sol.order)
    kdiv = tuple(k[:m.rho])
    total = ZERO
    for exps, coef in sorted(basis.coefficients(kdiv).items()):
        total += coef * jet_f_derivative(sol, exps + nondiv)
    return total / sol.base.q_power(kdiv)


def extract_linear(m: FanoModel, sol: SolutionJet, k) -> mpq:
    """Same number by solving the derivative equations over all nodes directly."""
    kdiv, nondiv = _split(m, k)
    nodes = solve_grading(m, nondiv)
    start = max(0, 2 - sum(nondiv))
    rows, rhs = [], []
    degree = start
    while len(rows) < len(nodes):
        if degree + sum(nondiv) - 2 > sol.order:
            raise InsufficientOrderError(degree + sum(nondiv) - 2, sol.order)
        for exps in monomials(m.rho, degree):
            if sum(exps) != degree:
                continue
            row = [poly_value({exps: ONE}, l) for l in nodes]
            if rat_rank(rows + [row]) > len(rows):
                rows.append(row)
                rhs.append([jet_f_derivative(sol, exps + nondiv)])
            if len(rows) == len(nodes):
                break
        degree += 1
    solution = rat_solve(rows, rhs)
    weighted = solution[nodes.index(kdiv)][0]
    return weighted / sol.base.q_power(kdiv)


def extract(m: FanoModel, base: BasePoint, sol: SolutionJet, targets,
            cross_check: bool = True, warn: bool = True) -> GWTable:
    table = GWTable(model=m.name, base=base, order=sol.order, rho=m.rho)
    for k in targets:
        k = tuple(int(v) for v in k)
        value = extract_one(m, sol, k)
        if cross_check:
            other = extract_linear(m, sol, k)
            if other != value:
                raise CrossCheckError(
                    f"interpolation and linear solve disagree at {k}: {value} vs {other}")
        if warn and value.denominator != 1:
            warnings.warn(f"non-integral Gromov-Witten number N{k} = {value}",
                          NonIntegralWarning, stacklevel=2)
        table.values[k] = value
    return table


def targets_of_degree(m: FanoModel, kdiv):
    """All full targets with divisor part ``kdiv``."""
    kdiv = tuple(kdiv)
    total = sum(ka * m.c[a] for a, ka in zip(m.divisors(), kdiv))
    need = total - 3 + m.n
    weights = [m.p[a] - 1 for a in m.non_divisors()]
    if need < 0:
        return []
    out = []

    def rec(i, left, acc):
        if i == len(weights):
            if left == 0:
                out.append(kdiv + tuple(acc))
            return
        for v in range(left // weights[i], -1, -1):
            rec(i + 1, left - v * weights[i], acc + [v])

    rec(0, need, [])
    return sorted(out)


def enumerate_targets(m: FanoModel, max_degree=None, max_order=None):
    """Targets with ``1 <= sum k_div <= max_degree`` and/or required order ``<= max_order``.

    With only ``max_order`` given, degrees are scanned until no target of a
    degree can fit; ``sum_{a>rho} k_a`` grows at least linearly with degree.
    """
    if max_degree is None and max_order is None:
        raise ValueError("need a degree bound or an order bound")
    found = []
    degree = 1
    pmax = max([m.p[a] - 1 for a in m.non_divisors()], default=1)
    cmin = min(m.c[a] for a in m.divisors())
    while True:
        if max_degree is not None and degree > max_degree:
            break
        if max_degree is None:
            lower = (cmin * degree - 3 + m.n) / pmax - 2
            if lower > max_order:
                break
        for kdiv in product(range(degree + 1), repeat=m.rho):
            if sum(kdiv) != degree:
                continue
            for k in targets_of_degree(m, kdiv):
                if max_order is not None and target_plan(m, k)[2] > max_order:
                    continue
                found.append(k)
        degree += 1
    return sorted(set(found), key=lambda k: (sum(k[:m.rho]), k))


def initial_targets(init: InitialData):
    return [k for k, _ in init.items()]
