"""Exact Taylor-jet propagation of the reduced Pfaff system ``dy_ab = r_abc dx_c``.

The base point lies on the small quantum locus ``x_a = 0`` for ``a > rho``.
Divisor coordinates enter the structure functions only linearly through the
classical cubic, while the quantum part depends on them through
``exp(x_a)``; the two are carried as independent rationals ``xi_a`` and
``q_a``.  Directions are embedded as ``x_a = xi_a + t_a``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import factorial, prod

from gmpy2 import mpq

from .errors import DimensionError, InsufficientOrderError, IntegrabilityError, NonTameError
from .grading import InitialData
from .model import FanoModel, ensure_valid
from .numeric.jet import ZERO, Jet, degree_offsets, monomial_index, monomials, rational
from .structure import (StructureEvaluator, associativity_from_R, constraint_from_r,
                        tameness_report)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasePoint:
    xi: tuple   # xi_1..xi_sigma, zero beyond rho
    q: tuple    # q_1..q_rho, nonzero stand-ins for exp(xi_a)

    @classmethod
    def default(cls, m: FanoModel, q=None, xi=None):
        q = tuple(rational(v) for v in (q if q is not None else [1] * m.rho))
        xi = list(xi) if xi is not None else [0] * m.rho
        if len(q) != m.rho or len(xi) not in (m.rho, m.sigma):
            raise DimensionError(f"base point needs rho={m.rho} values of q and xi")
        xi = tuple(rational(v) for v in xi) + (ZERO,) * (m.sigma - len(xi))
        base = cls(xi=xi, q=q)
        base.check(m)
        return base

    def check(self, m: FanoModel):
        if len(self.xi) != m.sigma or len(self.q) != m.rho:
            raise DimensionError("base point has the wrong shape")
        if any(self.xi[a - 1] for a in m.non_divisors()):
            raise DimensionError("xi_a must vanish for non-divisor classes")
        if any(not v for v in self.q):
            raise DimensionError("q_a must be nonzero")

    def q_power(self, kdiv):
        return prod((qa ** ka for qa, ka in zip(self.q, kdiv)), start=mpq(1))

    def __str__(self):
        xi = ",".join(map(str, self.xi))
        q = ",".join(map(str, self.q))
        return f"xi=({xi}) q=({q})"


@dataclass(frozen=True)
class SolutionJet:
    model: FanoModel
    base: BasePoint
    order: int
    y: dict          # (a, b) -> Jet in t_1..t_sigma, both index orders present
    x_embed: tuple   # x_a = xi_a + t_a
    rows: tuple      # frame rows used throughout
    checked: int     # number of integrability comparisons performed

    def coeff(self, a, b, exps):
        return self.y[(a, b)].coeff(exps)


def initial_y(m: FanoModel, base: BasePoint, init: InitialData, warn: bool = True):
    """Second derivatives of the quantum part at the base point, from initial numbers.

    Only classes with at most two non-divisor insertions contribute, so the
    sum is finite.
    """
    ensure_valid(m)
    init.check(m, warn=warn)
    sigma, rho = m.sigma, m.rho
    y = {}
    for a in range(1, sigma + 1):
        for b in range(a, sigma + 1):
            mult = [0] * sigma
            mult[a - 1] += 1
            mult[b - 1] += 1
            pattern = tuple(mult[rho:])
            total = ZERO
            for k, value in init.items():
                if tuple(k[rho:]) != pattern:
                    continue
                kdiv = k[:rho]
                weight = prod((kc ** mc for kc, mc in zip(kdiv, mult[:rho])), start=1)
                total += weight * base.q_power(kdiv) * value
            y[(a, b)] = y[(b, a)] = total
    return y


def _embed(m: FanoModel, base: BasePoint, order: int):
    return tuple(Jet.variable(m.sigma, order, a, shift=base.xi[a - 1])
                 for a in range(1, m.sigma + 1))


def propagate(m: FanoModel, base: BasePoint, y0: dict, order: int,
              rows=None, progress=None) -> SolutionJet:
    """Fill the Taylor jet of ``y`` degree by degree up to ``order``.

    Each coefficient of degree ``d+1`` of ``y_ab`` is read off from degree
    ``d`` of every ``r_abc`` with ``m_c > 0``; all such readings must agree.
    """
    ensure_valid(m)
    base.check(m)
    if order < 0:
        raise DimensionError("order must be nonnegative")
    sigma = m.sigma
    report = tameness_report(m, list(base.xi), y0)
    if not report.tame:
        raise NonTameError(f"base point {base} is not tame (discriminant 0)")
    latin = [(a, b) for a in range(1, sigma + 1) for b in range(a, sigma + 1)]
    coeffs = {ab: [rational(y0.get(ab, 0))] for ab in latin}
    evaluator = StructureEvaluator(m, rows)
    checked = 0
    if order == 0:
        # still certify a frame at the base point
        xj = _embed(m, base, 0)
        evaluator.reduced(xj, {k: Jet.constant(sigma, 0, rational(y0.get(k, 0)))
                              for k in _full(latin)})

    for d in range(order):
        xj = _embed(m, base, d)
        yj = {}
        for (a, b) in latin:
            jet = Jet(sigma, d, coeffs[(a, b)])
            yj[(a, b)] = yj[(b, a)] = jet
        r = evaluator.reduced(xj, yj)
        offs = degree_offsets(sigma, d + 1)
        block = monomials(sigma, d + 1)[offs[d + 1]:offs[d + 2]]
        index = monomial_index(sigma, d)
        for (a, b) in latin:
            new = []
            for mono in block:
                value = None
                for c in range(1, sigma + 1):
                    mc = mono[c - 1]
                    if not mc:
                        continue
                    lower = list(mono)
                    lower[c - 1] -= 1
                    cand = r[(a, b, c)].coeffs[index[tuple(lower)]] / mc
                    if value is None:
                        value = cand
                    else:
                        checked += 1
                        if cand != value:
                            raise IntegrabilityError(
                                f"integrability failure at y_{a}{b}, monomial {mono}: "
                                f"{value} vs {cand} (direction {c})")
                new.append(value)
            coeffs[(a, b)].extend(new)
        if progress is not None:
            progress(d + 1, order)
        log.debug("propagated to order %d", d + 1)

    y = {}
    for (a, b) in latin:
        y[(a, b)] = y[(b, a)] = Jet(sigma, order, coeffs[(a, b)])
    return SolutionJet(model=m, base=base, order=order, y=y,
                       x_embed=_embed(m, base, order), rows=evaluator.rows,
                       checked=checked)


def _full(latin):
    out = []
    for a, b in latin:
        out.append((a, b))
        if a != b:
            out.append((b, a))
    return out


def jet_residuals(sol: SolutionJet):
    """Constraint and associativity residuals evaluated on the whole jet."""
    m = sol.model
    evaluator = StructureEvaluator(m, sol.rows)
    R = evaluator.full(list(sol.x_embed), sol.y)
    rng = range(1, m.sigma + 1)
    r = {(a, b, c): R[(a, b, c)] - m.g3[a][b][c] for a in rng for b in rng for c in rng}
    return constraint_from_r(m, list(sol.x_embed), sol.y, r), associativity_from_R(m, R)


def _choose_pair(mult):
    nz = [i for i, v in enumerate(mult) if v]
    if not nz:
        return None
    a = nz[0]
    if mult[a] >= 2:
        return a + 1, a + 1
    if len(nz) < 2:
        return None
    return a + 1, nz[1] + 1


def jet_f_derivative(sol: SolutionJet, mult, pair=None):
    """Mixed partial ``d^mult f`` at the base point, read from the ``y`` jet."""
    mult = tuple(mult)
    if len(mult) != sol.model.sigma:
        raise DimensionError(f"multi-index needs {sol.model.sigma} entries")
    if pair is None:
        pair = _choose_pair(mult)
        if pair is None:
            raise DimensionError(f"derivative {mult} has order < 2; not stored in the jet")
    a, b = pair
    rest = list(mult)
    rest[a - 1] -= 1
    rest[b - 1] -= 1
    if min(rest) < 0:
        raise DimensionError(f"pair {pair} not contained in {mult}")
    if sum(rest) > sol.order:
        raise InsufficientOrderError(sum(rest), sol.order)
    weight = prod(factorial(e) for e in rest)
    return sol.y[(a, b)].coeff(rest) * weight
