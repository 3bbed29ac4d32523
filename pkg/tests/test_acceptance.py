"""Acceptance criteria, one test per criterion.

Each test records a ``PASS``/``FAIL`` line (criterion, tolerance, runtime
against its budget) that is printed in the pytest terminal summary, and
also printed directly when run with ``-s``.
"""
import random
import time
from contextlib import contextmanager
from itertools import combinations, permutations

from gmpy2 import mpq

from gwrec.errors import DegenerateFrameError, NonTameError
from gwrec.extract import enumerate_targets, extract, target_plan
from gwrec.grading import InitialData, initial_classes
from gwrec.integrator import BasePoint, initial_y, jet_residuals, propagate
from gwrec.model import builtin
from gwrec.numeric import Jet, JetMatrix, charpoly, jet_inv, jetmat_solve, matrix_poly_eval
from gwrec.numeric.jet import n_monomials
from gwrec.oracles import kontsevich, p1_solution, p2_closed_r
from gwrec.structure import (associativity_from_R, constraint_residual,
                             euler_matrix, frame_is_valid, minor_frame, reduced_r, rootsum_R)

from conftest import ACCEPTANCE_LINES


@contextmanager
def criterion(number, title, tolerance, budget):
    start = time.perf_counter()
    status = "FAIL"
    detail = ""
    try:
        yield
        status = "PASS"
    except AssertionError as exc:
        detail = f" ({str(exc).splitlines()[0][:80]})" if str(exc) else ""
        raise
    finally:
        elapsed = time.perf_counter() - start
        if status == "PASS" and elapsed >= budget:
            status = "FAIL"
            detail = " (over time budget)"
        line = (f"[{status}] criterion {number}: {title}; tolerance {tolerance}; "
                f"{elapsed:.2f}s of {budget:g}s{detail}")
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed < budget, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"


def rnd(rng):
    return mpq(rng.randint(-12, 12), rng.randint(1, 12))


def pipeline(name, init, order, q=None):
    m = builtin(name)
    base = BasePoint.default(m, q=q)
    sol = propagate(m, base, initial_y(m, base, InitialData(init)), order)
    return m, base, sol


def p2_sample_points(count=20, seed=2):
    rng = random.Random(seed)
    points = []
    while len(points) < count:
        x1, x2, y11, y12, y22 = (rnd(rng) for _ in range(5))
        if 27 + 3 * x2 * y11 - 2 * x2 * x2 * y12 == 0:
            continue
        points.append(([x1, x2], {(1, 1): y11, (1, 2): y12, (2, 2): y22}))
    return points


def test_criterion_1_p1_identity():
    with criterion(1, "P1 r111 = y11 at 20 random points and jet = q exp(t1) at order 8",
                   "exact", 1):
        m = builtin("P1")
        rng = random.Random(1)
        checked = 0
        while checked < 20:
            x, y11 = rnd(rng), rnd(rng)
            if y11 == 0:
                continue
            assert reduced_r(m, [x], {(1, 1): y11})[(1, 1, 1)] == y11
            checked += 1
        for q in (1, mpq(3, 2)):
            _, _, sol = pipeline("P1", {(1,): 1}, 8, q=[q])
            assert sol.y[(1, 1)] == p1_solution(q, 8)


def test_criterion_2_p2_closed_forms():
    with criterion(2, "P2 reduced_r equals the closed forms at 20 random points", "exact", 5):
        m = builtin("P2")
        for x, y in p2_sample_points():
            r = reduced_r(m, x, y)
            got = (r[(1, 1, 1)], r[(1, 1, 2)], r[(1, 2, 2)], r[(2, 2, 2)])
            assert got == p2_closed_r(x[1], y[(1, 1)], y[(1, 2)], y[(2, 2)]), (x, y)


def test_criterion_3_p2_constraint():
    with criterion(3, "P2 constraint residual zero at random points and along order-17 jet",
                   "exact", 30):
        m = builtin("P2")
        for x, y in p2_sample_points():
            assert all(v == 0 for v in constraint_residual(m, x, y).values())
        _, _, sol = pipeline("P2", {(1, 2): 1}, 17)
        constraint, _ = jet_residuals(sol)
        assert all(v.is_zero() for v in constraint.values())


def _kontsevich_run(q):
    m, base, sol = pipeline("P2", {(1, 2): 1}, 17, q=[q])
    table = extract(m, base, sol, enumerate_targets(m, max_degree=6), cross_check=True)
    return [table.values[(d, 3 * d - 1)] for d in range(1, 7)]


def test_criterion_4_kontsevich():
    with criterion(4, "P2 pipeline at q=1, order 17 reproduces N_1..N_6", "exact", 300):
        got = _kontsevich_run(1)
        assert got == kontsevich(6), got


def test_criterion_5_base_point_invariance():
    with criterion(5, "P2 pipeline at q=2 gives the same N_1..N_6", "exact", 300):
        assert _kontsevich_run(2) == _kontsevich_run(1) == kontsevich(6)


def test_criterion_6_structural_identities():
    with criterion(6, "orthogonality, symmetry, frame independence, associativity "
                   "at random Y for every built-in", "exact", 60):
        rng = random.Random(6)
        for name in ("P1", "P2", "P3", "P4", "P1xP1"):
            m = builtin(name)
            s = m.size
            done = 0
            while done < 3:
                Y = [[None] * s for _ in range(s)]
                for a in range(s):
                    for b in range(a, s):
                        Y[a][b] = Y[b][a] = rnd(rng)
                try:
                    R = rootsum_R(m, Y, ordered=True)
                except (NonTameError, DegenerateFrameError):
                    continue
                done += 1
                for idx, v in R.items():
                    assert all(R[p] == v for p in permutations(idx)), (name, idx)
                for a in range(s):
                    for b in range(s):
                        assert R[(a, b, 0)] == m.metric[a][b], (name, a, b)
                assert all(v == 0 for v in associativity_from_R(m, R).values()), name
                em = euler_matrix(m, Y)
                shared = {k: R[k] for k in R}
                for rows in combinations(range(s), m.sigma):
                    if frame_is_valid(em, minor_frame(em.A, rows)):
                        assert rootsum_R(m, Y, rows=rows) == shared, (name, rows)


def test_criterion_7_p3_properties():
    with criterion(7, "P3 from N_{1,0,2}=1 at order 8: integral table, zero residuals, "
                   "integrability", "exact", 600):
        m, base, sol = pipeline("P3", {(1, 0, 2): 1}, 8)
        assert sol.checked > 0
        table = extract(m, base, sol, enumerate_targets(m, max_order=8), cross_check=True)
        assert len(table.values) > 10
        assert all(v.denominator == 1 for v in table.values.values())
        constraint, assoc = jet_residuals(sol)
        assert all(v.is_zero() for v in constraint.values())
        assert all(v.is_zero() for v in assoc.values())


def test_criterion_8_round_trip():
    with criterion(8, "initial-class targets extract back to the input for P1, P2, P3",
                   "exact", 60):
        for name, init in (("P1", {(1,): 1}), ("P2", {(1, 2): 1}), ("P3", {(1, 0, 2): 1})):
            m = builtin(name)
            targets = [key.k for key in initial_classes(m)]
            assert sorted(targets) == sorted(init)
            order = max(1, max(target_plan(m, k)[2] for k in targets))
            _, base, sol = pipeline(name, init, order)
            assert extract(m, base, sol, targets).values == init, name


def _random_jet(rng, nvars, order):
    return Jet(nvars, order, [rnd(rng) for _ in range(n_monomials(nvars, order))])


def test_criterion_9_numeric_core():
    with criterion(9, "ring axioms, Cayley-Hamilton, inverse and solver properties",
                   "exact", 10):
        rng = random.Random(9)
        for _ in range(30):
            nvars, order = rng.randint(1, 3), rng.randint(0, 4)
            a, b, c = (_random_jet(rng, nvars, order) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a * (b * c) == (a * b) * c
            assert a * (b + c) == a * b + a * c
            if a.constant_term() != 0:
                assert jet_inv(jet_inv(a)) == a
                assert a * jet_inv(a) == Jet.constant(nvars, order, 1)
        for _ in range(20):
            size = rng.randint(1, 4)
            M = JetMatrix.from_rational([[rnd(rng) for _ in range(size)]
                                         for _ in range(size)], 1, 0)
            assert matrix_poly_eval(charpoly(M), M).is_zero()
        for _ in range(10):
            size = rng.randint(1, 3)
            M = JetMatrix([[_random_jet(rng, 2, 2) for _ in range(size)] for _ in range(size)])
            Z0 = JetMatrix([[_random_jet(rng, 2, 2) for _ in range(size)] for _ in range(size)])
            assert matrix_poly_eval(charpoly(M), M).is_zero()
            try:
                assert jetmat_solve(M, M @ Z0) == Z0
            except DegenerateFrameError:
                pass
