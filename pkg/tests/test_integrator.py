import dataclasses

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from gwrec.errors import (ConditionCError, DimensionError, InsufficientOrderError,
                          IntegrabilityError, NonTameError)
from gwrec.grading import InitialData, MissingInitialDataWarning
from gwrec.integrator import BasePoint, initial_y, jet_f_derivative, jet_residuals, propagate
from gwrec.model import builtin
from gwrec.oracles import p1_solution


def run(name, init, order, q=None):
    m = builtin(name)
    base = BasePoint.default(m, q=q)
    y0 = initial_y(m, base, InitialData(init))
    return propagate(m, base, y0, order)


class TestBasePoint:
    def test_default(self):
        base = BasePoint.default(builtin("P2"))
        assert base.xi == (0, 0) and base.q == (1,)
        assert str(base) == "xi=(0,0) q=(1)"

    def test_invalid(self):
        with pytest.raises(DimensionError):
            BasePoint.default(builtin("P2"), q=[0])
        with pytest.raises(DimensionError):
            BasePoint.default(builtin("P2"), q=[1, 2])
        with pytest.raises(DimensionError):
            BasePoint(xi=(0, 1), q=(1,)).check(builtin("P2"))


class TestInitialY:
    def test_p2(self):
        m = builtin("P2")
        y = initial_y(m, BasePoint.default(m), InitialData({(1, 2): 1}))
        assert (y[(1, 1)], y[(1, 2)], y[(2, 2)]) == (0, 0, 1)

    @given(st.integers(-5, 5).filter(bool), st.integers(1, 5))
    def test_p1(self, p, r):
        m = builtin("P1")
        q = mpq(p, r)
        y = initial_y(m, BasePoint.default(m, q=[q]), InitialData({(1,): 1}))
        assert y[(1, 1)] == q

    def test_p3(self):
        m = builtin("P3")
        y = initial_y(m, BasePoint.default(m, q=[3]), InitialData({(1, 0, 2): 1}))
        assert y[(3, 3)] == 3
        assert all(v == 0 for k, v in y.items() if k != (3, 3))

    def test_missing_warns(self):
        m = builtin("P2")
        with pytest.warns(MissingInitialDataWarning):
            y = initial_y(m, BasePoint.default(m), InitialData())
        assert all(v == 0 for v in y.values())

    def test_condition_c(self):
        m = dataclasses.replace(builtin("P2"), c=(0, 0, 0))
        with pytest.raises(ConditionCError):
            initial_y(m, BasePoint.default(m), InitialData())


class TestPropagate:
    def test_p1_exponential(self):
        for q in (1, 2, mpq(-1, 3)):
            sol = run("P1", {(1,): 1}, 8, q=[q])
            assert sol.y[(1, 1)] == p1_solution(q, 8)

    def test_p1_order3(self):
        sol = run("P1", {(1,): 1}, 3, q=[2])
        assert sol.y[(1, 1)].coeffs == [2, 2, 1, mpq(1, 3)]

    def test_p2_first_order(self):
        sol = run("P2", {(1, 2): 1}, 1)
        assert sol.coeff(2, 2, (1, 0)) == 1
        assert sol.coeff(2, 2, (0, 1)) == 0

    def test_order_zero(self):
        sol = run("P2", {(1, 2): 1}, 0)
        assert sol.order == 0 and sol.y[(2, 2)].coeffs == [1]

    def test_integrability_checked(self):
        sol = run("P2", {(1, 2): 1}, 6)
        assert sol.checked > 0

    def test_residuals_along_jet(self):
        for name, init, order in (("P1", {(1,): 1}, 6), ("P2", {(1, 2): 1}, 8),
                                  ("P3", {(1, 0, 2): 1}, 4)):
            constraint, assoc = jet_residuals(run(name, init, order))
            assert all(v.is_zero() for v in constraint.values())
            assert all(v.is_zero() for v in assoc.values())

    def test_non_tame(self):
        m = builtin("P1xP1")
        base = BasePoint.default(m, q=[1, 1])
        y0 = initial_y(m, base, InitialData({(1, 0, 1): 1, (0, 1, 1): 1}))
        with pytest.raises(NonTameError):
            propagate(m, base, y0, 2)

    def test_integrability_failure_detected(self, monkeypatch):
        import gwrec.integrator as integrator
        from gwrec.numeric import Jet

        class Skewed(integrator.StructureEvaluator):
            def reduced(self, xj, yj):
                r = super().reduced(xj, yj)
                t1 = Jet.variable(xj[0].nvars, xj[0].order, 1)
                r[(2, 2, 2)] = r[(2, 2, 2)] + t1
                return r

        monkeypatch.setattr(integrator, "StructureEvaluator", Skewed)
        with pytest.raises(IntegrabilityError, match="integrability failure at y_22"):
            run("P2", {(1, 2): 1}, 3)


class TestDerivative:
    def test_values(self):
        sol = run("P2", {(1, 2): 1}, 6)
        assert jet_f_derivative(sol, (0, 2)) == 1
        assert jet_f_derivative(sol, (1, 2)) == 1
        assert jet_f_derivative(sol, (2, 2), pair=(1, 1)) == jet_f_derivative(sol, (2, 2), pair=(2, 2))
        assert jet_f_derivative(sol, (2, 5), pair=(1, 2)) == jet_f_derivative(sol, (2, 5), pair=(2, 2))

    def test_errors(self):
        sol = run("P2", {(1, 2): 1}, 2)
        with pytest.raises(InsufficientOrderError, match="need 3, have 2"):
            jet_f_derivative(sol, (0, 5))
        with pytest.raises(DimensionError):
            jet_f_derivative(sol, (0, 1))
