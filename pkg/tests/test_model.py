import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gwrec.errors import ConditionCError, InvalidModelError, ModelSyntaxError
from gwrec.grading import initial_classes
from gwrec.model import (builtin, condition_c, ensure_valid, parse_model, projective_space,
                         serialize, validate)

P2_TEXT = """\
name P2
dim 2
sigma 2
rho 1
p 0 1 2
c 0 3 0
g 0 0 2 1
g 0 1 1 1
"""

BUILTINS = ["P1", "P2", "P3", "P4", "P1xP1"]


def _with(m, **changes):
    return dataclasses.replace(m, **changes)


class TestBuiltins:
    @pytest.mark.parametrize("name", BUILTINS)
    def test_valid_and_metric_inverse(self, name):
        m = builtin(name)
        assert validate(m).ok
        g, ginv = m.metric, m.metric_inverse
        s = m.size
        prod = [[sum(g[i][k] * ginv[k][j] for k in range(s)) for j in range(s)]
                for i in range(s)]
        assert prod == [[int(i == j) for j in range(s)] for i in range(s)]

    def test_p1(self):
        m = builtin("P1")
        assert (m.n, m.sigma, m.rho, m.c) == (1, 1, 1, (0, 2))
        assert m.metric[0][1] == 1 and m.g3[0][0][1] == 1

    def test_p2(self):
        m = builtin("P2")
        assert m.c == (0, 3, 0)
        assert [list(r) for r in m.metric_inverse] == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
        assert m.c2[0][1] == m.c2[1][0] == 3
        assert m.c2[0][0] == m.c2[1][1] == 0

    def test_pn(self):
        m = builtin("Pn", 3)
        assert m == projective_space(3)
        assert m.p == (0, 1, 2, 3) and m.c[1] == 4
        assert [k.k for k in initial_classes(m)] == [(1, 0, 2)]

    def test_pn_needs_n(self):
        with pytest.raises(ValueError):
            builtin("Pn")

    def test_unknown(self):
        with pytest.raises(ValueError):
            builtin("Q7")

    def test_euler_field(self):
        e = builtin("P2").euler
        assert e(1, 5) == 3 and e(2, 5) == -5 and e(0, 5) == 5


class TestValidate:
    def test_condition_c(self):
        m = _with(builtin("P2"), c=(0, 0, 0))
        report = validate(m)
        assert not report.ok
        assert any("Condition C" in f for f in report.failures)
        assert not condition_c(m)
        with pytest.raises(ConditionCError):
            ensure_valid(m)

    def test_symmetry(self):
        m = builtin("P2")
        g3 = [[list(r) for r in plane] for plane in m.g3]
        g3[0][2][2] = 1
        m = _with(m, g3=tuple(tuple(tuple(r) for r in plane) for plane in g3))
        report = validate(m)
        assert any("not symmetric" in f for f in report.failures)
        with pytest.raises(InvalidModelError):
            ensure_valid(m)

    def test_p_rules(self):
        report = validate(_with(builtin("P2"), p=(0, 2, 2)))
        assert not report.ok

    def test_c_off_divisor(self):
        report = validate(_with(builtin("P2"), c=(0, 3, 1)))
        assert not report.ok


class TestParse:
    def test_p2_file(self):
        assert parse_model(P2_TEXT) == builtin("P2")

    def test_comments_and_order(self):
        text = "# plane\n" + P2_TEXT.replace("g 0 1 1 1", "g 1 0 1 1  # line")
        assert parse_model(text) == builtin("P2")

    def test_missing_dim(self):
        with pytest.raises(ModelSyntaxError, match="dim"):
            parse_model(P2_TEXT.replace("dim 2\n", ""))

    def test_conflict(self):
        with pytest.raises(ModelSyntaxError, match="conflicting") as exc:
            parse_model(P2_TEXT + "g 1 1 0 2\n")
        assert exc.value.lineno == 9

    def test_unknown_key(self):
        with pytest.raises(ModelSyntaxError, match="line 3"):
            parse_model(P2_TEXT.replace("sigma 2", "sigmaa 2"))

    def test_validation_applied(self):
        with pytest.raises(ConditionCError):
            parse_model(P2_TEXT.replace("c 0 3 0", "c 0 0 0"))
        assert parse_model(P2_TEXT.replace("c 0 3 0", "c 0 0 0"), check=False).c == (0, 0, 0)

    @pytest.mark.parametrize("name", BUILTINS)
    def test_round_trip(self, name):
        m = builtin(name)
        assert parse_model(serialize(m)) == m
        assert serialize(parse_model(serialize(m))) == serialize(m)

    @given(st.integers(1, 6))
    def test_round_trip_pn(self, n):
        m = projective_space(n)
        assert parse_model(serialize(m)) == m
