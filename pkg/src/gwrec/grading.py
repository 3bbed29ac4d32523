"""Degree conditions on curve classes and the finite set of initial numbers."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .errors import ConditionCError, GradingError, InitialDataError
from .model import FanoModel, condition_c

# Insertion pattern of non-divisor classes for each kind of initial number.
INITIAL_KINDS = ("none", "single", "pair", "double")


class MissingInitialDataWarning(UserWarning):
    pass


@dataclass(frozen=True, order=True)
class InitialKey:
    k: tuple      # full multi-index k_1..k_sigma
    kind: str

    def __str__(self):
        return "N " + " ".join(map(str, self.k))


def _require_c(m: FanoModel):
    if not condition_c(m):
        raise ConditionCError()


def grading_rhs(m: FanoModel, nondiv) -> int:
    """Required value of ``sum_{a<=rho} k_a c_a`` given the non-divisor part."""
    nondiv = tuple(nondiv)
    if len(nondiv) != m.sigma - m.rho:
        raise GradingError(
            f"non-divisor part needs {m.sigma - m.rho} entries, got {len(nondiv)}")
    return sum(k * (m.p[a] - 1) for a, k in zip(m.non_divisors(), nondiv)) + 3 - m.n


def on_grading(m: FanoModel, k) -> bool:
    k = tuple(k)
    div, nondiv = k[:m.rho], k[m.rho:]
    return sum(ka * m.c[a] for a, ka in zip(m.divisors(), div)) == grading_rhs(m, nondiv)


def _compositions(weights, total):
    """Nonnegative vectors ``v`` with ``sum v_i w_i == total`` (all ``w_i > 0``)."""
    if not weights:
        if total == 0:
            yield ()
        return
    w, rest = weights[0], weights[1:]
    for v in range(total // w, -1, -1):
        for tail in _compositions(rest, total - v * w):
            yield (v,) + tail


def solve_grading(m: FanoModel, nondiv) -> list:
    """Nonzero divisor multiplicities ``(k_1..k_rho)`` compatible with ``nondiv``.

    The zero class is excluded: degree-zero contributions live in the
    classical cubic term, not in the quantum part.
    """
    _require_c(m)
    rhs = grading_rhs(m, nondiv)
    if rhs <= 0:
        return []
    weights = tuple(m.c[a] for a in m.divisors())
    return sorted(_compositions(weights, rhs))


def _pattern(m: FanoModel, a=None, b=None):
    nondiv = [0] * (m.sigma - m.rho)
    for idx in (a, b):
        if idx is not None:
            nondiv[idx - m.rho - 1] += 1
    return tuple(nondiv)


def initial_patterns(m: FanoModel):
    """``(kind, nondiv)`` for every insertion pattern with at most two points."""
    out = [("none", _pattern(m))]
    nd = list(m.non_divisors())
    out += [("single", _pattern(m, a)) for a in nd]
    out += [("pair", _pattern(m, a, b)) for i, a in enumerate(nd) for b in nd[i + 1:]]
    out += [("double", _pattern(m, a, a)) for a in nd]
    return out


def initial_classes(m: FanoModel) -> list:
    """Every multi-index whose number must be supplied as initial data."""
    _require_c(m)
    keys = []
    for kind, nondiv in initial_patterns(m):
        for div in solve_grading(m, nondiv):
            keys.append(InitialKey(k=div + nondiv, kind=kind))
    return sorted(keys)


def kind_of(m: FanoModel, k) -> str | None:
    """Initial-number kind of ``k``, or ``None`` if ``k`` is not an initial class."""
    nondiv = tuple(k)[m.rho:]
    total = sum(nondiv)
    if total > 2 or not any(tuple(k)[:m.rho]) or not on_grading(m, k):
        return None
    if total == 0:
        return "none"
    if total == 1:
        return "single"
    return "double" if max(nondiv) == 2 else "pair"


@dataclass
class InitialData:
    """Integer Gromov-Witten numbers of the initial classes, keyed by full multi-index."""

    values: dict = field(default_factory=dict)

    def __getitem__(self, k):
        return self.values.get(tuple(k), 0)

    def items(self):
        return sorted(self.values.items())

    def check(self, m: FanoModel, warn: bool = True) -> "InitialData":
        _require_c(m)
        for k, v in self.values.items():
            if len(k) != m.sigma:
                raise InitialDataError(f"N {k}: need {m.sigma} indices")
            if kind_of(m, k) is None:
                raise InitialDataError(
                    f"N {' '.join(map(str, k))} is not an initial class of {m.name}")
            if int(v) != v:
                raise InitialDataError(f"initial numbers must be integers, got {v}")
        if warn:
            missing = [key for key in initial_classes(m) if key.k not in self.values]
            for key in missing:
                warnings.warn(f"initial number {key} missing, taken as 0",
                              MissingInitialDataWarning, stacklevel=2)
        return self


def parse_initial_line(line: str, lineno=None):
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    where = f"line {lineno}: " if lineno is not None else ""
    lhs, sep, rhs = text.partition("=")
    tokens = lhs.split()
    if not sep or not tokens or tokens[0] != "N" or len(tokens) < 2:
        raise InitialDataError(f"{where}expected 'N k1 ... ks = value'")
    try:
        k = tuple(int(t) for t in tokens[1:])
        value = int(rhs.strip())
    except ValueError:
        raise InitialDataError(f"{where}non-integer entry in {text!r}") from None
    if any(x < 0 for x in k):
        raise InitialDataError(f"{where}multiplicities must be nonnegative")
    return k, value


def parse_initial_data(text: str) -> InitialData:
    data = InitialData()
    for lineno, line in enumerate(text.splitlines(), 1):
        parsed = parse_initial_line(line, lineno)
        if parsed is None:
            continue
        k, value = parsed
        if k in data.values and data.values[k] != value:
            raise InitialDataError(f"line {lineno}: conflicting value for N {k}")
        data.values[k] = value
    return data
