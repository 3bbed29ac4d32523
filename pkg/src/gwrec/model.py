"""Cohomological input data of a Fano variety and its text file format.

The basis is ``h_0..h_sigma`` with ``h_0`` the unit, ``h_1..h_rho`` the
divisor classes and ``h_sigma`` the point class.  All intersection data are
integers; the inverse metric is the only derived rational object.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import combinations_with_replacement, permutations

from .errors import ConditionCError, InvalidModelError, ModelSyntaxError
from .numeric.matrix import rat_det, rat_inverse


@dataclass(frozen=True)
class EulerField:
    """``E_alpha(x) = constant[alpha] + weight[alpha] * x_alpha``."""

    constant: tuple
    weight: tuple

    def __call__(self, alpha, x_alpha):
        return x_alpha * self.weight[alpha] + self.constant[alpha]


@dataclass(frozen=True)
class FanoModel:
    name: str
    n: int
    sigma: int
    rho: int
    p: tuple
    g3: tuple  # dense (sigma+1)^3 nested tuples of ints
    c: tuple

    @property
    def size(self):
        return self.sigma + 1

    @cached_property
    def metric(self):
        """Intersection form ``g_ab = g_{0ab}``."""
        return tuple(tuple(self.g3[0][a][b] for b in range(self.size))
                     for a in range(self.size))

    @cached_property
    def metric_inverse(self):
        return tuple(tuple(row) for row in rat_inverse(self.metric))

    @cached_property
    def c2(self):
        """``c_ab = sum_g g_abg c_g``, the intersection numbers of ``c_1`` with pairs."""
        s = self.size
        return tuple(tuple(sum(self.g3[a][b][g] * self.c[g] for g in range(s))
                           for b in range(s)) for a in range(s))

    @cached_property
    def weights(self):
        """Integer matrix ``K_ab = 1 - n + p_a + p_b``."""
        return tuple(tuple(1 - self.n + pa + pb for pb in self.p) for pa in self.p)

    @cached_property
    def euler(self):
        return EulerField(tuple(self.c), tuple(1 - pa for pa in self.p))

    def divisors(self):
        return range(1, self.rho + 1)

    def non_divisors(self):
        return range(self.rho + 1, self.sigma + 1)

    def nonzero_triples(self):
        s = self.size
        for a, b, g in combinations_with_replacement(range(s), 3):
            if self.g3[a][b][g]:
                yield (a, b, g), self.g3[a][b][g]


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(f"FAIL: {f}" for f in self.failures)


def validate(m: FanoModel) -> ValidationReport:
    """Check every structural rule on ``m`` and report all failures at once."""
    report = ValidationReport()
    fail = report.failures.append
    s = m.sigma + 1
    if m.n < 1:
        fail(f"dimension must be positive, got {m.n}")
    if not 1 <= m.rho <= m.sigma:
        fail(f"rho={m.rho} must lie in 1..sigma={m.sigma}")
    if len(m.p) != s:
        fail(f"p has {len(m.p)} entries, need {s}")
        return report
    if len(m.c) != s:
        fail(f"c has {len(m.c)} entries, need {s}")
        return report
    if (len(m.g3) != s or any(len(r) != s for r in m.g3)
            or any(len(v) != s for r in m.g3 for v in r)):
        fail(f"g3 must be a {s}x{s}x{s} tensor")
        return report

    if m.p[0] != 0:
        fail("p_0 must be 0 (unit class)")
    if m.p[-1] != m.n:
        fail(f"p_sigma must equal n={m.n} (point class)")
    for a in range(1, s):
        if a <= m.rho and m.p[a] != 1:
            fail(f"divisor class h_{a} must have p=1, got {m.p[a]}")
        if a > m.rho and m.p[a] < 2:
            fail(f"non-divisor class h_{a} must have p>=2, got {m.p[a]}")
    if any(x > y for x, y in zip(m.p, m.p[1:])):
        fail("p must be non-decreasing")

    symmetric = True
    for a, b, g in combinations_with_replacement(range(s), 3):
        vals = {m.g3[i][j][k] for i, j, k in permutations((a, b, g))}
        if len(vals) > 1:
            symmetric = False
            fail(f"g3 not symmetric at ({a},{b},{g})")
        elif vals.pop() and m.p[a] + m.p[b] + m.p[g] != m.n:
            fail(f"g_{a}{b}{g} nonzero but p-degrees do not sum to n")
    if not symmetric:
        return report

    if rat_det(m.metric) == 0:
        fail("metric g_ab = g_0ab is degenerate")
    for a in range(s):
        if m.c[a] and not 1 <= a <= m.rho:
            fail(f"c_{a} must vanish: c_1(V) is a divisor class")
    for a in range(s):
        for b in range(s):
            if m.c2[a][b] and m.p[a] + m.p[b] != m.n - 1:
                fail(f"c_{a}{b} nonzero but p_a+p_b != n-1")
    for a in m.divisors():
        if m.c[a] <= 0:
            fail(f"Condition C violated: c_{a}={m.c[a]} is not positive")
    return report


def ensure_valid(m: FanoModel) -> FanoModel:
    report = validate(m)
    if not report.ok:
        if all(f.startswith("Condition C") for f in report.failures):
            raise ConditionCError("; ".join(report.failures))
        raise InvalidModelError(report.failures)
    return m


def condition_c(m: FanoModel) -> bool:
    return all(m.c[a] > 0 for a in m.divisors())


def _dense_g3(size, entries):
    g = [[[0] * size for _ in range(size)] for _ in range(size)]
    for (a, b, c), v in entries.items():
        for i, j, k in set(permutations((a, b, c))):
            g[i][j][k] = v
    return tuple(tuple(tuple(v) for v in row) for row in g)


def projective_space(n: int) -> FanoModel:
    """``P^n`` with basis ``1, H, ..., H^n``."""
    if n < 1:
        raise ValueError("P^n needs n >= 1")
    size = n + 1
    entries = {t: 1 for t in combinations_with_replacement(range(size), 3)
               if sum(t) == n}
    c = [0] * size
    c[1] = n + 1
    return FanoModel(name=f"P{n}", n=n, sigma=n, rho=1, p=tuple(range(size)),
                     g3=_dense_g3(size, entries), c=tuple(c))


_DATA_MODELS = {"p1xp1": "p1xp1.model"}


def builtin(name: str, n: int | None = None) -> FanoModel:
    """Built-in models ``P1``, ``P2``, ``Pn`` (with ``n``), ``P3`` etc., and ``P1xP1``."""
    key = name.strip()
    if key.lower() == "pn":
        if n is None:
            raise ValueError("builtin Pn needs n")
        return projective_space(n)
    if key[:1] in "Pp" and key[1:].isdigit():
        return projective_space(int(key[1:]))
    if key.lower() in _DATA_MODELS:
        text = resources.files("gwrec.data").joinpath(_DATA_MODELS[key.lower()]).read_text()
        return parse_model(text)
    raise ValueError(f"unknown builtin model {name!r}")


_SCALAR_KEYS = {"dim": "n", "sigma": "sigma", "rho": "rho"}


def parse_model(text: str, check: bool = True) -> FanoModel:
    """Parse the line-oriented model format; validates unless ``check`` is false."""
    fields: dict = {}
    entries: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        if key == "name":
            if len(args) != 1:
                raise ModelSyntaxError("name takes one label", lineno)
            _once(fields, "name", args[0], lineno)
            continue
        try:
            nums = [int(a) for a in args]
        except ValueError:
            raise ModelSyntaxError(f"non-integer argument in {key!r}", lineno) from None
        if key in _SCALAR_KEYS:
            if len(nums) != 1:
                raise ModelSyntaxError(f"{key} takes one integer", lineno)
            _once(fields, _SCALAR_KEYS[key], nums[0], lineno)
        elif key in ("p", "c"):
            if not nums:
                raise ModelSyntaxError(f"{key} needs values", lineno)
            _once(fields, key, tuple(nums), lineno)
        elif key == "g":
            if len(nums) != 4:
                raise ModelSyntaxError("g takes three indices and a value", lineno)
            idx = tuple(sorted(nums[:3]))
            if idx in entries and entries[idx][0] != nums[3]:
                raise ModelSyntaxError(
                    f"conflicting values for g {idx}: {entries[idx][0]} "
                    f"(line {entries[idx][1]}) vs {nums[3]}", lineno)
            entries[idx] = (nums[3], lineno)
        else:
            raise ModelSyntaxError(f"unknown key {key!r}", lineno)

    for key in ("name", "n", "sigma", "rho", "p", "c"):
        if key not in fields:
            label = {"n": "dim"}.get(key, key)
            raise ModelSyntaxError(f"missing required key {label!r}")
    size = fields["sigma"] + 1
    for key in ("p", "c"):
        if len(fields[key]) != size:
            raise ModelSyntaxError(f"{key} needs sigma+1={size} values")
    for idx, (_, lineno) in entries.items():
        if not all(0 <= i < size for i in idx):
            raise ModelSyntaxError(f"g index out of range 0..{size - 1}", lineno)
    model = FanoModel(name=fields["name"], n=fields["n"], sigma=fields["sigma"],
                      rho=fields["rho"], p=fields["p"],
                      g3=_dense_g3(size, {k: v for k, (v, _) in entries.items()}),
                      c=fields["c"])
    return ensure_valid(model) if check else model


def _once(fields, key, value, lineno):
    if key in fields:
        raise ModelSyntaxError(f"duplicate key {key!r}", lineno)
    fields[key] = value


def load_model(path, check: bool = True) -> FanoModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), check=check)


def serialize(m: FanoModel) -> str:
    lines = [f"name {m.name}", f"dim {m.n}", f"sigma {m.sigma}", f"rho {m.rho}",
             "p " + " ".join(map(str, m.p)), "c " + " ".join(map(str, m.c))]
    for (a, b, g), v in m.nonzero_triples():
        lines.append(f"g {a} {b} {g} {v}")
    return "\n".join(lines) + "\n"
