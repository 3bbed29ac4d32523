"""Command-line driver.

Exit codes: 0 success; 1 invalid model or nonzero residual; 2 malformed
input; 3 no tame base point found; 4 jet order too small; 5 integrity
failure (integrability, cross-check or oracle mismatch).
"""
from __future__ import annotations

import argparse
import os
import random
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

from gmpy2 import mpq

from . import oracles
from .errors import (DegenerateFrameError, GWRecError, InitialDataError,
                     InsufficientOrderError, IntegrabilityError, InvalidModelError,
                     ModelSyntaxError, NonInvertibleJetError, NonTameError)
from .extract import CrossCheckError, enumerate_targets, extract, target_plan
from .grading import InitialData, initial_classes, parse_initial_data, parse_initial_line
from .integrator import BasePoint, initial_y, jet_residuals, propagate
from .model import builtin, parse_model, validate
from .numeric.jet import rational
from .structure import (associativity_residual, constraint_residual, rational_point,
                        reduced_r, tameness_report)

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_NONTAME, EXIT_ORDER, EXIT_INTEGRITY = range(6)

# Fixed scan order for base points when q is not given explicitly.
Q_SCAN = tuple(mpq(v) for v in ("1", "2", "3", "1/2", "1/3", "-1", "-2", "5", "7"))


def _err(msg):
    print(msg, file=sys.stderr)


def _model_from_args(args, check=True):
    if args.model:
        with open(args.model, encoding="utf-8") as fh:
            text = fh.read()
        return parse_model(text, check=check)
    return builtin(args.builtin, args.n)


def _add_model_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", help="P1, P2, P<k>, or Pn together with --n")
    src.add_argument("--model", help="model file")
    p.add_argument("--n", type=int, help="dimension for --builtin Pn")


def _q_candidates(rho):
    for v in Q_SCAN:
        yield (v,) * rho
    if rho > 1:
        for i in range(len(Q_SCAN) - rho + 1):
            yield tuple(Q_SCAN[i:i + rho])


def _read_init(args, m):
    if args.init_file:
        with open(args.init_file, encoding="utf-8") as fh:
            init = parse_initial_data(fh.read())
    else:
        init = InitialData()
        for tokens in args.init or []:
            k, value = parse_initial_line(" ".join(tokens))
            init.values[k] = value
    return init.check(m, warn=True)


def _choose_base(m, init, args):
    xi = [rational(v) for v in args.xi] if args.xi else None
    if args.q:
        candidates = [tuple(rational(v) for v in args.q)]
    else:
        candidates = list(_q_candidates(m.rho))
    for q in candidates:
        base = BasePoint.default(m, q=q, xi=xi)
        y0 = initial_y(m, base, init, warn=False)
        if tameness_report(m, list(base.xi), y0).tame:
            if not args.q and q != candidates[0]:
                _err(f"base point q=1 not tame; using {base}")
            return base, y0
    raise NonTameError(f"no tame base point among {len(candidates)} candidates")


def _parse_targets(text, m, order):
    if text is None:
        return enumerate_targets(m, max_order=order)
    text = text.strip()
    if text == "initial":
        return [key.k for key in initial_classes(m)]
    if text.startswith("degree<="):
        return enumerate_targets(m, max_degree=int(text[len("degree<="):]))
    targets = []
    for part in text.split(";"):
        part = part.strip()
        if part:
            targets.append(tuple(int(v) for v in part.replace(",", " ").split()))
    return targets


def _extract_chunk(payload):
    m, base, sol, targets, cross = payload
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return extract(m, base, sol, targets, cross_check=cross, warn=False).values


def _threads():
    try:
        return max(1, int(os.environ.get("GWREC_THREADS", "1")))
    except ValueError:
        return 1


def cmd_validate(args):
    try:
        m = _model_from_args(args, check=False)
    except ModelSyntaxError as exc:
        _err(f"parse error: {exc}")
        return EXIT_PARSE
    report = validate(m)
    print(f"model {m.name}: {report}")
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_run(args):
    m = _model_from_args(args)
    init = _read_init(args, m)
    if args.order < 0:
        raise InitialDataError("order must be nonnegative")
    base, y0 = _choose_base(m, init, args)
    targets = _parse_targets(args.targets, m, args.order)
    required = max((target_plan(m, k)[2] for k in targets), default=0)
    if required > args.order:
        raise InsufficientOrderError(required, args.order)
    sol = propagate(m, base, y0, args.order)
    workers = min(_threads(), max(1, len(targets)))
    if workers > 1:
        chunks = [targets[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_extract_chunk, [
                (m, base, sol, c, not args.no_cross_check) for c in chunks]))
        table = extract(m, base, sol, [], warn=False)
        for part in parts:
            table.values.update(part)
        for k, v in table.values.items():
            if v.denominator != 1:
                _err(f"warning: non-integral N{k} = {v}")
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            table = extract(m, base, sol, targets, cross_check=not args.no_cross_check)
        for w in caught:
            _err(f"warning: {w.message}")

    status = EXIT_OK
    if not args.no_diagnostics:
        constraint, assoc = jet_residuals(sol)
        bad_c = sum(not v.is_zero() for v in constraint.values())
        bad_a = sum(not v.is_zero() for v in assoc.values())
        nonint = sum(v.denominator != 1 for v in table.values.values())
        _err(f"diagnostics: integrability checks {sol.checked} passed; "
             f"constraint residual nonzero entries {bad_c}; "
             f"associativity residual nonzero entries {bad_a}; "
             f"non-integral entries {nonint}")
        if bad_c or bad_a:
            status = EXIT_INTEGRITY
    if args.oracle_compare:
        status = max(status, _oracle_compare(m, table))

    text = table.to_tsv()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def _oracle_compare(m, table):
    if m.name == "P2" and m.sigma == 2:
        degrees = [k[0] for k in table.values if k[1] == 3 * k[0] - 1]
        if not degrees:
            return EXIT_OK
        ref = oracles.kontsevich(max(degrees))
        bad = [d for d in degrees if table.values[(d, 3 * d - 1)] != ref[d - 1]]
        _err(f"oracle: {len(degrees) - len(bad)}/{len(degrees)} plane counts agree "
             "with the Kontsevich recursion")
        return EXIT_INTEGRITY if bad else EXIT_OK
    if m.name == "P1" and (1,) in table.values:
        ok = table.values[(1,)] == 1
        _err(f"oracle: N_1 = {table.values[(1,)]} ({'agrees' if ok else 'DISAGREES'})")
        return EXIT_OK if ok else EXIT_INTEGRITY
    _err(f"oracle: no reference values for {m.name}")
    return EXIT_OK


def cmd_oracle(args):
    if args.name == "kontsevich":
        if len(args.params) != 1:
            raise InitialDataError("usage: oracle kontsevich DMAX")
        print(" ".join(map(str, oracles.kontsevich(int(args.params[0])))))
    elif args.name == "p1":
        if len(args.params) != 2:
            raise InitialDataError("usage: oracle p1 Q ORDER")
        jet = oracles.p1_solution(args.params[0], int(args.params[1]))
        print(" ".join(map(str, jet.coeffs)))
    elif args.name == "p2r":
        if len(args.params) != 4:
            raise InitialDataError("usage: oracle p2r X2 Y11 Y12 Y22")
        names = ("r111", "r112", "r122", "r222")
        for name, v in zip(names, oracles.p2_closed_r(*args.params)):
            print(f"{name}\t{v}")
    return EXIT_OK


def _point(args, m):
    if args.at == ["random"]:
        return _random_point(m, args.seed)
    values = {}
    for item in args.at:
        key, sep, value = item.partition("=")
        if not sep:
            raise InitialDataError(f"expected key=value, got {item!r}")
        values[key.strip()] = value
    return rational_point(m, values)


def _random_point(m, seed):
    rng = random.Random(seed)

    def draw():
        return mpq(rng.randint(-9, 9), rng.randint(1, 9))

    for _ in range(100):
        x = [draw() for _ in range(m.sigma)]
        y = {}
        for a in range(1, m.sigma + 1):
            for b in range(a, m.sigma + 1):
                y[(a, b)] = y[(b, a)] = draw()
        try:
            reduced_r(m, x, y)
        except (NonTameError, DegenerateFrameError, NonInvertibleJetError):
            continue
        return x, y
    raise NonTameError("no usable random point found")


def _format_point(m, x, y):
    parts = [f"x{a}={x[a - 1]}" for a in range(1, m.sigma + 1)]
    parts += [f"y{a}{b}={y.get((a, b), 0)}" for a in range(1, m.sigma + 1)
              for b in range(a, m.sigma + 1)]
    return " ".join(parts)


def cmd_dump_r(args):
    m = _model_from_args(args)
    x, y = _point(args, m)
    r = reduced_r(m, x, y)
    print(f"# {m.name} at {_format_point(m, x, y)}")
    for (a, b, c), v in sorted(r.items()):
        if a <= b <= c:
            print(f"r{a}{b}{c}\t{v}")
    return EXIT_OK


def cmd_check(args):
    m = _model_from_args(args)
    if args.jet:
        init = _read_init(args, m)
        base, y0 = _choose_base(m, init, args)
        sol = propagate(m, base, y0, args.order)
        constraint, assoc = jet_residuals(sol)
        print(f"# {m.name} jet at {base}, order {args.order}, "
              f"{sol.checked} integrability checks passed")
        tame = True
    else:
        x, y = _point(args, m)
        report = tameness_report(m, x, y)
        print(f"# {m.name} at {_format_point(m, x, y)}")
        print(f"semisimple\t{report.semisimple}")
        print(f"tame\t{report.tame}")
        print(f"discriminant\t{report.disc}")
        tame = report.tame
        if not tame:
            return EXIT_INVALID
        constraint = constraint_residual(m, x, y)
        assoc = associativity_residual(m, x, y)

    def nonzero(values):
        return sum(bool(v) if not hasattr(v, "is_zero") else not v.is_zero()
                   for v in values.values())

    bad_c, bad_a = nonzero(constraint), nonzero(assoc)
    print(f"constraint_nonzero\t{bad_c}")
    print(f"associativity_nonzero\t{bad_a}")
    return EXIT_OK if tame and not bad_c and not bad_a else EXIT_INVALID


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gwrec", description="Exact genus-zero Gromov-Witten numbers of Fano varieties.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model")
    _add_model_args(p)
    p.set_defaults(func=cmd_validate)

    def add_run_args(p, order_required=True):
        p.add_argument("--init", nargs="+", action="append",
                       help="initial number, e.g. --init N 1 2 = 1 (repeatable)")
        p.add_argument("--init-file", help="file of 'N k1 .. ks = value' lines")
        p.add_argument("--order", type=int, required=order_required, default=0,
                       help="jet truncation order")
        p.add_argument("--q", nargs="+", help="q_1..q_rho (disables the q scan)")
        p.add_argument("--xi", nargs="+", help="xi_1..xi_rho")

    p = sub.add_parser("run", help="propagate and extract a table")
    _add_model_args(p)
    add_run_args(p)
    p.add_argument("--targets", help="'degree<=D', 'initial', or 'k1,k2;k1,k2'")
    p.add_argument("--output", help="write the TSV table here instead of stdout")
    p.add_argument("--no-cross-check", action="store_true")
    p.add_argument("--no-diagnostics", action="store_true")
    p.add_argument("--oracle-compare", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="reference values")
    p.add_argument("name", choices=["kontsevich", "p1", "p2r"])
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("dump-r", help="print reduced structure functions at a point")
    _add_model_args(p)
    p.add_argument("--at", nargs="+", required=True, help="x2=1 y11=1/2 ... or 'random'")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_dump_r)

    p = sub.add_parser("check", help="residual and tameness diagnostics")
    _add_model_args(p)
    p.add_argument("--at", nargs="+", help="x2=1 y11=1/2 ... or 'random'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jet", action="store_true", help="check along a propagated jet")
    add_run_args(p, order_required=False)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check" and not args.jet and not args.at:
        parser.error("check needs --at or --jet")
    try:
        return args.func(args)
    except ModelSyntaxError as exc:
        _err(f"parse error: {exc}")
        return EXIT_PARSE
    except InvalidModelError as exc:
        _err(str(exc))
        return EXIT_INVALID
    except OSError as exc:
        _err(f"cannot read input: {exc}")
        return EXIT_PARSE
    except (InitialDataError, ValueError) as exc:
        _err(f"input error: {exc}")
        return EXIT_PARSE
    except (NonTameError, DegenerateFrameError) as exc:
        _err(f"not tame: {exc}")
        return EXIT_NONTAME
    except InsufficientOrderError as exc:
        _err(f"{exc} (rerun with --order {exc.required})")
        return EXIT_ORDER
    except (IntegrabilityError, CrossCheckError) as exc:
        _err(f"integrity failure: {exc}")
        return EXIT_INTEGRITY
    except GWRecError as exc:
        _err(f"error: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
