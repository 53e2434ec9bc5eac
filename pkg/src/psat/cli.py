"""Command-line front end.

Exit codes: 0 consistent / nonempty / verified, 1 inconsistent / empty /
verification failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb
from typing import Any, Sequence

from .algebra import EmptyAlgebra, StateVector
from .bookfile import BookFile, BookFileError, load_book, parse_probability
from .coherence import (
    Book,
    Inconsistent,
    assess,
    check_interval_bound,
    fundamental_interval,
    integer_stakes,
    payoff_matrix,
)
from .exchange import (
    ExchangeableState,
    MixtureWeights,
    decompose,
    mixture_approximation,
    product_state,
    restrict,
    xi_state,
)
from .formula import DEFAULT_WORLD_CAP, FormulaError, parse, to_text

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def rat(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def unrat(s: str) -> Fraction:
    return Fraction(s)


def decimal(x: Fraction, digits: int) -> str:
    """Correctly rounded (half-even) fixed-point rendering of ``x``."""
    scaled = round(Fraction(x) * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def fmt(x: Fraction | int | str, digits: int | None) -> str:
    x = Fraction(x)
    if digits is None:
        return rat(x)
    return f"{rat(x)} ({decimal(x, digits)})"


# --------------------------------------------------------------------------
# Report builders (pure; return exit code and a JSON-ready dict)


def _world_labels(book: Book) -> list[str]:
    return [w.label() for w in book.algebra.worlds]


def check_report(bf: BookFile, cap: int = DEFAULT_WORLD_CAP) -> tuple[int, dict[str, Any]]:
    book = bf.book(cap=cap)
    verdict = assess(book)
    report: dict[str, Any] = {
        "command": "check",
        "book": bf.to_json(),
        "worlds": _world_labels(book),
    }
    if isinstance(verdict, Inconsistent):
        stakes = integer_stakes(verdict.stakes)
        balances = payoff_matrix(book).balances([Fraction(s) for s in stakes])
        report.update(
            verdict="INCONSISTENT",
            stakes=[rat(s) for s in stakes],
            balances=[rat(b) for b in balances],
        )
        return EXIT_NO, report
    report.update(verdict="CONSISTENT", state=[rat(m) for m in verdict.state.masses])
    return EXIT_OK, report


def interval_reports(
    bf: BookFile, queries: Sequence[str] | None = None, cap: int = DEFAULT_WORLD_CAP
) -> tuple[int, list[dict[str, Any]]]:
    book = bf.book(cap=cap)
    formulas = (
        [parse(q, bf.universe) for q in queries] if queries else list(bf.queries)
    )
    if not formulas:
        raise InputError("no query given on the command line or in the file")
    out = []
    code = EXIT_OK
    for f in formulas:
        query = book.algebra.event(f)
        iv = fundamental_interval(book, query)
        report: dict[str, Any] = {
            "command": "interval",
            "book": bf.to_json(),
            "worlds": _world_labels(book),
            "query": to_text(f),
        }
        if iv.empty:
            assert iv.dutch_book is not None
            stakes = integer_stakes(iv.dutch_book.stakes)
            balances = payoff_matrix(book).balances([Fraction(s) for s in stakes])
            report.update(
                verdict="EMPTY",
                interval=None,
                stakes=[rat(s) for s in stakes],
                balances=[rat(b) for b in balances],
            )
            code = EXIT_NO
        else:
            assert iv.witness_lo is not None and iv.witness_hi is not None
            assert iv.lo_bound is not None and iv.hi_bound is not None
            report.update(
                verdict="INTERVAL",
                interval=[rat(iv.lo), rat(iv.hi)],  # type: ignore[arg-type]
                witnesses={
                    "lo": [rat(m) for m in iv.witness_lo.masses],
                    "hi": [rat(m) for m in iv.witness_hi.masses],
                },
                bounds={
                    "lo": {"constant": rat(iv.lo_bound[0]), "multipliers": [rat(y) for y in iv.lo_bound[1]]},
                    "hi": {"constant": rat(iv.hi_bound[0]), "multipliers": [rat(y) for y in iv.hi_bound[1]]},
                },
            )
        out.append(report)
    return code, out


def _exchange_state(args: argparse.Namespace) -> tuple[ExchangeableState, dict[str, Any]]:
    if args.xi:
        try:
            N, K = (int(v) for v in args.xi.split(","))
        except ValueError:
            raise InputError(f"--xi expects N,K, got {args.xi!r}") from None
        return xi_state(N, K, cap=args.max_N), {"xi": [N, K]}
    if args.product is not None:
        if args.N is None:
            raise InputError("--product needs --N")
        p = parse_probability(args.product)
        return product_state(p, args.N, cap=args.max_N), {"product": rat(p), "N": args.N}
    if args.values:
        vals = [Fraction(v) for v in args.values.split(",")]
        return ExchangeableState(tuple(vals)), {"values": [rat(v) for v in vals]}
    raise InputError("give the state with --xi N,K, --product p --N N, or --values q0,...")


def _state_from_source(source: dict[str, Any], cap: int) -> ExchangeableState:
    if "xi" in source:
        return xi_state(*source["xi"], cap=cap)
    if "product" in source:
        return product_state(unrat(source["product"]), source["N"], cap=cap)
    return ExchangeableState(tuple(unrat(v) for v in source["values"]))


def exchange_report(args: argparse.Namespace) -> dict[str, Any]:
    state, source = _exchange_state(args)
    report: dict[str, Any] = {"command": "exchange", "op": args.op, "source": source, "N": state.n}
    if args.op == "restrict":
        if args.n is None:
            raise InputError("restrict needs --n")
        report["n"] = args.n
        report["values"] = [rat(v) for v in restrict(state, args.n).values]
    elif args.op == "decompose":
        report["weights"] = [rat(w) for w in decompose(state).weights]
    else:
        if args.n is None:
            raise InputError("approx needs --n")
        approx = mixture_approximation(state, args.n)
        report.update(
            n=args.n,
            weights=[rat(w) for w in approx.weights.weights],
            values=[rat(v) for v in approx.restricted.values],
            approximant=[rat(v) for v in approx.approximant],
            sup_error=rat(approx.sup_error),
        )
    return report


# --------------------------------------------------------------------------
# Independent re-checking of JSON reports


def _verify_book_report(report: dict[str, Any], cap: int) -> bool:
    bf = BookFile.from_json(report["book"])
    book = bf.book(cap=cap)
    if report.get("worlds") != _world_labels(book):
        return False
    verdict = report["verdict"]
    if verdict in ("INCONSISTENT", "EMPTY"):
        stakes = [unrat(s) for s in report["stakes"]]
        if len(stakes) != len(book):
            return False
        balances = payoff_matrix(book).balances(stakes)
        return [rat(b) for b in balances] == report["balances"] and all(b <= -1 for b in balances)
    if verdict == "CONSISTENT":
        state = StateVector(book.algebra, tuple(unrat(m) for m in report["state"]))
        return book.reproduced_by(state)
    if verdict == "INTERVAL":
        query = book.algebra.event(parse(report["query"], bf.universe))
        lo, hi = (unrat(v) for v in report["interval"])
        for end, value, lower in (("lo", lo, True), ("hi", hi, False)):
            state = StateVector(book.algebra, tuple(unrat(m) for m in report["witnesses"][end]))
            if not book.reproduced_by(state) or state.value(query) != value:
                return False
            b = report["bounds"][end]
            bound = (unrat(b["constant"]), tuple(unrat(y) for y in b["multipliers"]))
            if not check_interval_bound(book, query, bound, value, lower):
                return False
        return lo <= hi
    return False


def _verify_exchange_report(report: dict[str, Any], cap: int) -> bool:
    state = _state_from_source(report["source"], cap)
    op = report["op"]
    if op == "decompose":
        weights = MixtureWeights(tuple(unrat(w) for w in report["weights"]))
        return weights.reconstruct() == state
    values = tuple(unrat(v) for v in report["values"])
    n = report["n"]
    # restriction: sum the large-algebra classes below each small miniterm
    N = state.n
    expected = tuple(
        sum((comb(N - n, K - k) * state.values[K] for K in range(k, N - n + k + 1)), Fraction(0))
        for k in range(n + 1)
    )
    if values != expected:
        return False
    if op == "restrict":
        return True
    weights = MixtureWeights(tuple(unrat(w) for w in report["weights"]))
    if weights.reconstruct() != state:
        return False
    approximant = tuple(
        sum(
            (w * Fraction(K, N) ** k * (1 - Fraction(K, N)) ** (n - k) for K, w in enumerate(weights.weights)),
            Fraction(0),
        )
        for k in range(n + 1)
    )
    if [rat(a) for a in approximant] != report["approximant"]:
        return False
    return rat(max(abs(a - b) for a, b in zip(values, approximant))) == report["sup_error"]


def verify_report(report: dict[str, Any], cap: int = DEFAULT_WORLD_CAP) -> bool:
    if report.get("command") in ("check", "interval"):
        return _verify_book_report(report, cap)
    if report.get("command") == "exchange":
        return _verify_exchange_report(report, cap)
    raise InputError(f"unknown report kind {report.get('command')!r}")


# --------------------------------------------------------------------------
# Text rendering


def _table(labels: Sequence[str], values: Sequence[str], digits: int | None) -> list[str]:
    width = max((len(s) for s in labels), default=0)
    return [f"  {lab.ljust(width)}  {fmt(v, digits)}" for lab, v in zip(labels, values)]


def render_check(report: dict[str, Any], digits: int | None) -> str:
    names = " ".join(report["book"]["vars"])
    lines = [report["verdict"]]
    if report["verdict"] == "CONSISTENT":
        lines.append(f"extending state, mass per world ({names}):")
        lines += _table(report["worlds"], report["state"], digits)
    else:
        labels = [a[0] for a in report["book"]["assessments"]]
        lines.append("bettor stakes:")
        lines += _table(labels, report["stakes"], digits)
        lines.append(f"bookmaker balance per world ({names}):")
        lines += _table(report["worlds"], report["balances"], digits)
    return "\n".join(lines)


def render_interval(report: dict[str, Any], digits: int | None, header: bool) -> str:
    names = " ".join(report["book"]["vars"])
    lines = [f"query {report['query']}"] if header else []
    if report["verdict"] == "EMPTY":
        lines.append("EMPTY")
        labels = [a[0] for a in report["book"]["assessments"]]
        lines.append("book is inconsistent; bettor stakes:")
        lines += _table(labels, report["stakes"], digits)
        lines.append(f"bookmaker balance per world ({names}):")
        lines += _table(report["worlds"], report["balances"], digits)
        return "\n".join(lines)
    lo, hi = report["interval"]
    if digits is None:
        lines.append(f"{lo} {hi}")
    else:
        lines.append(f"{lo} {hi}  ({decimal(unrat(lo), digits)} {decimal(unrat(hi), digits)})")
    for end, title in (("lo", "lower"), ("hi", "upper")):
        lines.append(f"witness state attaining the {title} end ({names}):")
        lines += _table(report["worlds"], report["witnesses"][end], digits)
    return "\n".join(lines)


def render_exchange(report: dict[str, Any], digits: int | None) -> str:
    lines = []
    op = report["op"]
    if op in ("approx", "decompose"):
        lines += [f"lambda[{K}] = {fmt(w, digits)}" for K, w in enumerate(report["weights"])]
    if op == "restrict":
        lines += [f"q[{k}] = {fmt(v, digits)}" for k, v in enumerate(report["values"])]
    if op == "approx":
        for k, (v, a) in enumerate(zip(report["values"], report["approximant"])):
            lines.append(f"class {k}: state {fmt(v, digits)}  mixture {fmt(a, digits)}")
        lines.append(f"sup_error = {fmt(report['sup_error'], digits)}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# Entry points


def _check_one(path: str, cap: int) -> tuple[int, Any]:
    try:
        bf = load_book(path, cap)
        return check_report(bf, cap)
    except (BookFileError, EmptyAlgebra, FormulaError, ValueError) as exc:
        return EXIT_INPUT, f"{path}: error: {exc}"


def _emit(obj: Any, as_json: bool) -> None:
    if as_json:
        print(json.dumps(obj, indent=2))
    else:
        print(obj)


def cmd_check(args: argparse.Namespace) -> int:
    paths = args.paths
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check_one, paths, [args.max_vars] * len(paths)))
    else:
        results = [_check_one(p, args.max_vars) for p in paths]
    code = EXIT_OK
    reports = []
    for path, (c, rep) in zip(paths, results):
        code = max(code, c)
        if c == EXIT_INPUT:
            print(rep, file=sys.stderr)
            continue
        if args.json:
            reports.append(rep)
        else:
            if len(paths) > 1:
                print(f"== {path}")
            print(render_check(rep, args.decimal))
    if args.json and reports:
        _emit(reports[0] if len(paths) == 1 else reports, True)
    return code


def cmd_interval(args: argparse.Namespace) -> int:
    bf = load_book(args.path, args.max_vars)
    code, reports = interval_reports(bf, [args.query] if args.query else None, args.max_vars)
    if args.json:
        _emit(reports[0] if len(reports) == 1 else reports, True)
    else:
        header = len(reports) > 1
        print("\n".join(render_interval(r, args.decimal, header) for r in reports))
    return code


def cmd_exchange(args: argparse.Namespace) -> int:
    report = exchange_report(args)
    if args.json:
        _emit(report, True)
    else:
        print(render_exchange(report, args.decimal))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read report: {exc}") from None
    reports = data if isinstance(data, list) else [data]
    ok = True
    for rep in reports:
        try:
            good = verify_report(rep, args.max_vars)
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"malformed report: {exc!r}") from None
        except ValueError:
            good = False
        ok = ok and good
    print("VERIFIED" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--decimal", type=int, metavar="K", help="also print K-digit decimals")
    common.add_argument(
        "--max-vars", type=int, default=DEFAULT_WORLD_CAP, metavar="N",
        help=f"variable cap for world enumeration (default {DEFAULT_WORLD_CAP})",
    )
    common.add_argument("--jobs", type=int, default=1, metavar="J", help="parallel workers for batch checks")

    parser = argparse.ArgumentParser(
        prog="psat", description="Exact coherence checking for probability assessments."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide coherence of book files")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("interval", parents=[common], help="tight probability interval of a query")
    p.add_argument("path")
    p.add_argument("query", nargs="?", help="query formula (default: the file's query lines)")
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("exchange", parents=[common], help="exchangeable-state computations")
    p.add_argument("op", choices=["restrict", "decompose", "approx"])
    p.add_argument("--xi", metavar="N,K", help="extremal state xi(N, K)")
    p.add_argument("--product", metavar="P", help="product state with bias P (needs --N)")
    p.add_argument("--values", metavar="Q0,Q1,...", help="explicit value-class vector")
    p.add_argument("--N", type=int, help="number of variables for --product")
    p.add_argument("--n", type=int, help="target number of variables")
    p.add_argument("--max-N", type=int, default=4096, dest="max_N", help="cap on N (default 4096)")
    p.set_defaults(func=cmd_exchange)

    p = sub.add_parser("verify", parents=[common], help="re-check a --json report")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.decimal is not None and args.decimal < 0:
        print("psat: error: --decimal must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, BookFileError, EmptyAlgebra, FormulaError, ValueError) as exc:
        print(f"psat: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
