"""Command-line entry point.

Exit codes: 0 success or accept, 1 reject or property fails, 2 usage error,
3 internal invariant counterexample.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .distance import ExactCaps, build_violation_graph, epsilon_f, min_vertex_cover, repair
from .errors import InvariantViolation, UsageError
from .experiment import ExperimentSpec, rows_to_csv, run_experiment
from .fileio import read_function, write_function
from .generators import KINDS, generate
from .grid import format_point
from .properties import PropertyParams, check_property
from .structure import dump_counterexample, verify_counts
from .tester import TesterConfig, run_tester
from .values import format_value, parse_number, parse_value

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _params(args) -> PropertyParams:
    if args.alpha is not None or args.beta is not None:
        if args.property is not None:
            raise UsageError("give either --property or --alpha/--beta, not both")
        if args.alpha is None or args.beta is None:
            raise UsageError("--alpha and --beta go together")
        return PropertyParams(parse_value(args.alpha), parse_value(args.beta))
    return PropertyParams.parse(args.property or "monotone")


def _epsilon(text: str):
    eps = parse_number(text)
    if not 0 < eps < 1:
        raise UsageError(f"epsilon must lie in (0, 1), got {text}")
    return eps


def _knobs(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise UsageError(f"option {item!r} is not key=value")
        value = parse_number(raw)
        out[key.replace("-", "_")] = value
    return out


def _seed(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise UsageError(f"seed must be an integer, got {text!r}") from None
    if seed < 0:
        raise UsageError("seed must be non-negative")
    return seed


def cmd_check(args) -> int:
    f = read_function(args.file)
    witness = check_property(f, _params(args))
    if witness is None:
        print("OK")
        return EXIT_OK
    x, y = witness
    print(f"violation: f{format_point(x)} = {format_value(f[x])}, f{format_point(y)} = {format_value(f[y])}")
    return EXIT_FAIL


def cmd_test(args) -> int:
    f = read_function(args.file)
    config = TesterConfig(_epsilon(args.epsilon), _seed(args.seed), args.queries)
    report = run_tester(f, _params(args), config)
    print(f"verdict: {report.verdict}")
    print(f"queries: {report.queries_used} of {report.budget}")
    if report.witness is not None:
        print(f"witness: {format_point(report.witness.lo)} {format_point(report.witness.hi)}")
    return EXIT_FAIL if report.rejected else EXIT_OK


def cmd_distance(args) -> int:
    f = read_function(args.file)
    params = _params(args)
    caps = ExactCaps.from_env()
    cover = min_vertex_cover(build_violation_graph(f, params), caps)
    print(f"eps_f = {epsilon_f(f, params, caps)}")
    print(f"|VC| = {len(cover)}")
    return EXIT_OK


def cmd_repair(args) -> int:
    f = read_function(args.file)
    g = repair(f, _params(args))
    write_function(g, args.output)
    print(f"changed {len(f.differing_points(g))} of {f.grid.size} points")
    return EXIT_OK


def cmd_verify(args) -> int:
    f = read_function(args.file)
    report = verify_counts(f, _params(args), pad_first=args.pad)
    print(report.summary())
    if report.ok:
        return EXIT_OK
    fn_path, txt_path = dump_counterexample(report, f, args.dump)
    print(f"counterexample written to {fn_path} and {txt_path}", file=sys.stderr)
    return EXIT_INVARIANT


def cmd_experiment(args) -> int:
    spec = ExperimentSpec(
        generator=args.generator,
        n=args.n,
        k=args.k,
        params=_params(args),
        epsilons=tuple(_epsilon(e) for e in args.epsilon.split(",")),
        trials=args.trials,
        master_seed=_seed(args.seed),
        knobs=_knobs(args.option),
        output=args.output,
    )
    text = rows_to_csv(run_experiment(spec, workers=args.workers))
    if args.output is None:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8", newline="")
    return EXIT_OK


def cmd_gen(args) -> int:
    f = generate(args.kind, args.n, args.k, _seed(args.seed), _params(args), **_knobs(args.option))
    write_function(f, args.output)
    return EXIT_OK


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--property", help="monotone (default) or lipschitz:c")
    p.add_argument("--alpha", help="lower unit-step bound, e.g. -1 or -inf")
    p.add_argument("--beta", help="upper unit-step bound, e.g. 1 or +inf")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridtester", description="Property testing on hypergrids.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="exact all-pairs property check")
    _add_params(p)
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("test", help="run the randomized pair tester")
    _add_params(p)
    p.add_argument("file")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--seed", default="0")
    p.add_argument("--queries", type=_positive, help="override the query budget")
    p.set_defaults(run=cmd_test)

    p = sub.add_parser("distance", help="exact distance to the property")
    _add_params(p)
    p.add_argument("file")
    p.set_defaults(run=cmd_distance)

    p = sub.add_parser("repair", help="write a nearest satisfying function")
    _add_params(p)
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(run=cmd_repair)

    p = sub.add_parser("verify", help="check the alternating-path structure")
    _add_params(p)
    p.add_argument("file")
    p.add_argument("--pad", action="store_true", help="pad to a power-of-2 side first (needs beta = +inf)")
    p.add_argument("--dump", default="counterexample", help="file prefix for a failing instance")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("experiment", help="batch tester runs to CSV")
    _add_params(p)
    p.add_argument("--generator", required=True, choices=KINDS)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--epsilon", required=True, help="comma-separated list")
    p.add_argument("--trials", type=_positive, default=10)
    p.add_argument("--seed", default="0")
    p.add_argument("--option", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_experiment)

    p = sub.add_parser("gen", help="write a generated function file")
    _add_params(p)
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--seed", default="0")
    p.add_argument("--option", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(run=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
