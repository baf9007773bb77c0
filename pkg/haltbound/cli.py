"""The ``haltbound`` command line interface.

Results go to stdout and files; logging goes to stderr. Exit status is 0 on
success, 1 when a computation is asked for outside of its domain and 2 on a
usage error.

"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Sequence

import tabulate

from .census import (
    DEFAULT_BUDGET_CAP,
    DEFAULT_CHECKPOINT_EVERY,
    DEFAULT_CHUNK_SIZE,
    CensusConfig,
    CensusSummary,
    resume,
    run_census,
)
from .complexity import ComplexityModel, Plain, SelfDelimiting, default_overhead
from .errors import HaltboundError
from .horizon import horizon, paper_characteristic
from .machine.interpreter import Halted, run
from .machine.program import to_code
from .machine.witness import witness, witness_report
from .probability import below_prob, p1, p2, tail_prob
from .rational import format_power, format_rational, parse_rational
from .report import aggregate, compare, emit_csv, emit_histogram_csv
from .typehints import ExactRational

logger = logging.getLogger(__name__)

#: Named overhead functions accepted by ``--g``.
OVERHEADS = {"default": default_overhead}

#: Largest integer written in plain decimal by ``witness``.
_DECIMAL_BITS = 64


def _epsilon(text: str) -> ExactRational:
    try:
        value = parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(
            f"epsilon must lie strictly between 0 and 1, got {text}"
        )
    return value


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(size) for size in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a list of sizes: {text!r}") from e
    bad = [size for size in sizes if size < 9 or size % 9]
    if bad:
        raise argparse.ArgumentTypeError(
            f"sizes must be positive multiples of 9, got {bad}"
        )
    return sizes


def _model(args: argparse.Namespace) -> ComplexityModel:
    if args.model == "plain":
        return Plain(args.c)
    return SelfDelimiting(OVERHEADS[args.g])


def _integer(value: int) -> str:
    if value.bit_length() <= _DECIMAL_BITS:
        return str(value)
    return format_power(value)


def _prob(args: argparse.Namespace) -> int:
    model = _model(args)
    if args.eq in ("p1", "p2"):
        if args.n is None:
            args.parser.error(f"--eq {args.eq} requires --n")
        if args.eq == "p1":
            print(format_rational(p1(model, args.k, args.n)))
        else:
            print(p2(model, args.k, args.n, depth=args.depth))
    else:
        if args.m is None:
            args.parser.error(f"--eq {args.eq} requires --m")
        function = tail_prob if args.eq == "tail" else below_prob
        print(function(model, args.k, args.m, depth=args.depth))
    return 0


def _horizon(args: argparse.Namespace) -> int:
    if args.epsilon is None and not args.paper:
        args.parser.error("one of --epsilon and --paper is required")
    if args.epsilon is not None:
        result = horizon(_model(args), args.k, args.epsilon)
        print(f"m*={result.m_star:d} budget={format_power(result.budget)}")
        logger.info("horizon for %s at epsilon %s", result.model, result.epsilon)
    if args.paper:
        print(format_power(paper_characteristic(args.k)))
    return 0


def _print_census(summary: CensusSummary) -> None:
    rows = [
        (
            k,
            counts["halted"],
            counts["exhausted"],
            counts["cycle"],
            sum(counts.values()),
        )
        for k, counts in sorted(summary.counts.items())
    ]
    print(
        tabulate.tabulate(
            rows,
            headers=("k", "halted", "exhausted", "cycle", "total"),
            disable_numparse=True,
        )
    )


def _census(args: argparse.Namespace) -> int:
    config = CensusConfig(
        args.sizes,
        args.epsilon,
        args.out,
        args.checkpoint,
        budget_cap=args.cap,
        detect_cycles=args.cycles,
        model=_model(args),
        counter_overhead_bits=args.s,
        workers=args.workers,
        checkpoint_every=args.checkpoint_every,
        chunk_size=args.chunk_size,
    )
    summary = resume(config) if args.resume else run_census(config)
    _print_census(summary)
    return 0


def _witness(args: argparse.Namespace) -> int:
    report = witness_report(args.n)
    if args.emit is not None:
        with open(args.emit, "w", encoding="utf-8") as f:
            print(to_code(witness(args.n)), file=f)
    if args.run:
        outcome = run(witness(args.n), args.cap)
        if isinstance(outcome, Halted):
            verdict = "ok" if outcome.t >= report.bound else "FAIL"
            print(
                f"size_bits={report.size_bits:d} t={_integer(outcome.t)} "
                f"bound={_integer(report.bound)} {verdict}"
            )
        else:
            print(
                f"size_bits={report.size_bits:d} {outcome.tag} "
                f"budget={_integer(args.cap)} bound={_integer(report.bound)}"
            )
    else:
        print(
            f"size_bits={report.size_bits:d} bound={_integer(report.bound)} "
            f"runtime={_integer(report.runtime)}"
        )
    relation = ">" if report.exceeds_characteristic else "<="
    print(
        f"runtime {relation} characteristic={_integer(report.characteristic)} "
        f"of a {report.size_bits:d}-bit program"
    )
    return 0


def _report(args: argparse.Namespace) -> int:
    summaries = aggregate(args.input)
    table = compare(summaries, _model(args), args.b, s=args.s) if summaries else []
    emit_csv(table, args.out)
    if args.histogram is not None:
        emit_histogram_csv(summaries, args.histogram)
    rows = [
        (
            summary.k,
            summary.total,
            summary.halted,
            summary.exhausted,
            summary.cycled,
            sum(row.flag for row in table if row.k == summary.k),
        )
        for summary in summaries
    ]
    print(
        tabulate.tabulate(
            rows,
            headers=("k", "total", "halted", "exhausted", "cycle", "flagged"),
            disable_numparse=True,
        )
    )
    return 0


def _model_options() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("complexity model")
    group.add_argument("--model", choices=("plain", "sd"), default="plain")
    group.add_argument(
        "--c", type=int, default=0, help="plain constant in bits (default: 0)"
    )
    group.add_argument(
        "--g",
        choices=sorted(OVERHEADS),
        default="default",
        help="self-delimiting overhead, ceil(log2(n + 1)) by default",
    )
    return parser


def _add(
    subparsers: argparse._SubParsersAction,
    name: str,
    function: Callable[[argparse.Namespace], int],
    summary: str,
    parents: Sequence[argparse.ArgumentParser] = (),
) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(name, help=summary, parents=list(parents))
    parser.set_defaults(func=function, parser=parser)
    return parser


def make_parser() -> argparse.ArgumentParser:
    """Construct the argument parser of the ``haltbound`` command."""
    parser = argparse.ArgumentParser(
        prog="haltbound",
        description="Exact halting-time probabilities and small-program censuses.",
    )
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default="WARNING",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    model = _model_options()

    prob = _add(subparsers, "prob", _prob, "evaluate a probability", [model])
    prob.add_argument("--eq", choices=("p1", "p2", "tail", "below"), required=True)
    prob.add_argument("--k", type=int, required=True)
    sizes = prob.add_mutually_exclusive_group(required=True)
    sizes.add_argument("--n", type=int)
    sizes.add_argument("--m", type=int)
    prob.add_argument("--depth", type=int, default=None)

    horizon_ = _add(subparsers, "horizon", _horizon, "compute a step budget", [model])
    horizon_.add_argument("--k", type=int, required=True)
    horizon_.add_argument("--epsilon", type=_epsilon, default=None)
    horizon_.add_argument(
        "--paper", action="store_true", help="also print 2^(k+51)"
    )

    census = _add(subparsers, "census", _census, "run a census", [model])
    census.add_argument("--sizes", type=_sizes, required=True)
    census.add_argument("--epsilon", type=_epsilon, required=True)
    census.add_argument("--cap", type=int, default=DEFAULT_BUDGET_CAP)
    census.add_argument("--out", required=True)
    census.add_argument("--checkpoint", required=True)
    census.add_argument("--workers", type=int, default=1)
    census.add_argument("--no-cycles", dest="cycles", action="store_false")
    census.add_argument("--s", type=int, default=0, help="step counter overhead")
    census.add_argument(
        "--checkpoint-every", type=int, default=DEFAULT_CHECKPOINT_EVERY
    )
    census.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    census.add_argument(
        "--resume", action="store_true", help="fail unless a checkpoint exists"
    )

    witness_ = _add(subparsers, "witness", _witness, "build a long-running program")
    witness_.add_argument("--n", type=int, required=True)
    witness_.add_argument("--run", action="store_true")
    witness_.add_argument("--cap", type=int, default=DEFAULT_BUDGET_CAP)
    witness_.add_argument("--emit", default=None)

    report = _add(subparsers, "report", _report, "compare a census", [model])
    report.add_argument("--in", dest="input", required=True)
    report.add_argument("--out", required=True)
    report.add_argument("--b", type=int, default=2)
    report.add_argument("--s", type=int, default=0, help="step counter overhead")
    report.add_argument("--histogram", default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the ``haltbound`` command and return its exit status."""
    args = make_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except HaltboundError as e:
        print(f"haltbound: error: {e}", file=sys.stderr)
        return 1
