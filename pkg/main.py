"""
Command-line interface for fibnormal
"""

import argparse
import logging
import sys
from typing import List, Optional, Tuple

from fibnormal.config import ConfigManager, RunConfig
from fibnormal.core import FibNormalLab, load_points, run_golden
from fibnormal.errors import CapacityError, CheckpointError, InvalidInputError
from fibnormal.output import Report, resolve_output_path, write_report

logger = logging.getLogger("fibnormal")

EXIT_OK = 0
EXIT_GOLDEN_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_IO = 4


def _int_arg(text: str) -> int:
    """Integers, also written as 1e9 or 10**9"""
    text = text.strip().replace("_", "")
    try:
        if "**" in text:
            base, exp = text.split("**", 1)
            return int(base) ** int(exp)
        if "e" in text.lower():
            value = float(text)
            if value != int(value):
                raise ValueError
            return int(value)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _int_list(text: str) -> List[int]:
    return [_int_arg(x) for x in text.split(",") if x.strip()]


def _point(text: str) -> Tuple[float, float]:
    try:
        D, dev = text.split(",")
        return float(D), float(dev)
    except ValueError:
        raise argparse.ArgumentTypeError(f"a point is written D,dev; got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibnormal",
        description="Digit statistics of the concatenated Fibonacci constant 0.F_1F_2F_3...")
    parser.add_argument("--config", type=str, default=None, help="JSON configuration file")
    noise = parser.add_mutually_exclusive_group()
    noise.add_argument("--verbose", action="store_true", help="Debug logging")
    noise.add_argument("--quiet", action="store_true", help="Warnings only, no progress lines")
    parser.add_argument("--golden", action="store_true",
                        help="Run the built-in desk-scale acceptance suite and exit")
    parser.add_argument("--format", dest="top_format", choices=("json", "csv", "text"), default=None,
                        help="Report format (also accepted after the subcommand)")
    parser.add_argument("--output", dest="top_output", type=str, default=None,
                        help="Report file (also accepted after the subcommand)")
    parser.add_argument("--golden-terms", type=_int_arg, default=10000,
                        help="Largest N of the golden table rows to stream (default 10000)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None, help="Report format")
    common.add_argument("--output", type=str, default=None, help="Report file (default: stdout)")

    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("analyze", parents=[common], help="Digit and block statistics of the first N terms")
    p.add_argument("--base", type=_int_arg, default=None)
    p.add_argument("--terms", type=_int_arg, default=None, help="Number of Fibonacci terms N")
    p.add_argument("--k-max", type=int, default=None, help="Longest block length")
    p.add_argument("--positional", action="store_true", default=None,
                   help="Split blocks into leading/trailing/middle/boundary")
    p.add_argument("--partitions", type=int, default=None, help="Parallel partitions")
    p.add_argument("--chunk-digits", type=_int_arg, default=None)
    p.add_argument("--checkpoint", type=str, default=None, help="Checkpoint file")
    p.add_argument("--checkpoint-every", type=_int_arg, default=None, help="Save every T terms")
    p.add_argument("--resume", action="store_true", default=None, help="Resume from the checkpoint")

    p = sub.add_parser("evolution", parents=[common], help="Deviation versus N in one pass")
    p.add_argument("--base", type=_int_arg, default=None)
    p.add_argument("--points", type=_int_list, required=True, help="Comma-separated term counts")

    p = sub.add_parser("per-term", parents=[common], help="Census of non-(ε,k)-normal terms")
    p.add_argument("--base", type=_int_arg, default=None)
    p.add_argument("--terms", type=_int_arg, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--epsilons", type=_float_list, default=None)
    p.add_argument("--min-length", type=int, default=None)
    p.add_argument("--partitions", type=int, default=None)

    p = sub.add_parser("regress", parents=[common], help="Log-log fit of deviation against D")
    p.add_argument("--points-file", type=str, default=None)
    p.add_argument("--point", type=_point, action="append", default=None, help="D,dev (repeatable)")

    p = sub.add_parser("counterexample", parents=[common], help="Row-uniform ragged array statistics")
    p.add_argument("--columns", type=_int_arg, required=True)

    p = sub.add_parser("sigma-census", parents=[common], help="Which F_n are values of σ")
    p.add_argument("--max-index", type=_int_arg, default=None)
    p.add_argument("--value-cap", type=_int_arg, default=None)

    p = sub.add_parser("baselines", parents=[common], help="Benford, Pisano and iid baselines")
    p.add_argument("--base", type=_int_arg, default=None)
    p.add_argument("--terms", type=_int_arg, default=None)

    p = sub.add_parser("criterion", parents=[common], help="Growth conditions of the concatenation criterion")
    p.add_argument("--base", type=_int_arg, default=None)
    p.add_argument("--terms", type=_int_arg, default=None, help="Prefix length m")
    return parser


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)


def _run_config(args, config: ConfigManager) -> RunConfig:
    return RunConfig.from_config(
        args.command, config,
        base=getattr(args, "base", None),
        N=getattr(args, "terms", None),
        k_max=getattr(args, "k_max", None),
        positional=getattr(args, "positional", None),
        partitions=getattr(args, "partitions", None),
        chunk_digits=getattr(args, "chunk_digits", None),
        epsilons=getattr(args, "epsilons", None),
        min_length=getattr(args, "min_length", None),
        output_format=getattr(args, "format", None) or args.top_format,
        output_path=getattr(args, "output", None) or args.top_output,
        checkpoint_path=getattr(args, "checkpoint", None),
        checkpoint_every=getattr(args, "checkpoint_every", None),
        resume=getattr(args, "resume", None),
    )


def dispatch(args, config: ConfigManager, lab: FibNormalLab) -> Report:
    run = _run_config(args, config)
    if args.command == "analyze":
        return lab.analyze(run)
    if args.command == "evolution":
        return lab.evolution(run.validate(), args.points)
    if args.command == "per-term":
        k = args.k if args.k is not None else config.get("per_term", "k", 1)
        return lab.per_term(run, k)
    if args.command == "regress":
        points = list(args.point or [])
        if args.points_file:
            points.extend(load_points(args.points_file))
        return lab.regress(points)
    if args.command == "counterexample":
        return lab.counterexample(args.columns)
    if args.command == "sigma-census":
        max_index = args.max_index if args.max_index is not None else config.get("census", "max_index", 40)
        cap = args.value_cap if args.value_cap is not None else config.get("census", "value_cap", 10 ** 9)
        return lab.sigma_census(max_index, cap)
    if args.command == "baselines":
        run.validate()
        return lab.baselines(run.base, run.N)
    if args.command == "criterion":
        run.validate()
        return lab.criterion(run.base, run.N)
    raise InvalidInputError(f"unknown command {args.command!r}")


def golden_report(max_terms: int) -> Report:
    checks = run_golden(max_terms)
    report = Report("golden", summary={
        "checks": len(checks),
        "passed": sum(c.passed for c in checks),
        "failed": sum(not c.passed for c in checks),
    })
    report.add_table("checks", [{"name": c.name, "expected": str(c.expected), "observed": str(c.observed),
                                 "passed": c.passed} for c in checks])
    return report


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the fibnormal CLI"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    if not args.golden and args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        config = ConfigManager(args.config)
        lab = FibNormalLab(config, verbose=not args.quiet)
        if args.golden:
            report = golden_report(args.golden_terms)
            status = EXIT_OK if report.summary["failed"] == 0 else EXIT_GOLDEN_FAILED
            command, fmt, output = "golden", args.top_format, args.top_output
        else:
            report = dispatch(args, config, lab)
            status = EXIT_OK
            command = args.command
            fmt, output = args.format or args.top_format, args.output or args.top_output
        fmt = fmt or config.get("output", "format", "text")
        path = resolve_output_path(command, fmt, output, config.get("output", "output_dir"))
        write_report(report, fmt, path, stream=sys.stdout)
        return status
    except InvalidInputError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except CapacityError as e:
        logger.error("%s", e)
        return EXIT_CAPACITY
    except (CheckpointError, OSError) as e:
        logger.error("%s", e)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
