"""Command-line interface.

Subcommands mirror the library drivers: ``sum`` (full series), ``partial``
(through base**p), ``threshold`` (bracket a target partial sum), ``table``
(the zero/one/two-occurrence grid for every digit), and ``oracle``
(brute-force spot checks).  Results go to stdout as plain text, 5-digit
grouped text, or JSON; diagnostics go to stderr.

Exit codes: 0 success, 2 invalid input, 3 insufficient accuracy or threshold
above the total, 4 digit cap reached before convergence, 5 enumeration
budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal
from typing import Optional, Sequence

from . import oracle as oracle_mod
from .fixedpoint import fixed_to_decimal, format_grouped, format_plain
from .model import (
    ConditionSet,
    InsufficientAccuracy,
    IrwinSumError,
    LimitTooLarge,
    RangeTooLarge,
    ThresholdAboveTotal,
    ValidationError,
)
from .summation import (
    SumResult,
    Termination,
    build_plan,
    irwin_sum,
    partial_sum,
    threshold_search,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ACCURACY = 3
EXIT_DIGIT_CAP = 4
EXIT_BUDGET = 5


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_common(parser: argparse.ArgumentParser, *, decimals_default: int = 15) -> None:
    parser.add_argument("--base", type=int, default=10, help="radix, 2..10 (default 10)")
    parser.add_argument(
        "--decimals", type=int, default=decimals_default,
        help=f"decimal places in the result (default {decimals_default}, minimum 5)",
    )
    parser.add_argument(
        "--format", choices=("plain", "grouped", "json"), default="plain",
        help="output format; grouped spaces the fraction into 5-digit blocks",
    )
    parser.add_argument(
        "--verbose", "-v", type=int, default=1, choices=range(0, 5),
        help="0 bare value, 1 standard report, 2 plan info, 3 per-digit-length "
             "progress, 4 power-shrink detail (diagnostics on stderr)",
    )
    parser.add_argument("--output", help="also write the JSON report to this file")
    parser.add_argument(
        "--threads", type=int, default=1,
        help="worker processes for brute-force enumeration (oracle only; the "
             "recurrence is inherently sequential)",
    )


def _add_conditions(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--digits", type=_parse_int_list, required=True,
        help="comma-separated constrained digits, e.g. 9 or 9,3",
    )
    parser.add_argument(
        "--counts", type=_parse_int_list, required=True,
        help="comma-separated occurrence counts, aligned with --digits",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irwinsums",
        description="Sums of harmonic subseries restricted by digit occurrence counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sum = sub.add_parser("sum", help="full series sum")
    _add_conditions(p_sum)
    p_sum.add_argument(
        "--mode", choices=("exact", "at-most"), default="exact",
        help="exact occurrence counts, or every count up to the bound",
    )
    _add_common(p_sum)

    p_partial = sub.add_parser("partial", help="partial sum through base**p")
    _add_conditions(p_partial)
    p_partial.add_argument("--power", type=int, required=True, help="digit-length cutoff p")
    _add_common(p_partial)

    p_thr = sub.add_parser("threshold", help="digit lengths bracketing a partial-sum target")
    _add_conditions(p_thr)
    p_thr.add_argument(
        "--threshold", required=True,
        help="target partial sum as a decimal string (parsed exactly)",
    )
    p_thr.add_argument(
        "--threshold-decimals", type=int, default=None,
        help="how many decimals of the threshold are meant (default: as written)",
    )
    _add_common(p_thr)

    p_table = sub.add_parser(
        "table", help="zero/one/two-occurrence sums for every digit of the base"
    )
    p_table.add_argument("--row", type=int, default=None, help="only this digit's row")
    _add_common(p_table, decimals_default=20)
    p_table.set_defaults(format="grouped")

    p_oracle = sub.add_parser("oracle", help="brute-force enumeration spot check")
    _add_conditions(p_oracle)
    p_oracle.add_argument("--limit", type=int, required=True, help="enumerate n < limit")
    p_oracle.add_argument("--mode", choices=("exact", "at-most"), default="exact")
    p_oracle.add_argument(
        "--compare", action="store_true",
        help="also run the engine partial sum (limit must be a power of the base)",
    )
    _add_common(p_oracle)
    return parser


def _conditions(args: argparse.Namespace) -> ConditionSet:
    return ConditionSet.of(args.digits, args.counts, base=args.base)


def _value_str(value: Decimal, fmt: str) -> str:
    return format_grouped(value) if fmt == "grouped" else format_plain(value)


def _emit_report(report: dict, args: argparse.Namespace) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")


def _make_observer(args: argparse.Namespace, plan):
    if args.verbose < 3:
        return None

    def observer(digit_length: int, block: int, total: int, j_active: int) -> None:
        show = min(10, plan.requested_decimals)
        block_s = format_plain(fixed_to_decimal(block, plan.working_decimals, show))
        total_s = format_plain(fixed_to_decimal(total, plan.working_decimals, show))
        line = f"partial sum for {digit_length} digits = {block_s}, total = {total_s}"
        if args.verbose >= 4:
            line += f", active powers = {j_active}"
        print(line, file=sys.stderr)

    return observer


def _print_plan(plan, args: argparse.Namespace) -> None:
    if args.verbose >= 2:
        print(
            f"decimals = {plan.requested_decimals}, working = {plan.working_decimals}, "
            f"max power = {plan.max_power}, direct digits = {plan.direct_sum_digits}, "
            f"digit cap = {plan.max_digit_length}",
            file=sys.stderr,
        )


def _sum_report(result: SumResult, mode: str) -> dict:
    headline = result.at_most_sum if mode == "at-most" else result.requested_sum
    return {
        "base": result.conditions.base,
        "digits": list(result.conditions.digits),
        "counts": list(result.conditions.counts),
        "mode": mode,
        "decimals": result.decimals,
        "sum": format_plain(headline),
        "at_most_sum": format_plain(result.at_most_sum),
        "per_count_sums": (
            [format_plain(v) for v in result.per_count_sums]
            if result.per_count_sums is not None
            else None
        ),
        "digits_processed": result.digits_processed,
        "termination": result.termination.value,
    }


def _print_sum_text(result: SumResult, mode: str, args: argparse.Namespace) -> None:
    headline = result.at_most_sum if mode == "at-most" else result.requested_sum
    if args.verbose == 0:
        print(_value_str(headline, args.format))
        return
    print(f"sum = {_value_str(headline, args.format)}")
    conditions = result.conditions
    if not (conditions.num_conditions == 1 and conditions.counts[0] == 0):
        print(
            f"sum for all {conditions.cell_count} 'at most' conditions = "
            f"{_value_str(result.at_most_sum, args.format)}"
        )
    if result.per_count_sums is not None:
        for k, value in enumerate(result.per_count_sums):
            print(f"sum for {k} occurrences = {_value_str(value, args.format)}")
    elif args.verbose >= 4:
        from .model import occurrence_vector

        for slot, value in enumerate(result.per_cell_sums):
            vector = occurrence_vector(slot, conditions)
            print(f"sum for occurrences {vector} = {_value_str(value, args.format)}")
    if result.termination is Termination.FINITE_SERIES_EXHAUSTED:
        print(
            f"this is a finite series that terminates after "
            f"{result.digits_processed} digits",
            file=sys.stderr,
        )


def _run_engine(args: argparse.Namespace, digit_limit: Optional[int] = None) -> SumResult:
    conditions = _conditions(args)
    plan = build_plan(conditions, args.decimals)
    _print_plan(plan, args)
    observer = _make_observer(args, plan)
    if digit_limit is None:
        return irwin_sum(conditions, args.decimals, plan=plan, observer=observer)
    return partial_sum(
        conditions, digit_limit, args.decimals, plan=plan, observer=observer
    )


def _cmd_sum(args: argparse.Namespace) -> int:
    result = _run_engine(args)
    if args.format != "json":
        _print_sum_text(result, args.mode, args)
    _emit_report(_sum_report(result, args.mode), args)
    if result.termination is Termination.DIGIT_CAP_REACHED:
        print(
            f"did not converge within {result.digits_processed} digit lengths",
            file=sys.stderr,
        )
        return EXIT_DIGIT_CAP
    return EXIT_OK


def _cmd_partial(args: argparse.Namespace) -> int:
    if args.power < 1:
        print("--power must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    result = _run_engine(args, digit_limit=args.power)
    if args.format != "json":
        if args.verbose == 0:
            print(_value_str(result.requested_sum, args.format))
        else:
            suffix = "" if args.base == 10 else f" (base {args.base})"
            print(
                f"partial sum through {args.power}{suffix} digits = "
                f"{_value_str(result.requested_sum, args.format)}"
            )
    report = _sum_report(result, "exact")
    report["power"] = args.power
    _emit_report(report, args)
    return EXIT_OK


def _cmd_threshold(args: argparse.Namespace) -> int:
    conditions = _conditions(args)
    result = threshold_search(
        conditions,
        args.threshold,
        requested_decimals=args.decimals,
        threshold_decimals=args.threshold_decimals,
    )
    if args.format != "json":
        print(
            f"threshold {args.threshold} is first reached with "
            f"{result.digits_high}-digit denominators"
        )
        print(
            f"partial sum through {result.digits_low} digits = "
            f"{_value_str(result.sum_low, args.format)}"
        )
        print(
            f"partial sum through {result.digits_high} digits = "
            f"{_value_str(result.sum_high, args.format)}"
        )
    _emit_report(
        {
            "base": conditions.base,
            "digits": list(conditions.digits),
            "counts": list(conditions.counts),
            "decimals": result.decimals,
            "threshold": args.threshold,
            "digits_low": result.digits_low,
            "sum_low": format_plain(result.sum_low),
            "digits_high": result.digits_high,
            "sum_high": format_plain(result.sum_high),
        },
        args,
    )
    return EXIT_OK


def _cmd_table(args: argparse.Namespace) -> int:
    rows = []
    digits = [args.row] if args.row is not None else list(range(args.base))
    for d in digits:
        result = irwin_sum(ConditionSet.of([d], [2], base=args.base), args.decimals)
        rows.append((d, result.per_count_sums))
    if args.format != "json":
        fmt = args.format
        width = max(
            len(_value_str(v, fmt)) for _, sums in rows for v in sums
        )
        header = ["d"] + [
            f"{title:<{width}}"
            for title in ("zero occurrences", "one occurrence", "two occurrences")
        ]
        print("  ".join(header).rstrip())
        for d, sums in rows:
            cells = [f"{_value_str(v, fmt):<{width}}" for v in sums]
            print("  ".join([str(d)] + cells).rstrip())
    _emit_report(
        {
            "base": args.base,
            "decimals": args.decimals,
            "rows": [
                {"digit": d, "sums": [format_plain(v) for v in sums]}
                for d, sums in rows
            ],
        },
        args,
    )
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    conditions = _conditions(args)
    value = oracle_mod.brute_force_sum(
        conditions, args.limit, mode=args.mode, decimals=args.decimals, jobs=args.threads
    )
    if args.format != "json":
        print(f"oracle sum (n < {args.limit}) = {_value_str(value, args.format)}")
    report = {
        "base": conditions.base,
        "digits": list(conditions.digits),
        "counts": list(conditions.counts),
        "mode": args.mode,
        "decimals": args.decimals,
        "limit": args.limit,
        "oracle_sum": format_plain(value),
    }
    if args.compare:
        power = 0
        n = 1
        while n < args.limit:
            n *= conditions.base
            power += 1
        if n != args.limit:
            print(
                f"--compare requires --limit to be a power of {conditions.base}",
                file=sys.stderr,
            )
            return EXIT_INVALID
        if args.mode != "exact":
            print("--compare uses exact mode", file=sys.stderr)
            return EXIT_INVALID
        engine = partial_sum(conditions, power, args.decimals)
        difference = engine.requested_sum - value
        if args.format != "json":
            print(
                f"engine partial sum through {power} digits = "
                f"{_value_str(engine.requested_sum, args.format)}"
            )
            print(f"difference = {difference:E}")
        report["engine_sum"] = format_plain(engine.requested_sum)
        report["difference"] = f"{difference:E}"
    _emit_report(report, args)
    return EXIT_OK


_COMMANDS = {
    "sum": _cmd_sum,
    "partial": _cmd_partial,
    "threshold": _cmd_threshold,
    "table": _cmd_table,
    "oracle": _cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ThresholdAboveTotal, InsufficientAccuracy) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (LimitTooLarge, RangeTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except IrwinSumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
