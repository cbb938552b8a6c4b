"""nflab command line.

Exit codes: 0 ok, 1 a result contradicts a verified theorem, 2 input
error, 3 function set not closed under permutation (check-cup), 4 guard
exceeded.
"""
import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import jsonschema

from nflab import __version__
from nflab.config import Guards
from nflab.counting import (
    count_all_subsets,
    count_cup_subsets,
    count_report,
    fraction_curve,
    write_curve_csv,
)
from nflab.documents import (
    FunctionSetDocument,
    NeighborhoodDocument,
    OutputFormat,
    ProbabilityDocument,
    ReportEnvelope,
    RunConfig,
    load_document,
)
from nflab.exceptions import (
    ContractViolation,
    GuardExceeded,
    Inconsistency,
    InputError,
    InvalidArgument,
    NflabError,
)
from nflab.family import DEFAULT_SEEDS, default_family, parse_family
from nflab.functions import (
    FunctionSet,
    SearchSpace,
    closure,
    decompose_basis_classes,
    is_cup,
)
from nflab.helpers import format_fraction, parse_fraction
from nflab.hitting import mean_first_hit
from nflab.search import SearchAlgorithm, measure_by_name
from nflab.structure import (
    ConstraintKind,
    analyze,
    certify,
    constrained_class,
)
from nflab.verify import (
    Counterexample,
    check_nonuniform_condition,
    construct_counterexample,
    construct_nonuniform_counterexample,
    verify_nonuniform_nfl,
    verify_uniform_nfl,
)

logger = logging.getLogger(__name__)

TOOL = "nflab"

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INPUT = 2
EXIT_NOT_CLOSED = 3
EXIT_GUARD = 4

JsonDict = Dict[str, Any]

# command arguments echoed into RunConfig.parameters
PARAMETERS = (
    "x",
    "y",
    "n",
    "exact",
    "x_min",
    "x_max",
    "steepness_bound",
    "minima_bound",
)


@dataclass
class Output:
    """A finished report and the exit code to return with it."""

    text: str
    code: int = EXIT_OK


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got '{text}'")


def _name_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _rational(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _render_json(config: RunConfig, result: JsonDict) -> str:
    envelope = ReportEnvelope(
        tool=TOOL, version=__version__, config=config, result=result
    )
    return json.dumps(envelope.to_dict(), indent=2) + "\n"


def _render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json_only(config: RunConfig) -> None:
    if config.format is not OutputFormat.JSON:
        raise InputError(f"{config.command} only writes JSON reports")


def _load_functions(path: str) -> FunctionSet:
    document = load_document(FunctionSetDocument, path)
    try:
        return document.to_function_set()
    except InvalidArgument as exc:
        raise InputError(str(exc), path)


def _family(
    spec: Optional[str], space: SearchSpace, seeds: Sequence[int]
) -> List[SearchAlgorithm]:
    if spec:
        return parse_family(spec, space)
    return default_family(space, seeds)


def cmd_check_cup(args: argparse.Namespace, config: RunConfig) -> Output:
    _json_only(config)
    F = _load_functions(args.functions)
    check = is_cup(F, config.guards)
    result: JsonDict = {"closed": check.closed, "size": len(F)}
    if check.closed:
        result["classes"] = [
            {
                "histogram": list(h.counts),
                "size": len(members),
                "functions": [list(f.table) for f in members],
            }
            for h, members in decompose_basis_classes(F, config.guards)
        ]
        return Output(_render_json(config, result))
    witness = check.witness
    assert witness is not None
    result["witness"] = {
        "function": list(witness.function.table),
        "permutation": list(witness.permutation.image),
        "image": list(witness.image.table),
    }
    return Output(_render_json(config, result), EXIT_NOT_CLOSED)


def cmd_closure(args: argparse.Namespace, config: RunConfig) -> Output:
    """Writes a plain function-set document, usable as input again."""
    _json_only(config)
    F = closure(_load_functions(args.functions), config.guards)
    document = FunctionSetDocument.from_function_set(F)
    return Output(json.dumps(document.to_dict(), indent=2) + "\n")


def cmd_verify_nfl(args: argparse.Namespace, config: RunConfig) -> Output:
    F = _load_functions(args.functions)
    space = F.space
    algos = _family(config.family, space, config.seeds)
    ms = config.ms or list(range(1, space.size + 1))
    cs = [measure_by_name(name) for name in config.measures]
    result: JsonDict = {"algorithms": [a.name for a in algos]}
    counterexample: Optional[Counterexample] = None

    if args.probs:
        document = load_document(ProbabilityDocument, args.probs)
        try:
            D = document.to_distribution(space, F.costs, config.guards)
        except InvalidArgument as exc:
            raise InputError(str(exc), args.probs)
        condition = check_nonuniform_condition(D, config.guards)
        verdict = verify_nonuniform_nfl(D, algos, ms, cs, config.guards)
        result["condition"] = condition.to_dict()
        if condition.holds and not verdict.equal:
            raise Inconsistency(
                "probabilities are constant on basis classes, yet "
                f"{verdict.witness}"
            )
        if not condition.holds:
            counterexample = construct_nonuniform_counterexample(
                D, config.guards
            )
    else:
        check = is_cup(F, config.guards)
        verdict = verify_uniform_nfl(F, algos, ms, cs, config.guards)
        result["closed"] = check.closed
        if check.closed and not verdict.equal:
            raise Inconsistency(
                f"set is closed under permutation, yet {verdict.witness}"
            )
        if not check.closed:
            counterexample = construct_counterexample(F, config.guards)

    if counterexample is not None:
        if counterexample.left_mass == counterexample.right_mass:
            raise Inconsistency(
                "counterexample construction produced equal masses"
            )
        result["counterexample"] = counterexample.to_report().to_dict()
    result["equal"] = verdict.equal
    if verdict.witness is not None:
        result["witness"] = verdict.witness.to_dict()

    if config.format is OutputFormat.CSV:
        rows = [
            [
                d.algorithm,
                d.m,
                d.measure,
                format_fraction(entry.k),
                format_fraction(entry.mass),
            ]
            for d in verdict.distributions
            for entry in d.masses
        ]
        header = ["algorithm", "m", "measure", "k", "mass"]
        return Output(_render_csv(header, rows))
    result["distributions"] = [d.to_dict() for d in verdict.distributions]
    return Output(_render_json(config, result))


def cmd_count(args: argparse.Namespace, config: RunConfig) -> Output:
    if args.exact:
        # raises ExactOverflowGuard instead of falling back to logs
        count_cup_subsets(args.x, args.y, config.guards)
        count_all_subsets(args.x, args.y, config.guards)
    report = count_report(args.x, args.y, config.guards)
    if config.format is OutputFormat.CSV:
        data = report.to_dict(omit_none=False)
        header = list(data)
        row = ["" if data[key] is None else data[key] for key in header]
        return Output(_render_csv(header, [row]))
    return Output(_render_json(config, report.to_dict()))


def cmd_fraction_curve(
    args: argparse.Namespace, config: RunConfig
) -> Output:
    rows = fraction_curve(range(args.x_min, args.x_max + 1), args.y)
    if config.format is OutputFormat.JSON:
        result = {"rows": [row.to_dict() for row in rows]}
        return Output(_render_json(config, result))
    buffer = io.StringIO()
    write_curve_csv(rows, buffer)
    return Output(buffer.getvalue())


def cmd_hitting_time(args: argparse.Namespace, config: RunConfig) -> Output:
    space = SearchSpace(args.x)
    algos = _family(config.family, space, config.seeds)
    reports = [
        mean_first_hit(a, args.x, args.n, guards=config.guards)
        for a in algos
    ]
    mismatched = [r.algorithm for r in reports if not r.matches]
    if mismatched:
        raise Inconsistency(
            f"mean first hitting time differs from (|X|+1)/(n+1) for "
            f"{', '.join(mismatched)}"
        )
    if config.format is OutputFormat.CSV:
        rows = [
            [
                r.algorithm,
                r.x,
                r.n,
                format_fraction(r.mean),
                format_fraction(r.formula),
                str(r.matches).lower(),
            ]
            for r in reports
        ]
        header = ["algorithm", "x", "n", "mean", "formula", "matches"]
        return Output(_render_csv(header, rows))
    result = {"reports": [r.to_dict() for r in reports]}
    return Output(_render_json(config, result))


def cmd_analyze(args: argparse.Namespace, config: RunConfig) -> Output:
    F = _load_functions(args.functions)
    document = load_document(NeighborhoodDocument, args.neighborhood)
    try:
        n = document.to_relation(F.space.size)
    except InvalidArgument as exc:
        raise InputError(str(exc), args.neighborhood)

    reports = [analyze(f, n, guards=config.guards) for f in F]
    bounds = [
        (ConstraintKind.STEEPNESS, args.steepness_bound),
        (ConstraintKind.MINIMA, args.minima_bound),
    ]
    certificates = [
        certify(
            constrained_class(
                F.space, F.costs, n, kind, bound, guards=config.guards
            )
        )
        for kind, bound in bounds
        if bound is not None
    ]

    if config.format is OutputFormat.CSV:
        rows = [
            [
                " ".join(str(v) for v in r.function),
                format_fraction(r.s_max),
                format_fraction(r.d_max),
                r.local_minima,
                r.l_max,
            ]
            for r in reports
        ]
        header = ["function", "s_max", "d_max", "local_minima", "l_max"]
        return Output(_render_csv(header, rows))
    result = {
        "neighborhood": n.name,
        "functions": [r.to_dict() for r in reports],
        "certificates": [c.to_dict() for c in certificates],
    }
    return Output(_render_json(config, result))


Handler = Callable[[argparse.Namespace, RunConfig], Output]


def _global_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--guard-exact",
        type=int,
        default=Guards.max_functions,
        help="largest |Y|^|X| enumerated and largest exact 2^n exponent",
    )
    parent.add_argument(
        "--guard-orbit",
        type=int,
        default=Guards.max_orbit,
        help="largest orbit scanned exhaustively",
    )
    parent.add_argument(
        "--guard-space",
        type=int,
        default=Guards.max_space,
        help="largest |X| for permutation work",
    )
    parent.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=None
    )
    parent.add_argument("--out", help="write the report here, not stdout")
    parent.add_argument(
        "--seed",
        type=int,
        action="append",
        dest="seeds",
        help="seed for the stochastic family members; repeatable",
    )
    parent.add_argument("-v", "--verbose", action="store_true")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL,
        description="Exact No-Free-Lunch verification on finite spaces.",
    )
    parser.add_argument(
        "--version", action="version", version=f"{TOOL} {__version__}"
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    common = [_global_options()]

    def command(name: str, handler: Handler, summary: str):
        p = sub.add_parser(name, parents=common, help=summary)
        p.set_defaults(handler=handler)
        return p

    p = command("check-cup", cmd_check_cup, "closure verdict")
    p.add_argument("functions")

    p = command("closure", cmd_closure, "smallest closed superset")
    p.add_argument("functions")

    p = command("verify-nfl", cmd_verify_nfl, "compare algorithms")
    p.add_argument("functions")
    p.add_argument("--probs", help="probability vector over all functions")
    p.add_argument("--family", help="comma-separated algorithm entries")
    p.add_argument("--m", type=_int_list, dest="ms", help="e.g. 1,2,3")
    p.add_argument(
        "--measures",
        type=_name_list,
        default=["min-so-far", "value-at-end"],
    )

    p = command("count", cmd_count, "count closed subsets")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.add_argument("--exact", action="store_true")

    p = command("fraction-curve", cmd_fraction_curve, "closed-fraction data")
    p.add_argument("--x-min", type=int, default=1)
    p.add_argument("--x-max", type=int, default=8)
    p.add_argument("--y", type=_int_list, default=[2, 3, 4])

    p = command("hitting-time", cmd_hitting_time, "mean first hitting time")
    p.add_argument("x", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--family", help="comma-separated algorithm entries")

    p = command("analyze", cmd_analyze, "steepness and local minima")
    p.add_argument("functions")
    p.add_argument("neighborhood")
    p.add_argument("--steepness-bound", type=_rational)
    p.add_argument("--minima-bound", type=_rational)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    default_format = (
        OutputFormat.CSV
        if args.command == "fraction-curve"
        else OutputFormat.JSON
    )
    inputs = [
        path
        for path in (
            getattr(args, "functions", None),
            getattr(args, "probs", None),
            getattr(args, "neighborhood", None),
        )
        if path
    ]
    parameters = {
        key: format_fraction(value) if isinstance(value, Fraction) else value
        for key, value in sorted(vars(args).items())
        if key in PARAMETERS and value is not None
    }
    return RunConfig(
        command=args.command,
        guards=Guards(
            max_functions=args.guard_exact,
            max_space=args.guard_space,
            max_orbit=args.guard_orbit,
        ),
        format=OutputFormat(args.format) if args.format else default_format,
        inputs=inputs,
        family=getattr(args, "family", None),
        ms=getattr(args, "ms", None),
        measures=getattr(args, "measures", None) or [],
        seeds=list(args.seeds or DEFAULT_SEEDS),
        out=args.out,
        parameters=parameters,
    )


def _emit(output: Output, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(output.text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fp:
        fp.write(output.text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = _config(args)
        output = args.handler(args, config)
    except GuardExceeded as exc:
        print(f"{TOOL}: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (Inconsistency, ContractViolation) as exc:
        print(f"{TOOL}: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (NflabError, jsonschema.ValidationError, ValueError) as exc:
        print(f"{TOOL}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(output, config.out)
    return output.code


if __name__ == "__main__":
    sys.exit(main())
