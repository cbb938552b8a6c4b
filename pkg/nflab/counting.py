"""Counting subsets of the function space that are closed under
permutation, and the fraction they make up of all non-empty subsets.

A subset is closed iff it is a union of basis classes, so there are
2^C(|X|+|Y|-1, |X|) - 1 closed non-empty subsets among 2^(|Y|^|X|) - 1.
"""
import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, List, Optional

from nflab.config import DEFAULT_GUARDS, Guards
from nflab.exceptions import ExactOverflowGuard, GuardExceeded, InvalidArgument
from nflab.functions import (
    CostDomain,
    Permutation,
    SearchSpace,
    compose,
    enumerate_functions,
)
from nflab.schema import JsonSchemaMixin

logger = logging.getLogger(__name__)

LOG10_2 = math.log10(2)

# the exhaustive oracle visits 2^(|Y|^|X|) subsets
BRUTE_FORCE_MAX_FUNCTIONS = 20

# curve CSV prints exact counts up to this many bits
CURVE_EXACT_BITS = 64

CURVE_COLUMNS = (
    "x",
    "y",
    "histogram_count",
    "cup_count",
    "total_count",
    "fraction_log10",
)


def _check_sizes(x: int, y: int) -> None:
    if x < 1 or y < 1:
        raise InvalidArgument(f"|X| and |Y| must be >= 1, got ({x}, {y})")


def count_histograms(x: int, y: int) -> int:
    _check_sizes(x, y)
    return math.comb(x + y - 1, x)


def _exact_subsets(what: str, bits: int, guards: Guards) -> int:
    if bits > guards.max_functions:
        raise ExactOverflowGuard(what, bits, guards.max_functions)
    return 2 ** bits - 1


def count_cup_subsets(
    x: int, y: int, guards: Guards = DEFAULT_GUARDS
) -> int:
    return _exact_subsets(
        "closed subset count", count_histograms(x, y), guards
    )


def count_all_subsets(
    x: int, y: int, guards: Guards = DEFAULT_GUARDS
) -> int:
    _check_sizes(x, y)
    return _exact_subsets("subset count", y ** x, guards)


def log10_subsets(bits: int) -> float:
    """log10(2^bits - 1) without building the integer."""
    return bits * LOG10_2 + math.log1p(-math.ldexp(1.0, -bits)) / math.log(10)


def fraction_log10(x: int, y: int) -> float:
    """log10 of (2^C(x+y-1, x) - 1) / (2^(y^x) - 1)."""
    a, b = count_histograms(x, y), y ** x
    corrections = math.log1p(-math.ldexp(1.0, -a)) - math.log1p(
        -math.ldexp(1.0, -b)
    )
    return (a - b) * LOG10_2 + corrections / math.log(10)


def brute_force_count_cup(
    x: int, y: int, guards: Guards = DEFAULT_GUARDS
) -> int:
    """Classify every non-empty subset of the function space.

    Adjacent transpositions generate all permutations, so a subset is
    closed iff it contains every adjacent-swap image of its members.
    """
    _check_sizes(x, y)
    total = y ** x
    if total > BRUTE_FORCE_MAX_FUNCTIONS:
        raise GuardExceeded(
            "brute-force subset classification",
            total,
            BRUTE_FORCE_MAX_FUNCTIONS,
        )
    space, costs = SearchSpace(x), CostDomain.integers(y)
    functions = list(enumerate_functions(space, costs, guards))
    index = {f.table: i for i, f in enumerate(functions)}
    swaps = [Permutation.transposition(x, i, i + 1) for i in range(x - 1)]
    required = []
    for f in functions:
        mask = 1 << index[f.table]
        for pi in swaps:
            mask |= 1 << index[compose(f, pi).table]
        required.append(mask)

    closed = 0
    for subset in range(1, 1 << total):
        members = (i for i in range(total) if subset >> i & 1)
        if all(required[i] & ~subset == 0 for i in members):
            closed += 1
    logger.info("%d of %d subsets closed", closed, (1 << total) - 1)
    return closed


@dataclass
class CountReport(JsonSchemaMixin):
    """Closed and total subset counts for one (|X|, |Y|)"""

    x: int
    y: int
    histogram_count: int
    cup_subsets: Optional[int]
    all_subsets: Optional[int]
    fraction_log10: float
    fraction_exact: Optional[Fraction] = None


def count_report(
    x: int, y: int, guards: Guards = DEFAULT_GUARDS
) -> CountReport:
    """Exact counts where the guard allows them, logs always."""
    histograms = count_histograms(x, y)
    cup: Optional[int] = None
    total: Optional[int] = None
    exact: Optional[Fraction] = None
    if histograms <= guards.max_functions:
        cup = count_cup_subsets(x, y, guards)
    if y ** x <= guards.max_functions:
        total = count_all_subsets(x, y, guards)
    if cup is not None and total is not None:
        exact = Fraction(cup, total)
    else:
        logger.info("(%d, %d) beyond the exact guard, log form only", x, y)
    return CountReport(
        x=x,
        y=y,
        histogram_count=histograms,
        cup_subsets=cup,
        all_subsets=total,
        fraction_log10=fraction_log10(x, y),
        fraction_exact=exact,
    )


@dataclass
class CurveRow(JsonSchemaMixin):
    x: int
    y: int
    histogram_count: int
    cup_count: str
    total_count: str
    fraction_log10: float

    def as_csv(self) -> List[str]:
        return [
            str(self.x),
            str(self.y),
            str(self.histogram_count),
            self.cup_count,
            self.total_count,
            "%.10f" % self.fraction_log10,
        ]


def _curve_count(bits: int) -> str:
    if bits <= CURVE_EXACT_BITS:
        return str(2 ** bits - 1)
    return "log10:%.10f" % log10_subsets(bits)


def fraction_curve(
    x_range: Iterable[int], y_list: Iterable[int]
) -> List[CurveRow]:
    """Rows y-major, then by x."""
    xs, ys = list(x_range), list(y_list)
    if not xs or not ys:
        raise InvalidArgument("fraction curve needs non-empty x and y ranges")
    rows = []
    for y in ys:
        for x in xs:
            histograms = count_histograms(x, y)
            rows.append(
                CurveRow(
                    x=x,
                    y=y,
                    histogram_count=histograms,
                    cup_count=_curve_count(histograms),
                    total_count=_curve_count(y ** x),
                    fraction_log10=fraction_log10(x, y),
                )
            )
    return rows


def write_curve_csv(rows: Iterable[CurveRow], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv())
