"""Mean first hitting time over the ensemble F_n of functions with exactly
n desirable points. Desirable points cost 0, all others cost 1.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence

from nflab.config import DEFAULT_GUARDS, Guards
from nflab.exceptions import ContractViolation, InvalidArgument
from nflab.functions import CostDomain, ObjectiveFunction, SearchSpace
from nflab.schema import JsonSchemaMixin
from nflab.search import SearchAlgorithm, iterate

logger = logging.getLogger(__name__)

DESIRABLE = 0

INDICATOR_COSTS = CostDomain.of(0, 1)


@dataclass(frozen=True)
class DesirabilityEnsemble:
    x: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= self.x:
            raise InvalidArgument(
                f"need 1 <= n <= |X|, got n={self.n}, |X|={self.x}"
            )

    @property
    def space(self) -> SearchSpace:
        return SearchSpace(self.x)

    def __len__(self) -> int:
        return math.comb(self.x, self.n)

    def members(self) -> Iterator[ObjectiveFunction]:
        space = self.space
        for desirable in itertools.combinations(space.points, self.n):
            yield ObjectiveFunction(
                space,
                INDICATOR_COSTS,
                tuple(
                    DESIRABLE if point in desirable else 1
                    for point in space.points
                ),
            )


def first_hit_time(a: SearchAlgorithm, member: ObjectiveFunction) -> int:
    if DESIRABLE not in member.table:
        raise InvalidArgument(f"{member} has no desirable point")
    for trace in iterate(a, member):
        if trace.pairs[-1][1] == DESIRABLE:
            return len(trace)
    raise ContractViolation(f"'{a.name}' never hit a desirable point")


@dataclass
class HittingReport(JsonSchemaMixin):
    algorithm: str
    x: int
    n: int
    mean: Fraction
    formula: Fraction
    matches: bool
    first_hits: Optional[List[int]] = None


def mean_first_hit(
    a: SearchAlgorithm,
    x: int,
    n: int,
    seeds: Optional[Sequence[int]] = None,
    guards: Guards = DEFAULT_GUARDS,
    record: bool = False,
) -> HittingReport:
    """Exact ensemble mean; stochastic algorithms are additionally
    averaged over `a.reseed(s)` for every seed."""
    ensemble = DesirabilityEnsemble(x, n)
    guards.check_functions("desirability ensemble", len(ensemble))
    runs = [a.reseed(s) for s in seeds] if seeds else [a]

    hits = [
        first_hit_time(run, member)
        for run in runs
        for member in ensemble.members()
    ]
    mean = Fraction(sum(hits), len(hits))
    formula = Fraction(x + 1, n + 1)
    if mean != formula:
        logger.warning(
            "%s: mean first hit %s differs from %s", a.name, mean, formula
        )
    return HittingReport(
        algorithm=a.name,
        x=x,
        n=n,
        mean=mean,
        formula=formula,
        matches=mean == formula,
        first_hits=hits if record else None,
    )
