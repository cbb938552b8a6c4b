"""Non-repeating black-box search.

An algorithm maps the trace of visited (point, cost) pairs to a fresh
point. Stochastic strategies are seed-indexed deterministic strategies:
every seed drives numpy's PCG64 generator, so a (algorithm, seed, f, m)
quadruple always produces the same trace.
"""
import abc
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Dict,
    FrozenSet,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from nflab.exceptions import ContractViolation, InvalidArgument
from nflab.functions import CostDomain, ObjectiveFunction, Permutation
from nflab.functions import SearchSpace
from nflab.structure import NeighborhoodRelation

logger = logging.getLogger(__name__)

# memoize gives up on a heuristic after |X| * STALL_FACTOR repeats
STALL_FACTOR = 64

Pair = Tuple[int, int]


@dataclass(frozen=True)
class Trace:
    """Visited points with their cost indices, in visit order."""

    costs: CostDomain
    pairs: Tuple[Pair, ...] = ()
    _visited: FrozenSet[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pairs = tuple((int(p), int(c)) for p, c in self.pairs)
        visited = frozenset(p for p, _ in pairs)
        if len(visited) != len(pairs):
            raise ContractViolation(f"trace revisits a point: {pairs}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "_visited", visited)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def visited(self) -> FrozenSet[int]:
        return self._visited

    @property
    def points(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    @property
    def cost_indices(self) -> Tuple[int, ...]:
        return tuple(c for _, c in self.pairs)

    @property
    def values(self) -> Tuple[Fraction, ...]:
        """Y(f, m, a): the cost values in visit order."""
        return tuple(self.costs[c] for _, c in self.pairs)

    def extend(self, point: int, cost: int) -> "Trace":
        return Trace(self.costs, self.pairs + ((point, cost),))

    def prefix(self, m: int) -> "Trace":
        return Trace(self.costs, self.pairs[:m])


def _lowest_unvisited(space: SearchSpace, visited: FrozenSet[int]) -> int:
    return next(p for p in space.points if p not in visited)


class SearchAlgorithm(abc.ABC):
    """Strategy contract: given a trace, return one unvisited point.

    Instances hold per-run state; `reset` is called before every run.
    """

    name: str = "algorithm"
    seed: Optional[int] = None

    def reset(self, space: SearchSpace) -> None:
        self.space = space

    @abc.abstractmethod
    def propose(self, trace: Trace) -> int:
        raise NotImplementedError

    def reseed(self, seed: int) -> "SearchAlgorithm":
        return self

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class Lexicographic(SearchAlgorithm):
    name = "lex"

    def propose(self, trace: Trace) -> int:
        return _lowest_unvisited(self.space, trace.visited)


class OrderDriven(SearchAlgorithm):
    """Visits π(0), π(1), ... regardless of the observed costs."""

    def __init__(self, order: Permutation, name: Optional[str] = None):
        self.order = order
        self.name = name or "order:" + "-".join(map(str, order.image))

    def reset(self, space: SearchSpace) -> None:
        if len(self.order) != space.size:
            raise InvalidArgument(
                f"{self.name} orders {len(self.order)} points, space has "
                f"{space.size}"
            )
        super().reset(space)

    def propose(self, trace: Trace) -> int:
        return next(p for p in self.order.image if p not in trace.visited)


class SeededRandom(SearchAlgorithm):
    """Uniform random enumeration, the permutation fixed by the seed."""

    def __init__(self, seed: int):
        self.seed = seed
        self.name = f"rand:{seed}"

    def reset(self, space: SearchSpace) -> None:
        super().reset(space)
        rng = np.random.Generator(np.random.PCG64(self.seed))
        self._order = tuple(int(p) for p in rng.permutation(space.size))

    def propose(self, trace: Trace) -> int:
        return next(p for p in self._order if p not in trace.visited)

    def reseed(self, seed: int) -> "SeededRandom":
        return SeededRandom(seed)


class HillClimber(SearchAlgorithm):
    """Best-improvement climber on a neighborhood relation.

    The position stays put until every neighbor of it has been evaluated,
    proposing the lowest-index unvisited one each step. It then moves to
    the best neighbor (lowest index on ties) if that strictly improves on
    the position; otherwise the climber restarts at the lowest-index
    unvisited point, which becomes the new position. The starting point
    is drawn from the seed.
    """

    def __init__(self, neighborhood: NeighborhoodRelation, seed: int = 0):
        self.neighborhood = neighborhood
        self.seed = seed
        self.name = f"hill:{neighborhood.name}:{seed}"

    def reset(self, space: SearchSpace) -> None:
        if self.neighborhood.size != space.size:
            raise InvalidArgument(
                f"{self.name} is defined on {self.neighborhood.size} points, "
                f"space has {space.size}"
            )
        super().reset(space)
        rng = np.random.Generator(np.random.PCG64(self.seed))
        self._start = int(rng.integers(space.size))

    def _settle(
        self, position: int, database: Dict[int, int]
    ) -> Optional[int]:
        # climbs while the position's neighborhood is fully evaluated
        while True:
            neighbors = self.neighborhood.neighbors(position)
            if any(nb not in database for nb in neighbors):
                return position
            if not neighbors:
                return None
            best = min(neighbors, key=lambda nb: (database[nb], nb))
            if database[best] >= database[position]:
                return None
            position = best

    def _position(self, trace: Trace) -> Optional[int]:
        # replayed from the trace, so the choice is a function of it
        position: Optional[int] = None
        database: Dict[int, int] = {}
        for point, cost in trace.pairs:
            database[point] = cost
            if position is None:
                position = point
            position = self._settle(position, database)
        return position

    def propose(self, trace: Trace) -> int:
        if not trace.pairs:
            return self._start
        position = self._position(trace)
        if position is None:
            return _lowest_unvisited(self.space, trace.visited)
        return min(
            nb
            for nb in self.neighborhood.neighbors(position)
            if nb not in trace.visited
        )

    def reseed(self, seed: int) -> "HillClimber":
        return HillClimber(self.neighborhood, seed)


class RepeatingHeuristic(abc.ABC):
    """A proposal rule that may revisit points; see `memoize`.

    `history` holds every (point, cost) the heuristic was served,
    repeats included.
    """

    name: str = "heuristic"

    def reset(self, space: SearchSpace) -> None:
        self.space = space

    @abc.abstractmethod
    def propose(self, history: Sequence[Pair], costs: CostDomain) -> int:
        raise NotImplementedError

    def reseed(self, seed: int) -> "RepeatingHeuristic":
        return self


class ConstantProposal(RepeatingHeuristic):
    def __init__(self, point: int = 0):
        self.point = point
        self.name = f"const:{point}"

    def propose(self, history: Sequence[Pair], costs: CostDomain) -> int:
        return self.point


class ResampleWithReplacement(RepeatingHeuristic):
    def __init__(self, seed: int):
        self.seed = seed
        self.name = f"resample:{seed}"

    def reset(self, space: SearchSpace) -> None:
        super().reset(space)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def propose(self, history: Sequence[Pair], costs: CostDomain) -> int:
        return int(self._rng.integers(self.space.size))

    def reseed(self, seed: int) -> "ResampleWithReplacement":
        return ResampleWithReplacement(seed)


class NeighborhoodWalk(RepeatingHeuristic):
    """Mutation-style proposals: a random neighbor of the best point so
    far (earliest wins ties)."""

    def __init__(self, neighborhood: NeighborhoodRelation, seed: int):
        self.neighborhood = neighborhood
        self.seed = seed
        self.name = f"walk:{neighborhood.name}:{seed}"

    def reset(self, space: SearchSpace) -> None:
        super().reset(space)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def propose(self, history: Sequence[Pair], costs: CostDomain) -> int:
        if not history:
            return int(self._rng.integers(self.space.size))
        best, _ = min(history, key=lambda pair: pair[1])
        options = self.neighborhood.neighbors(best)
        if not options:
            return int(self._rng.integers(self.space.size))
        return options[int(self._rng.integers(len(options)))]

    def reseed(self, seed: int) -> "NeighborhoodWalk":
        return NeighborhoodWalk(self.neighborhood, seed)


class AlgorithmHeuristic(RepeatingHeuristic):
    def __init__(self, algorithm: SearchAlgorithm):
        self.algorithm = algorithm
        self.name = algorithm.name

    def reset(self, space: SearchSpace) -> None:
        super().reset(space)
        self.algorithm.reset(space)

    def propose(self, history: Sequence[Pair], costs: CostDomain) -> int:
        seen: Dict[int, int] = {}
        for point, cost in history:
            seen.setdefault(point, cost)
        return self.algorithm.propose(Trace(costs, tuple(seen.items())))

    def reseed(self, seed: int) -> "AlgorithmHeuristic":
        return AlgorithmHeuristic(self.algorithm.reseed(seed))


class Memoized(SearchAlgorithm):
    """Couples a repeating heuristic with a search-point database.

    Repeated proposals are answered from the database without spending an
    evaluation; the first novel proposal is returned.
    """

    def __init__(self, heuristic: RepeatingHeuristic):
        self.heuristic = heuristic
        self.name = f"memo:{heuristic.name}"

    def reset(self, space: SearchSpace) -> None:
        super().reset(space)
        self.heuristic.reset(space)
        self._history: List[Pair] = []
        self._synced = 0

    def propose(self, trace: Trace) -> int:
        self._history.extend(trace.pairs[self._synced :])
        self._synced = len(trace)
        database = dict(trace.pairs)

        for _ in range(self.space.size * STALL_FACTOR):
            point = self.heuristic.propose(self._history, trace.costs)
            if not 0 <= point < self.space.size:
                raise ContractViolation(
                    f"heuristic '{self.heuristic.name}' proposed {point}"
                )
            if point not in database:
                return point
            self._history.append((point, database[point]))
        logger.debug("%s stalled, falling back", self.name)
        return _lowest_unvisited(self.space, trace.visited)

    def reseed(self, seed: int) -> "Memoized":
        return Memoized(self.heuristic.reseed(seed))


def make_lexicographic() -> SearchAlgorithm:
    return Lexicographic()


def make_order_driven(order: Permutation) -> SearchAlgorithm:
    return OrderDriven(order)


def make_seeded_random(seed: int) -> SearchAlgorithm:
    return SeededRandom(seed)


def make_hill_climber(
    neighborhood: NeighborhoodRelation, seed: int = 0
) -> SearchAlgorithm:
    return HillClimber(neighborhood, seed)


def memoize(
    heuristic: Union[RepeatingHeuristic, SearchAlgorithm]
) -> SearchAlgorithm:
    if isinstance(heuristic, SearchAlgorithm):
        heuristic = AlgorithmHeuristic(heuristic)
    return Memoized(heuristic)


def iterate(a: SearchAlgorithm, f: ObjectiveFunction) -> Iterator[Trace]:
    """Successive traces of `a` on `f`, lengths 1..|X|."""
    a.reset(f.space)
    trace = Trace(f.costs)
    while len(trace) < f.space.size:
        point = a.propose(trace)
        if not 0 <= point < f.space.size or point in trace.visited:
            raise ContractViolation(
                f"algorithm '{a.name}' returned visited or invalid point "
                f"{point}"
            )
        trace = trace.extend(point, f(point))
        yield trace


def run(a: SearchAlgorithm, f: ObjectiveFunction, m: int) -> Trace:
    if not 1 <= m <= f.space.size:
        raise InvalidArgument(f"m={m} outside 1..{f.space.size}")
    for trace in iterate(a, f):
        if len(trace) == m:
            return trace
    raise AssertionError("iterate stopped early")


class PerformanceMeasure(abc.ABC):
    """Maps a non-empty cost-value sequence to an exact rational."""

    name: str = "measure"

    def __call__(self, values: Sequence[Fraction]) -> Fraction:
        if not values:
            raise ContractViolation(
                f"measure '{self.name}' needs a non-empty cost sequence"
            )
        return self._measure(tuple(values))

    @abc.abstractmethod
    def _measure(self, values: Tuple[Fraction, ...]) -> Fraction:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class MinSoFar(PerformanceMeasure):
    name = "min-so-far"

    def _measure(self, values: Tuple[Fraction, ...]) -> Fraction:
        return min(values)


class ValueAtEnd(PerformanceMeasure):
    name = "value-at-end"

    def _measure(self, values: Tuple[Fraction, ...]) -> Fraction:
        return values[-1]


class SequenceIndicator(PerformanceMeasure):
    """1 on exactly one complete cost sequence, 0 elsewhere."""

    name = "indicator"

    def __init__(self, target: Sequence[Fraction]):
        self.target = tuple(Fraction(v) for v in target)

    def _measure(self, values: Tuple[Fraction, ...]) -> Fraction:
        return Fraction(int(values == self.target))


def measure_min_so_far() -> PerformanceMeasure:
    return MinSoFar()


def measure_value_at_end() -> PerformanceMeasure:
    return ValueAtEnd()


def measure_sequence_indicator(
    target: Sequence[Fraction], space: Optional[SearchSpace] = None
) -> PerformanceMeasure:
    if space is not None and len(target) != space.size:
        raise InvalidArgument(
            f"indicator target has {len(target)} values, space has "
            f"{space.size}"
        )
    return SequenceIndicator(target)


MEASURES = {
    MinSoFar.name: measure_min_so_far,
    ValueAtEnd.name: measure_value_at_end,
}


def measure_by_name(name: str) -> PerformanceMeasure:
    try:
        return MEASURES[name]()
    except KeyError:
        raise InvalidArgument(
            f"unknown measure '{name}', expected one of {sorted(MEASURES)}"
        )
