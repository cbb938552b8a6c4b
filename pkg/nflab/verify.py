"""Performance distributions and exact No-Free-Lunch checks.

A performance distribution for (a, m, c) maps every realized performance
value k to the total weight of the functions on which `a` scores k after m
evaluations. Plain function sets weigh every member 1; function
distributions use p(f). Two distributions are equal iff their mass tables
are equal, so unrealized k never need comparing.
"""
import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from nflab.config import DEFAULT_GUARDS, Guards
from nflab.exceptions import (
    CalledOnClosedSet,
    CalledOnCompliantDistribution,
    InvalidArgument,
)
from nflab.functions import (
    CostDomain,
    FunctionSet,
    Histogram,
    ObjectiveFunction,
    Permutation,
    SearchSpace,
    compose,
    enumerate_functions,
    histogram_of,
    is_cup,
    permutation_between,
)
from nflab.schema import JsonSchemaMixin
from nflab.search import (
    OrderDriven,
    PerformanceMeasure,
    SearchAlgorithm,
    SequenceIndicator,
    Trace,
    iterate,
)

logger = logging.getLogger(__name__)

Table = Tuple[int, ...]


@dataclass(frozen=True)
class FunctionDistribution:
    """p(f) over a function set; weights are aligned with the set's
    canonical order, may be zero, and sum to exactly 1."""

    functions: FunctionSet
    weights: Tuple[Fraction, ...]
    _by_table: Dict[Table, Fraction] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        if len(weights) != len(self.functions):
            raise InvalidArgument(
                f"{len(weights)} weights for {len(self.functions)} functions"
            )
        if any(w < 0 for w in weights):
            raise InvalidArgument("probabilities must be non-negative")
        total = sum(weights, Fraction(0))
        if total != 1:
            raise InvalidArgument(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(
            self,
            "_by_table",
            {f.table: w for f, w in zip(self.functions, weights)},
        )

    @classmethod
    def from_mapping(
        cls,
        space: SearchSpace,
        costs: CostDomain,
        weights: Mapping[Table, Union[int, Fraction]],
    ) -> "FunctionDistribution":
        F = FunctionSet.of(space, costs, weights.keys())
        return cls(F, tuple(Fraction(weights[f.table]) for f in F))

    @classmethod
    def uniform(cls, F: FunctionSet) -> "FunctionDistribution":
        share = Fraction(1, len(F))
        return cls(F, tuple(share for _ in F))

    @classmethod
    def from_vector(
        cls,
        space: SearchSpace,
        costs: CostDomain,
        weights: Sequence[Union[int, Fraction]],
        guards: Guards = DEFAULT_GUARDS,
    ) -> "FunctionDistribution":
        """Weights aligned with `enumerate_functions`, one per function."""
        total = costs.size ** space.size
        if len(weights) != total:
            raise InvalidArgument(
                f"expected {total} weights, one per function, got "
                f"{len(weights)}"
            )
        return cls(FunctionSet.full(space, costs, guards), tuple(weights))

    @classmethod
    def class_constant(
        cls,
        space: SearchSpace,
        costs: CostDomain,
        class_weights: Mapping[Histogram, Union[int, Fraction]],
        guards: Guards = DEFAULT_GUARDS,
    ) -> "FunctionDistribution":
        """Spread each basis class's weight evenly over its members.

        Class weights are normalized exactly; classes not mentioned get 0.
        """
        total = sum((Fraction(w) for w in class_weights.values()), Fraction())
        if total <= 0:
            raise InvalidArgument("class weights must have positive sum")
        F = FunctionSet.full(space, costs, guards)
        weights = []
        for f in F:
            h = histogram_of(f)
            w = Fraction(class_weights.get(h, 0))
            weights.append(w / (total * h.orbit_size))
        return cls(F, tuple(weights))

    @property
    def space(self) -> SearchSpace:
        return self.functions.space

    @property
    def costs(self) -> CostDomain:
        return self.functions.costs

    def __len__(self) -> int:
        return len(self.functions)

    def weight(self, f: Union[ObjectiveFunction, Table]) -> Fraction:
        table = f.table if isinstance(f, ObjectiveFunction) else tuple(f)
        return self._by_table.get(table, Fraction(0))

    def items(self) -> Iterator[Tuple[ObjectiveFunction, Fraction]]:
        return zip(self.functions, self.weights)


def iid_distribution(
    space: SearchSpace,
    costs: CostDomain,
    q: Sequence[Union[int, Fraction]],
    guards: Guards = DEFAULT_GUARDS,
) -> FunctionDistribution:
    """Every point's value drawn independently from q: p(f) = Π q(f(x))."""
    q = [Fraction(v) for v in q]
    if len(q) != costs.size:
        raise InvalidArgument(
            f"value distribution has {len(q)} entries, |Y| = {costs.size}"
        )
    weights = []
    for f in enumerate_functions(space, costs, guards):
        p = Fraction(1)
        for v in f.table:
            p *= q[v]
        weights.append(p)
    return FunctionDistribution(
        FunctionSet.full(space, costs, guards), tuple(weights)
    )


def marginal_pxy(
    D: FunctionDistribution, x: int, y: Union[int, Fraction]
) -> Fraction:
    """p_x(y): the probability that point x is mapped to cost value y."""
    if not 0 <= x < D.space.size:
        raise InvalidArgument(f"point {x} outside the space")
    index = D.costs.index(y)
    return sum(
        (w for f, w in D.items() if f(x) == index),
        Fraction(0),
    )


def marginals_identical(D: FunctionDistribution) -> bool:
    """p_{x1} = p_{x2} for every pair of points."""
    first = [marginal_pxy(D, 0, y) for y in D.costs.values]
    return all(
        [marginal_pxy(D, x, y) for y in D.costs.values] == first
        for x in D.space.points
    )


@dataclass(frozen=True)
class Mass(JsonSchemaMixin):
    k: Fraction
    mass: Fraction


@dataclass
class PerformanceDistribution(JsonSchemaMixin):
    """Mass of every realized performance value, sorted by k."""

    algorithm: str
    m: int
    measure: str
    masses: List[Mass] = field(default_factory=list)

    def as_dict(self) -> Dict[Fraction, Fraction]:
        return {entry.k: entry.mass for entry in self.masses}

    def mass(self, k: Union[int, Fraction]) -> Fraction:
        return self.as_dict().get(Fraction(k), Fraction(0))

    @property
    def total(self) -> Fraction:
        return sum((entry.mass for entry in self.masses), Fraction(0))

    def same_masses(self, other: "PerformanceDistribution") -> bool:
        return self.as_dict() == other.as_dict()


Weighted = List[Tuple[ObjectiveFunction, Fraction]]


def _weighted(F: Union[FunctionSet, FunctionDistribution]) -> Weighted:
    if isinstance(F, FunctionDistribution):
        return [(f, w) for f, w in F.items() if w]
    return [(f, Fraction(1)) for f in F]


def _fold(
    weighted: Weighted,
    traces: Iterable[Trace],
    name: str,
    m: int,
    c: PerformanceMeasure,
) -> PerformanceDistribution:
    masses: Dict[Fraction, Fraction] = defaultdict(Fraction)
    for (_, w), trace in zip(weighted, traces):
        masses[c(trace.prefix(m).values)] += w
    return PerformanceDistribution(
        name,
        m,
        c.name,
        [Mass(k, masses[k]) for k in sorted(masses) if masses[k]],
    )


def _full_trace(a: SearchAlgorithm, f: ObjectiveFunction) -> Trace:
    trace = Trace(f.costs)
    for trace in iterate(a, f):
        pass
    return trace


def _check_ms(space: SearchSpace, ms: Iterable[int]) -> List[int]:
    ms = list(ms)
    for m in ms:
        if not 1 <= m <= space.size:
            raise InvalidArgument(f"m={m} outside 1..{space.size}")
    return ms


def performance_distribution(
    F: Union[FunctionSet, FunctionDistribution],
    a: SearchAlgorithm,
    m: int,
    c: PerformanceMeasure,
    guards: Guards = DEFAULT_GUARDS,
) -> PerformanceDistribution:
    _check_ms(F.space, [m])
    guards.check_functions("performance distribution", len(F))
    weighted = _weighted(F)
    traces = (_full_trace(a, f) for f, _ in weighted)
    return _fold(weighted, traces, a.name, m, c)


@dataclass
class Mismatch(JsonSchemaMixin):
    """Two algorithms put different mass on performance value k."""

    k: Fraction
    left_algorithm: str
    right_algorithm: str
    measure: str
    m: int
    left_mass: Fraction
    right_mass: Fraction


@dataclass
class Verdict(JsonSchemaMixin):
    equal: bool
    witness: Optional[Mismatch] = None
    distributions: List[PerformanceDistribution] = field(
        default_factory=list
    )

    def __post_init__(self):
        if not self.equal and self.witness is None:
            raise InvalidArgument("an unequal verdict needs a witness")

    def __bool__(self) -> bool:
        return self.equal


def _mismatch(
    left: PerformanceDistribution, right: PerformanceDistribution
) -> Mismatch:
    lmap, rmap = left.as_dict(), right.as_dict()
    k = min(
        k
        for k in set(lmap) | set(rmap)
        if lmap.get(k, Fraction(0)) != rmap.get(k, Fraction(0))
    )
    return Mismatch(
        k,
        left.algorithm,
        right.algorithm,
        left.measure,
        left.m,
        left.mass(k),
        right.mass(k),
    )


def _verify(
    F: Union[FunctionSet, FunctionDistribution],
    algos: Sequence[SearchAlgorithm],
    ms: Iterable[int],
    cs: Sequence[PerformanceMeasure],
    guards: Guards,
) -> Verdict:
    if not algos:
        raise InvalidArgument("no algorithms to compare")
    ms = _check_ms(F.space, ms)
    guards.check_functions("NFL sweep", len(F))
    weighted = _weighted(F)
    logger.info(
        "comparing %d algorithms on %d functions, m=%s, measures=%s",
        len(algos),
        len(weighted),
        ms,
        [c.name for c in cs],
    )
    # one full run per (algorithm, function); every m is a prefix
    traces = [[_full_trace(a, f) for f, _ in weighted] for a in algos]

    witness: Optional[Mismatch] = None
    distributions = []
    for m, c in itertools.product(ms, cs):
        row = [
            _fold(weighted, runs, a.name, m, c)
            for a, runs in zip(algos, traces)
        ]
        distributions.extend(row)
        if witness is None:
            for other in row[1:]:
                if not row[0].same_masses(other):
                    witness = _mismatch(row[0], other)
                    logger.debug("distributions differ: %s", witness)
                    break
    return Verdict(witness is None, witness, distributions)


def verify_uniform_nfl(
    F: FunctionSet,
    algos: Sequence[SearchAlgorithm],
    ms: Iterable[int],
    cs: Sequence[PerformanceMeasure],
    guards: Guards = DEFAULT_GUARDS,
) -> Verdict:
    return _verify(F, algos, ms, cs, guards)


def verify_nonuniform_nfl(
    D: FunctionDistribution,
    algos: Sequence[SearchAlgorithm],
    ms: Iterable[int],
    cs: Sequence[PerformanceMeasure],
    guards: Guards = DEFAULT_GUARDS,
) -> Verdict:
    return _verify(D, algos, ms, cs, guards)


@dataclass
class CounterexampleReport(JsonSchemaMixin):
    function: List[int]
    permutation: List[int]
    image: List[int]
    left_algorithm: str
    right_algorithm: str
    target: List[Fraction]
    k: Fraction
    m: int
    left_mass: Fraction
    right_mass: Fraction


@dataclass(frozen=True)
class Counterexample:
    """Two enumeration orders that a full-sequence indicator tells apart.

    `left` visits the points in canonical order and `right` in the order
    π⁻¹(0), π⁻¹(1), ...; the indicator scores 1 exactly on f's canonical
    value sequence. Under `left` only f produces it, under `right` only
    f∘π does.
    """

    function: ObjectiveFunction
    permutation: Permutation
    image: ObjectiveFunction
    left: SearchAlgorithm
    right: SearchAlgorithm
    measure: SequenceIndicator
    k: Fraction
    m: int
    left_mass: Fraction
    right_mass: Fraction

    @property
    def masses(self) -> Tuple[Fraction, Fraction]:
        return (self.left_mass, self.right_mass)

    def to_report(self) -> CounterexampleReport:
        return CounterexampleReport(
            function=list(self.function.table),
            permutation=list(self.permutation.image),
            image=list(self.image.table),
            left_algorithm=self.left.name,
            right_algorithm=self.right.name,
            target=list(self.measure.target),
            k=self.k,
            m=self.m,
            left_mass=self.left_mass,
            right_mass=self.right_mass,
        )


def _separate(
    F: Union[FunctionSet, FunctionDistribution],
    f: ObjectiveFunction,
    pi: Permutation,
    guards: Guards,
) -> Counterexample:
    n = f.space.size
    left = OrderDriven(Permutation.identity(n))
    right = OrderDriven(pi.inverse)
    indicator = SequenceIndicator(f.values)
    k = Fraction(1)
    left_mass = performance_distribution(F, left, n, indicator, guards)
    right_mass = performance_distribution(F, right, n, indicator, guards)
    example = Counterexample(
        function=f,
        permutation=pi,
        image=compose(f, pi),
        left=left,
        right=right,
        measure=indicator,
        k=k,
        m=n,
        left_mass=left_mass.mass(k),
        right_mass=right_mass.mass(k),
    )
    logger.info(
        "counterexample for %s: masses %s vs %s",
        f,
        example.left_mass,
        example.right_mass,
    )
    return example


def construct_counterexample(
    F: FunctionSet, guards: Guards = DEFAULT_GUARDS
) -> Counterexample:
    check = is_cup(F, guards)
    if check.closed or check.witness is None:
        raise CalledOnClosedSet("set is closed under permutation")
    witness = check.witness
    return _separate(F, witness.function, witness.permutation, guards)


@dataclass
class ConditionViolation(JsonSchemaMixin):
    """f and g share the histogram but not the probability."""

    histogram: List[int]
    f: List[int]
    g: List[int]
    p_f: Fraction
    p_g: Fraction


@dataclass
class ConditionCheck(JsonSchemaMixin):
    holds: bool
    violation: Optional[ConditionViolation] = None

    def __bool__(self) -> bool:
        return self.holds


def _violation(
    D: FunctionDistribution, guards: Guards
) -> Optional[Tuple[Histogram, ObjectiveFunction, ObjectiveFunction]]:
    classes: Dict[Histogram, List[ObjectiveFunction]] = defaultdict(list)
    # absent functions weigh 0 and still take part
    for f in enumerate_functions(D.space, D.costs, guards):
        classes[histogram_of(f)].append(f)
    for h in sorted(classes, key=lambda h: h.counts, reverse=True):
        members = sorted(classes[h], key=lambda f: f.number)
        heaviest = max(D.weight(f) for f in members)
        f = next(f for f in members if D.weight(f) == heaviest)
        g = next((g for g in members if D.weight(g) != heaviest), None)
        if g is not None:
            return h, f, g
    return None


def check_nonuniform_condition(
    D: FunctionDistribution, guards: Guards = DEFAULT_GUARDS
) -> ConditionCheck:
    """True iff p is constant on every basis class of the full space.

    On failure the reported f is the lowest-numbered member of maximal
    weight in the first offending class and g the lowest-numbered member
    whose weight differs.
    """
    found = _violation(D, guards)
    if found is None:
        return ConditionCheck(True)
    h, f, g = found
    return ConditionCheck(
        False,
        ConditionViolation(
            histogram=list(h.counts),
            f=list(f.table),
            g=list(g.table),
            p_f=D.weight(f),
            p_g=D.weight(g),
        ),
    )


def construct_nonuniform_counterexample(
    D: FunctionDistribution, guards: Guards = DEFAULT_GUARDS
) -> Counterexample:
    found = _violation(D, guards)
    if found is None:
        raise CalledOnCompliantDistribution(
            "probabilities are constant on every basis class"
        )
    _, f, g = found
    return _separate(D, f, permutation_between(f, g), guards)
