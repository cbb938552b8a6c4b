"""Neighborhood relations on the search space and the structural
functionals defined on top of them: steepness, diameter and strict local
minima, plus classes of functions constrained by those functionals.
"""
import abc
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx
from sympy.utilities.iterables import multiset_permutations

from nflab.config import DEFAULT_GUARDS, Guards
from nflab.exceptions import (
    BoundNotBelowMaximum,
    EmptyClass,
    InvalidArgument,
    NoWitness,
    SteepnessUndefined,
)
from nflab.functions import (
    CostDomain,
    CupWitness,
    FunctionSet,
    Histogram,
    ObjectiveFunction,
    Permutation,
    SearchSpace,
    compose,
    enumerate_functions,
    histogram_of,
    is_cup,
)
from nflab.helpers import StrEnum
from nflab.schema import JsonSchemaMixin

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def _edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class NeighborhoodRelation:
    """Symmetric, irreflexive adjacency; edges are stored as (i, j), i < j."""

    size: int
    edges: FrozenSet[Edge]
    name: str = "custom"
    _adjacency: Tuple[Tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if self.size < 1:
            raise InvalidArgument("neighborhood needs at least one point")
        edges = set()
        for i, j in self.edges:
            if i == j:
                raise InvalidArgument(f"self-edge ({i}, {j}) is not allowed")
            if not (0 <= i < self.size and 0 <= j < self.size):
                raise InvalidArgument(f"edge ({i}, {j}) leaves the space")
            edges.add(_edge(i, j))
        adjacency = [[] for _ in range(self.size)]
        for i, j in sorted(edges):
            adjacency[i].append(j)
            adjacency[j].append(i)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(
            self, "_adjacency", tuple(tuple(sorted(a)) for a in adjacency)
        )

    @classmethod
    def from_graph(cls, graph: nx.Graph, name: str) -> "NeighborhoodRelation":
        return cls(
            graph.number_of_nodes(),
            frozenset(_edge(i, j) for i, j in graph.edges),
            name,
        )

    def __call__(self, i: int, j: int) -> int:
        return int(i != j and _edge(i, j) in self.edges)

    def neighbors(self, point: int) -> Tuple[int, ...]:
        return self._adjacency[point]


def make_hypercube(length: int) -> NeighborhoodRelation:
    """Bit-strings at Hamming distance 1, points numbered MSB first."""
    if length < 1:
        raise InvalidArgument("hypercube dimension must be >= 1")
    graph = nx.hypercube_graph(length)

    def encode(node) -> int:
        bits = node if isinstance(node, tuple) else (node,)
        return int("".join(str(b) for b in bits), 2)

    graph = nx.relabel_nodes(graph, {node: encode(node) for node in graph})
    return NeighborhoodRelation.from_graph(graph, "hypercube")


def make_ring(size: int) -> NeighborhoodRelation:
    if size < 3:
        raise InvalidArgument("a ring needs at least 3 points")
    return NeighborhoodRelation.from_graph(nx.cycle_graph(size), "ring")


def make_complete(size: int) -> NeighborhoodRelation:
    return NeighborhoodRelation.from_graph(nx.complete_graph(size), "complete")


def make_empty(size: int) -> NeighborhoodRelation:
    return NeighborhoodRelation.from_graph(nx.empty_graph(size), "empty")


def make_custom(
    size: int, edges: Iterable[Sequence[int]], name: str = "custom"
) -> NeighborhoodRelation:
    graph = nx.Graph()
    graph.add_nodes_from(range(size))
    for edge in edges:
        if len(edge) != 2 or not all(isinstance(v, int) for v in edge):
            raise InvalidArgument(f"malformed edge {edge!r}")
        i, j = edge
        if i == j or not (0 <= i < size and 0 <= j < size):
            raise InvalidArgument(f"malformed edge {edge!r}")
        graph.add_edge(i, j)
    return NeighborhoodRelation.from_graph(graph, name)


def neighborhood_by_name(name: str, size: int) -> NeighborhoodRelation:
    if name == "ring":
        return make_ring(size)
    if name == "hypercube":
        length = size.bit_length() - 1
        if size < 2 or 2 ** length != size:
            raise InvalidArgument(f"hypercube needs 2^l points, not {size}")
        return make_hypercube(length)
    if name == "complete":
        return make_complete(size)
    if name == "empty":
        return make_empty(size)
    raise InvalidArgument(f"unknown neighborhood '{name}'")


def is_nontrivial(n: NeighborhoodRelation) -> bool:
    pairs = n.size * (n.size - 1) // 2
    return 0 < len(n.edges) < pairs


def is_invariant_under(n: NeighborhoodRelation, pi: Permutation) -> bool:
    return {_edge(pi(i), pi(j)) for i, j in n.edges} == n.edges


def find_noninvariant_permutation(
    n: NeighborhoodRelation, guards: Guards = DEFAULT_GUARDS
) -> Permutation:
    if not is_nontrivial(n):
        raise NoWitness(
            f"neighborhood '{n.name}' is trivial and therefore invariant"
        )
    guards.check_space("permutation search", n.size)
    for i, j in itertools.combinations(range(n.size), 2):
        pi = Permutation.transposition(n.size, i, j)
        if not is_invariant_under(n, pi):
            return pi
    for image in itertools.permutations(range(n.size)):
        pi = Permutation(image)
        if not is_invariant_under(n, pi):
            return pi
    raise NoWitness(f"every permutation preserves '{n.name}'")


class CostMetric(abc.ABC):
    name: str = "metric"

    @abc.abstractmethod
    def __call__(self, a: Fraction, b: Fraction) -> Fraction:
        raise NotImplementedError


class AbsoluteDifference(CostMetric):
    name = "absolute"

    def __call__(self, a: Fraction, b: Fraction) -> Fraction:
        return abs(Fraction(a) - Fraction(b))


ABSOLUTE = AbsoluteDifference()


def check_metric(d: CostMetric, costs: CostDomain) -> bool:
    """Spot-test the metric axioms on every pair and triple of costs."""
    values = costs.values
    for a, b in itertools.product(values, repeat=2):
        if d(a, b) < 0 or d(a, b) != d(b, a):
            return False
        if (d(a, b) == 0) != (a == b):
            return False
    return all(
        d(a, c) <= d(a, b) + d(b, c)
        for a, b, c in itertools.product(values, repeat=3)
    )


def steepness(
    f: ObjectiveFunction, n: NeighborhoodRelation, d: CostMetric = ABSOLUTE
) -> Fraction:
    """s_max: the largest cost gap across a neighbored pair."""
    if not n.edges:
        raise SteepnessUndefined(f"neighborhood '{n.name}' has no edges")
    return max(d(f.value(i), f.value(j)) for i, j in n.edges)


def diameter(f: ObjectiveFunction, d: CostMetric = ABSOLUTE) -> Fraction:
    """d_max: the largest cost gap across any pair."""
    values = sorted(set(f.values))
    return max(
        (d(a, b) for a, b in itertools.combinations(values, 2)),
        default=Fraction(0),
    )


def _minima(table: Sequence[int], n: NeighborhoodRelation) -> Iterator[int]:
    for point, cost in enumerate(table):
        # isolated points qualify vacuously
        if all(cost < table[nb] for nb in n.neighbors(point)):
            yield point


def local_minima(
    f: ObjectiveFunction, n: NeighborhoodRelation
) -> Tuple[int, ...]:
    return tuple(_minima(f.table, n))


def local_minima_count(f: ObjectiveFunction, n: NeighborhoodRelation) -> int:
    return sum(1 for _ in _minima(f.table, n))


def l_max(
    f: ObjectiveFunction,
    n: NeighborhoodRelation,
    guards: Guards = DEFAULT_GUARDS,
) -> int:
    """Most strict local minima attained anywhere in f's basis class."""
    h = histogram_of(f)
    guards.check_orbit("local minima orbit scan", h.orbit_size)
    return max(
        sum(1 for _ in _minima(table, n))
        for table in multiset_permutations(list(f.table))
    )


@dataclass
class StructureReport(JsonSchemaMixin):
    """Structural functionals of one function under one neighborhood"""

    function: Tuple[int, ...]
    s_max: Fraction
    d_max: Fraction
    local_minima: int
    l_max: int


def analyze(
    f: ObjectiveFunction,
    n: NeighborhoodRelation,
    d: CostMetric = ABSOLUTE,
    guards: Guards = DEFAULT_GUARDS,
) -> StructureReport:
    return StructureReport(
        function=f.table,
        s_max=steepness(f, n, d),
        d_max=diameter(f, d),
        local_minima=local_minima_count(f, n),
        l_max=l_max(f, n, guards),
    )


class ConstraintKind(StrEnum):
    STEEPNESS = "steepness"
    MINIMA = "minima"


@dataclass(frozen=True)
class ConstrainedClass:
    """All functions whose constrained functional is at most `bound`."""

    kind: ConstraintKind
    bound: Fraction
    functions: FunctionSet
    maximum: Fraction
    certificate: Optional[CupWitness]


def _extreme_witness(
    F: FunctionSet,
    kind: ConstraintKind,
    n: NeighborhoodRelation,
    d: CostMetric,
) -> CupWitness:
    """The witness whose image has the largest functional value, lowest
    image table on ties; for minima-bounded classes on a hypercube this
    lands on parity."""

    def functional(g: ObjectiveFunction) -> Fraction:
        if kind is ConstraintKind.STEEPNESS:
            return steepness(g, n, d)
        return Fraction(local_minima_count(g, n))

    best: Optional[Tuple[Fraction, Tuple[int, ...]]] = None
    witness: Optional[CupWitness] = None
    for f in F:
        for i, j in itertools.combinations(F.space.points, 2):
            pi = Permutation.transposition(F.space.size, i, j)
            image = compose(f, pi)
            if image in F:
                continue
            key = (-functional(image), image.table)
            if best is None or key < best:
                best, witness = key, CupWitness(f, pi, image)
    if witness is None:
        raise AssertionError("set is not closed but no swap leaves it")
    return witness


def constrained_class(
    space: SearchSpace,
    costs: CostDomain,
    n: NeighborhoodRelation,
    kind: ConstraintKind,
    bound: Union[int, Fraction],
    d: CostMetric = ABSOLUTE,
    guards: Guards = DEFAULT_GUARDS,
) -> ConstrainedClass:
    bound = Fraction(bound)
    if n.size != space.size:
        raise InvalidArgument("neighborhood and space sizes differ")

    if kind is ConstraintKind.STEEPNESS:
        members = tuple(
            f
            for f in enumerate_functions(space, costs, guards)
            if steepness(f, n, d) <= bound
        )
    else:
        members = tuple(
            f
            for f in enumerate_functions(space, costs, guards)
            if local_minima_count(f, n) <= bound
        )
    if not members:
        raise EmptyClass(f"no function has {kind} <= {bound}")

    if kind is ConstraintKind.STEEPNESS:
        maximum = max(diameter(f, d) for f in members)
    else:
        # l_max is constant on a basis class
        per_class: Dict[Histogram, int] = {}
        for f in members:
            h = histogram_of(f)
            if h not in per_class:
                per_class[h] = l_max(f, n, guards)
        maximum = Fraction(max(per_class.values()))
    if not bound < maximum:
        raise BoundNotBelowMaximum(
            f"{kind} bound {bound} is not below the maximal possible "
            f"{maximum}"
        )

    F = FunctionSet(space, costs, members)
    check = is_cup(F, guards)
    logger.info(
        "%s <= %s: %d functions, closed=%s", kind, bound, len(F), check.closed
    )
    witness = None if check else _extreme_witness(F, kind, n, d)
    return ConstrainedClass(kind, bound, F, maximum, witness)


@dataclass
class ClassCertificate(JsonSchemaMixin):
    """Closure verdict for a constrained class; the witness fields are set
    when the class is not closed"""

    kind: ConstraintKind
    bound: Fraction
    size: int
    maximum: Fraction
    closed: bool
    function: Optional[List[int]] = None
    permutation: Optional[List[int]] = None
    image: Optional[List[int]] = None


def certify(constrained: ConstrainedClass) -> ClassCertificate:
    witness = constrained.certificate
    return ClassCertificate(
        kind=constrained.kind,
        bound=constrained.bound,
        size=len(constrained.functions),
        maximum=constrained.maximum,
        closed=witness is None,
        function=list(witness.function.table) if witness else None,
        permutation=list(witness.permutation.image) if witness else None,
        image=list(witness.image.table) if witness else None,
    )
