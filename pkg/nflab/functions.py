"""Finite search spaces, objective functions as value tables, histograms,
permutations and closure-under-permutation analysis.

Points are canonical indices 0..|X|-1; cost values live once in a
CostDomain and functions refer to them by index.
"""
import itertools
import logging
import math
from collections import defaultdict
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

from sympy.utilities.iterables import multiset_permutations

from nflab.config import DEFAULT_GUARDS, Guards
from nflab.exceptions import InvalidArgument, NotClosed

logger = logging.getLogger(__name__)

# all |X|! compositions are only enumerated for the oracle cross-check
ORACLE_MAX_SPACE = 8


@dataclass(frozen=True)
class SearchSpace:
    size: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise InvalidArgument("search space size must be >= 1")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.size or len(set(labels)) != self.size:
                raise InvalidArgument(
                    f"expected {self.size} unique labels, got {labels}"
                )
            object.__setattr__(self, "labels", labels)

    @classmethod
    def bitstrings(cls, length: int) -> "SearchSpace":
        """{0,1}^length, bit-strings mapped to integers MSB first."""
        if length < 1:
            raise InvalidArgument("bit-string length must be >= 1")
        size = 2 ** length
        return cls(size, tuple(format(i, f"0{length}b") for i in range(size)))

    @property
    def points(self) -> range:
        return range(self.size)

    def label(self, point: int) -> str:
        if self.labels is None:
            return str(point)
        return self.labels[point]


@dataclass(frozen=True)
class CostDomain:
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if not values:
            raise InvalidArgument("cost domain must not be empty")
        if any(a >= b for a, b in zip(values, values[1:])):
            raise InvalidArgument(
                f"cost values must be strictly increasing: {values}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, *values: Union[int, Fraction]) -> "CostDomain":
        return cls(tuple(Fraction(v) for v in values))

    @classmethod
    def integers(cls, size: int) -> "CostDomain":
        return cls(tuple(Fraction(i) for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> Fraction:
        return self.values[index]

    def index(self, value: Union[int, Fraction]) -> int:
        try:
            return self.values.index(Fraction(value))
        except ValueError:
            raise InvalidArgument(f"{value} is not in the cost domain")


@dataclass(frozen=True)
class ObjectiveFunction:
    space: SearchSpace
    costs: CostDomain
    table: Tuple[int, ...]

    def __post_init__(self):
        table = tuple(self.table)
        if len(table) != self.space.size:
            raise InvalidArgument(
                f"table has {len(table)} entries, space has {self.space.size}"
            )
        if any(not 0 <= v < self.costs.size for v in table):
            raise InvalidArgument(
                f"table {table} indexes outside the cost domain"
            )
        object.__setattr__(self, "table", table)

    @classmethod
    def from_number(
        cls, space: SearchSpace, costs: CostDomain, number: int
    ) -> "ObjectiveFunction":
        """The k-th function when functions are numbered by reading the
        table as base-|Y| digits, least significant digit at point 0."""
        total = costs.size ** space.size
        if not 0 <= number < total:
            raise InvalidArgument(f"function number {number} out of range")
        digits = []
        for _ in space.points:
            number, digit = divmod(number, costs.size)
            digits.append(digit)
        return cls(space, costs, tuple(digits))

    @property
    def number(self) -> int:
        return sum(v * self.costs.size ** i for i, v in enumerate(self.table))

    def __call__(self, point: int) -> int:
        return self.table[point]

    def value(self, point: int) -> Fraction:
        return self.costs[self.table[point]]

    @property
    def values(self) -> Tuple[Fraction, ...]:
        return tuple(self.costs[v] for v in self.table)

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.table) + ")"


@dataclass(frozen=True)
class Histogram:
    counts: Tuple[int, ...]

    def __post_init__(self):
        counts = tuple(self.counts)
        if any(c < 0 for c in counts):
            raise InvalidArgument(f"negative multiplicity in {counts}")
        object.__setattr__(self, "counts", counts)

    def __getitem__(self, cost_index: int) -> int:
        return self.counts[cost_index]

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def orbit_size(self) -> int:
        """|B_h| = |X|! / prod_y h(y)!"""
        size = math.factorial(self.total)
        for c in self.counts:
            size //= math.factorial(c)
        return size

    def as_dict(self) -> Dict[int, int]:
        return dict(enumerate(self.counts))


@dataclass(frozen=True)
class Permutation:
    image: Tuple[int, ...]

    def __post_init__(self):
        image = tuple(self.image)
        if sorted(image) != list(range(len(image))):
            raise InvalidArgument(f"{image} is not a permutation")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(size)))

    @classmethod
    def transposition(cls, size: int, i: int, j: int) -> "Permutation":
        image = list(range(size))
        image[i], image[j] = image[j], image[i]
        return cls(tuple(image))

    @classmethod
    def cyclic_shift(cls, size: int, shift: int = 1) -> "Permutation":
        return cls(tuple((i + shift) % size for i in range(size)))

    @classmethod
    def reversal(cls, size: int) -> "Permutation":
        return cls(tuple(reversed(range(size))))

    def __len__(self) -> int:
        return len(self.image)

    def __call__(self, point: int) -> int:
        return self.image[point]

    @property
    def inverse(self) -> "Permutation":
        image = [0] * len(self.image)
        for i, target in enumerate(self.image):
            image[target] = i
        return Permutation(tuple(image))

    def then(self, other: "Permutation") -> "Permutation":
        """The permutation i -> other(self(i))."""
        return Permutation(tuple(other(target) for target in self.image))

    def __str__(self) -> str:
        return "[" + ",".join(str(i) for i in self.image) + "]"


@dataclass(frozen=True)
class FunctionSet:
    space: SearchSpace
    costs: CostDomain
    functions: Tuple[ObjectiveFunction, ...]
    _tables: FrozenSet[Tuple[int, ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        for f in self.functions:
            if f.space != self.space or f.costs != self.costs:
                raise InvalidArgument(
                    f"function {f} does not share the set's space and costs"
                )
        tables = frozenset(f.table for f in self.functions)
        object.__setattr__(
            self,
            "functions",
            tuple(
                ObjectiveFunction(self.space, self.costs, t)
                for t in sorted(tables)
            ),
        )
        object.__setattr__(self, "_tables", tables)

    @classmethod
    def of(
        cls,
        space: SearchSpace,
        costs: CostDomain,
        functions: Iterable[Union[ObjectiveFunction, Sequence[int]]],
    ) -> "FunctionSet":
        members = tuple(
            f
            if isinstance(f, ObjectiveFunction)
            else ObjectiveFunction(space, costs, tuple(f))
            for f in functions
        )
        return cls(space, costs, members)

    @classmethod
    def full(
        cls,
        space: SearchSpace,
        costs: CostDomain,
        guards: Guards = DEFAULT_GUARDS,
    ) -> "FunctionSet":
        members = tuple(enumerate_functions(space, costs, guards))
        return cls(space, costs, members)

    @property
    def tables(self) -> FrozenSet[Tuple[int, ...]]:
        return self._tables

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self) -> Iterator[ObjectiveFunction]:
        return iter(self.functions)

    def __contains__(self, f: object) -> bool:
        if isinstance(f, ObjectiveFunction):
            return (
                f.table in self._tables
                and f.space == self.space
                and f.costs == self.costs
            )
        return tuple(f) in self._tables  # type: ignore

    def __or__(self, other: "FunctionSet") -> "FunctionSet":
        return FunctionSet(
            self.space, self.costs, self.functions + other.functions
        )

    def issubset(self, other: "FunctionSet") -> bool:
        return self._tables <= other._tables


@dataclass(frozen=True)
class CupWitness:
    """f is in the set, f∘π is not."""

    function: ObjectiveFunction
    permutation: Permutation
    image: ObjectiveFunction

    def __str__(self) -> str:
        return (
            f"{self.function} composed with {self.permutation} gives "
            f"{self.image}, which is missing"
        )


@dataclass(frozen=True)
class CupCheck:
    closed: bool
    witness: Optional[CupWitness] = None

    def __bool__(self) -> bool:
        return self.closed


def histogram_of(f: ObjectiveFunction) -> Histogram:
    counts = [0] * f.costs.size
    for v in f.table:
        counts[v] += 1
    return Histogram(tuple(counts))


def compose(f: ObjectiveFunction, pi: Permutation) -> ObjectiveFunction:
    """f∘π, i.e. the table i -> f(π(i))."""
    if len(pi) != f.space.size:
        raise InvalidArgument(
            f"permutation acts on {len(pi)} points, space has {f.space.size}"
        )
    return ObjectiveFunction(
        f.space, f.costs, tuple(f.table[target] for target in pi.image)
    )


def permutation_between(
    f: ObjectiveFunction, g: ObjectiveFunction
) -> Permutation:
    """Some π with f∘π = g, for h-equivalent f and g."""
    if histogram_of(f) != histogram_of(g):
        raise InvalidArgument(f"{f} and {g} have different histograms")
    sources: Dict[int, List[int]] = defaultdict(list)
    for point, v in enumerate(f.table):
        sources[v].append(point)
    image = []
    for v in g.table:
        image.append(sources[v].pop(0))
    return Permutation(tuple(image))


def orbit_of(
    f: ObjectiveFunction, guards: Guards = DEFAULT_GUARDS
) -> FunctionSet:
    """The basis class B_{h_f}, by distinct permutations of the table."""
    guards.check_space("orbit enumeration", f.space.size)
    return FunctionSet(
        f.space,
        f.costs,
        tuple(
            ObjectiveFunction(f.space, f.costs, tuple(table))
            for table in multiset_permutations(list(f.table))
        ),
    )


def orbit_by_composition(f: ObjectiveFunction) -> FunctionSet:
    """{f∘π : all π}, via all |X|! permutations. Oracle for orbit_of."""
    if f.space.size > ORACLE_MAX_SPACE:
        raise InvalidArgument(
            f"composition oracle limited to |X| <= {ORACLE_MAX_SPACE}"
        )
    return FunctionSet(
        f.space,
        f.costs,
        tuple(
            compose(f, Permutation(image))
            for image in itertools.permutations(f.space.points)
        ),
    )


def _adjacent_transpositions(size: int) -> Iterator[Permutation]:
    # adjacent swaps generate the symmetric group
    for i in range(size - 1):
        yield Permutation.transposition(size, i, i + 1)


def is_cup(F: FunctionSet, guards: Guards = DEFAULT_GUARDS) -> CupCheck:
    if not len(F):
        raise InvalidArgument("closure check needs a non-empty set")
    guards.check_space("closure check", F.space.size)

    members: Dict[Histogram, int] = defaultdict(int)
    for f in F:
        members[histogram_of(f)] += 1
    deficient = {h for h, n in members.items() if n != h.orbit_size}
    if not deficient:
        return CupCheck(True)

    for f in F:
        if histogram_of(f) not in deficient:
            continue
        for pi in _adjacent_transpositions(F.space.size):
            image = compose(f, pi)
            if image not in F:
                witness = CupWitness(f, pi, image)
                logger.debug("set is not closed: %s", witness)
                return CupCheck(False, witness)
    # unreachable: a partial basis class is never closed under swaps
    raise AssertionError("deficient basis class without witness")


def closure(F: FunctionSet, guards: Guards = DEFAULT_GUARDS) -> FunctionSet:
    """Smallest closed superset: the union of the members' orbits."""
    if not len(F):
        raise InvalidArgument("closure needs a non-empty set")
    representatives: Dict[Histogram, ObjectiveFunction] = {}
    for f in F:
        representatives.setdefault(histogram_of(f), f)
    tables: List[ObjectiveFunction] = []
    for f in representatives.values():
        tables.extend(orbit_of(f, guards))
    return FunctionSet(F.space, F.costs, tuple(tables))


def decompose_basis_classes(
    F: FunctionSet, guards: Guards = DEFAULT_GUARDS
) -> List[Tuple[Histogram, FunctionSet]]:
    check = is_cup(F, guards)
    if not check:
        raise NotClosed(check.witness)
    classes: Dict[Histogram, List[ObjectiveFunction]] = defaultdict(list)
    for f in F:
        classes[histogram_of(f)].append(f)
    return [
        (h, FunctionSet(F.space, F.costs, tuple(classes[h])))
        for h in sorted(classes, key=lambda h: h.counts, reverse=True)
    ]


def enumerate_functions(
    space: SearchSpace, costs: CostDomain, guards: Guards = DEFAULT_GUARDS
) -> Iterator[ObjectiveFunction]:
    """All |Y|^|X| functions in lexicographic table order."""
    guards.check_functions("function enumeration", costs.size ** space.size)
    return (
        ObjectiveFunction(space, costs, table)
        for table in itertools.product(range(costs.size), repeat=space.size)
    )


def enumerate_histograms(
    space: SearchSpace, costs: CostDomain, guards: Guards = DEFAULT_GUARDS
) -> Iterator[Histogram]:
    """All C(|X|+|Y|-1, |X|) histograms, most mass on the lowest cost
    first."""
    count = math.comb(space.size + costs.size - 1, space.size)
    guards.check_functions("histogram enumeration", count)

    def generate() -> Iterator[Histogram]:
        for combo in itertools.combinations_with_replacement(
            range(costs.size), space.size
        ):
            counts = [0] * costs.size
            for v in combo:
                counts[v] += 1
            yield Histogram(tuple(counts))

    return generate()
