"""Algorithm families: the CLI spec strings and the documented default
family that theorem quantifiers over "any two algorithms" are checked
against.

Spec grammar (comma-separated entries)::

    lex
    order:<image>          e.g. order:3210, or order:3-2-1-0 when |X| > 10
    rand:<seed>
    hill:<neighborhood>:<seed>
    memo:<inner>           inner is const:<point>, resample:<seed>,
                           walk:<neighborhood>:<seed> or any entry above
"""
import itertools
from typing import Dict, List, Optional, Sequence

from nflab.exceptions import InvalidArgument
from nflab.functions import Permutation, SearchSpace
from nflab.search import (
    ConstantProposal,
    NeighborhoodWalk,
    RepeatingHeuristic,
    ResampleWithReplacement,
    SearchAlgorithm,
    make_hill_climber,
    make_lexicographic,
    make_order_driven,
    make_seeded_random,
    memoize,
)
from nflab.structure import (
    NeighborhoodRelation,
    make_hypercube,
    make_ring,
    neighborhood_by_name,
)

DEFAULT_SEEDS = (1, 2, 3, 4, 5)

# every single transposition joins the default family up to this |X|
TRANSPOSITION_MAX_SPACE = 6


def _int(text: str, entry: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InvalidArgument(f"bad integer '{text}' in family entry {entry}")


def parse_order(text: str, space: SearchSpace) -> Permutation:
    if "-" in text or "." in text:
        parts = text.replace(".", "-").split("-")
    elif space.size <= 10:
        parts = list(text)
    else:
        raise InvalidArgument(
            f"order '{text}' needs '-' separators when |X| > 10"
        )
    image = tuple(_int(p, f"order:{text}") for p in parts)
    if len(image) != space.size:
        raise InvalidArgument(
            f"order '{text}' lists {len(image)} points, space has "
            f"{space.size}"
        )
    return Permutation(image)


def _parse_heuristic(
    entry: str, space: SearchSpace
) -> Optional[RepeatingHeuristic]:
    kind, _, rest = entry.partition(":")
    if kind == "const":
        point = _int(rest, entry)
        if not 0 <= point < space.size:
            raise InvalidArgument(f"{entry}: point outside the space")
        return ConstantProposal(point)
    if kind == "resample":
        return ResampleWithReplacement(_int(rest, entry))
    if kind == "walk":
        name, _, seed = rest.partition(":")
        return NeighborhoodWalk(
            neighborhood_by_name(name, space.size), _int(seed, entry)
        )
    return None


def parse_entry(entry: str, space: SearchSpace) -> SearchAlgorithm:
    entry = entry.strip()
    kind, _, rest = entry.partition(":")
    if kind == "lex" and not rest:
        return make_lexicographic()
    if kind == "order":
        return make_order_driven(parse_order(rest, space))
    if kind == "rand":
        return make_seeded_random(_int(rest, entry))
    if kind == "hill":
        name, _, seed = rest.partition(":")
        return make_hill_climber(
            neighborhood_by_name(name, space.size), _int(seed or "0", entry)
        )
    if kind == "memo":
        heuristic = _parse_heuristic(rest, space)
        if heuristic is not None:
            return memoize(heuristic)
        return memoize(parse_entry(rest, space))
    raise InvalidArgument(f"unknown family entry '{entry}'")


def parse_family(spec: str, space: SearchSpace) -> List[SearchAlgorithm]:
    entries = [e for e in spec.split(",") if e.strip()]
    if not entries:
        raise InvalidArgument("empty algorithm family")
    return [parse_entry(e, space) for e in entries]


def natural_neighborhood(space: SearchSpace) -> Optional[NeighborhoodRelation]:
    """Hypercube for 2^l points, ring from 3 points, nothing for |X| = 1."""
    length = space.size.bit_length() - 1
    if space.size >= 2 and 2 ** length == space.size:
        return make_hypercube(length)
    if space.size >= 3:
        return make_ring(space.size)
    return None


def default_family(
    space: SearchSpace,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    neighborhood: Optional[NeighborhoodRelation] = None,
) -> List[SearchAlgorithm]:
    n = space.size
    family: Dict[str, SearchAlgorithm] = {}

    def add(algorithm: SearchAlgorithm) -> None:
        family.setdefault(algorithm.name, algorithm)

    add(make_lexicographic())
    orders = [Permutation.reversal(n)]
    orders += [Permutation.cyclic_shift(n, k) for k in range(1, n)]
    if n <= TRANSPOSITION_MAX_SPACE:
        orders += [
            Permutation.transposition(n, i, j)
            for i, j in itertools.combinations(range(n), 2)
        ]
    for order in orders:
        if order != Permutation.identity(n):
            add(make_order_driven(order))
    for seed in seeds:
        add(make_seeded_random(seed))

    neighborhood = neighborhood or natural_neighborhood(space)
    first_seed = seeds[0] if seeds else 0
    if neighborhood is not None:
        add(make_hill_climber(neighborhood, first_seed))
    add(memoize(ConstantProposal(0)))
    add(memoize(ResampleWithReplacement(first_seed)))
    if neighborhood is not None:
        add(memoize(NeighborhoodWalk(neighborhood, first_seed)))
    return list(family.values())
