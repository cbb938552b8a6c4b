import pytest

from nflab.exceptions import InvalidArgument
from nflab.family import (
    default_family,
    natural_neighborhood,
    parse_family,
    parse_order,
)
from nflab.functions import Permutation, SearchSpace
from nflab.search import HillClimber, Memoized, OrderDriven, SeededRandom


def test_parse_family(space):
    family = parse_family("lex, order:3210,rand:7", space)
    assert [a.name for a in family] == ["lex", "order:3-2-1-0", "rand:7"]
    assert isinstance(family[1], OrderDriven)
    assert isinstance(family[2], SeededRandom)


def test_parse_adaptive_entries(space):
    family = parse_family(
        "hill:hypercube:1,memo:const:0,memo:walk:ring:2,memo:lex", space
    )
    assert [a.name for a in family] == [
        "hill:hypercube:1",
        "memo:const:0",
        "memo:walk:ring:2",
        "memo:lex",
    ]
    assert isinstance(family[0], HillClimber)
    assert all(isinstance(a, Memoized) for a in family[1:])


@pytest.mark.parametrize(
    "spec",
    ["", "lex,bogus", "order:012", "order:0123x", "rand:x", "hill:torus:1",
     "memo:const:9", "hill:hypercube:1,hill:ring:abc"],
)
def test_parse_family_rejects(space, spec):
    with pytest.raises(InvalidArgument):
        parse_family(spec, space)


def test_parse_order_separators():
    big = SearchSpace(12)
    image = "-".join(str(i) for i in reversed(range(12)))
    assert parse_order(image, big) == Permutation.reversal(12)
    with pytest.raises(InvalidArgument):
        parse_order("0123456789ab", big)


def test_natural_neighborhood():
    assert natural_neighborhood(SearchSpace(1)) is None
    assert natural_neighborhood(SearchSpace(2)).name == "hypercube"
    assert natural_neighborhood(SearchSpace(8)).name == "hypercube"
    assert natural_neighborhood(SearchSpace(5)).name == "ring"


def test_default_family(space):
    names = [a.name for a in default_family(space)]
    assert len(names) == len(set(names)) == 20
    for expected in (
        "lex",
        "order:3-2-1-0",
        "order:1-2-3-0",
        "order:1-0-2-3",
        "rand:1",
        "rand:5",
        "hill:hypercube:1",
        "memo:const:0",
        "memo:resample:1",
        "memo:walk:hypercube:1",
    ):
        assert expected in names


def test_default_family_seeds(space):
    names = [a.name for a in default_family(space, seeds=(42,))]
    assert "rand:42" in names
    assert "rand:1" not in names
    assert "hill:hypercube:42" in names


def test_default_family_skips_transpositions_on_large_spaces():
    names = [a.name for a in default_family(SearchSpace(7))]
    assert "order:1-0-2-3-4-5-6" not in names
    assert "hill:ring:1" in names
