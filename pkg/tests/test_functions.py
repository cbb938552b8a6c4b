import math

import pytest

from nflab.config import Guards
from nflab.exceptions import GuardExceeded, InvalidArgument, NotClosed
from nflab.functions import (
    CostDomain,
    FunctionSet,
    Histogram,
    ObjectiveFunction,
    Permutation,
    SearchSpace,
    closure,
    compose,
    decompose_basis_classes,
    enumerate_functions,
    enumerate_histograms,
    histogram_of,
    is_cup,
    orbit_by_composition,
    orbit_of,
    permutation_between,
)


def test_bitstring_points(space):
    assert space.size == 4
    assert space.label(1) == "01"
    assert space.label(2) == "10"


def test_table_numbering(table1):
    assert table1(1).table == (1, 0, 0, 0)
    assert table1(3).table == (1, 1, 0, 0)
    assert table1(5).table == (1, 0, 1, 0)
    assert table1(8).table == (0, 0, 0, 1)
    assert table1(15).table == (1, 1, 1, 1)
    assert all(table1(k).number == k for k in range(16))


def test_from_number_range(space, costs):
    with pytest.raises(InvalidArgument):
        ObjectiveFunction.from_number(space, costs, 16)


def test_function_validation(space, costs):
    with pytest.raises(InvalidArgument):
        ObjectiveFunction(space, costs, (0, 1, 0))
    with pytest.raises(InvalidArgument):
        ObjectiveFunction(space, costs, (0, 1, 2, 0))


def test_cost_domain_is_ordered():
    with pytest.raises(InvalidArgument):
        CostDomain.of(0, 2, 1)
    with pytest.raises(InvalidArgument):
        CostDomain.of()
    assert CostDomain.of(0, 1, 3).index(3) == 2


def test_histograms(table1):
    assert histogram_of(table1(1)) == Histogram((3, 1))
    assert histogram_of(table1(1)).orbit_size == 4
    assert histogram_of(table1(3)).orbit_size == 6
    assert histogram_of(table1(0)).orbit_size == 1


def test_compose(table1):
    swap = Permutation.transposition(4, 1, 2)
    assert compose(table1(3), swap) == table1(5)
    with pytest.raises(InvalidArgument):
        compose(table1(3), Permutation.identity(3))


def test_permutation_algebra():
    pi = Permutation((2, 0, 3, 1))
    assert pi.then(pi.inverse) == Permutation.identity(4)
    assert pi.inverse.then(pi) == Permutation.identity(4)
    assert Permutation.reversal(4).image == (3, 2, 1, 0)
    assert Permutation.cyclic_shift(4, 1).image == (1, 2, 3, 0)
    with pytest.raises(InvalidArgument):
        Permutation((0, 0, 1))


def test_permutation_between(table1):
    pi = permutation_between(table1(1), table1(4))
    assert compose(table1(1), pi) == table1(4)
    with pytest.raises(InvalidArgument):
        permutation_between(table1(1), table1(3))


def test_function_set_dedups(space, costs, table1):
    F = FunctionSet.of(
        space, costs, [table1(1).table, table1(1), (0, 1, 0, 0)]
    )
    assert len(F) == 2
    assert table1(2) in F
    assert (1, 0, 0, 0) in F
    assert table1(4) not in F


def test_membership_respects_the_cost_domain(space, function_set):
    F = function_set(1, 2)
    other = ObjectiveFunction(space, CostDomain.of(0, 5), (1, 0, 0, 0))
    assert (1, 0, 0, 0) in F
    assert other not in F


def test_orbit(function_set, table1):
    assert orbit_of(table1(1)).tables == function_set(1, 2, 4, 8).tables
    assert len(orbit_of(table1(3))) == 6
    assert len(orbit_of(table1(15))) == 1


def test_orbit_matches_all_compositions():
    for x in range(1, 7):
        space, costs = SearchSpace(x), CostDomain.integers(3)
        for table in (
            tuple(0 for _ in range(x)),
            tuple(i % 2 for i in range(x)),
            tuple(i % 3 for i in range(x)),
            tuple(min(i, 2) for i in range(x)),
        ):
            f = ObjectiveFunction(space, costs, table)
            assert orbit_of(f).tables == orbit_by_composition(f).tables
            assert len(orbit_of(f)) == histogram_of(f).orbit_size


def test_is_cup_on_a_basis_class(function_set):
    check = is_cup(function_set(1, 2, 4, 8))
    assert check.closed
    assert check.witness is None


def test_is_cup_witness(function_set, table1):
    check = is_cup(function_set(1, 2, 3, 4, 8))
    assert not check
    assert check.witness.function == table1(3)
    assert check.witness.permutation == Permutation.transposition(4, 1, 2)
    assert check.witness.image == table1(5)


def test_is_cup_singleton(function_set, table1):
    check = is_cup(function_set(1))
    assert not check
    assert check.witness.image == table1(2)
    assert is_cup(function_set(0))
    assert is_cup(function_set(0, 15))


def test_full_space_is_closed(space, costs):
    assert is_cup(FunctionSet.full(space, costs))


def test_is_cup_rejects_empty(space, costs):
    with pytest.raises(InvalidArgument):
        is_cup(FunctionSet(space, costs, ()))


def test_closure(function_set):
    F = function_set(1, 3)
    closed = closure(F)
    assert len(closed) == 10
    assert F.issubset(closed)
    assert is_cup(closed)
    assert closure(closed).tables == closed.tables


def test_decompose(space, costs):
    classes = decompose_basis_classes(FunctionSet.full(space, costs))
    assert [h.counts for h, _ in classes] == [
        (4, 0),
        (3, 1),
        (2, 2),
        (1, 3),
        (0, 4),
    ]
    assert [len(members) for _, members in classes] == [1, 4, 6, 4, 1]


def test_decompose_requires_closure(function_set, table1):
    with pytest.raises(NotClosed) as exc_info:
        decompose_basis_classes(function_set(1, 2, 3, 4, 8))
    assert exc_info.value.witness.function == table1(3)


def test_enumerate_functions_order(space, costs):
    tables = [f.table for f in enumerate_functions(space, costs)]
    assert len(tables) == 16
    assert tables == sorted(tables)


def test_enumerate_functions_guard(space, costs):
    with pytest.raises(GuardExceeded):
        enumerate_functions(space, costs, Guards(max_functions=15))


def test_histogram_count_matches_binomial():
    for x in range(1, 9):
        for y in range(1, 5):
            space, costs = SearchSpace(x), CostDomain.integers(y)
            histograms = list(enumerate_histograms(space, costs))
            assert len(histograms) == math.comb(x + y - 1, x)
            assert all(h.total == x for h in histograms)


def test_histograms_lowest_cost_first(space, costs):
    counts = [h.counts for h in enumerate_histograms(space, costs)]
    assert counts == [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)]


def test_orbit_guard():
    space, costs = SearchSpace(5), CostDomain.integers(2)
    f = ObjectiveFunction(space, costs, (0, 1, 0, 1, 0))
    with pytest.raises(GuardExceeded):
        orbit_of(f, Guards(max_space=4))
