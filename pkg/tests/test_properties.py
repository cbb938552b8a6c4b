from hypothesis import given, settings
from hypothesis import strategies as st

from nflab.family import default_family
from nflab.functions import (
    CostDomain,
    FunctionSet,
    ObjectiveFunction,
    Permutation,
    SearchSpace,
    closure,
    compose,
    histogram_of,
    is_cup,
    permutation_between,
)
from nflab.search import (
    Trace,
    make_lexicographic,
    make_order_driven,
    measure_min_so_far,
    measure_sequence_indicator,
    measure_value_at_end,
    run,
)

SETTINGS = settings(max_examples=60, deadline=None)


@st.composite
def functions(draw, max_points=6, max_costs=4):
    x = draw(st.integers(1, max_points))
    y = draw(st.integers(1, max_costs))
    table = draw(st.lists(st.integers(0, y - 1), min_size=x, max_size=x))
    return ObjectiveFunction(SearchSpace(x), CostDomain.integers(y), table)


@st.composite
def functions_with_permutation(draw):
    f = draw(functions())
    image = draw(st.permutations(list(f.space.points)))
    return f, Permutation(tuple(image))


@st.composite
def function_sets(draw):
    x = draw(st.integers(1, 4))
    y = draw(st.integers(1, 3))
    space, costs = SearchSpace(x), CostDomain.integers(y)
    tables = draw(
        st.lists(
            st.lists(st.integers(0, y - 1), min_size=x, max_size=x),
            min_size=1,
            max_size=8,
        )
    )
    return FunctionSet.of(space, costs, tables)


@SETTINGS
@given(functions_with_permutation())
def test_composition_preserves_histograms(case):
    f, pi = case
    g = compose(f, pi)
    assert histogram_of(g) == histogram_of(f)
    assert compose(g, pi.inverse) == f
    assert compose(f, permutation_between(f, g)) == g


@SETTINGS
@given(function_sets())
def test_closure_laws(F):
    closed = closure(F)
    assert F.issubset(closed)
    assert is_cup(closed)
    assert closure(closed).tables == closed.tables
    assert bool(is_cup(F)) == (closed.tables == F.tables)


@SETTINGS
@given(function_sets())
def test_witness_leaves_the_set(F):
    check = is_cup(F)
    if not check:
        witness = check.witness
        assert witness.function in F
        assert witness.image not in F
        assert compose(witness.function, witness.permutation) == (
            witness.image
        )


@SETTINGS
@given(functions(max_points=5), st.data())
def test_runs_only_see_visited_values(f, data):
    """Changing f off the first k visited points leaves the k-prefix."""
    algorithms = default_family(f.space)
    a = data.draw(st.sampled_from(algorithms))
    k = data.draw(st.integers(1, f.space.size))
    prefix = run(a, f, k)
    table = list(f.table)
    for point in f.space.points:
        if point not in prefix.visited:
            table[point] = data.draw(st.integers(0, f.costs.size - 1))
    g = ObjectiveFunction(f.space, f.costs, tuple(table))
    assert run(a, g, k) == prefix


@SETTINGS
@given(functions(max_points=7))
def test_full_traces_never_repeat(f):
    points = sorted(f.space.points)
    for a in default_family(f.space):
        trace = run(a, f, f.space.size)
        assert sorted(trace.points) == points


@SETTINGS
@given(functions_with_permutation())
def test_relabelled_order_replays_the_lexicographic_values(case):
    f, pi = case
    n = f.space.size
    moved = run(make_order_driven(pi.inverse), compose(f, pi), n)
    assert moved.values == run(make_lexicographic(), f, n).values


@SETTINGS
@given(functions(), st.data())
def test_measures_only_see_values(f, data):
    n = f.space.size
    first = data.draw(st.permutations(list(f.space.points)))
    second = data.draw(st.permutations(list(f.space.points)))
    values = data.draw(
        st.lists(st.integers(0, f.costs.size - 1), min_size=n, max_size=n)
    )
    left = Trace(f.costs, tuple(zip(first, values)))
    right = Trace(f.costs, tuple(zip(second, values)))
    measures = [
        measure_min_so_far(),
        measure_value_at_end(),
        measure_sequence_indicator(left.values, f.space),
    ]
    for k in range(1, n + 1):
        for measure in measures:
            assert measure(left.prefix(k).values) == measure(
                right.prefix(k).values
            )
