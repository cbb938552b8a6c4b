import json

import pytest

from nflab.functions import (
    CostDomain,
    FunctionSet,
    ObjectiveFunction,
    SearchSpace,
)
from nflab.structure import make_hypercube


@pytest.fixture
def space():
    """{0,1}^2, points numbered 00, 01, 10, 11."""
    return SearchSpace.bitstrings(2)


@pytest.fixture
def costs():
    return CostDomain.of(0, 1)


@pytest.fixture
def table1(space, costs):
    """f_k from the numbered table of all functions {0,1}^2 -> {0,1}."""

    def make(k):
        return ObjectiveFunction.from_number(space, costs, k)

    return make


@pytest.fixture
def function_set(space, costs, table1):
    def make(*numbers):
        return FunctionSet(space, costs, tuple(table1(k) for k in numbers))

    return make


@pytest.fixture
def hypercube():
    return make_hypercube(2)


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write
