"""JSON input documents, the resolved run configuration and the report
envelope, plus loaders that turn malformed input into anchored
InputErrors."""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Type, TypeVar

import jsonschema

from nflab.config import DEFAULT_GUARDS, Guards
from nflab.exceptions import InputError, InvalidArgument
from nflab.functions import CostDomain, FunctionSet, SearchSpace
from nflab.helpers import StrEnum
from nflab.schema import JsonSchemaMixin
from nflab.structure import (
    NeighborhoodRelation,
    make_complete,
    make_custom,
    make_empty,
    make_hypercube,
    make_ring,
)
from nflab.verify import FunctionDistribution


@dataclass
class FunctionSetDocument(JsonSchemaMixin):
    """Functions as cost-index tables over points 0..domain_size-1"""

    domain_size: int
    codomain: List[Fraction]
    functions: List[List[int]]
    labels: Optional[List[str]] = None

    def to_function_set(self) -> FunctionSet:
        if not self.functions:
            raise InvalidArgument("'functions' must not be empty")
        space = SearchSpace(
            self.domain_size,
            tuple(self.labels) if self.labels is not None else None,
        )
        costs = CostDomain(tuple(self.codomain))
        return FunctionSet.of(space, costs, self.functions)

    @classmethod
    def from_function_set(cls, F: FunctionSet) -> "FunctionSetDocument":
        return cls(
            domain_size=F.space.size,
            codomain=list(F.costs.values),
            functions=[list(f.table) for f in F],
            labels=list(F.space.labels) if F.space.labels else None,
        )


@dataclass
class ProbabilityDocument(JsonSchemaMixin):
    """p(f) for every function, in lexicographic table order"""

    weights: List[Fraction]

    def to_distribution(
        self,
        space: SearchSpace,
        costs: CostDomain,
        guards: Guards = DEFAULT_GUARDS,
    ) -> FunctionDistribution:
        return FunctionDistribution.from_vector(
            space, costs, self.weights, guards
        )


class NeighborhoodType(StrEnum):
    HYPERCUBE = "hypercube"
    RING = "ring"
    COMPLETE = "complete"
    EMPTY = "empty"
    CUSTOM = "custom"


@dataclass
class NeighborhoodDocument(JsonSchemaMixin):
    """`param` is the dimension for hypercubes and the size for rings"""

    type: NeighborhoodType
    param: Optional[int] = None
    edges: Optional[List[List[int]]] = None

    def to_relation(self, size: int) -> NeighborhoodRelation:
        kind = self.type
        if kind is NeighborhoodType.CUSTOM:
            if self.edges is None:
                raise InvalidArgument("custom neighborhood needs 'edges'")
            return make_custom(size, self.edges)
        if kind is NeighborhoodType.HYPERCUBE:
            if self.param is None:
                raise InvalidArgument("hypercube needs 'param'")
            relation = make_hypercube(self.param)
        elif kind is NeighborhoodType.RING:
            relation = make_ring(size if self.param is None else self.param)
        elif kind is NeighborhoodType.COMPLETE:
            relation = make_complete(size)
        else:
            relation = make_empty(size)
        if relation.size != size:
            raise InvalidArgument(
                f"{kind} neighborhood has {relation.size} points, the "
                f"functions have {size}"
            )
        return relation


class OutputFormat(StrEnum):
    JSON = "json"
    CSV = "csv"


@dataclass
class RunConfig(JsonSchemaMixin):
    """Fully resolved command invocation"""

    command: str
    guards: Guards
    format: OutputFormat = OutputFormat.JSON
    inputs: List[str] = field(default_factory=list)
    family: Optional[str] = None
    ms: Optional[List[int]] = None
    measures: List[str] = field(default_factory=list)
    seeds: List[int] = field(default_factory=list)
    out: Optional[str] = None
    parameters: Dict[str, Any] = field(default_factory=dict)


@dataclass
class ReportEnvelope(JsonSchemaMixin):
    tool: str
    version: str
    config: RunConfig
    result: Dict[str, Any]


T = TypeVar("T", bound=JsonSchemaMixin)


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fp:
            text = fp.read()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}")


def load_document(cls: Type[T], path: str) -> T:
    data = load_json(path)
    if not isinstance(data, dict):
        raise InputError("expected a JSON object", f"{path}:1:1")
    try:
        return cls.from_dict(data)
    except jsonschema.ValidationError as exc:
        pointer = "/".join(str(p) for p in exc.absolute_path)
        raise InputError(exc.message, f"{path}#/{pointer}")
    except ValueError as exc:
        raise InputError(str(exc), path)
