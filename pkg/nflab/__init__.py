__version__ = "0.1.0"

from nflab.config import DEFAULT_GUARDS, Guards  # noqa: E402
from nflab.exceptions import NflabError  # noqa: E402
from nflab.functions import (  # noqa: E402
    CostDomain,
    FunctionSet,
    ObjectiveFunction,
    Permutation,
    SearchSpace,
    is_cup,
)
from nflab.schema import JsonSchemaMixin, ValidationError  # noqa: E402

__all__ = [
    "CostDomain",
    "DEFAULT_GUARDS",
    "FunctionSet",
    "Guards",
    "JsonSchemaMixin",
    "NflabError",
    "ObjectiveFunction",
    "Permutation",
    "SearchSpace",
    "ValidationError",
    "is_cup",
]
