from dataclasses import dataclass, field

from nflab.exceptions import GuardExceeded
from nflab.schema import JsonSchemaMixin


@dataclass(frozen=True)
class Guards(JsonSchemaMixin):
    """Upper bounds on exhaustive work; callers opt in to bigger runs."""

    max_functions: int = field(
        default=2 ** 20,
        metadata={
            "description": "largest |Y|^|X| enumerated, and largest "
            "exponent n for which 2^n is computed exactly"
        },
    )
    max_space: int = field(
        default=10,
        metadata={"description": "largest |X| for permutation work"},
    )
    max_orbit: int = field(
        default=10 ** 6,
        metadata={"description": "largest orbit scanned exhaustively"},
    )

    def __post_init__(self):
        for name in ("max_functions", "max_space", "max_orbit"):
            if getattr(self, name) < 1:
                raise ValueError(f"guard {name} must be positive")

    def check_functions(self, what: str, count: int) -> None:
        if count > self.max_functions:
            raise GuardExceeded(what, count, self.max_functions)

    def check_space(self, what: str, size: int) -> None:
        if size > self.max_space:
            raise GuardExceeded(what, size, self.max_space)

    def check_orbit(self, what: str, size: int) -> None:
        if size > self.max_orbit:
            raise GuardExceeded(what, size, self.max_orbit)


DEFAULT_GUARDS = Guards()
