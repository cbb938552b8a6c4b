from typing import Any, Optional


class NflabError(Exception):
    """Base class for every error raised by nflab."""


class InvalidArgument(NflabError, ValueError):
    pass


class GuardExceeded(NflabError):
    """An enumeration would exceed the configured guard."""

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(
            f"{what} needs {size} items, guard allows {limit} "
            "(raise the guard to opt in)"
        )


class ExactOverflowGuard(GuardExceeded):
    """An exact big-integer result is too large; request the log form."""

    def __init__(self, what: str, bits: int, limit: int):
        super().__init__(what, bits, limit)
        self.args = (
            f"{what} has {bits} bits, exact guard allows {limit}; "
            "use the log10 form instead",
        )


class ContractViolation(NflabError):
    pass


class NotClosed(NflabError):
    """A set that had to be closed under permutation is not."""

    def __init__(self, witness: Any):
        self.witness = witness
        super().__init__(f"function set is not closed: {witness}")


class CalledOnClosedSet(NflabError):
    pass


class CalledOnCompliantDistribution(NflabError):
    pass


class NoWitness(NflabError):
    pass


class EmptyClass(NflabError):
    pass


class BoundNotBelowMaximum(NflabError):
    pass


class SteepnessUndefined(NflabError):
    pass


class InputError(NflabError):
    """A malformed input document; `anchor` is "path:line:col" if known."""

    def __init__(self, message: str, anchor: Optional[str] = None):
        self.anchor = anchor
        super().__init__(f"{anchor}: {message}" if anchor else message)


class Inconsistency(NflabError):
    """A computed result contradicts a theorem the tool verifies."""
