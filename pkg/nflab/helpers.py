import re
from enum import Enum
from fractions import Fraction
from typing import Union

RATIONAL_PATTERN = r"^-?[0-9]+(/[0-9]+)?$"

_RATIONAL_RE = re.compile(RATIONAL_PATTERN)


class StrEnum(str, Enum):
    def __str__(self) -> str:
        return self.value

    # https://docs.python.org/3.6/library/enum.html#using-automatic-values
    def _generate_next_value_(name, start, count, last_values):
        return name


def format_fraction(value: Union[Fraction, int]) -> str:
    """Render a rational as "p/q", always with an explicit denominator."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Union[str, int]) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"not a rational of the form 'p/q': {text!r}")
    numerator, _, denominator = text.strip().partition("/")
    if denominator and int(denominator) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(numerator), int(denominator or 1))
