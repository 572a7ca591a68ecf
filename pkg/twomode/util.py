"""
Fock cutoffs and the validation of scalar parameters shared by the
modules and the command line
"""

from __future__ import annotations

import math
import re

from .errors import InvalidArgumentError
from .typing import NamedTuple, Union

CUTOFF_EXPR = re.compile(
    r"""
    ^\s*([0-9]+)
    (?:\s*[x,]\s*([0-9]+))?\s*$""",
    re.IGNORECASE | re.VERBOSE,
)


class Cutoffs(NamedTuple):
    """
    Fock cutoffs of the two modes; mode ``A`` keeps ``|0>..|cutoff_a - 1>``
    """

    cutoff_a: int
    cutoff_b: int

    @property
    def dimension(self) -> int:
        """the flattened dimension ``D_A * D_B``"""
        return self.cutoff_a * self.cutoff_b

    def grown(self, extra_a: int, extra_b: int) -> Cutoffs:
        return Cutoffs(self.cutoff_a + extra_a, self.cutoff_b + extra_b)

    def __str__(self) -> str:
        return f"{self.cutoff_a}x{self.cutoff_b}"


def parse_cutoffs(cutoff_string: str) -> Cutoffs:
    """
    parses cutoffs in string notation, either a single cutoff shared by
    both modes (``30``) or one per mode (``30x40`` or ``30,40``)

    :raise ValueError: if the string notation is invalid.
    """

    match = CUTOFF_EXPR.match(cutoff_string) if isinstance(cutoff_string, str) else None

    if not match:
        raise ValueError("couldn't parse cutoff string '%s'" % cutoff_string)
    first, second = match.groups()
    cutoffs = Cutoffs(int(first), int(second or first))

    if min(cutoffs) < 1:
        raise ValueError("cutoffs must be at least 1, got '%s'" % cutoff_string)

    return cutoffs


def check_cutoff(cutoff: int, name: str = "cutoff") -> int:
    if int(cutoff) != cutoff or cutoff < 1:
        raise InvalidArgumentError(f"{name} must be an integer >= 1, got {cutoff!r}")

    return int(cutoff)


def check_xi(xi: float) -> float:
    """
    :raise InvalidArgumentError: unless ``0 < xi < 1``
    """

    if not (isinstance(xi, (int, float)) and math.isfinite(xi) and 0 < xi < 1):
        raise InvalidArgumentError(f"xi must lie strictly inside (0, 1), got {xi!r}")

    return float(xi)


def parse_complex(value: Union[str, complex, float]) -> complex:
    """
    parses ``1``, ``0.5j``, ``1+0.5j`` or ``1+0.5i`` into a complex number

    :raise ValueError: if the notation is invalid.
    """

    if isinstance(value, (complex, float, int)):
        return complex(value)

    return complex(value.strip().replace(" ", "").replace("i", "j"))
