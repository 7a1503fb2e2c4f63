"""Rotated odometer F_pi = a o R_pi on q equal subintervals."""

import enum
from dataclasses import dataclass
from typing import Optional, Union

from shared.core.config import SETTINGS
from shared.core.errors import PreconditionError
from .permutation import Permutation


class NConvention(enum.Enum):
    """How the block exponent N is derived from q."""
    GEQ = "geq"
    STRICT = "strict"

    @classmethod
    def coerce(cls, value: Union["NConvention", str, None]) -> "NConvention":
        if value is None:
            return cls(SETTINGS.N_CONVENTION)
        if isinstance(value, cls):
            return value
        return cls(value)


def n_exponent(q: int, convention: Union[NConvention, str, None] = None) -> int:
    """Smallest n with 2^n >= q (or 2^n > q for the strict convention); q = 1 gives 1."""
    if q < 1:
        raise PreconditionError(f"q must be positive, got {q}")
    if q == 1:
        return 1
    n = (q - 1).bit_length()
    if NConvention.coerce(convention) is NConvention.STRICT and (1 << n) == q:
        n += 1
    return n


def is_power_of_two(q: int) -> bool:
    return q >= 1 and q & (q - 1) == 0


@dataclass(frozen=True)
class RotatedOdometer:
    """The pair (q, pi) together with its exponent N."""

    q: int
    pi: Permutation
    n_exp: int

    def __post_init__(self) -> None:
        if self.pi.q != self.q:
            raise PreconditionError(f"Permutation acts on {self.pi.q} letters, q is {self.q}")
        if (1 << self.n_exp) < self.q or self.n_exp < 1:
            raise PreconditionError(f"2^{self.n_exp} < q={self.q}")

    @classmethod
    def create(
        cls,
        q: int,
        pi: Optional[Permutation] = None,
        convention: Union[NConvention, str, None] = None,
    ) -> "RotatedOdometer":
        return cls(q, pi or Permutation.identity(q), n_exponent(q, convention))

    @property
    def block(self) -> int:
        """Number of level-1 cells per big interval, 2^N."""
        return 1 << self.n_exp

    @property
    def degenerate(self) -> bool:
        """q = 1: the plain binary odometer."""
        return self.q == 1

    @property
    def power_of_two(self) -> bool:
        """q = 2^n, outside the detailed theory but still computable."""
        return self.q > 1 and is_power_of_two(self.q)

    def with_permutation(self, pi: Permutation) -> "RotatedOdometer":
        return RotatedOdometer(self.q, pi, self.n_exp)

    def __str__(self) -> str:
        return f"F[q={self.q}, pi={self.pi.cycle_notation(with_fixed_points=self.q == 1)}, N={self.n_exp}]"
