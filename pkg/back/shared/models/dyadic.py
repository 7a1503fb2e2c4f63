"""Exact points of the grid {num / (q * 2^k)} in [0, 1)."""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from shared.core.errors import ParseError, PreconditionError

_GRID_PATTERN = re.compile(r"^\s*(\d+)\s*/\s*\(\s*(\d+)\s*\*\s*2\s*\^\s*(\d+)\s*\)\s*$")
_FRACTION_PATTERN = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


@dataclass(frozen=True, eq=False)
class Dyadic:
    """The point numerator / (q_factor * 2^log2_denominator).

    Instances are kept in canonical form (no common factor 2 between numerator
    and 2^log2_denominator) and compare by value, so points built on different
    q grids are equal when they denote the same number.
    """

    numerator: int
    log2_denominator: int
    q_factor: int

    def __post_init__(self) -> None:
        if self.q_factor < 1 or self.log2_denominator < 0:
            raise PreconditionError(
                f"Invalid dyadic grid q={self.q_factor}, k={self.log2_denominator}"
            )
        if not 0 <= self.numerator < self.denominator:
            raise PreconditionError(f"{self.numerator}/{self.denominator} is not in [0, 1)")

    @classmethod
    def make(cls, numerator: int, log2_denominator: int, q_factor: int) -> "Dyadic":
        """Build the canonical representative of numerator / (q * 2^k)."""
        while log2_denominator > 0 and numerator % 2 == 0:
            numerator //= 2
            log2_denominator -= 1
        return cls(numerator, log2_denominator, q_factor)

    @classmethod
    def zero(cls, q_factor: int = 1) -> "Dyadic":
        return cls(0, 0, q_factor)

    @classmethod
    def from_fraction(cls, value: Fraction, q_factor: int) -> "Dyadic":
        """Place an exact rational on the q grid.

        Raises:
            PreconditionError: value is outside [0, 1) or not of the form p / (q * 2^k)
        """
        value = Fraction(value)
        scaled = value * q_factor
        denominator = scaled.denominator
        if denominator & (denominator - 1):
            raise PreconditionError(f"{value} does not lie on the q={q_factor} dyadic grid")
        return cls.make(scaled.numerator, denominator.bit_length() - 1, q_factor)

    @classmethod
    def parse(cls, text: str, q_factor: Optional[int] = None) -> "Dyadic":
        """Parse "num/(q*2^k)" or a plain fraction "a/b" (which then needs q_factor)."""
        match = _GRID_PATTERN.match(text)
        if match:
            numerator, q, k = (int(group) for group in match.groups())
            if q_factor is not None and q != q_factor:
                return cls.from_fraction(Fraction(numerator, q * 2**k), q_factor)
            return cls.make(numerator, k, q)
        match = _FRACTION_PATTERN.match(text)
        if not match:
            raise ParseError("Expected num/(q*2^k) or a/b", text, 0)
        numerator = int(match.group(1))
        denominator = int(match.group(2) or 1)
        if denominator == 0:
            raise ParseError("Zero denominator", text, text.index("/") + 1)
        return cls.from_fraction(Fraction(numerator, denominator), q_factor or 1)

    @property
    def denominator(self) -> int:
        return self.q_factor << self.log2_denominator

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def interval_index(self) -> int:
        """Index i of the big interval [i/q, (i+1)/q) holding the point."""
        return self.numerator >> self.log2_denominator

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dyadic):
            return self.to_fraction() == other.to_fraction()
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other: "Dyadic") -> bool:
        return self.to_fraction() < other.to_fraction()

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __str__(self) -> str:
        return f"{self.numerator}/({self.q_factor}*2^{self.log2_denominator})"
