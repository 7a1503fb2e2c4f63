"""Rational-slope flows on square-tiled surfaces."""

from dataclasses import dataclass
from fractions import Fraction

from shared.core.errors import PreconditionError


@dataclass(frozen=True)
class FlowSpec:
    """Flow of slope q/p; p = m*q + r."""

    q: int
    p: int

    def __post_init__(self) -> None:
        if self.q < 1 or self.p < 1:
            raise PreconditionError(f"q and p must be positive, got q={self.q}, p={self.p}")

    @property
    def r(self) -> int:
        return self.p % self.q

    @property
    def m(self) -> int:
        return self.p // self.q

    @property
    def slope(self) -> Fraction:
        return Fraction(self.q, self.p)

    @property
    def crosses_vertical_edges(self) -> bool:
        return self.p >= self.q
