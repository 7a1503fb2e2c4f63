"""Spectral outputs: block structure, Perron data, measures and divisibility verdicts."""

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .matrix import IntegerMatrix, Vector
from .permutation import Permutation


@dataclass(frozen=True)
class FrobeniusForm:
    """order[p] is the original label placed at position p; blocks use original labels."""

    relabeling: Permutation
    order: Tuple[int, ...]
    blocks: Tuple[Tuple[int, ...], ...]
    block_view: IntegerMatrix

    def block_of(self, letter: int) -> int:
        for index, block in enumerate(self.blocks):
            if letter in block:
                return index
        raise KeyError(letter)

    def block_positions(self, index: int) -> Tuple[int, ...]:
        return tuple(self.relabeling(letter) for letter in self.blocks[index])


@dataclass(frozen=True)
class PerronData:
    char_poly: Tuple[int, ...]
    spectral_radius: float
    radius_exact: str
    minimal_polynomial: str
    power_iteration_radius: float
    power_iteration_residual: float
    char_poly_residual: float
    error_bound: float


@dataclass(frozen=True)
class MeasureCandidate:
    block: Tuple[int, ...]
    value: float
    value_exact: str
    left_eigenvector: Tuple[float, ...]
    block_view_eigenvector: Tuple[float, ...]
    support: Tuple[int, ...]
    nonnegative: bool
    residual: float
    accepted: bool
    reason: Optional[str] = None


@dataclass(frozen=True)
class MeasureReport:
    candidates: Tuple[MeasureCandidate, ...]

    @property
    def measures(self) -> Tuple[MeasureCandidate, ...]:
        return tuple(candidate for candidate in self.candidates if candidate.accepted)

    @property
    def rejected(self) -> Tuple[MeasureCandidate, ...]:
        return tuple(candidate for candidate in self.candidates if not candidate.accepted)

    @property
    def count(self) -> int:
        return len(self.measures)


class AlphabetChoice(enum.Enum):
    MINIMAL = "minimal"
    FULL = "full"


class SeedChoice(enum.Enum):
    ONES = "ones"
    TELESCOPED = "telescoped"


@dataclass(frozen=True)
class DivisibilityVerdict:
    """Exact verdict on "d divides the tested heights for all large n"."""

    divisor: int
    alphabet: AlphabetChoice
    letters: Tuple[int, ...]
    seed: SeedChoice
    verdict: bool
    transient_length: int
    cycle_length: int
    residues: Dict[int, Tuple[int, ...]]
    witness: Optional[Vector] = None


class ScanSummary(enum.Enum):
    ALL_TESTED_PASS = "all-tested-pass"
    FAILS_AT_M = "fails-at-m"


@dataclass(frozen=True)
class DyadicScan:
    verdicts: Tuple[DivisibilityVerdict, ...]
    max_m: int
    summary: ScanSummary
    failed_m: Optional[int] = None


@dataclass(frozen=True)
class EntropyTerm:
    k: int
    m_k: int
    scale: Fraction
    value: float


@dataclass(frozen=True)
class SpectralSummary:
    """Perron data of the telescoped matrix and of its minimal restriction."""

    full: PerronData
    minimal: PerronData
    minimal_letters: Tuple[int, ...]
    primitive: bool
    frobenius: FrobeniusForm

