"""Cell maps, per-level renormalization records and the eventually periodic sequence."""

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from .matrix import IntegerMatrix
from .odometer import RotatedOdometer
from .permutation import Permutation
from .substitution import Substitution

UNDEFINED = -1


class PeriodicRegionClass(enum.Enum):
    """Shape of the set of periodic points."""
    EMPTY = "empty"
    FINITE = "finite"
    INFINITE = "infinite"


@dataclass(frozen=True, eq=False)
class CellMap:
    """F_pi on the q*2^(kN) equal cells of [0, 1).

    next[c] is the image cell of cell c, or UNDEFINED on the q H-cells
    (the cells rotated into [1 - 2^(-kN), 1)).
    """

    q: int
    n_exp: int
    resolution_k: int
    next: np.ndarray = field(repr=False)

    @property
    def cell_count(self) -> int:
        return len(self.next)

    @property
    def cells_per_interval(self) -> int:
        return 1 << (self.resolution_k * self.n_exp)

    @property
    def h_cells(self) -> FrozenSet[int]:
        return frozenset(int(c) for c in np.flatnonzero(self.next == UNDEFINED))

    @property
    def l_cells(self) -> range:
        return range(self.q)

    def successor(self, cell: int) -> Optional[int]:
        image = int(self.next[cell])
        return None if image == UNDEFINED else image

    def letter(self, cell: int) -> int:
        """Big interval holding the cell."""
        return cell // self.cells_per_interval

    def cell_interval(self, cell: int) -> Tuple[Fraction, Fraction]:
        return Fraction(cell, self.cell_count), Fraction(cell + 1, self.cell_count)


@dataclass(frozen=True)
class LevelRecord:
    """One renormalization step: pi_{k-1} -> (pi_k, chi_k, M_k)."""

    level_k: int
    source_perm: Permutation
    perm: Permutation
    chi: Substitution
    matrix: IntegerMatrix
    covering: bool
    unvisited_cells: FrozenSet[int]
    cell_count: int

    @property
    def return_times(self) -> Tuple[int, ...]:
        return self.chi.lengths()


@dataclass(frozen=True)
class RenormSeq:
    """Records 1..k0+p0; pi_{k0+p0} = pi_{k0} closes the period."""

    odometer: RotatedOdometer
    records: Tuple[LevelRecord, ...]
    preperiod_k0: int
    period_p0: int

    @property
    def q(self) -> int:
        return self.odometer.q

    @property
    def preperiod_records(self) -> Tuple[LevelRecord, ...]:
        return self.records[:self.preperiod_k0]

    @property
    def period_records(self) -> Tuple[LevelRecord, ...]:
        return self.records[self.preperiod_k0:self.preperiod_k0 + self.period_p0]

    @property
    def stationary(self) -> bool:
        return self.preperiod_k0 == 0 and self.period_p0 == 1

    def record(self, level: int) -> LevelRecord:
        """Record of any level k >= 1, unrolled through the period."""
        if level < 1:
            raise IndexError(f"Levels start at 1, got {level}")
        if level <= len(self.records):
            return self.records[level - 1]
        offset = (level - self.preperiod_k0 - 1) % self.period_p0
        return self.records[self.preperiod_k0 + offset]

    def chi(self, level: int) -> Substitution:
        return self.record(level).chi

    def matrix(self, level: int) -> IntegerMatrix:
        return self.record(level).matrix

    def perm(self, level: int) -> Permutation:
        """pi_k; pi_0 is the input permutation."""
        return self.odometer.pi if level == 0 else self.record(level).perm

    def permutations(self) -> List[Permutation]:
        return [self.odometer.pi] + [record.perm for record in self.records]
