"""Cell maps, first-return permutations, substitutions and periodic regions.

Every level of the renormalization is a scaled copy of level 1 for the current
permutation, so the sequence (pi_k, chi_k) is computed by repeating one
level-1 first-return computation on q * 2^N cells.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Set, Tuple, Union

import numpy as np

from shared.core.config import SETTINGS
from shared.core.errors import CapacityError, PreconditionError
from shared.models.odometer import NConvention, RotatedOdometer
from shared.models.permutation import Permutation
from shared.models.renormalization import (
    UNDEFINED,
    CellMap,
    LevelRecord,
    PeriodicRegionClass,
    RenormSeq,
)
from shared.models.substitution import Substitution

logger = logging.getLogger(__name__)

Interval = Tuple[Fraction, Fraction]


def build_cell_map(system: RotatedOdometer, k: int, max_cells: Optional[int] = None) -> CellMap:
    """Encode F_pi on the q * 2^(kN) equal cells of [0, 1).

    A cell c first moves by the block translation of R_pi, then by the
    translation of the a-branch holding the rotated cell. Cells rotated into
    the top q cells have no image at this resolution.

    Raises:
        PreconditionError: k < 1
        CapacityError: more cells than max_cells (default SETTINGS.MAX_CELLS)
    """
    if k < 1:
        raise PreconditionError(f"Resolution must be at least 1, got {k}")
    limit = max_cells if max_cells is not None else SETTINGS.MAX_CELLS
    shift = k * system.n_exp
    total = system.q << shift
    if total > limit:
        raise CapacityError(total, limit)

    cells = np.arange(total, dtype=np.int64)
    blocks = cells >> shift
    images = np.asarray(system.pi.images, dtype=np.int64)
    rotated = cells + ((images[blocks] - blocks) << shift)

    successor = np.full(total, UNDEFINED, dtype=np.int64)
    # Branch n of a covers rotated cells [Q - Q/2^(n-1), Q - Q/2^n)
    for n in range(1, shift + 1):
        low = total - (total >> (n - 1))
        high = total - (total >> n)
        branch = (rotated >= low) & (rotated < high)
        successor[branch] = rotated[branch] - total + 3 * (total >> n)
    successor.setflags(write=False)

    logger.debug(f"Built cell map for {system} at k={k}: {total} cells")
    return CellMap(q=system.q, n_exp=system.n_exp, resolution_k=k, next=successor)


def _return_orbits(cell_map: CellMap) -> Tuple[List[List[int]], np.ndarray]:
    """Orbits of the q coding cells up to and including their H-cell, plus a visited mask."""
    visited = np.zeros(cell_map.cell_count, dtype=bool)
    orbits = []
    bound = cell_map.cell_count
    for start in cell_map.l_cells:
        orbit = [start]
        visited[start] = True
        cell = start
        while True:
            image = int(cell_map.next[cell])
            if image == UNDEFINED:
                break
            if len(orbit) > bound:
                raise AssertionError(f"Return orbit of cell {start} exceeded {bound} steps")
            orbit.append(image)
            visited[image] = True
            cell = image
        orbits.append(orbit)
    return orbits, visited


def _step(q: int, perm: Permutation, n_exp: int) -> Tuple[Permutation, Substitution, np.ndarray]:
    system = RotatedOdometer(q, perm, n_exp)
    cell_map = build_cell_map(system, 1)
    orbits, visited = _return_orbits(cell_map)
    block = cell_map.cells_per_interval
    top = cell_map.cell_count - q

    words = []
    images = []
    for orbit in orbits:
        words.append(tuple(cell // block for cell in orbit))
        last = orbit[-1]
        letter = last // block
        images.append(last + (perm(letter) - letter) * block - top)
    return Permutation(tuple(images)), Substitution(tuple(words)), visited


def renorm_step(
    q: int,
    perm: Permutation,
    convention: Union[NConvention, str, None] = None,
) -> Tuple[Permutation, Substitution]:
    """First return of F_perm to the coding cells: (pi_next, chi).

    chi(i) lists the big intervals visited by cell i until it reaches an H-cell;
    pi_next(i) is the position of the rotated H-cell inside the top q cells.
    """
    system = RotatedOdometer.create(q, perm, convention)
    perm_next, chi, _ = _step(q, perm, system.n_exp)
    return perm_next, chi


def level_record(system: RotatedOdometer, perm: Permutation, level: int) -> LevelRecord:
    """Full record of one renormalization step, including covering data."""
    perm_next, chi, visited = _step(system.q, perm, system.n_exp)
    unvisited = frozenset(int(c) for c in np.flatnonzero(~visited))
    record = LevelRecord(
        level_k=level,
        source_perm=perm,
        perm=perm_next,
        chi=chi,
        matrix=chi.matrix(),
        covering=not unvisited,
        unvisited_cells=unvisited,
        cell_count=len(visited),
    )
    logger.debug(
        f"Level {level}: {perm.cycle_notation()} -> {perm_next.cycle_notation()}, "
        f"sum|chi|={chi.total_length()}/{len(visited)}"
    )
    return record


def renorm_sequence(system: RotatedOdometer) -> RenormSeq:
    """Iterate renorm_step from pi until a permutation recurs.

    With pi_0 = pi, the first j with pi_j = pi_i (i < j) gives k0 = i and p0 = j - i;
    records 1..j are kept.
    """
    seen = {system.pi: 0}
    records: List[LevelRecord] = []
    perm = system.pi
    while True:
        record = level_record(system, perm, len(records) + 1)
        records.append(record)
        perm = record.perm
        if perm in seen:
            k0 = seen[perm]
            p0 = len(records) - k0
            break
        seen[perm] = len(records)

    logger.info(f"Renormalized {system}: k0={k0}, p0={p0}")
    return RenormSeq(odometer=system, records=tuple(records), preperiod_k0=k0, period_p0=p0)


def covering_status(seq: RenormSeq) -> PeriodicRegionClass:
    """Empty if every level covers, infinite if a period level does not, finite otherwise."""
    if any(not record.covering for record in seq.period_records):
        return PeriodicRegionClass.INFINITE
    if any(not record.covering for record in seq.preperiod_records):
        return PeriodicRegionClass.FINITE
    return PeriodicRegionClass.EMPTY


def _periodic_mask(system: RotatedOdometer, k: int) -> Tuple[CellMap, np.ndarray]:
    cell_map = build_cell_map(system, k)
    _, visited = _return_orbits(cell_map)
    return cell_map, ~visited


def periodic_region(system: RotatedOdometer, k: int) -> List[Interval]:
    """Maximal half-open intervals of cells whose orbit cycles without meeting an H-cell.

    Cells with no preimage are exactly the q coding cells, and their orbits end
    in H; every other cell lies on one of those orbits or on a cycle.
    """
    cell_map, periodic = _periodic_mask(system, k)
    total = cell_map.cell_count
    intervals: List[Interval] = []
    start: Optional[int] = None
    for cell, flag in enumerate(periodic.tolist()):
        if flag and start is None:
            start = cell
        elif not flag and start is not None:
            intervals.append((Fraction(start, total), Fraction(cell, total)))
            start = None
    if start is not None:
        intervals.append((Fraction(start, total), Fraction(1)))
    return intervals


def periodic_measure(system: RotatedOdometer, k: int) -> Fraction:
    return sum((high - low for low, high in periodic_region(system, k)), Fraction(0))


def periodic_cycles(system: RotatedOdometer, k: int) -> List[Tuple[int, ...]]:
    """Cycles of periodic cells at resolution k, each starting at its smallest cell."""
    cell_map, periodic = _periodic_mask(system, k)
    seen: Set[int] = set()
    cycles = []
    for start in np.flatnonzero(periodic).tolist():
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        cell = int(cell_map.next[start])
        while cell != start:
            cycle.append(cell)
            seen.add(cell)
            cell = int(cell_map.next[cell])
        cycles.append(tuple(cycle))
    return cycles
