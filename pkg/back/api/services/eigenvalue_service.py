"""Exact rational-eigenvalue tests: does d divide the tower heights for all large n?

Heights modulo d evolve in a finite state space, so the sequence enters a
cycle; the verdict is read off the whole cycle, never from samples.
"""
import logging
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple, Union

from shared.core.config import SETTINGS
from shared.core.errors import PreconditionError
from shared.models.matrix import Vector
from shared.models.renormalization import RenormSeq
from shared.models.spectra import (
    AlphabetChoice,
    DivisibilityVerdict,
    DyadicScan,
    ScanSummary,
    SeedChoice,
)
from .substitution_service import minimal_alphabet, telescope

logger = logging.getLogger(__name__)


def find_cycle(step: Callable[[Vector], Vector], start: Vector) -> Tuple[int, int]:
    """Brent's algorithm: (transient length mu, cycle length lam) of start, step(start), ..."""
    power = lam = 1
    tortoise = start
    hare = step(start)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = step(hare)
        lam += 1

    tortoise = hare = start
    for _ in range(lam):
        hare = step(hare)
    mu = 0
    while tortoise != hare:
        tortoise = step(tortoise)
        hare = step(hare)
        mu += 1
    return mu, lam


def rational_eigenvalue(
    seq: RenormSeq,
    d: int,
    alphabet: Union[AlphabetChoice, str] = AlphabetChoice.MINIMAL,
    seed: Union[SeedChoice, str, None] = None,
    letters: Optional[Sequence[int]] = None,
) -> DivisibilityVerdict:
    """Iterate h -> B h mod d from the seed and decide on the cycle it falls into.

    Args:
        seq: Renormalization sequence
        d: Modulus, at least 2
        alphabet: minimal (restricted period matrix) or full
        seed: ones, or telescoped (the preperiod heights w)
        letters: Letters whose heights are tested; all letters of the alphabet by default

    Returns:
        DivisibilityVerdict, true iff every tested height is 0 mod d along the cycle
    """
    if d < 2:
        raise PreconditionError(f"Modulus must be at least 2, got {d}")
    alphabet = AlphabetChoice(alphabet) if isinstance(alphabet, str) else alphabet
    seed = SeedChoice(seed or SETTINGS.EIGEN_SEED) if not isinstance(seed, SeedChoice) else seed

    telescoped = telescope(seq)
    kept = list(minimal_alphabet(seq)) if alphabet is AlphabetChoice.MINIMAL else list(range(seq.q))
    tested = list(letters) if letters is not None else kept
    missing = [letter for letter in tested if letter not in kept]
    if missing:
        raise PreconditionError(f"Letters {missing} are outside the {alphabet.value} alphabet {kept}")
    positions = [kept.index(letter) for letter in tested]

    matrix = telescoped.B.restrict(kept)
    if seed is SeedChoice.ONES:
        start: Vector = (1,) * len(kept)
    else:
        start = tuple(telescoped.w.h[letter] % d for letter in kept)

    def step(vector: Vector) -> Vector:
        return matrix.apply_mod(vector, d)

    mu, lam = find_cycle(step, start)
    state = start
    for _ in range(mu):
        state = step(state)

    residues: Dict[int, Set[int]] = {letter: set() for letter in tested}
    witness: Optional[Vector] = None
    for _ in range(lam):
        for letter, position in zip(tested, positions):
            residues[letter].add(state[position])
        if witness is None and any(state[position] for position in positions):
            witness = state
        state = step(state)

    verdict = witness is None
    logger.debug(
        f"d={d} on {alphabet.value} alphabet, letters {tested}: "
        f"{'pass' if verdict else 'fail'} (transient {mu}, cycle {lam})"
    )
    return DivisibilityVerdict(
        divisor=d,
        alphabet=alphabet,
        letters=tuple(tested),
        seed=seed,
        verdict=verdict,
        transient_length=mu,
        cycle_length=lam,
        residues={letter: tuple(sorted(values)) for letter, values in residues.items()},
        witness=witness,
    )


def dyadic_scan(
    seq: RenormSeq,
    max_m: Optional[int] = None,
    alphabet: Union[AlphabetChoice, str] = AlphabetChoice.MINIMAL,
    seed: Union[SeedChoice, str, None] = None,
    letters: Optional[Sequence[int]] = None,
) -> DyadicScan:
    """rational_eigenvalue for d = 2, 4, ..., 2^max_m, stopping at the first failure.

    A failure at 2^m implies failure at every larger power, so the scan stops there.
    Passing every tested m is bounded evidence for a dyadic odometer factor.
    """
    max_m = max_m if max_m is not None else SETTINGS.DYADIC_SCAN_MAX_M
    if max_m < 1:
        raise PreconditionError(f"max_m must be at least 1, got {max_m}")
    verdicts: List[DivisibilityVerdict] = []
    for m in range(1, max_m + 1):
        verdict = rational_eigenvalue(seq, 2**m, alphabet, seed, letters)
        verdicts.append(verdict)
        if not verdict.verdict:
            logger.info(f"Dyadic scan for {seq.odometer} fails at m={m}")
            return DyadicScan(tuple(verdicts), max_m, ScanSummary.FAILS_AT_M, failed_m=m)
    return DyadicScan(tuple(verdicts), max_m, ScanSummary.ALL_TESTED_PASS)
