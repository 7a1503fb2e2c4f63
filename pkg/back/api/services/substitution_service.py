"""Substitution algebra over a renormalization sequence.

Orientation: M[i][j] counts letter j in chi(i), so the matrix of
chi_1 o chi_2 is M_2 . M_1 and heights obey h^(n+1) = M_n . h^(n).
"""
import logging
from typing import List, Optional, Sequence, Tuple

from shared.core.errors import PreconditionError, StructuralError
from shared.models.diagram import HeightVector, TelescopedSystem
from shared.models.matrix import IntegerMatrix, Vector
from shared.models.renormalization import RenormSeq
from shared.models.substitution import Substitution, Word

logger = logging.getLogger(__name__)


def associated_matrix(chi: Substitution) -> IntegerMatrix:
    return chi.matrix()


def compose_substitutions(outer: Substitution, inner: Substitution) -> Substitution:
    """(outer o inner)(i) = outer applied letterwise to inner(i)."""
    if outer.q != inner.q:
        raise PreconditionError(f"Alphabets differ: {outer.q} vs {inner.q}")
    return Substitution(tuple(outer.apply(word) for word in inner.words))


def composed_substitution(seq: RenormSeq, first: int, last: int) -> Substitution:
    """chi_first o chi_{first+1} o ... o chi_last."""
    result = seq.chi(last)
    for level in range(last - 1, first - 1, -1):
        result = compose_substitutions(seq.chi(level), result)
    return result


def period_substitution(seq: RenormSeq) -> Substitution:
    first = seq.preperiod_k0 + 1
    return composed_substitution(seq, first, first + seq.period_p0 - 1)


def _restriction(alphabet: Optional[Sequence[int]], q: int) -> List[int]:
    return sorted(alphabet) if alphabet is not None else list(range(q))


def heights(seq: RenormSeq, n: int, alphabet: Optional[Sequence[int]] = None) -> HeightVector:
    """h^(n) = M_{n-1} ... M_1 . 1, optionally on the principal submatrices of a letter set.

    Args:
        seq: Renormalization sequence
        n: Level, h^(1) is all ones
        alphabet: Letters to keep; entries are listed in sorted letter order

    Returns:
        HeightVector for level n
    """
    if n < 1:
        raise PreconditionError(f"Height level must be at least 1, got {n}")
    letters = _restriction(alphabet, seq.q)
    vector: Vector = (1,) * len(letters)
    for level in range(1, n):
        vector = seq.matrix(level).restrict(letters).apply(vector)
    return HeightVector(level_n=n, h=vector)


def heights_by_words(seq: RenormSeq, n: int) -> HeightVector:
    """Same heights from the lengths of the composed words chi_1 o ... o chi_{n-1}(i)."""
    if n < 1:
        raise PreconditionError(f"Height level must be at least 1, got {n}")
    if n == 1:
        return HeightVector(level_n=1, h=(1,) * seq.q)
    return HeightVector(level_n=n, h=composed_substitution(seq, 1, n - 1).lengths())


def fixed_point_prefix(seq: RenormSeq, length: int) -> Word:
    """First letters of rho = lim chi_1 o ... o chi_k(0).

    Every word starts with 0, so each deeper composition extends the previous one.
    """
    if length < 1:
        raise PreconditionError(f"Prefix length must be at least 1, got {length}")
    depth = 0
    size = 1
    vector: Vector = (1,) * seq.q
    while size < length:
        depth += 1
        vector = seq.matrix(depth).apply(vector)
        if vector[0] == size and depth > len(seq.records) + seq.period_p0:
            raise StructuralError("Fixed point word stopped growing")
        size = vector[0]
    word: Word = (0,)
    for level in range(depth, 0, -1):
        word = seq.chi(level).apply(word)
    return word[:length]


def minimal_alphabet(seq: RenormSeq) -> Tuple[int, ...]:
    """Smallest letter set containing 0 closed under the period substitution."""
    chi = period_substitution(seq)
    letters = {0}
    frontier = [0]
    while frontier:
        letter = frontier.pop()
        for symbol in chi(letter):
            if symbol not in letters:
                letters.add(symbol)
                frontier.append(symbol)
    return tuple(sorted(letters))


def telescope(seq: RenormSeq) -> TelescopedSystem:
    """Period product B and preperiod seed w."""
    k0, p0 = seq.preperiod_k0, seq.period_p0
    product = IntegerMatrix.identity(seq.q)
    for level in range(k0 + 1, k0 + p0 + 1):
        product = seq.matrix(level) @ product
    seed: Vector = (1,) * seq.q
    for level in range(1, k0 + 1):
        seed = seq.matrix(level).apply(seed)
    return TelescopedSystem(B=product, w=HeightVector(level_n=k0 + 1, h=seed))
