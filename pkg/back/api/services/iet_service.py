"""Exact evaluation of the von Neumann-Kakutani map, R_pi and F_pi = a o R_pi.

All points live on the grid {num / (q * 2^k)}; nothing here touches floats.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from shared.core.errors import PreconditionError
from shared.models.dyadic import Dyadic
from shared.models.odometer import RotatedOdometer
from shared.models.permutation import Permutation

logger = logging.getLogger(__name__)


def vnk_branch(x: Dyadic) -> int:
    """Index n >= 1 of the interval [1 - 2^(1-n), 1 - 2^(-n)) containing x."""
    denominator = x.denominator
    remainder = denominator - x.numerator
    n = 1
    while (remainder << n) <= denominator:
        n += 1
    return n


def vnk_map(x: Dyadic) -> Dyadic:
    """a(x) = x - 1 + 3 * 2^(-n) on the n-th branch: binary add-one with carry."""
    return vnk_map_with_branch(x)[0]


def vnk_map_with_branch(x: Dyadic) -> Tuple[Dyadic, int]:
    n = vnk_branch(x)
    k = x.log2_denominator
    m = max(k, n)
    numerator = (x.numerator << (m - k)) - (x.q_factor << m) + 3 * (x.q_factor << (m - n))
    return Dyadic.make(numerator, m, x.q_factor), n


def on_grid(x: Dyadic, q: int) -> Dyadic:
    """Re-express x on the q grid."""
    if x.q_factor == q:
        return x
    return Dyadic.from_fraction(x.to_fraction(), q)


def rotation_map(system: RotatedOdometer, x: Dyadic) -> Dyadic:
    """R_pi: translate I_i = [i/q, (i+1)/q) onto I_pi(i)."""
    x = on_grid(x, system.q)
    interval = x.interval_index()
    shift = (system.pi(interval) - interval) << x.log2_denominator
    return Dyadic.make(x.numerator + shift, x.log2_denominator, system.q)


def rotated_map(system: RotatedOdometer, x: Dyadic) -> Dyadic:
    return vnk_map(rotation_map(system, x))


def orbit_itinerary(system: RotatedOdometer, x: Dyadic, n: int) -> Tuple[List[Dyadic], List[int]]:
    """The first n orbit points of x and the big interval holding each of them.

    Args:
        system: Rotated odometer
        x: Starting point
        n: Number of points, at least 1

    Returns:
        (points, letters) with points[0] = x
    """
    if n < 1:
        raise PreconditionError(f"Orbit length must be at least 1, got {n}")
    point = on_grid(x, system.q)
    points = []
    letters = []
    for _ in range(n):
        points.append(point)
        letters.append(point.interval_index())
        point = rotated_map(system, point)
    return points, letters


def itinerary(system: RotatedOdometer, x: Dyadic, n: int) -> List[int]:
    return orbit_itinerary(system, x, n)[1]


def first_return(
    system: RotatedOdometer,
    x: Dyadic,
    bound: Fraction,
    max_steps: Optional[int] = None,
) -> Tuple[Dyadic, int]:
    """Iterate F_pi from x until the orbit is back in [0, bound).

    Returns:
        (return point, return time)

    Raises:
        PreconditionError: no return within max_steps
    """
    limit = max_steps if max_steps is not None else 64 * system.q * system.block
    point = rotated_map(system, x)
    for steps in range(1, limit + 1):
        if point.to_fraction() < bound:
            return point, steps
        point = rotated_map(system, point)
    raise PreconditionError(f"No return to [0, {bound}) from {x} within {limit} steps")


def double_permutation(pi: Permutation) -> Permutation:
    """Permutation on 2q letters whose odometer returns to [0, 1/2) as a copy of F_pi.

    Lower letters i < q go to pi(i) + q and upper letters i >= q drop to i - q,
    so F'(x) = F_pi(2x) / 2 on [0, 1/2).
    """
    q = pi.q
    return Permutation(tuple(pi(i) + q for i in range(q)) + tuple(range(q)))
