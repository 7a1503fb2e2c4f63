"""Permutations induced by rational-slope flows on square-tiled surfaces."""
import logging
from typing import Dict, Optional

from shared.core.errors import PreconditionError
from shared.models.permutation import Permutation
from shared.models.surface import FlowSpec

logger = logging.getLogger(__name__)

# Singularity and end census of the one surface worked out by hand; no general
# corner-cycle algorithm backs it.
_WHISKERS_EXAMPLE = {
    "q": 5,
    "pi": (0, 1, 3, 2, 4),
    "p": 5,
    "census": {
        "wild_singularities": 1,
        "cone_angle_singularities": [
            {"multiplicity": 3, "removable": False},
            {"multiplicity": 1, "removable": True},
        ],
        "planar_ends": 1,
        "non_planar_ends": 1,
    },
}


def slope_permutation(q: int, p: int) -> Permutation:
    """Torus-glued flow of slope q/p: i -> (i + p) mod q."""
    flow = FlowSpec(q, p)
    if q < 2:
        raise PreconditionError(f"q must be at least 2, got {q}")
    return Permutation(tuple((i + flow.p) % q for i in range(q)))


def vertical_permutation(q: int, pi: Permutation, p: int) -> Permutation:
    """pi' = s o t^-1 o pi o s^-1 on {0..q-1}, identity on {q..p-1}.

    Here s(i) = q - 1 - i and t(i) = i + r mod q with r = p mod q.

    Raises:
        PreconditionError: p < q, q < 2, or pi not on q letters
    """
    flow = FlowSpec(q, p)
    if q < 2 or not flow.crosses_vertical_edges:
        raise PreconditionError(f"Need p >= q >= 2, got q={q}, p={p}")
    if pi.q != q:
        raise PreconditionError(f"Permutation acts on {pi.q} letters, q is {q}")
    r = flow.r

    def flip(i: int) -> int:
        return q - 1 - i

    lower = tuple(flip((pi(flip(k)) - r) % q) for k in range(q))
    result = Permutation(lower + tuple(range(q, p)))

    restored = tuple((flip(result(flip(i))) + r) % q for i in range(q))
    if restored != pi.images:
        raise AssertionError(f"Vertical permutation of {pi} does not invert")
    return result


def known_singularity_census(q: int, pi: Permutation, p: int) -> Optional[Dict[str, object]]:
    """Census for the hand-worked whiskers surface; None for every other input."""
    if (q, pi.images, p) == (_WHISKERS_EXAMPLE["q"], _WHISKERS_EXAMPLE["pi"], _WHISKERS_EXAMPLE["p"]):
        return dict(_WHISKERS_EXAMPLE["census"])  # type: ignore[arg-type]
    return None
