"""Frobenius block structure, Perron data, candidate ergodic measures and entropy bounds."""
import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import sympy as sp

from shared.core.config import SETTINGS
from shared.core.errors import PreconditionError
from shared.models.matrix import IntegerMatrix
from shared.models.odometer import NConvention, n_exponent
from shared.models.permutation import Permutation
from shared.models.renormalization import PeriodicRegionClass, RenormSeq
from shared.models.spectra import (
    EntropyTerm,
    FrobeniusForm,
    MeasureCandidate,
    MeasureReport,
    PerronData,
    SpectralSummary,
)
from .renormalization_service import covering_status
from .substitution_service import minimal_alphabet, telescope

logger = logging.getLogger(__name__)

_X = sp.Symbol("x")


def frobenius_form(matrix: IntegerMatrix) -> FrobeniusForm:
    """Relabel so the matrix is lower block triangular with zero or irreducible diagonal blocks.

    Blocks are the strongly connected components of i -> j (M[i][j] > 0),
    dependencies first, ties broken by smallest member. Neighbouring zero
    singletons with the same nonzero row are shown as one zero block.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(matrix.size))
    graph.add_edges_from(matrix.support_graph())
    condensed = nx.condensation(graph)
    members = {node: tuple(sorted(condensed.nodes[node]["members"])) for node in condensed.nodes}
    ordered = nx.lexicographical_topological_sort(
        condensed.reverse(copy=True), key=lambda node: members[node][0]
    )

    blocks: List[Tuple[int, ...]] = []
    for node in ordered:
        block = members[node]
        if blocks and _mergeable(matrix, blocks[-1], block):
            blocks[-1] = blocks[-1] + block
        else:
            blocks.append(block)

    order = tuple(letter for block in blocks for letter in block)
    relabeling = Permutation(tuple(order.index(letter) for letter in range(matrix.size)))
    return FrobeniusForm(
        relabeling=relabeling,
        order=order,
        blocks=tuple(blocks),
        block_view=matrix.restrict(order),
    )


def _mergeable(matrix: IntegerMatrix, previous: Tuple[int, ...], block: Tuple[int, ...]) -> bool:
    if len(block) != 1:
        return False
    letter = block[0]
    row = matrix.entries[letter]
    return (
        matrix[letter, letter] == 0
        and any(row)
        and all(matrix[member, member] == 0 and matrix.entries[member] == row for member in previous)
    )


def _perron_root(matrix: IntegerMatrix) -> Tuple[List[int], sp.Expr, str, str]:
    """Characteristic polynomial, exact Perron root, its description and minimal polynomial."""
    poly = matrix.to_sympy().charpoly(_X)
    coefficients = [int(c) for c in poly.all_coeffs()]
    best_root: Optional[sp.Expr] = None
    best_factor: Optional[sp.Poly] = None
    for factor, _ in sp.factor_list(poly.as_expr(), _X)[1]:
        factor_poly = sp.Poly(factor, _X)
        for root in factor_poly.real_roots():
            if best_root is None or root.evalf(50) > best_root.evalf(50):
                best_root, best_factor = root, factor_poly
    if best_root is None or best_factor is None:
        return coefficients, sp.Integer(0), "0", "x"

    exact = best_root
    if best_factor.degree() <= 2:
        target = float(best_root.evalf(30))
        for candidate in sp.roots(best_factor):
            if candidate.is_real and abs(float(candidate.evalf(30)) - target) < 1e-9:
                exact = sp.nsimplify(candidate)
                break
    return coefficients, exact, str(exact), str(best_factor.as_expr())


def power_iteration(
    matrix: IntegerMatrix,
    tolerance: Optional[float] = None,
    max_steps: Optional[int] = None,
) -> Tuple[float, float]:
    """Spectral radius of a nonnegative matrix by power iteration on M + I.

    The shift makes the Perron root strictly dominant in modulus.

    Returns:
        (radius estimate, relative residual of the final vector)
    """
    tolerance = tolerance if tolerance is not None else SETTINGS.POWER_ITERATION_TOLERANCE
    max_steps = max_steps if max_steps is not None else SETTINGS.POWER_ITERATION_MAX_STEPS
    size = matrix.size
    shifted = matrix.to_numpy() + np.eye(size)
    vector = np.full(size, 1.0 / size)
    estimate = 1.0
    for _ in range(max_steps):
        image = shifted @ vector
        new_estimate = float(image.sum())
        image /= new_estimate
        converged = abs(new_estimate - estimate) <= tolerance * new_estimate
        delta = float(np.abs(image - vector).max())
        vector, estimate = image, new_estimate
        if converged and delta <= tolerance:
            break
    residual = float(np.abs(shifted @ vector - estimate * vector).max() / estimate)
    return estimate - 1.0, residual


def perron_data(matrix: IntegerMatrix) -> PerronData:
    """Exact characteristic polynomial and spectral radius, cross-checked by power iteration.

    The float radius is also put back into the characteristic polynomial; the
    reported residual is relative to the size of its terms.
    """
    coefficients, root, exact, minimal = _perron_root(matrix)
    radius = float(root.evalf(30))
    estimate, residual = power_iteration(matrix)
    degree = len(coefficients) - 1
    terms = sum(abs(c) * radius ** (degree - i) for i, c in enumerate(coefficients))
    poly_residual = abs(char_poly_value(coefficients, radius)) / max(terms, 1.0)
    if poly_residual > 1e-9:
        logger.warning(f"Radius {exact} leaves a characteristic polynomial residual of {poly_residual:.3g}")
    return PerronData(
        char_poly=tuple(coefficients),
        spectral_radius=radius,
        radius_exact=exact,
        minimal_polynomial=minimal,
        power_iteration_radius=estimate,
        power_iteration_residual=residual,
        char_poly_residual=poly_residual,
        error_bound=max(abs(estimate - radius), SETTINGS.POWER_ITERATION_TOLERANCE),
    )


def char_poly_value(coefficients: Sequence[int], x: float) -> float:
    value = 0.0
    for coefficient in coefficients:
        value = value * x + coefficient
    return value


def _left_perron_vector(block: np.ndarray, value: float) -> np.ndarray:
    _, _, vh = np.linalg.svd(block.T - value * np.eye(len(block)))
    vector = vh[-1]
    return -vector if vector.sum() < 0 else vector


def measure_report(
    seq: RenormSeq,
    matrix: Optional[IntegerMatrix] = None,
    clamp: Optional[float] = None,
) -> MeasureReport:
    """Candidate ergodic measures of the telescoped matrix B.

    For each diagonal block of radius > 1 the left eigenvector of the whole
    matrix is built block by block: the block's own Perron vector, then
    v_j (lambda - F_j) = sum of contributions from the blocks above, down to
    the first block. It is a candidate when it is nonnegative.
    """
    clamp = clamp if clamp is not None else SETTINGS.CLAMP_TOLERANCE
    matrix = matrix or telescope(seq).B
    form = frobenius_form(matrix)
    view = form.block_view.to_numpy()
    positions = [list(form.block_positions(index)) for index in range(len(form.blocks))]

    candidates = []
    for index, block in enumerate(form.blocks):
        sub = matrix.restrict(block)
        if not any(any(row) for row in sub.entries):
            continue
        _, root, exact, _ = _perron_root(sub)
        value = float(root.evalf(30))
        if value <= 1.0 + 1e-12:
            candidates.append(_rejected(block, value, exact, matrix.size, "spectral radius <= 1"))
            continue

        vector = np.zeros(matrix.size)
        own = view[np.ix_(positions[index], positions[index])]
        vector[positions[index]] = _left_perron_vector(own, value)
        reason = None
        for lower in range(index - 1, -1, -1):
            rows = [p for upper in range(lower + 1, index + 1) for p in positions[upper]]
            rhs = vector[rows] @ view[np.ix_(rows, positions[lower])]
            system = (value * np.eye(len(positions[lower])) - view[np.ix_(positions[lower], positions[lower])]).T
            singular_values = np.linalg.svd(system, compute_uv=False)
            if singular_values[-1] <= 1e-12 * max(float(singular_values[0]), 1.0):
                reason = "eigenvalue shared with a lower block"
                break
            vector[positions[lower]] = np.linalg.solve(system, rhs)
        if reason:
            candidates.append(_rejected(block, value, exact, matrix.size, reason))
            logger.warning(f"Measure candidate for block {block} rejected: {reason}")
            continue

        vector[np.abs(vector) < clamp] = 0.0
        original = np.zeros(matrix.size)
        original[list(form.order)] = vector
        support = tuple(int(i) for i in np.flatnonzero(original))
        scale = original[support[0]]
        original /= scale
        vector /= scale
        nonnegative = bool((original >= 0).all())
        residual = float(np.abs(original @ matrix.to_numpy() - value * original).max())
        candidates.append(MeasureCandidate(
            block=block,
            value=value,
            value_exact=exact,
            left_eigenvector=tuple(float(x) for x in original),
            block_view_eigenvector=tuple(float(x) for x in vector),
            support=support,
            nonnegative=nonnegative,
            residual=residual,
            accepted=nonnegative,
            reason=None if nonnegative else "left eigenvector has negative entries",
        ))
        if not nonnegative:
            logger.warning(f"Measure candidate for block {block} rejected: negative entries")

    report = MeasureReport(candidates=tuple(candidates))
    logger.info(f"Measure report for {seq.odometer}: {report.count} candidate measure(s)")
    return report


def _rejected(block: Tuple[int, ...], value: float, exact: str, size: int, reason: str) -> MeasureCandidate:
    return MeasureCandidate(
        block=block,
        value=value,
        value_exact=exact,
        left_eigenvector=(0.0,) * size,
        block_view_eigenvector=(0.0,) * size,
        support=(),
        nonnegative=False,
        residual=0.0,
        accepted=False,
        reason=reason,
    )


def lebesgue_ergodic(seq: RenormSeq) -> bool:
    """Lebesgue measure is ergodic iff there are no periodic points."""
    return covering_status(seq) is PeriodicRegionClass.EMPTY


def spectral_summary(seq: RenormSeq) -> SpectralSummary:
    B = telescope(seq).B
    letters = minimal_alphabet(seq)
    return SpectralSummary(
        full=perron_data(B),
        minimal=perron_data(B.restrict(letters)),
        minimal_letters=letters,
        primitive=B.is_primitive(),
        frobenius=frobenius_form(B),
    )


def entropy_bound(
    q: int,
    k_max: int,
    convention: Union[NConvention, str, None] = None,
) -> List[EntropyTerm]:
    """Terms Lambda_{m_k} * log m_k with m_k = k (2^N - 1) q and Lambda_{m_k} = 2^(-kN)."""
    if k_max < 1:
        raise PreconditionError(f"k_max must be at least 1, got {k_max}")
    n = n_exponent(q, convention)
    terms = []
    for k in range(1, k_max + 1):
        m = k * ((1 << n) - 1) * q
        scale = Fraction(1, 1 << (k * n))
        terms.append(EntropyTerm(k=k, m_k=m, scale=scale, value=float(scale) * math.log(m)))
    return terms
