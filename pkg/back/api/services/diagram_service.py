"""Ordered Bratteli diagrams of a renormalization sequence and their Vershik map."""
import logging
from typing import Dict, Iterator, List, Optional, Set, Tuple

import graphviz

from shared.core.errors import PreconditionError
from shared.models.diagram import OrderedDiagram, PathPrefix
from shared.models.dyadic import Dyadic
from shared.models.odometer import RotatedOdometer
from shared.models.renormalization import RenormSeq
from .iet_service import itinerary
from .renormalization_service import renorm_sequence
from .substitution_service import fixed_point_prefix, heights

logger = logging.getLogger(__name__)


def aperiodic_vertex_sets(seq: RenormSeq, depth: int) -> List[Tuple[int, ...]]:
    """Vertex sets V_1..V_depth of the subdiagram carrying the aperiodic points.

    A letter of level k survives iff it occurs in chi_k(j) for a surviving j of
    level k+1: the greatest such family, found around the period first and then
    carried back through the preperiod.
    """
    k0, p0 = seq.preperiod_k0, seq.period_p0
    periodic: Dict[int, Set[int]] = {
        level: set(range(seq.q)) for level in range(k0 + 1, k0 + p0 + 1)
    }
    changed = True
    while changed:
        changed = False
        for level in range(k0 + p0, k0, -1):
            above = periodic[level + 1] if level < k0 + p0 else periodic[k0 + 1]
            kept = set(seq.chi(level).letters(above))
            if kept != periodic[level]:
                periodic[level] = kept
                changed = True

    preperiod: Dict[int, Set[int]] = {}
    for level in range(k0, 0, -1):
        above = preperiod[level + 1] if level < k0 else periodic[k0 + 1]
        preperiod[level] = set(seq.chi(level).letters(above))

    def kept_at(level: int) -> Set[int]:
        if level > k0:
            return periodic[k0 + 1 + (level - k0 - 1) % p0]
        return preperiod[level]

    return [tuple(sorted(kept_at(level))) for level in range(1, depth + 1)]


def build_diagram(seq: RenormSeq, depth: int, restrict_to_aperiodic: bool = False) -> OrderedDiagram:
    """Levels 1..depth; edges into vertex i of level k+1 follow the letters of chi_k(i)."""
    if depth < 1:
        raise PreconditionError(f"Diagram depth must be at least 1, got {depth}")
    if restrict_to_aperiodic:
        vertex_levels = aperiodic_vertex_sets(seq, depth)
    else:
        vertex_levels = [tuple(range(seq.q))] * depth
    incoming = tuple(
        tuple((target, seq.chi(level)(target)) for target in vertex_levels[level])
        for level in range(1, depth)
    )
    return OrderedDiagram(
        depth=depth,
        vertex_levels=tuple(vertex_levels),
        incoming=incoming,
        restricted=restrict_to_aperiodic,
    )


def path_counts(diagram: OrderedDiagram) -> Dict[int, int]:
    """Number of root paths into each vertex of the last level."""
    counts = {vertex: 1 for vertex in diagram.vertices(1)}
    for level in range(2, diagram.depth + 1):
        counts = {
            target: sum(counts[source] for source in diagram.word(level, target))
            for target in diagram.vertices(level)
        }
    return counts


def minimal_path(diagram: OrderedDiagram, terminal: Optional[int] = None) -> PathPrefix:
    vertex = diagram.vertices(diagram.depth)[0] if terminal is None else terminal
    return PathPrefix(diagram, vertex, (0,) * diagram.depth)


def maximal_path(diagram: OrderedDiagram, terminal: Optional[int] = None) -> PathPrefix:
    vertex = diagram.vertices(diagram.depth)[-1] if terminal is None else terminal
    ranks = [0] * diagram.depth
    current = vertex
    for level in range(diagram.depth, 1, -1):
        word = diagram.word(level, current)
        ranks[level - 1] = len(word) - 1
        current = word[-1]
    return PathPrefix(diagram, vertex, tuple(ranks))


def vershik_successor(path: PathPrefix) -> PathPrefix:
    """Advance the lowest non-maximal edge and reset everything below it to minimal edges.

    A path that is maximal at every level moves to the minimal path into the next
    vertex of the last level; the last vertex wraps to the first.
    """
    diagram = path.diagram
    vertices = path.vertices()
    ranks = list(path.ranks)
    for level in range(2, diagram.depth + 1):
        word = diagram.word(level, vertices[level - 1])
        if ranks[level - 1] < len(word) - 1:
            ranks[level - 1] += 1
            for lower in range(1, level - 1):
                ranks[lower] = 0
            return PathPrefix(diagram, path.terminal, tuple(ranks))
    terminals = diagram.vertices(diagram.depth)
    position = terminals.index(path.terminal)
    return minimal_path(diagram, terminals[(position + 1) % len(terminals)])


def vershik_orbit(start: PathPrefix, steps: int) -> Iterator[PathPrefix]:
    """start and its next steps - 1 successors."""
    path = start
    for _ in range(steps):
        yield path
        path = vershik_successor(path)


def coding_check(system: RotatedOdometer, n: int, seq: Optional[RenormSeq] = None) -> bool:
    """The itinerary of 0 equals the fixed point word, and so does the Vershik coding.

    The Vershik side walks the paths into vertex 0 of the first level deep enough to
    hold n paths and reads their first-level vertices.
    """
    if n < 1:
        raise PreconditionError(f"Coding check length must be at least 1, got {n}")
    seq = seq or renorm_sequence(system)
    word = list(fixed_point_prefix(seq, n))
    orbit_letters = itinerary(system, Dyadic.zero(system.q), n)
    if orbit_letters != word:
        logger.warning(f"Itinerary of 0 for {system} departs from the fixed point")
        return False

    depth = 1
    while heights(seq, depth).h[0] < n:
        depth += 1
    diagram = build_diagram(seq, depth)
    vershik_letters = [path.vertices()[0] for path in vershik_orbit(minimal_path(diagram, 0), n)]
    if vershik_letters != word:
        logger.warning(f"Vershik coding for {system} departs from the fixed point")
        return False
    return True


def _node_id(level: int, vertex: int) -> str:
    return f"v{level}_{vertex}"


def export_dot(diagram: OrderedDiagram, name: str = "bratteli") -> str:
    """DOT text: one rank per level, edges labelled with their order rank."""
    dot = graphviz.Digraph(name, graph_attr={"rankdir": "TB"})
    dot.node("root", "root")
    for level in range(1, diagram.depth + 1):
        with dot.subgraph() as rank:
            rank.attr(rank="same")
            for vertex in diagram.vertices(level):
                rank.node(_node_id(level, vertex), str(vertex))
    for edge in diagram.edges(0):
        dot.edge("root", _node_id(1, edge.target), label="0")
    for level in range(1, diagram.depth):
        for edge in diagram.edges(level):
            dot.edge(_node_id(level, edge.source), _node_id(level + 1, edge.target), label=str(edge.rank))
    return dot.source
