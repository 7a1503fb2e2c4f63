"""Ordered Bratteli diagrams, finite path prefixes, heights and telescoped data."""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple

from shared.core.errors import StructuralError
from .matrix import IntegerMatrix, Vector
from .substitution import Word


@dataclass(frozen=True)
class HeightVector:
    level_n: int
    h: Vector


@dataclass(frozen=True)
class TelescopedSystem:
    """B = M_{k0+p0} ... M_{k0+1} and w = M_{k0} ... M_1 . 1."""

    B: IntegerMatrix
    w: HeightVector


@dataclass(frozen=True)
class Edge:
    level: int
    source: int
    target: int
    rank: int


@dataclass(frozen=True)
class OrderedDiagram:
    """Levels 1..depth of the diagram (level 0 is the root).

    incoming[k-1] maps each vertex i of level k+1 to the word chi_k(i): its
    incoming edges come from the letters of the word, ranked by position.
    """

    depth: int
    vertex_levels: Tuple[Tuple[int, ...], ...]
    incoming: Tuple[Tuple[Tuple[int, Word], ...], ...]
    restricted: bool = False
    _lookup: Tuple[Dict[int, Word], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_lookup", tuple(dict(level) for level in self.incoming))

    def vertices(self, level: int) -> Tuple[int, ...]:
        return self.vertex_levels[level - 1]

    def word(self, level: int, target: int) -> Word:
        """Ordered sources of the edges into vertex `target` of level `level` (level >= 2)."""
        return self._lookup[level - 2][target]

    def edges(self, level: int) -> Iterator[Edge]:
        """Edges from level `level` to level + 1; level 0 is the root star."""
        if level == 0:
            for vertex in self.vertices(1):
                yield Edge(0, 0, vertex, 0)
            return
        for target, word in self.incoming[level - 1]:
            for rank, source in enumerate(word):
                yield Edge(level, source, target, rank)

    def edge_count(self, level: int) -> int:
        return sum(1 for _ in self.edges(level))

    def path_vertices(self, terminal: int, ranks: Tuple[int, ...]) -> List[int]:
        """Vertices of levels 1..depth along a path; raises on inconsistent choices."""
        if len(ranks) != self.depth:
            raise StructuralError(f"Path needs {self.depth} edge choices, got {len(ranks)}")
        if terminal not in self.vertices(self.depth):
            raise StructuralError(f"Vertex {terminal} is not on level {self.depth}")
        if ranks[0] != 0:
            raise StructuralError("The root has a single edge into each first-level vertex")
        vertices = [terminal]
        for level in range(self.depth, 1, -1):
            word = self.word(level, vertices[-1])
            rank = ranks[level - 1]
            if not 0 <= rank < len(word):
                raise StructuralError(f"Rank {rank} out of range at level {level}")
            vertices.append(word[rank])
        return vertices[::-1]


@dataclass(frozen=True)
class PathPrefix:
    """A root-to-level-depth path: terminal vertex plus the rank of each edge e_0..e_{depth-1}."""

    diagram: OrderedDiagram = field(repr=False, compare=False)
    terminal: int
    ranks: Tuple[int, ...]

    def __post_init__(self) -> None:
        self.diagram.path_vertices(self.terminal, self.ranks)

    def vertices(self) -> List[int]:
        return self.diagram.path_vertices(self.terminal, self.ranks)

    def is_minimal(self) -> bool:
        return all(rank == 0 for rank in self.ranks)

    def is_maximal(self) -> bool:
        vertices = self.vertices()
        return all(
            self.ranks[level - 1] == len(self.diagram.word(level, vertices[level - 1])) - 1
            for level in range(2, self.diagram.depth + 1)
        )
