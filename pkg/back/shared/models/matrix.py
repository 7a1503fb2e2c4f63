"""Square nonnegative integer matrices with exact (Python int) entries."""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import sympy as sp

from shared.core.errors import PreconditionError

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntegerMatrix:
    """entries[i][j]; for substitution matrices this counts letter j in chi(i)."""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        size = len(self.entries)
        for row in self.entries:
            if len(row) != size:
                raise PreconditionError("Matrix must be square")
            if any(value < 0 for value in row):
                raise PreconditionError("Matrix entries must be nonnegative")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntegerMatrix":
        return cls(tuple(tuple(int(value) for value in row) for row in rows))

    @classmethod
    def identity(cls, size: int) -> "IntegerMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def zeros(cls, size: int) -> "IntegerMatrix":
        return cls(tuple((0,) * size for _ in range(size)))

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        row, column = index
        return self.entries[row][column]

    def rows(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def row_sums(self) -> Vector:
        return tuple(sum(row) for row in self.entries)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def matmul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        columns = list(zip(*other.entries))
        return IntegerMatrix(tuple(
            tuple(sum(a * b for a, b in zip(row, column)) for column in columns)
            for row in self.entries
        ))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return self.matmul(other)

    def apply(self, vector: Sequence[int]) -> Vector:
        """Matrix times column vector."""
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.entries)

    def apply_mod(self, vector: Sequence[int], modulus: int) -> Vector:
        return tuple(sum(a * b for a, b in zip(row, vector)) % modulus for row in self.entries)

    def restrict(self, letters: Sequence[int]) -> "IntegerMatrix":
        """Principal submatrix on the given letters, in the given order."""
        return IntegerMatrix(tuple(tuple(self.entries[i][j] for j in letters) for i in letters))

    def support_graph(self) -> List[Tuple[int, int]]:
        """Edges i -> j for every positive entry."""
        return [
            (i, j)
            for i, row in enumerate(self.entries)
            for j, value in enumerate(row)
            if value > 0
        ]

    def is_primitive(self) -> bool:
        """Some power is strictly positive; Wielandt's bound (n-1)^2 + 1 suffices."""
        size = self.size
        if size == 0:
            return False
        pattern = self.to_numpy() > 0
        power = pattern.copy()
        for _ in range((size - 1) ** 2):
            if power.all():
                return True
            power = (power.astype(np.int64) @ pattern.astype(np.int64)) > 0
        return bool(power.all())

    def to_numpy(self, dtype: type = float) -> np.ndarray:
        return np.array(self.entries, dtype=dtype).reshape(self.size, self.size)

    def to_sympy(self) -> sp.Matrix:
        return sp.Matrix(self.rows()) if self.size else sp.zeros(0, 0)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(value) for value in row) for row in self.entries)
