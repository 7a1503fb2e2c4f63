"""Permutations of {0, ..., q-1} in image-array form."""

import re
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from shared.core.errors import ParseError, PreconditionError

_SEPARATORS = re.compile(r"[\s,;]+")


@dataclass(frozen=True)
class Permutation:
    """pi(i) = images[i], the index of the interval receiving I_i."""

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise PreconditionError(f"{list(self.images)} is not a bijection of 0..{len(self.images) - 1}")

    @classmethod
    def identity(cls, q: int) -> "Permutation":
        return cls(tuple(range(q)))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Permutation":
        return cls(tuple(int(i) for i in images))

    @classmethod
    def parse(cls, text: str, q: int) -> "Permutation":
        """Parse cycle notation "(02431)", "(0)(12)(3)(4)", "(0 10 3)" or an image list "2,0,4,1,3".

        Cycles with no separators are read digit by digit. Letters missing from the
        cycles are fixed points.

        Raises:
            ParseError: with the character position of the first offending token
        """
        if q < 1:
            raise PreconditionError(f"q must be positive, got {q}")
        stripped = text.strip()
        if not stripped:
            raise ParseError("Empty permutation", text, 0)
        if stripped.startswith("("):
            return cls._parse_cycles(text, q)
        return cls._parse_images(text, q)

    @classmethod
    def _parse_cycles(cls, text: str, q: int) -> "Permutation":
        images = list(range(q))
        seen: set = set()
        position = 0
        while position < len(text):
            char = text[position]
            if char.isspace():
                position += 1
                continue
            if char != "(":
                raise ParseError("Expected '('", text, position)
            close = text.find(")", position)
            if close < 0:
                raise ParseError("Unclosed cycle", text, position)
            cycle = []
            for letter, where in cls._cycle_tokens(text, position + 1, close):
                if letter >= q:
                    raise ParseError(f"Letter {letter} outside 0..{q - 1}", text, where)
                if letter in seen:
                    raise ParseError(f"Letter {letter} repeated", text, where)
                seen.add(letter)
                cycle.append(letter)
            for current, following in zip(cycle, cycle[1:] + cycle[:1]):
                images[current] = following
            position = close + 1
        return cls(tuple(images))

    @staticmethod
    def _cycle_tokens(text: str, start: int, end: int) -> Iterator[Tuple[int, int]]:
        """Yield (letter, absolute position) for the cycle body text[start:end]."""
        body = text[start:end]
        if _SEPARATORS.search(body.strip()):
            for match in re.finditer(r"[^\s,;]+", body):
                if not match.group().isdigit():
                    raise ParseError("Expected a letter", text, start + match.start())
                yield int(match.group()), start + match.start()
            return
        for offset, char in enumerate(body):
            if char.isspace():
                continue
            if not char.isdigit():
                raise ParseError("Expected a digit", text, start + offset)
            yield int(char), start + offset

    @classmethod
    def _parse_images(cls, text: str, q: int) -> "Permutation":
        body = text.strip().strip("[]")
        start = text.index(body[0]) if body else 0
        images: List[int] = []
        for match in re.finditer(r"[^\s,;]+", body):
            where = start + match.start()
            if not match.group().isdigit():
                raise ParseError("Expected a letter", text, where)
            letter = int(match.group())
            if letter >= q:
                raise ParseError(f"Letter {letter} outside 0..{q - 1}", text, where)
            if letter in images:
                raise ParseError(f"Letter {letter} repeated", text, where)
            images.append(letter)
        if len(images) != q:
            raise ParseError(f"Expected {q} images, got {len(images)}", text, len(text))
        return cls(tuple(images))

    @property
    def q(self) -> int:
        return len(self.images)

    def __call__(self, letter: int) -> int:
        return self.images[letter]

    def __len__(self) -> int:
        return len(self.images)

    def inverse(self) -> "Permutation":
        inverse = [0] * self.q
        for source, target in enumerate(self.images):
            inverse[target] = source
        return Permutation(tuple(inverse))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other."""
        return Permutation(tuple(self.images[i] for i in other.images))

    def is_identity(self) -> bool:
        return all(i == image for i, image in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        """All cycles, each starting at its smallest letter, ordered by that letter."""
        seen = set()
        result = []
        for start in range(self.q):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            letter = self.images[start]
            while letter != start:
                cycle.append(letter)
                seen.add(letter)
                letter = self.images[letter]
            result.append(tuple(cycle))
        return result

    def cycle_notation(self, with_fixed_points: bool = False) -> str:
        """Render as "(02431)"; fixed points are shown for the identity or on request."""
        show_all = with_fixed_points or self.is_identity()
        separator = "" if self.q <= 10 else " "
        return "".join(
            "(" + separator.join(str(letter) for letter in cycle) + ")"
            for cycle in self.cycles()
            if show_all or len(cycle) > 1
        )

    def __str__(self) -> str:
        return self.cycle_notation()
