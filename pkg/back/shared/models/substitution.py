"""Substitutions on the alphabet {0, ..., q-1}."""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from shared.core.errors import PreconditionError
from .matrix import IntegerMatrix

Word = Tuple[int, ...]


def word_text(word: Sequence[int]) -> str:
    """"0221" for small alphabets, "0 10 3" once a letter needs two digits."""
    if all(letter < 10 for letter in word):
        return "".join(str(letter) for letter in word)
    return " ".join(str(letter) for letter in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if " " in text or "," in text:
        return tuple(int(token) for token in text.replace(",", " ").split())
    return tuple(int(char) for char in text)


@dataclass(frozen=True)
class Substitution:
    """chi(i) = words[i]."""

    words: Tuple[Word, ...]

    def __post_init__(self) -> None:
        q = len(self.words)
        for letter, word in enumerate(self.words):
            if not word:
                raise PreconditionError(f"chi({letter}) is empty")
            if any(not 0 <= symbol < q for symbol in word):
                raise PreconditionError(f"chi({letter}) leaves the alphabet 0..{q - 1}")

    @classmethod
    def from_strings(cls, words: Iterable[str]) -> "Substitution":
        return cls(tuple(parse_word(word) for word in words))

    @classmethod
    def identity(cls, q: int) -> "Substitution":
        return cls(tuple((letter,) for letter in range(q)))

    @property
    def q(self) -> int:
        return len(self.words)

    def __call__(self, letter: int) -> Word:
        return self.words[letter]

    def apply(self, word: Sequence[int]) -> Word:
        """Letterwise image of a word."""
        return tuple(symbol for letter in word for symbol in self.words[letter])

    def lengths(self) -> Tuple[int, ...]:
        return tuple(len(word) for word in self.words)

    def total_length(self) -> int:
        return sum(self.lengths())

    def matrix(self) -> IntegerMatrix:
        counts = [[0] * self.q for _ in range(self.q)]
        for letter, word in enumerate(self.words):
            for symbol in word:
                counts[letter][symbol] += 1
        return IntegerMatrix.from_rows(counts)

    @property
    def common_last_letter(self) -> Optional[int]:
        last = {word[-1] for word in self.words}
        return last.pop() if len(last) == 1 else None

    def is_proper(self) -> bool:
        """Every word starts with one common letter and ends with one common letter."""
        return len({word[0] for word in self.words}) == 1 and self.common_last_letter is not None

    def letters(self, letters: Iterable[int]) -> List[int]:
        """Sorted letters occurring in the words of the given letters."""
        return sorted({symbol for letter in letters for symbol in self.words[letter]})

    def lines(self) -> List[str]:
        return [f"{letter} -> {word_text(word)}" for letter, word in enumerate(self.words)]

    def __str__(self) -> str:
        return "\n".join(self.lines())
