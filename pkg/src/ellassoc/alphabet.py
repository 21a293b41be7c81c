"""Ordered, graded generator sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Alphabet:
    """Generator symbols with multidegrees.

    The position of a symbol fixes the letter order used by Lyndon words.
    """

    symbols: tuple[str, ...]
    multidegrees: tuple[tuple[int, ...], ...]
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.symbols) == 0:
            raise ValueError("empty alphabet")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        if len(self.multidegrees) != len(self.symbols):
            raise ValueError("one multidegree per symbol is required")
        widths = {len(m) for m in self.multidegrees}
        if len(widths) != 1:
            raise ValueError("all multidegrees must have the same length")
        for m in self.multidegrees:
            if any(c < 0 for c in m) or sum(m) < 1:
                raise ValueError(f"bad multidegree {m}")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    @classmethod
    def simple(cls, symbols: Iterable[str]) -> "Alphabet":
        """All letters of degree one, single grading."""
        symbols = tuple(symbols)
        return cls(symbols, tuple((1,) for _ in symbols))

    @classmethod
    def weighted(cls, symbols: Sequence[str], degrees: Sequence[int]) -> "Alphabet":
        return cls(tuple(symbols), tuple((int(d),) for d in degrees))

    def __len__(self):
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise KeyError(f"unknown generator {symbol!r}") from None

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(m) for m in self.multidegrees)

    @property
    def min_degree(self) -> int:
        return min(self.degrees)

    @property
    def grading_rank(self) -> int:
        return len(self.multidegrees[0])

    def word_degree(self, w: Sequence[int]) -> int:
        d = self.degrees
        return sum(d[i] for i in w)

    def word_multidegree(self, w: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.grading_rank
        for i in w:
            for j, c in enumerate(self.multidegrees[i]):
                out[j] += c
        return tuple(out)

    def word_str(self, w: Sequence[int]) -> str:
        return " ".join(self.symbols[i] for i in w) if w else "1"
