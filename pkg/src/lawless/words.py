"""Free-group words: reduction, arithmetic, enumeration and generic evaluation.

Words are immutable values.  The string form uses a lowercase letter for a
generator and the matching uppercase letter for its inverse, so "abAB" is the
commutator of the first two generators.  Evaluation composes left to right,
matching the right-action convention x^(fg) = (x^f)^g used everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence, TypeVar

from .errors import ArityError, ParseError, RangeError

E = TypeVar("E")


class Letter(NamedTuple):
    generator_index: int  # 1-based
    sign: int  # +1 or -1

    def inverse(self) -> "Letter":
        return Letter(self.generator_index, -self.sign)


@dataclass(frozen=True)
class ReducedWord:
    """A freely reduced word in the free group of the given rank."""

    letters: tuple[Letter, ...]
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise RangeError(f"rank must be >= 1, got {self.rank}")
        for a in self.letters:
            if not 1 <= a.generator_index <= self.rank:
                raise RangeError(f"letter index {a.generator_index} outside rank {self.rank}")
            if a.sign not in (1, -1):
                raise RangeError(f"letter sign must be +1 or -1, got {a.sign}")
        for a, b in zip(self.letters, self.letters[1:]):
            if a == b.inverse():
                raise ParseError(f"word is not freely reduced at {a}{b}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return word_to_str(self)

    def is_empty(self) -> bool:
        return not self.letters


def _letter_to_char(a: Letter) -> str:
    if a.generator_index > 26:
        raise RangeError("letter form only covers generator indices up to 26")
    c = chr(ord("a") + a.generator_index - 1)
    return c.upper() if a.sign < 0 else c


def word_to_str(w: ReducedWord) -> str:
    """Render a word; letter form for rank <= 26, signed integers otherwise."""
    if w.rank <= 26:
        return "".join(_letter_to_char(a) for a in w.letters)
    return " ".join(str(a.sign * a.generator_index) for a in w.letters)


def parse_word(text: str) -> ReducedWord:
    """Parse a word string such as "abAB" and return its free reduction.

    The rank is the highest generator index mentioned, at least 1, even when
    the mentioning letters cancel.
    """
    letters = []
    for pos, ch in enumerate(text, start=1):
        if "a" <= ch <= "z":
            letters.append(Letter(ord(ch) - ord("a") + 1, 1))
        elif "A" <= ch <= "Z":
            letters.append(Letter(ord(ch) - ord("A") + 1, -1))
        else:
            raise ParseError(f"invalid character {ch!r} at position {pos}")
    mentioned = max((a.generator_index for a in letters), default=1)
    w = reduce(letters)
    return ReducedWord(w.letters, max(w.rank, mentioned))


def parse_int_word(text: str) -> ReducedWord:
    """Parse the signed-integer word form "1 -2 1" (for ranks beyond 26)."""
    letters = []
    for pos, tok in enumerate(text.split(), start=1):
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"invalid integer {tok!r} at token {pos}") from None
        if v == 0:
            raise ParseError(f"zero is not a letter (token {pos})")
        letters.append(Letter(abs(v), 1 if v > 0 else -1))
    return reduce(letters)


def reduce(letters: Iterable[Letter]) -> ReducedWord:
    """Return the unique freely reduced form of a letter sequence.

    The rank is taken from the surviving letters, which makes reduce
    idempotent as a map on words.
    """
    stack: list[Letter] = []
    for a in letters:
        if stack and stack[-1] == a.inverse():
            stack.pop()
        else:
            stack.append(a)
    rank = max((a.generator_index for a in stack), default=1)
    return ReducedWord(tuple(stack), rank)


def empty_word(rank: int = 1) -> ReducedWord:
    return ReducedWord((), rank)


def concat(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    """Free-group product: reduce u followed by v."""
    w = reduce(u.letters + v.letters)
    rank = max(u.rank, v.rank)
    return ReducedWord(w.letters, max(w.rank, rank))


def inverse(w: ReducedWord) -> ReducedWord:
    """Reverse the letters and flip every sign."""
    return ReducedWord(tuple(a.inverse() for a in reversed(w.letters)), w.rank)


def prefix(w: ReducedWord, j: int) -> ReducedWord:
    """The beginning segment of the first j letters; reduced by construction."""
    if not 0 <= j <= len(w.letters):
        raise RangeError(f"prefix length {j} outside 0..{len(w.letters)}")
    return ReducedWord(w.letters[:j], w.rank)


def enumerate_reduced(k: int, max_len: int) -> list[ReducedWord]:
    """All reduced words of length 1..max_len in rank k, in length-lex order.

    The letter order is a < A < b < B < ...; there are 2k(2k-1)^(l-1) words
    of each exact length l >= 1.
    """
    if k < 1:
        raise RangeError(f"rank must be >= 1, got {k}")
    if max_len < 0:
        raise RangeError(f"max length must be >= 0, got {max_len}")
    alphabet = [Letter(i, s) for i in range(1, k + 1) for s in (1, -1)]
    out: list[ReducedWord] = []
    layer: list[tuple[Letter, ...]] = [()]
    for _ in range(max_len):
        next_layer = []
        for seq in layer:
            for a in alphabet:
                if seq and seq[-1] == a.inverse():
                    continue
                next_layer.append(seq + (a,))
        out.extend(ReducedWord(seq, k) for seq in next_layer)
        layer = next_layer
    return out


def evaluate(
    w: ReducedWord,
    elements: Sequence[E],
    mult: Callable[[E, E], E],
    inv: Callable[[E], E],
    identity: E,
) -> E:
    """Substitute elements for the generators and multiply left to right.

    The i-th generator is replaced by elements[i-1].  With a right action,
    applying the result to a point agrees with applying the letters one by
    one in word order.
    """
    needed = max((a.generator_index for a in w.letters), default=0)
    if len(elements) < needed:
        raise ArityError(f"word uses generator {needed}, got only {len(elements)} elements")
    acc = identity
    for a in w.letters:
        g = elements[a.generator_index - 1]
        if a.sign < 0:
            g = inv(g)
        acc = mult(acc, g)
    return acc
