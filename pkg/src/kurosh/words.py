"""Normal forms for elements of a free product A_1 * ... * A_n.

A word is an alternating sequence of syllables (factor_index, letter) with
nonzero letters and distinct indices on adjacent syllables.  Words read left
to right; the empty word is the identity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .factors import Vector, is_zero, vadd, vneg

Syllable = Tuple[int, Vector]  # (factor index 1..n, letter)


class PresentationMismatch(ValueError):
    """Words from different free products were combined."""


@dataclass(frozen=True)
class Presentation:
    """Ordered list of factor ranks; rank 1 encodes Z, rank k encodes Z^k."""

    ranks: Tuple[int, ...]

    def __post_init__(self):
        if not self.ranks:
            raise ValueError("a free product needs at least one factor")
        if any(k < 1 for k in self.ranks):
            raise ValueError("factor ranks must be >= 1")

    @property
    def n_factors(self) -> int:
        return len(self.ranks)

    def rank_of(self, index: int) -> int:
        if not 1 <= index <= len(self.ranks):
            raise ValueError(f"factor index {index} out of range 1..{len(self.ranks)}")
        return self.ranks[index - 1]

    def all_z(self) -> bool:
        return all(k == 1 for k in self.ranks)

    def identity(self) -> "Word":
        return Word(self, ())

    def syllable(self, index: int, letter: Sequence[int]) -> "Word":
        return Word(self, ((index, tuple(letter)),))

    def generator(self, index: int, exponent: int = 1) -> "Word":
        """The word a_index^exponent (rank-1 factors only)."""
        if self.rank_of(index) != 1:
            raise ValueError(f"factor {index} has rank > 1; give a full letter")
        if exponent == 0:
            return self.identity()
        return Word(self, ((index, (exponent,)),))


@dataclass(frozen=True)
class Word:
    pres: Presentation
    syllables: Tuple[Syllable, ...]

    def __post_init__(self):
        prev = None
        for index, letter in self.syllables:
            if len(letter) != self.pres.rank_of(index):
                raise ValueError(f"letter {letter} has wrong rank for factor {index}")
            if is_zero(letter):
                raise ValueError("zero letter in a normal form")
            if index == prev:
                raise ValueError("adjacent syllables share a factor index")
            prev = index

    def is_identity(self) -> bool:
        return not self.syllables

    def syllable_length(self) -> int:
        return len(self.syllables)

    def generator_length(self) -> int:
        return sum(sum(abs(a) for a in letter) for _, letter in self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return multiply_reduce(self, other)

    def inverse(self) -> "Word":
        return invert(self)

    def conjugate_by(self, w: "Word") -> "Word":
        """w * self * w^-1."""
        return w * self * w.inverse()


def multiply_reduce(u: Word, v: Word) -> Word:
    """Normal form of uv: concatenate, merging same-index neighbours."""
    if u.pres != v.pres:
        raise PresentationMismatch("multiplying words over different presentations")
    stack = list(u.syllables)
    for syl in v.syllables:
        if stack and stack[-1][0] == syl[0]:
            merged = vadd(stack[-1][1], syl[1])
            stack.pop()
            if not is_zero(merged):
                stack.append((syl[0], merged))
        else:
            stack.append(syl)
    return Word(u.pres, tuple(stack))


def invert(u: Word) -> Word:
    return Word(u.pres, tuple((i, vneg(x)) for i, x in reversed(u.syllables)))


def product(pres: Presentation, parts: Iterable[Word]) -> Word:
    out = pres.identity()
    for w in parts:
        out = out * w
    return out


def random_letter(rng: random.Random, rank: int, max_exponent: int) -> Vector:
    while True:
        letter = tuple(rng.randint(-max_exponent, max_exponent) for _ in range(rank))
        if not is_zero(letter):
            return letter


def random_word(
    pres: Presentation,
    max_syllables: int,
    max_exponent: int,
    seed=None,
    rng: random.Random | None = None,
) -> Word:
    """Deterministic (for a fixed seed) random normal-form word."""
    if max_syllables < 1 or max_exponent < 1:
        raise ValueError("bounds must be >= 1")
    if rng is None:
        rng = random.Random(seed)
    length = rng.randint(0, max_syllables)
    syllables = []
    prev = None
    for _ in range(length):
        choices = [i for i in range(1, pres.n_factors + 1) if i != prev]
        if not choices:
            break
        index = rng.choice(choices)
        syllables.append((index, random_letter(rng, pres.rank_of(index), max_exponent)))
        prev = index
    return Word(pres, tuple(syllables))
