"""Braid words over the half-twist alphabet Δ_ij^k.

A word is read left to right, and acts on laminations right to left: the
leftmost letter is applied last.  ``σ_i`` is ``Δ_{i,i+1}`` and the Garside
element is ``Δ_{1n}``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

__all__ = [
    "BraidLetter",
    "BraidWord",
    "DeltaLength",
    "ExpansionTooLarge",
    "StrandError",
    "delta_length",
    "delta_length_exact",
    "expand_to_artin",
    "normalize",
    "invert",
    "concat",
    "remove_strand",
    "include_shift",
    "permutation",
    "parse_word",
    "format_word",
    "artin_word",
    "random_artin_word",
    "DEFAULT_EXPANSION_CAP",
]

DEFAULT_EXPANSION_CAP = 1_000_000


class ExpansionTooLarge(ValueError):
    """Raised when an Artin expansion would exceed the configured cap."""


class StrandError(ValueError):
    """Raised when a strand cannot be removed from a braid word."""


@dataclass(frozen=True, slots=True)
class BraidLetter:
    lo: int
    hi: int
    power: int

    def __post_init__(self) -> None:
        if not (1 <= self.lo < self.hi):
            raise ValueError(f"bad letter indices ({self.lo},{self.hi})")
        if self.power == 0:
            raise ValueError("letter power must be nonzero")

    @property
    def block(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def inverse(self) -> "BraidLetter":
        return BraidLetter(self.lo, self.hi, -self.power)

    def shifted(self, by: int = 1) -> "BraidLetter":
        return BraidLetter(self.lo + by, self.hi + by, self.power)

    def __str__(self) -> str:
        if self.hi == self.lo + 1 and abs(self.power) == 1:
            return f"s{self.lo}" + ("" if self.power > 0 else "^-1")
        return f"D({self.lo},{self.hi})^{self.power}"


@dataclass(frozen=True, slots=True)
class BraidWord:
    n: int
    letters: tuple[BraidLetter, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a braid word needs at least one strand")
        object.__setattr__(self, "letters", tuple(self.letters))
        prev = None
        for x in self.letters:
            if x.hi > self.n:
                raise ValueError(f"letter {x} exceeds {self.n} strands")
            if prev is not None and prev.block == x.block:
                raise ValueError("adjacent letters share a block; call normalize()")
            prev = x

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[BraidLetter]:
        return iter(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return concat(self, other)

    @classmethod
    def identity(cls, n: int) -> "BraidWord":
        return cls(n, ())

    @classmethod
    def from_artin(cls, n: int, seq: Iterable[tuple[int, int]]) -> "BraidWord":
        return artin_word(n, seq)

    @property
    def artin_length(self) -> int:
        """Σ|k|·(j−i)(j−i+1)/2, the length of the Artin expansion."""
        return sum(abs(x.power) * (x.hi - x.lo) * (x.hi - x.lo + 1) // 2 for x in self.letters)


@dataclass(frozen=True, slots=True)
class DeltaLength:
    """Exact Δ-length: the letter count plus the multiset of |k_t|."""

    count: int
    powers: tuple[int, ...]

    @property
    def value(self) -> float:
        return sum(math.log2(p + 1) for p in self.powers)

    def exp2(self) -> int:
        """2**ℓ_Δ exactly, as the integer Π(|k_t|+1)."""
        out = 1
        for p in self.powers:
            out *= p + 1
        return out

    def __float__(self) -> float:
        return self.value

    def at_most(self, bound: float | Fraction) -> bool:
        """Test ℓ_Δ ≤ bound; near-ties are decided exactly via 2**ℓ_Δ ≤ 2**bound."""
        if bound < 0:
            return False
        v = self.value
        if abs(v - float(bound)) > 1e-9 * max(1.0, v):
            return v < float(bound)
        b = Fraction(bound)
        if b.denominator > 1 << 16:
            b = b.limit_denominator(1 << 16)
        # Π(|k|+1)^q ≤ 2^p
        return self.exp2() ** b.denominator <= 1 << b.numerator


def delta_length(w: BraidWord) -> float:
    return sum(math.log2(abs(x.power) + 1) for x in w.letters)


def delta_length_exact(w: BraidWord) -> DeltaLength:
    return DeltaLength(len(w.letters), tuple(sorted(abs(x.power) for x in w.letters)))


def normalize(letters: Iterable[BraidLetter] | BraidWord, n: int | None = None) -> BraidWord:
    if isinstance(letters, BraidWord):
        n = letters.n if n is None else n
        letters = letters.letters
    if n is None:
        raise ValueError("strand count required")
    stack: list[tuple[int, int, int]] = []
    for x in letters:
        if x.hi > n or x.lo < 1:
            raise ValueError(f"letter {x} out of range for {n} strands")
        if stack and (stack[-1][0], stack[-1][1]) == (x.lo, x.hi):
            lo, hi, k = stack.pop()
            if k + x.power:
                stack.append((lo, hi, k + x.power))
        else:
            stack.append((x.lo, x.hi, x.power))
    return BraidWord(n, tuple(BraidLetter(*t) for t in stack))


def concat(*words: BraidWord) -> BraidWord:
    n = words[0].n
    if any(w.n != n for w in words):
        raise ValueError("strand count mismatch")
    return normalize([x for w in words for x in w.letters], n)


def invert(w: BraidWord) -> BraidWord:
    return BraidWord(w.n, tuple(x.inverse() for x in reversed(w.letters)))


def artin_word(n: int, seq: Iterable[tuple[int, int]]) -> BraidWord:
    """Word from (index, ±1) Artin letters."""
    return normalize([BraidLetter(i, i + 1, s) for i, s in seq], n)


def _half_twist_artin(lo: int, hi: int) -> list[int]:
    out: list[int] = []
    for top in range(hi - 1, lo - 1, -1):
        out.extend(range(lo, top + 1))
    return out


def expand_to_artin(w: BraidWord, cap: int = DEFAULT_EXPANSION_CAP) -> list[tuple[int, int]]:
    """Artin expansion (index, sign), left to right.

    Δ_ij = (σ_i…σ_{j−1})(σ_i…σ_{j−2})…σ_i; negative powers use the reversed
    inverse word.  ``cap`` bounds Σ|k_t|.
    """
    total = sum(abs(x.power) for x in w.letters)
    if total > cap:
        raise ExpansionTooLarge(f"Σ|k| = {total} exceeds cap {cap}")
    out: list[tuple[int, int]] = []
    for x in w.letters:
        base = _half_twist_artin(x.lo, x.hi)
        if x.power > 0:
            block = [(i, 1) for i in base]
        else:
            block = [(i, -1) for i in reversed(base)]
        out.extend(block * abs(x.power))
    return out


def permutation(w: BraidWord, cap: int = 4096) -> list[int]:
    """perm[p] = final position of the strand starting at position p (1-based).

    Small words use the Artin expansion; otherwise each Δ_ij^k acts as the
    reversal of the block i..j when k is odd and trivially when k is even.
    Letters are applied in the order the strands meet them, last letter first.
    """
    pos = list(range(w.n + 1))  # pos[start] = current position
    where = list(range(w.n + 1))  # where[position] = start strand
    for x in reversed(w.letters):
        if x.power % 2 == 0:
            continue
        seg = where[x.lo:x.hi + 1]
        seg.reverse()
        where[x.lo:x.hi + 1] = seg
        for p in range(x.lo, x.hi + 1):
            pos[where[p]] = p
    return pos


def remove_strand(w: BraidWord, strand: int = 1) -> BraidWord:
    """Delete the strand that starts and ends at position ``strand``.

    Each Δ_ij^k becomes a letter on the remaining strands: if the deleted
    strand lies outside the block, it just shifts; inside, the block loses one
    strand (reversal with one element removed is still a half twist of the
    smaller block, and the full twist restricts to the full twist).
    """
    if not 1 <= strand <= w.n:
        raise StrandError("strand out of range")
    if permutation(w)[strand] != strand:
        raise StrandError(f"strand {strand} does not return to its position")
    # track the deleted strand's position as letters act (right to left)
    p = strand
    positions = [0] * len(w.letters)
    for t in range(len(w.letters) - 1, -1, -1):
        x = w.letters[t]
        positions[t] = p
        if x.power % 2 and x.lo <= p <= x.hi:
            p = x.lo + x.hi - p
    out: list[BraidLetter] = []
    for x, p in zip(w.letters, positions):
        lo, hi = x.lo, x.hi
        if p < lo:
            lo, hi = lo - 1, hi - 1
        elif p <= hi:
            hi -= 1
        if hi > lo:
            out.append(BraidLetter(lo, hi, x.power))
    return normalize(out, w.n - 1)


def include_shift(w: BraidWord, by: int = 1) -> BraidWord:
    return BraidWord(w.n + by, tuple(x.shifted(by) for x in w.letters))


_TOKEN = re.compile(r"^(?:s(\d+)(?:\^(-?\d+))?|D\((\d+),(\d+)\)(?:\^([+-]?\d+))?)$")


def parse_word(text: str, n: int) -> BraidWord:
    """Parse ``s1 s2^-1 D(1,3)^5`` style text."""
    letters: list[BraidLetter] = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad token {tok!r}")
        if m.group(1) is not None:
            i = int(m.group(1))
            k = int(m.group(2)) if m.group(2) is not None else 1
            lo, hi = i, i + 1
        else:
            lo, hi = int(m.group(3)), int(m.group(4))
            k = int(m.group(5)) if m.group(5) is not None else 1
        if not (1 <= lo < hi <= n):
            raise ValueError(f"token {tok!r} out of range for {n} strands")
        if k:
            letters.append(BraidLetter(lo, hi, k))
    return normalize(letters, n)


def format_word(w: BraidWord) -> str:
    return " ".join(str(x) for x in w.letters)


def random_artin_word(rng, n: int, length: int) -> BraidWord:
    """Uniform random Artin word of the given length (before normalization)."""
    seq = [(rng.randint(1, n - 1), rng.choice((1, -1))) for _ in range(length)]
    return artin_word(n, seq)
