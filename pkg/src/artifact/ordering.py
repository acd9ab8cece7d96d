"""Dehornoy σ-ordering on top of the coordinate machinery.

The sign of a braid is read off the image of ``E2`` (the arc around the
leftmost puncture): the single point of the closure left of ``*`` is joined
to a point between ``*`` and the first puncture either below the axis
(σ₁-positive), above it (σ₁-negative), or neither (σ₁-neutral, in which case
the braid preserves ``E2`` and the first strand can be forgotten).

σ-consistent representatives come from untangling ``β·E2`` with moves that
never use ``Δ_{1j}`` with a positive power; the untangling word ``u`` is then
σ₁-negative and ``u·β`` is σ₁-neutral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .braid_core import (
    DEFAULT_EXPANSION_CAP,
    BraidWord,
    ExpansionTooLarge,
    concat,
    delta_length,
    expand_to_artin,
    include_shift,
    invert,
    remove_strand,
)
from .lamination_coords import CoordVector, apply_word, standard_diagram
from .strip_system import InvariantError, matching_of
from .untangler import sigma1_negative_only, untangle_traced

__all__ = [
    "SigmaClass",
    "word_sigma_class",
    "sigma1_class",
    "braid_sign",
    "sigma_consistent_rep",
    "RepReport",
    "sigma_consistent_report",
    "compare",
    "LESS",
    "EQUAL",
    "GREATER",
    "EXIT_CODES",
    "within_budget",
]

LESS, EQUAL, GREATER = "less", "equal", "greater"
EXIT_CODES = {LESS: 10, EQUAL: 11, GREATER: 12}

_KINDS = ("trivial", "positive", "negative", "neutral", "mixed")


@dataclass(frozen=True)
class SigmaClass:
    """``kind`` with its index ``k``.

    ``k`` is the main generator index for positive/negative words, the
    number of leading strands a neutral braid leaves alone, and 0 for the
    trivial and mixed kinds.
    """

    kind: str
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind in ("positive", "negative", "neutral") and self.k < 1:
            raise ValueError("k must be at least 1")

    @property
    def consistent(self) -> bool:
        return self.kind in ("trivial", "positive", "negative")

    def negated(self) -> "SigmaClass":
        flip = {"positive": "negative", "negative": "positive"}
        return SigmaClass(flip.get(self.kind, self.kind), self.k)

    def __str__(self) -> str:
        return self.kind if self.kind in ("trivial", "mixed") else f"{self.kind} {self.k}"


def _artin_class(seq: list[tuple[int, int]]) -> SigmaClass:
    # free reduction first: the class of a word is taken up to cancelling pairs
    stack: list[tuple[int, int]] = []
    for x in seq:
        if stack and stack[-1][0] == x[0] and stack[-1][1] == -x[1]:
            stack.pop()
        else:
            stack.append(x)
    if not stack:
        return SigmaClass("trivial")
    k = min(i for i, _ in stack)
    signs = {s for i, s in stack if i == k}
    if len(signs) == 2:
        return SigmaClass("mixed")
    return SigmaClass("positive" if 1 in signs else "negative", k)


def word_sigma_class(w: BraidWord, cap: int = DEFAULT_EXPANSION_CAP) -> SigmaClass:
    """Syntactic class of a half-twist word.

    The letters with the least lower index decide; when they disagree in
    sign the freely reduced Artin expansion decides (if it fits under
    ``cap``), otherwise the word is mixed.
    """
    if not w.letters:
        return SigmaClass("trivial")
    k = min(x.lo for x in w.letters)
    signs = {1 if x.power > 0 else -1 for x in w.letters if x.lo == k}
    if len(signs) == 1:
        return SigmaClass("positive" if 1 in signs else "negative", k)
    try:
        seq = expand_to_artin(w, cap)
    except ExpansionTooLarge:
        return SigmaClass("mixed")
    return _artin_class(seq)


def _star(v: CoordVector) -> str:
    """Which half-plane joins the lone point left of ``*`` to the first window."""
    mt = matching_of(v)
    if mt.false_puncture != 1:
        raise InvariantError("image of E2 must cross left of * exactly once")
    first = mt.punctures[0]
    if mt.lower.partner(1) <= first:
        return "positive"
    if mt.upper.partner(1) <= first:
        return "negative"
    return "neutral"


def sigma1_class(w: BraidWord) -> SigmaClass:
    """σ₁-level trichotomy of the braid: positive 1, negative 1 or neutral 1."""
    if w.n < 2:
        return SigmaClass("neutral", 1)
    e2 = standard_diagram("E2", w.n)
    v = apply_word(e2, w)
    s = _star(v)
    if s == "neutral" and v.entries != e2.entries:
        raise InvariantError("σ₁-neutral braid moved E2")
    return SigmaClass(s, 1)


def braid_sign(w: BraidWord) -> SigmaClass:
    """Intrinsic class of the braid represented by ``w``."""
    e = standard_diagram("E", w.n) if w.n >= 2 else None
    if e is None or apply_word(e, w).entries == e.entries:
        return SigmaClass("trivial")
    cur, depth = w, 0
    while cur.n >= 2:
        c = sigma1_class(cur)
        if c.kind != "neutral":
            return SigmaClass(c.kind, depth + 1)
        cur, depth = remove_strand(cur, 1), depth + 1
    raise InvariantError("nontrivial braid with no definite sign")


@dataclass
class RepReport:
    """A σ-consistent representative with the pieces it was built from."""

    word: BraidWord
    untangling: BraidWord | None     # σ₁-negative u at the top level, if used
    depth: int                       # strands forgotten before a sign appeared
    flipped: bool                    # built for the inverse and inverted back

    @property
    def budget(self) -> float:
        return 30 * self.word.n


def _positive_rep(w: BraidWord) -> tuple[BraidWord, BraidWord]:
    n = w.n
    e2 = standard_diagram("E2", n)
    tr = untangle_traced(apply_word(e2, w), allow=sigma1_negative_only)
    if tr.relaxed is None or tr.relaxed.entries != e2.entries:
        raise InvariantError("σ₁-negative untangling did not return to E2")
    u = tr.projected
    # u·w fixes E2; forgetting the first strand and shifting back keeps the braid
    rest = include_shift(remove_strand(concat(u, w), 1), 1)
    return concat(invert(u), rest), u


def sigma_consistent_report(w: BraidWord) -> RepReport:
    cls = braid_sign(w)
    if cls.kind == "trivial":
        return RepReport(BraidWord.identity(w.n), None, 0, False)
    depth = cls.k - 1
    cur = w
    for _ in range(depth):
        cur = remove_strand(cur, 1)
    flipped = cls.kind == "negative"
    if flipped:
        cur = invert(cur)
    rep, u = _positive_rep(cur)
    if flipped:
        rep = invert(rep)
    if depth:
        rep = include_shift(rep, depth)
    return RepReport(rep, u, depth, flipped)


def sigma_consistent_rep(w: BraidWord) -> BraidWord:
    """A σ-consistent word for the same braid, of Δ-length at most 30n·ℓ_Δ(w)."""
    return sigma_consistent_report(w).word


def compare(w1: BraidWord, w2: BraidWord) -> str:
    """Position of w1 relative to w2 in the left-invariant σ-order."""
    if w1.n != w2.n:
        raise ValueError("strand count mismatch")
    c = braid_sign(concat(invert(w1), w2))
    if c.kind == "trivial":
        return EQUAL
    return LESS if c.kind == "positive" else GREATER


def within_budget(w: BraidWord, rep: BraidWord) -> bool:
    """ℓ_Δ(rep) ≤ 30n·ℓ_Δ(w), with a tiny float allowance."""
    return delta_length(rep) <= 30 * w.n * delta_length(w) + 1e-9 * max(1.0, math.log2(2 + len(rep)))
