"""Integral laminations of the n-punctured disk as vectors in Z^{2n-2}.

A lamination L of D_n is stored through its closure: every arc is closed off
to the left of the disk, giving a multicurve in a disk with n + 1 punctures
whose leftmost puncture is the false puncture ``*``.  The entries
``(a1, b1, ..., a_{n-1}, b_{n-1})`` are the standard triangle coordinates of
that multicurve: with u_q, d_q the crossings of the vertical rays above and
below puncture q, a_i = (d - u)/2 at puncture i + 1 of the larger disk and
b_i = (β_i - β_{i+1})/2 for the crossing counts β of the vertical segments
between punctures.  Strand ``i`` of B_n is puncture ``i + 1`` of the larger disk, so
σ_i acts as the half twist with index ``i + 1`` there.

Kernel selection: the compiled kernel is used when it imports, unless the
environment variable ``ARTIFACT_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _pykernel
from .braid_core import BraidLetter, BraidWord, _half_twist_artin

__all__ = [
    "CoordVector",
    "SpiralInfo",
    "KERNEL",
    "standard_diagram",
    "norm",
    "closure_norm",
    "apply_artin",
    "apply_delta_power",
    "detect_spiral",
    "apply_word",
    "axis_counts",
    "crossing_strings",
    "is_relaxed_vector",
    "to_json",
    "from_json",
    "use_kernel",
]


def _load_kernel():
    if os.environ.get("ARTIFACT_PURE_PYTHON"):
        return _pykernel
    try:
        from . import _ckernel  # type: ignore[attr-defined]
    except ImportError:
        return _pykernel
    return _ckernel


KERNEL = _load_kernel()


def use_kernel(name: str):
    """Switch kernels at runtime (``"python"`` or ``"cython"``); returns the old one."""
    global KERNEL
    old = KERNEL
    if name == "python":
        KERNEL = _pykernel
    elif name == "cython":
        from . import _ckernel  # type: ignore[attr-defined]

        KERNEL = _ckernel
    else:
        raise ValueError(name)
    return old


@dataclass(frozen=True, slots=True)
class CoordVector:
    n: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("laminations need n ≥ 2")
        ent = tuple(int(x) for x in self.entries)
        if len(ent) != 2 * self.n - 2:
            raise ValueError(f"expected {2 * self.n - 2} entries, got {len(ent)}")
        if not any(ent):
            raise ValueError("the zero vector is not a lamination")
        object.__setattr__(self, "entries", ent)

    @property
    def a(self) -> tuple[int, ...]:
        return self.entries[0::2]

    @property
    def b(self) -> tuple[int, ...]:
        return self.entries[1::2]

    def __add__(self, other: "CoordVector") -> "CoordVector":
        return CoordVector(self.n, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.entries) + ")"


@dataclass(frozen=True, slots=True)
class SpiralInfo:
    lo: int
    hi: int
    direction: str  # "clockwise" | "counterclockwise" | "none"
    theta: int
    m: int
    k0: int


def standard_diagram(kind: str, n: int) -> CoordVector:
    """``"E"``: the n−1 vertical arcs between consecutive punctures.
    ``"E2"``: the arc cutting off the leftmost puncture (its closure is a
    circle around it and ``*``)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if kind == "E":
        return CoordVector(n, (0, 1) * (n - 1))
    if kind in ("E2", "E₂"):
        return CoordVector(n, (0, 1) + (0, 0) * (n - 2))
    raise ValueError(f"unknown diagram {kind!r}")


def axis_counts(v: CoordVector):
    """``(e, u, d, beta)`` of the closure; see ``_pykernel.normal``."""
    return KERNEL.normal(list(v.entries))


def norm(v: CoordVector) -> int:
    return KERNEL.norm(list(v.entries))


def closure_norm(v: CoordVector) -> int:
    return KERNEL.closure_norm(list(v.entries))


def _check_index(n: int, i: int) -> None:
    if not 1 <= i <= n - 1:
        raise IndexError(f"generator index {i} out of range for {n} strands")


def apply_artin(v: CoordVector, i: int, sign: int) -> CoordVector:
    _check_index(v.n, i)
    return CoordVector(v.n, tuple(KERNEL.sigma(list(v.entries), i + 1, 1 if sign > 0 else -1)))


def _delta_seq(lo: int, hi: int, k: int) -> list[tuple[int, int]]:
    """Kernel steps (first acts first) for Δ_{lo,hi}^k."""
    base = _half_twist_artin(lo, hi)
    if k > 0:
        one = [(i + 1, 1) for i in reversed(base)]
    else:
        one = [(i + 1, -1) for i in base]
    return one * abs(k)


def _artin_seq_for_word(w: BraidWord) -> list[tuple[int, int]]:
    seq: list[tuple[int, int]] = []
    for x in reversed(w.letters):
        seq.extend(_delta_seq(x.lo, x.hi, x.power))
    return seq


# ---------------------------------------------------------------------------
# affine values c0 + c1·t, used to certify long linear stretches of Δ^2
# ---------------------------------------------------------------------------


class _NonAffine(Exception):
    pass


class _Ctx:
    __slots__ = ("tmax",)

    def __init__(self) -> None:
        self.tmax: int | None = None  # None = unbounded

    def limit(self, t: int) -> None:
        if self.tmax is None or t < self.tmax:
            self.tmax = t


class _Aff:
    __slots__ = ("c0", "c1", "ctx")

    def __init__(self, c0: int, c1: int, ctx: _Ctx) -> None:
        self.c0 = c0
        self.c1 = c1
        self.ctx = ctx

    def _lift(self, o):
        if isinstance(o, _Aff):
            return o
        return _Aff(o, 0, self.ctx)

    def __add__(self, o):
        o = self._lift(o)
        return _Aff(self.c0 + o.c0, self.c1 + o.c1, self.ctx)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._lift(o)
        return _Aff(self.c0 - o.c0, self.c1 - o.c1, self.ctx)

    def __rsub__(self, o):
        return self._lift(o) - self

    def __neg__(self):
        return _Aff(-self.c0, -self.c1, self.ctx)

    def __mul__(self, k):
        if isinstance(k, _Aff):
            raise _NonAffine("product of two affine values")
        return _Aff(self.c0 * k, self.c1 * k, self.ctx)

    __rmul__ = __mul__

    def __floordiv__(self, k):
        if k != 2 or self.c0 % 2 or self.c1 % 2:
            raise _NonAffine("odd value halved")
        return _Aff(self.c0 // 2, self.c1 // 2, self.ctx)

    def _sign(self) -> int:
        # sign valid on [0, tmax]; records tmax
        c0, c1 = self.c0, self.c1
        if c0 > 0:
            if c1 < 0:
                self.ctx.limit(c0 // -c1)
            return 1
        if c0 < 0:
            if c1 > 0:
                self.ctx.limit(-c0 // c1)
            return -1
        return (c1 > 0) - (c1 < 0)

    def __gt__(self, o):
        return (self - self._lift(o))._sign() > 0

    def __lt__(self, o):
        return (self - self._lift(o))._sign() < 0

    def __ge__(self, o):
        return (self - self._lift(o))._sign() >= 0

    def __le__(self, o):
        return (self - self._lift(o))._sign() <= 0

    def __abs__(self):
        return self if self._sign() >= 0 else -self


def _linear_stretch(x: list[int], dx: list[int], seq) -> int | None:
    """Largest T (None = unbounded) with seq(x + t·dx) affine in t on [0, T]."""
    ctx = _Ctx()
    vals = [_Aff(c0, c1, ctx) for c0, c1 in zip(x, dx)]
    try:
        _pykernel.artin_seq(vals, seq)
    except _NonAffine:
        return 0
    return ctx.tmax


def _twist_power(c: list[int], seq2: list, p: int) -> list[int]:
    """Apply the step sequence ``seq2`` p times, jumping across linear stretches."""
    step = KERNEL.artin_seq
    while p > 0:
        if p <= 3:
            for _ in range(p):
                c = step(c, seq2)
            return c
        y = step(c, seq2)
        z = step(y, seq2)
        d1 = [b - a for a, b in zip(c, y)]
        d2 = [b - a for a, b in zip(y, z)]
        if d1 == d2 and any(d1):
            tmax = _linear_stretch(c, d1, seq2)
            # seq2(c + t·d1) = c + (t+1)·d1 for t in [0, tmax]
            if tmax is None or tmax >= 1:
                jump = p if tmax is None else min(p, tmax + 1)
                c = [a + jump * d for a, d in zip(c, d1)]
                p -= jump
                continue
        elif not any(d1):
            return c
        c = y
        p -= 1
    return c


_DIRECT_LIMIT = 8


def apply_delta_power(v: CoordVector, lo: int, hi: int, N: int) -> CoordVector:
    """Δ_{lo,hi}^N · v without expanding N.

    Full twists act piecewise-linearly; once three consecutive iterates are in
    arithmetic progression, the whole progression is certified by running the
    full twist once on symbolic values x + t·dx and recording where any branch
    of the piecewise-linear formulas could change.
    """
    if not (1 <= lo < hi <= v.n):
        raise IndexError(f"block ({lo},{hi}) invalid for {v.n} strands")
    if N == 0:
        return v
    c = list(v.entries)
    if abs(N) <= _DIRECT_LIMIT:
        return CoordVector(v.n, tuple(KERNEL.artin_seq(c, _delta_seq(lo, hi, N))))
    s = 1 if N > 0 else -1
    R = abs(N)
    if R % 2:
        c = KERNEL.artin_seq(c, _delta_seq(lo, hi, s))
        R -= 1
    c = _twist_power(c, _delta_seq(lo, hi, 2 * s), R // 2)
    return CoordVector(v.n, tuple(c))


def apply_word(v: CoordVector, w: BraidWord) -> CoordVector:
    """w·v, with the rightmost letter acting first."""
    if w.n != v.n:
        raise ValueError(f"strand count mismatch: word on {w.n}, vector on {v.n}")
    c = v
    for x in reversed(w.letters):
        c = apply_delta_power(c, x.lo, x.hi, x.power)
    return c


def apply_word_naive(v: CoordVector, w: BraidWord) -> CoordVector:
    """w·v by expanding every letter into Artin generators."""
    if w.n != v.n:
        raise ValueError("strand count mismatch")
    return CoordVector(v.n, tuple(KERNEL.artin_seq(list(v.entries), _artin_seq_for_word(w))))


def crossing_strings(v: CoordVector, lo: int, hi: int) -> int:
    """Number of cut arcs with exactly one endpoint between punctures lo and hi.

    An upper bound on the strings entering the block; it overcounts when the
    lamination is not tight against the block's round circle.
    """
    e, u, d, _ = axis_counts(v)
    total = 0
    # closure gaps strictly inside the block are lo+1 .. hi
    for rays in (u, d):
        open_ = 0
        out_left = 0
        for g in range(lo + 1, hi + 1):
            left = (e[g] + rays[g] - rays[g + 1]) // 2
            right = e[g] - left
            used = min(open_, left)
            out_left += left - used
            open_ += right - used
        total += out_left + open_
    return total


def _norm_k(v: CoordVector, lo: int, hi: int, k: int, cache: dict) -> int:
    if k not in cache:
        cache[k] = norm(apply_delta_power(v, lo, hi, k))
    return cache[k]


def detect_spiral(v: CoordVector, lo: int, hi: int) -> SpiralInfo:
    """Leftmost k0 minimizing ‖Δ_{lo,hi}^k·v‖, by bracketing and bisection."""
    if not (1 <= lo < hi <= v.n):
        raise IndexError("block out of range")
    cache: dict[int, int] = {}
    f = lambda k: _norm_k(v, lo, hi, k, cache)  # noqa: E731
    if apply_delta_power(v, lo, hi, 2).entries == v.entries:
        # the full twist fixes v (e.g. a curve around the block): no spiral
        k0 = 1 if f(1) < f(0) else (-1 if f(-1) < f(0) else 0)
        return SpiralInfo(lo, hi, "none", 0, 0, k0)
    if f(1) < f(0):
        s = 1
    elif f(-1) < f(0):
        s = -1
    else:
        s = 0
    k0 = 0
    if s:
        # f(s·k) decreasing at k = 0; find the first k with f(s(k+1)) ≥ f(sk)
        hi_k = 1
        while f(s * (hi_k + 1)) < f(s * hi_k):
            hi_k *= 2
        lo_k = hi_k // 2
        while lo_k < hi_k:
            mid = (lo_k + hi_k) // 2
            if f(s * (mid + 1)) < f(s * mid):
                lo_k = mid + 1
            else:
                hi_k = mid
        k0 = s * lo_k
    while f(k0 - 1) == f(k0):
        k0 -= 1
    # each full twist past k0 adds one copy of L0, which meets the axis twice per string
    m = (f(k0 + 4) - f(k0 + 2)) // 2
    full = abs(k0) // 2
    if full == 0 or m == 0:
        direction, theta = "none", 0
    else:
        # v = Δ^{-k0}·(minimal position): positive power twists clockwise
        direction = "clockwise" if k0 < 0 else "counterclockwise"
        theta = full * m
    return SpiralInfo(lo, hi, direction, theta, m, k0)


def is_relaxed_vector(v: CoordVector) -> bool:
    """Every component meets the axis at most twice (compressed check)."""
    from .strip_system import relaxation_census

    return relaxation_census(v).relaxed


def to_json(v: CoordVector) -> str:
    return json.dumps({"n": v.n, "coords": [str(x) for x in v.entries]})


def from_json(text: str | dict) -> CoordVector:
    obj = json.loads(text) if isinstance(text, str) else text
    try:
        n = int(obj["n"])
        coords = [int(str(x)) for x in obj["coords"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad coordinate JSON: {exc}") from exc
    return CoordVector(n, tuple(coords))
