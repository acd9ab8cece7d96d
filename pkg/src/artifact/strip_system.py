"""Interval identification systems carried by laminations.

Points of the axis are numbered 1..N from the left.  A puncture position ``x``
means the puncture sits between points x and x+1 (``x = N`` means to the
right of everything).  A strip pairs two bases written ``[i, j]`` and
``[k, l]`` with i ↔ k and j ↔ l; each base remembers whether the strip
approaches it from above or below.

Everything here is polynomial in (log N, r): laminations are read through
their compressed half-plane matchings ("bands"), never point by point.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .lamination_coords import CoordVector, axis_counts

ABOVE, BELOW = "above", "below"

__all__ = [
    "ABOVE",
    "BELOW",
    "IntervalBase",
    "Strip",
    "StripSystem",
    "InvariantError",
    "Band",
    "HalfPlaneMatching",
    "Matching",
    "matching_of",
    "initial_iis",
    "refine_for_untangling",
    "aht_complexity",
    "union_find_components",
    "follow_strip",
    "carried_lengths",
    "RelaxCensus",
    "relaxation_census",
    "to_json",
    "from_json",
]


class InvariantError(ValueError):
    """A strip system violates the two-bases-per-point or attachment rules."""


@dataclass(frozen=True, slots=True)
class IntervalBase:
    i: int
    j: int
    side: str

    def __post_init__(self) -> None:
        if self.side not in (ABOVE, BELOW):
            raise ValueError(f"bad side {self.side!r}")
        if min(self.i, self.j) < 1:
            raise ValueError("base endpoints start at 1")

    @property
    def lo(self) -> int:
        return min(self.i, self.j)

    @property
    def hi(self) -> int:
        return max(self.i, self.j)

    @property
    def length(self) -> int:
        return abs(self.i - self.j) + 1

    @property
    def orientation(self) -> int:
        return (self.j > self.i) - (self.j < self.i)

    @property
    def letter(self) -> str:
        return "A" if self.side == ABOVE else "B"

    def contains(self, p: int) -> bool:
        return self.lo <= p <= self.hi

    def __str__(self) -> str:
        return f"[{self.i},{self.j}]"


@dataclass(frozen=True, slots=True)
class Strip:
    left: IntervalBase
    right: IntervalBase

    def __post_init__(self) -> None:
        if self.left.length != self.right.length:
            raise ValueError("bases of a strip must have equal length")

    @property
    def width(self) -> int:
        return self.left.length

    @property
    def type(self) -> str:
        return self.left.letter + self.right.letter

    def image(self, p: int) -> int:
        """Point of the right base identified with point p of the left base."""
        t = abs(p - self.left.i)
        return self.right.i + (t if self.right.j >= self.right.i else -t)

    def preimage(self, q: int) -> int:
        t = abs(q - self.right.i)
        return self.left.i + (t if self.left.j >= self.left.i else -t)

    def canonical(self) -> "Strip":
        """Left base = the one with the smaller lower end, written increasing."""
        a, b = self.left, self.right
        if (b.lo, b.hi) < (a.lo, a.hi):
            a, b = b, a
        if a.i > a.j:
            a, b = IntervalBase(a.j, a.i, a.side), IntervalBase(b.j, b.i, b.side)
        return Strip(a, b)

    def cut(self, c: int) -> tuple["Strip", "Strip"]:
        """Split into widths c and width − c (parallel strips)."""
        if not 1 <= c < self.width:
            raise ValueError("cut offset out of range")
        el = self.left.orientation or 1
        er = self.right.orientation or 1
        a = Strip(
            IntervalBase(self.left.i, self.left.i + el * (c - 1), self.left.side),
            IntervalBase(self.right.i, self.right.i + er * (c - 1), self.right.side),
        )
        b = Strip(
            IntervalBase(self.left.i + el * c, self.left.j, self.left.side),
            IntervalBase(self.right.i + er * c, self.right.j, self.right.side),
        )
        return a, b

    def __str__(self) -> str:
        return f"{self.left}↔{self.right}({self.type})"


@dataclass(frozen=True)
class StripSystem:
    N: int
    strips: tuple[Strip, ...]
    punctures: tuple[int, ...] = ()
    false_puncture: int | None = None
    counter: int = 0

    @property
    def r(self) -> int:
        return len(self.strips)

    def is_empty(self) -> bool:
        return self.N == 0 or not self.strips

    def canonical(self) -> tuple:
        return (self.N, tuple(sorted((s.canonical() for s in self.strips), key=_strip_key)))

    def same_identifications(self, other: "StripSystem") -> bool:
        return self.canonical() == other.canonical()

    def strips_at(self, p: int) -> list[tuple[int, str]]:
        """(strip index, 'left'|'right') for every base containing p."""
        out = []
        for t, s in enumerate(self.strips):
            if s.left.contains(p):
                out.append((t, "left"))
            if s.right.contains(p):
                out.append((t, "right"))
        return out

    def validate(self) -> None:
        """Every point of [1,N] in exactly two bases; one strip above and one
        below at N."""
        if self.N < 0 or self.counter < 0:
            raise InvariantError("N and the counter must be nonnegative")
        if not self.strips:
            if self.N:
                raise InvariantError(f"points 1..{self.N} lie in no base")
            return
        events: dict[int, int] = {}
        for s in self.strips:
            for b in (s.left, s.right):
                if b.hi > self.N:
                    raise InvariantError(f"base {b} exceeds N={self.N}")
                events[b.lo] = events.get(b.lo, 0) + 1
                events[b.hi + 1] = events.get(b.hi + 1, 0) - 1
        cover = 0
        keys = sorted(events)
        for a, b in zip(keys, keys[1:] + [self.N + 1]):
            cover += events[a]
            if a <= self.N and b > 1 and cover != 2:
                raise InvariantError(f"points around {a} lie in {cover} bases")
        sides = sorted(
            (s.left.side if which == "left" else s.right.side) for t, which in self.strips_at(self.N)
            for s in [self.strips[t]]
        )
        if sides != [ABOVE, BELOW]:
            raise InvariantError(f"point N={self.N} must carry one strip above and one below, got {sides}")

    def summary(self) -> str:
        return f"N={self.N} " + ", ".join(str(s.canonical()) for s in self.strips)


def _strip_key(s: Strip):
    return (s.left.lo, s.left.hi, s.right.lo, s.right.hi, s.left.side, s.right.side)


# ---------------------------------------------------------------------------
# compressed half-plane matchings
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Band:
    """Nested parallel arcs x1↔y2, x1+1↔y2−1, …, y1↔x2 (x1 ≤ y1 < x2 ≤ y2)."""

    x1: int
    y1: int
    x2: int
    y2: int

    @property
    def width(self) -> int:
        return self.y1 - self.x1 + 1


class HalfPlaneMatching:
    """Arcs of the cut lamination in one half-plane, as bands."""

    def __init__(self, bands: Sequence[Band]):
        self.bands = list(bands)
        parts = []
        for t, b in enumerate(self.bands):
            parts.append((b.x1, b.y1, t, 0))
            parts.append((b.x2, b.y2, t, 1))
        parts.sort()
        self._starts = [p[0] for p in parts]
        self._parts = parts

    def locate(self, p: int):
        k = bisect.bisect_right(self._starts, p) - 1
        if k < 0:
            return None
        s, e, t, which = self._parts[k]
        if p > e:
            return None
        return s, e, t, which

    def partner(self, p: int) -> int:
        loc = self.locate(p)
        if loc is None:
            raise KeyError(p)
        _, _, t, which = loc
        b = self.bands[t]
        return b.y2 - (p - b.x1) if which == 0 else b.x1 + (b.y2 - p)

    def partner_range(self, p: int, q: int):
        """Images of p and q if the whole range between them lies in one band part."""
        lo, hi = min(p, q), max(p, q)
        loc = self.locate(lo)
        if loc is None or hi > loc[1]:
            return None
        return self.partner(p), self.partner(q)


@dataclass(frozen=True)
class Matching:
    """Both half-plane matchings plus puncture positions of a closure."""

    N: int
    upper: HalfPlaneMatching
    lower: HalfPlaneMatching
    punctures: tuple[int, ...]
    false_puncture: int
    gap_sizes: tuple[int, ...]


def _bands(e: Sequence[int], rays: Sequence[int]) -> list[Band]:
    m = len(e) - 1
    stack: list[list[int]] = []  # open runs [start, end]
    raw: list[tuple[int, int, int, int]] = []
    pos = 1
    for g in range(m + 1):
        left_ray = rays[g] if g >= 1 else 0
        right_ray = rays[g + 1] if g + 1 <= m else 0
        left = (e[g] + left_ray - right_ray) // 2
        need = left
        s = pos
        while need > 0:
            run = stack[-1]
            size = run[1] - run[0] + 1
            c = min(size, need)
            # points s..s+c-1 close against run[1]-c+1..run[1] (reversed)
            raw.append((run[1] - c + 1, run[1], s, s + c - 1))
            if c == size:
                stack.pop()
            else:
                run[1] -= c
            s += c
            need -= c
        if e[g] - left > 0:
            stack.append([pos + left, pos + e[g] - 1])
        pos += e[g]
    # merge consecutive parallel chunks
    raw.sort()
    out: list[Band] = []
    for x1, y1, x2, y2 in raw:
        if out:
            b = out[-1]
            if b.y1 + 1 == x1 and b.x2 - 1 == y2:
                out[-1] = Band(b.x1, y1, x2, b.y2)
                continue
        out.append(Band(x1, y1, x2, y2))
    return out


def matching_of(v: CoordVector) -> Matching:
    e, u, d, _ = axis_counts(v)
    m = v.n + 1
    acc = [0]
    for g in range(m + 1):
        acc.append(acc[-1] + e[g])
    # puncture q (1..m) sits after all points of gaps 0..q-1
    punct = tuple(acc[q] for q in range(2, m + 1))
    return Matching(
        N=acc[-1],
        upper=HalfPlaneMatching(_bands(e, u)),
        lower=HalfPlaneMatching(_bands(e, d)),
        punctures=punct,
        false_puncture=acc[1],
        gap_sizes=tuple(e),
    )


def initial_iis(source) -> StripSystem:
    """One strip per maximal family of parallel arcs of the cut closure.

    ``source`` is a CoordVector or an ArcDiagram (converted to coordinates, so
    both paths produce the same compressed construction).
    """
    if not isinstance(source, CoordVector):
        from .arc_oracle import MalformedDiagram, tighten, to_coords

        t = tighten(source)
        if t != source:
            raise MalformedDiagram("diagram is not tight")
        source = to_coords(source)
    mt = matching_of(source)
    strips = []
    for side, hp in ((ABOVE, mt.upper), (BELOW, mt.lower)):
        for b in hp.bands:
            strips.append(Strip(IntervalBase(b.x1, b.y1, side), IntervalBase(b.y2, b.x2, side)))
    strips.sort(key=_strip_key)
    return StripSystem(mt.N, tuple(strips), mt.punctures, mt.false_puncture, 0)


def _cuts_for_base(b: IntervalBase, param_start: int, param_sign: int, positions: Iterable[int]) -> set[int]:
    out = set()
    for x in positions:
        if b.lo <= x < b.hi:
            t1 = param_sign * (x - param_start)
            t2 = param_sign * (x + 1 - param_start)
            out.add(max(t1, t2))
    return out


def refine_for_untangling(s: StripSystem) -> StripSystem:
    """Split strips so that no puncture lies inside an A-base and ``*`` lies
    inside no base; splits are parallel, so N and ∼_S are unchanged."""
    fp = [] if s.false_puncture is None else [s.false_puncture]
    out: list[Strip] = []
    for st in s.strips:
        cuts: set[int] = set()
        for b in (st.left, st.right):
            sign = b.orientation or 1
            pos = list(fp)
            if b.side == ABOVE:
                pos += list(s.punctures)
            cuts |= _cuts_for_base(b, b.i, sign, pos)
        pieces = [st]
        done = 0
        for c in sorted(cuts):
            a, rest = pieces[-1].cut(c - done)
            pieces[-1:] = [a, rest]
            done = c
        out.extend(pieces)
    out.sort(key=_strip_key)
    return replace(s, strips=tuple(out))


def _narrow_at_N(s: StripSystem) -> int:
    att = s.strips_at(s.N)
    widths = [s.strips[t].width for t, _ in att]
    if len(att) != 2:
        raise InvariantError("exactly two bases must contain N")
    return min(widths)


def aht_complexity(s: StripSystem) -> float:
    if s.is_empty():
        return 0.0
    w = _narrow_at_N(s)
    return s.r + sum(math.log2(st.width) for st in s.strips) - 0.5 * math.log2(w)


def union_find_components(s: StripSystem) -> int:
    """|Ω_S| by brute force over all N points (small N only)."""
    parent = list(range(s.N + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for st in s.strips:
        for p in range(st.left.lo, st.left.hi + 1):
            a, b = find(p), find(st.image(p))
            if a != b:
                parent[a] = b
    return len({find(p) for p in range(1, s.N + 1)}) + s.counter


# ---------------------------------------------------------------------------
# carried-by checks
# ---------------------------------------------------------------------------


def follow_strip(mt: Matching, st: Strip, N: int, cap: int = 64) -> int | None:
    """Number of half-plane pieces the family of ``st`` runs through in the
    lamination, or None when the family does not realize ``st``."""
    p, q = st.left.i, st.left.j
    side = st.left.side
    length = 0
    while True:
        hp = mt.upper if side == ABOVE else mt.lower
        img = hp.partner_range(p, q)
        if img is None:
            return None
        p, q = img
        length += 1
        lo, hi = min(p, q), max(p, q)
        if hi <= N:
            ok = p == st.right.i and q == st.right.j and side == st.right.side
            return length if ok else None
        if lo <= N:
            return None
        if length >= cap:
            return None
        side = BELOW if side == ABOVE else ABOVE


def carried_lengths(v: CoordVector | Matching, s: StripSystem, cap: int = 64) -> list[int] | None:
    """Per-strip lengths if (tightened) v carries s on [1, N], else None."""
    mt = v if isinstance(v, Matching) else matching_of(v)
    if mt.N < s.N:
        return None
    out = []
    for st in s.strips:
        ln = follow_strip(mt, st, s.N, cap)
        if ln is None:
            return None
        out.append(ln)
    return out


@dataclass(frozen=True)
class RelaxCensus:
    """Component counts of a relaxed lamination (all zero when not relaxed)."""

    relaxed: bool
    odd_arcs: int = 0
    even_arcs: int = 0
    circles: int = 0


def _cut_images(hp: HalfPlaneMatching, cuts: set[int], N: int) -> set[int]:
    out = set()
    for c in cuts:
        for x in (c - 1, c):
            if 1 <= x <= N and hp.locate(x) is not None:
                y = hp.partner(x)
                out.add(y)
                out.add(y + 1)
    return out


def relaxation_census(v: CoordVector | Matching) -> RelaxCensus:
    """Decide whether every D_n component meets the axis at most twice.

    Points right of ``*`` are split into pieces on which both half-plane
    partners, and the partner of a partner, are affine and stay on one side
    of ``*``; one representative per piece then decides the whole piece.
    """
    mt = v if isinstance(v, Matching) else matching_of(v)
    N, z = mt.N, mt.false_puncture
    base = {1, z + 1, N + 1}
    for hp in (mt.upper, mt.lower):
        base.update(st for st in hp._starts)
        base.update(p[1] + 1 for p in hp._parts)
    cuts = set(base)
    for _ in range(2):
        grown = set(cuts)
        for hp in (mt.upper, mt.lower):
            grown |= _cut_images(hp, cuts, N)
        cuts = grown
    pts = sorted(c for c in cuts if z + 1 <= c <= N + 1)
    single = halves = circ = 0
    U, D = mt.upper.partner, mt.lower.partner
    for a, b in zip(pts, pts[1:]):
        size = b - a
        p, q = U(a), D(a)
        pz, qz = p <= z, q <= z
        if pz and qz:
            single += size
        elif not pz and not qz:
            if p != q:
                return RelaxCensus(False)
            circ += size
        elif not pz:
            if D(p) > z:
                return RelaxCensus(False)
            halves += size
        else:
            if U(q) > z:
                return RelaxCensus(False)
            halves += size
    return RelaxCensus(True, single, halves // 2, circ // 2)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _base_json(b: IntervalBase) -> list:
    return [str(b.i), str(b.j), b.side]


def to_json(s: StripSystem) -> str:
    obj = {
        "N": str(s.N),
        "strips": [{"left": _base_json(st.left), "right": _base_json(st.right)} for st in s.strips],
        "punctures": [str(x) for x in s.punctures],
        "false_puncture": None if s.false_puncture is None else str(s.false_puncture),
    }
    if s.counter:
        obj["counter"] = str(s.counter)
    return json.dumps(obj)


def _base_from(x) -> IntervalBase:
    if not isinstance(x, (list, tuple)) or len(x) != 3:
        raise ValueError(f"bad base {x!r}")
    return IntervalBase(int(str(x[0])), int(str(x[1])), str(x[2]))


def from_json(text: str | dict) -> StripSystem:
    obj = json.loads(text) if isinstance(text, str) else text
    try:
        strips = tuple(Strip(_base_from(o["left"]), _base_from(o["right"])) for o in obj["strips"])
        fp = obj.get("false_puncture")
        return StripSystem(
            N=int(str(obj["N"])),
            strips=strips,
            punctures=tuple(int(str(x)) for x in obj.get("punctures", [])),
            false_puncture=None if fp is None else int(str(fp)),
            counter=int(str(obj.get("counter", 0))),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad strip-system JSON: {exc}") from exc
