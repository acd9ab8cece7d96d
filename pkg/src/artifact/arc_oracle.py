"""Explicit arc-by-arc laminations: the brute-force oracle.

A diagram stores the closure of a lamination of D_n as closed curves in a disk
with m = n + 1 punctures (``*`` first).  Gaps of the axis are numbered 0..m,
gap g lying between punctures g and g + 1, so gap 0 is left of ``*``.  Each
curve is its cyclic list of crossed gaps together with the side (upper or
lower) of the arc leaving the first crossing.  Everything here is O(norm) and
meant for small cases only.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lamination_coords import CoordVector, axis_counts

__all__ = [
    "ArcDiagram",
    "ComponentClass",
    "MalformedDiagram",
    "CapExceeded",
    "tighten",
    "act_artin",
    "to_coords",
    "from_coords",
    "count_components",
    "classify",
    "slot_structure",
    "dump",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 200_000


class MalformedDiagram(ValueError):
    pass


class CapExceeded(ValueError):
    pass


Curve = tuple[tuple[int, ...], bool]


@dataclass(frozen=True)
class ComponentClass:
    parity: str  # "odd" | "even"
    relaxed: bool
    crossings: int  # axis crossings inside D_n


@dataclass(frozen=True)
class ArcDiagram:
    n: int
    curves: tuple[Curve, ...]

    @property
    def m(self) -> int:
        return self.n + 1

    def norm(self) -> int:
        return sum(sum(1 for g in gaps if g != 0) for gaps, _ in self.curves)

    def closure_norm(self) -> int:
        return sum(len(gaps) for gaps, _ in self.curves)

    def canonical(self) -> tuple:
        return tuple(sorted(_canon(c) for c in self.curves))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ArcDiagram) and self.n == other.n and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash((self.n, self.canonical()))


def _sides(curve: Curve) -> list[tuple[int, bool]]:
    gaps, up = curve
    return [(g, (t % 2 == 0) == up) for t, g in enumerate(gaps)]


def _canon(curve: Curve) -> tuple:
    seq = _sides(curve)
    k = len(seq)
    rev = [(seq[(-t) % k][0], seq[(-t - 1) % k][1]) for t in range(k)]
    best = None
    for s in (seq, rev):
        for r in range(k):
            cand = tuple(s[r:] + s[:r])
            if best is None or cand < best:
                best = cand
    return best or ()


def _reduce(gaps: Sequence[int], up: bool) -> Curve:
    items = [(g, (t % 2 == 0) == up) for t, g in enumerate(gaps)]
    changed = True
    while changed:
        changed = False
        out: list[tuple[int, bool]] = []
        for it in items:
            if out and out[-1][0] == it[0]:
                out.pop()
                changed = True
            else:
                out.append(it)
        while len(out) >= 2 and out[0][0] == out[-1][0]:
            out = out[1:-1]
            changed = True
        items = out
    if not items:
        return ((), up)
    return (tuple(g for g, _ in items), items[0][1])


def _essential(curve: Curve, m: int) -> bool:
    gaps, _ = curve
    if not gaps:
        return False
    if len(gaps) == 2:
        lo, hi = sorted(gaps)
        enclosed = hi - lo
        return 2 <= enclosed and not (lo == 0 and hi == m)
    return True


def _validate_shape(d: ArcDiagram) -> None:
    for gaps, _ in d.curves:
        if len(gaps) % 2:
            raise MalformedDiagram("a closed curve crosses the axis an even number of times")
        if any(not 0 <= g <= d.m for g in gaps):
            raise MalformedDiagram("gap index out of range")


def tighten(d: ArcDiagram, check: bool = True) -> ArcDiagram:
    """Remove puncture-free bigons and inessential curves."""
    _validate_shape(d)
    out = []
    for gaps, up in d.curves:
        c = _reduce(gaps, up)
        if _essential(c, d.m):
            out.append(c)
    res = ArcDiagram(d.n, tuple(out))
    if check and res.curves:
        rebuilt = from_coords(to_coords(res), cap=None)
        if rebuilt.canonical() != res.canonical():
            raise MalformedDiagram("curves are not disjoint and simple")
    return res


def act_artin(d: ArcDiagram, i: int, sign: int) -> ArcDiagram:
    """σ_i^{±1}·d by rewriting crossings of the gap between the twisted punctures."""
    if not 1 <= i <= d.n - 1:
        raise IndexError("generator index out of range")
    j = i + 1
    out = []
    for gaps, up in d.curves:
        new: list[int] = []
        for t, g in enumerate(gaps):
            if g != j:
                new.append(g)
                continue
            down = (t % 2 == 0) != up  # arriving from above, leaving below
            if (sign > 0) == down:
                new.extend((j + 1, j, j - 1))
            else:
                new.extend((j - 1, j, j + 1))
        out.append((tuple(new), up))
    return tighten(ArcDiagram(d.n, tuple(out)), check=False)


def _counts(d: ArcDiagram):
    m = d.m
    e = [0] * (m + 1)
    up = [0] * (m + 2)
    dn = [0] * (m + 2)
    for gaps, u in d.curves:
        k = len(gaps)
        for t in range(k):
            e[gaps[t]] += 1
            g1, g2 = sorted((gaps[t], gaps[(t + 1) % k]))
            rays = up if (t % 2 == 0) == u else dn
            for q in range(g1 + 1, g2 + 1):
                rays[q] += 1
    return e, up, dn


def to_coords(d: ArcDiagram) -> CoordVector:
    """Triangle coordinates from the crossing counts of the closure."""
    m = d.m
    e, up, dn = _counts(d)
    beta = [0] * (m + 1)
    for i in range(1, m):
        span = (up[i] + up[i + 1] - e[i]) // 2 + (dn[i] + dn[i + 1] - e[i]) // 2
        beta[i] = span + abs((up[i] - up[i + 1]) - (dn[i] - dn[i + 1])) // 2
    coords: list[int] = []
    for i in range(1, m - 1):
        coords.append((dn[i + 1] - up[i + 1]) // 2)
        coords.append((beta[i] - beta[i + 1]) // 2)
    return CoordVector(d.n, tuple(coords))


@dataclass(frozen=True)
class SlotStructure:
    """Axis points 1..M of the closure with their partners above and below."""

    gap: tuple[int, ...]  # gap[p] for p in 1..M (index 0 unused)
    upper: tuple[int, ...]
    lower: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.gap) - 1


def _match(e: Sequence[int], rays: Sequence[int], m: int) -> list[int]:
    total = sum(e)
    partner = [0] * (total + 1)
    stack: list[int] = []
    p = 0
    for g in range(m + 1):
        left_ray = rays[g] if g >= 1 else 0
        right_ray = rays[g + 1] if g + 1 <= m else 0
        left = (e[g] + left_ray - right_ray) // 2
        if left < 0 or left > e[g]:
            raise MalformedDiagram("inconsistent crossing counts")
        for k in range(e[g]):
            p += 1
            if k < left:
                if not stack:
                    raise MalformedDiagram("unmatched arc")
                q = stack.pop()
                partner[p] = q
                partner[q] = p
            else:
                stack.append(p)
    if stack:
        raise MalformedDiagram("unmatched arc")
    return partner


def slot_structure(v: CoordVector, cap: int | None = DEFAULT_CAP) -> SlotStructure:
    e, u, d, _ = axis_counts(v)
    total = sum(e)
    if cap is not None and total > cap:
        raise CapExceeded(f"closure norm {total} exceeds cap {cap}")
    m = v.n + 1
    gap = [0]
    for g in range(m + 1):
        gap.extend([g] * e[g])
    return SlotStructure(tuple(gap), tuple(_match(e, u, m)), tuple(_match(e, d, m)))


def _trace(ss: SlotStructure) -> list[list[tuple[int, bool]]]:
    """Components as lists of (slot, arc-after-is-upper)."""
    seen = [False] * (ss.size + 1)
    comps = []
    for start in range(1, ss.size + 1):
        if seen[start]:
            continue
        comp = []
        p, upper = start, True
        while True:
            seen[p] = True
            comp.append((p, upper))
            p = ss.upper[p] if upper else ss.lower[p]
            upper = not upper
            if p == start and upper:
                break
        comps.append(comp)
    return comps


def from_coords(v: CoordVector, cap: int | None = DEFAULT_CAP) -> ArcDiagram:
    ss = slot_structure(v, cap)
    curves = []
    for comp in _trace(ss):
        curves.append((tuple(ss.gap[p] for p, _ in comp), True))
    return ArcDiagram(v.n, tuple(curves))


def count_components(d: ArcDiagram, closed: bool = False) -> int:
    """Components of the lamination in D_n, or of its closure."""
    if closed:
        return len(d.curves)
    total = 0
    for gaps, _ in d.curves:
        arcs = sum(1 for g in gaps if g == 0)
        total += arcs if arcs else 1
    return total


def classify(d: ArcDiagram) -> list[ComponentClass]:
    """Parity and relaxedness of every component of the lamination in D_n."""
    out = []
    for gaps, _ in d.curves:
        k = len(gaps)
        zeros = [t for t, g in enumerate(gaps) if g == 0]
        if not zeros:
            out.append(ComponentClass("even", k <= 2, k))
            continue
        # split the closed curve at its closing crossings into arcs of D_n
        for a, b in zip(zeros, zeros[1:] + [zeros[0] + k]):
            c = b - a - 1
            out.append(ComponentClass("odd" if c % 2 else "even", c <= 2, c))
    return out


def dump(d: ArcDiagram) -> str:
    """One line per closure component: signed slot indices (+ = next arc above)."""
    ss = slot_structure(to_coords(d), cap=None)
    lines = []
    for comp in _trace(ss):
        lines.append(" ".join(f"{'+' if up else '-'}{p}" for p, up in comp))
    return "\n".join(lines)
