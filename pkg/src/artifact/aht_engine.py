"""Transmissions, spiralling transmissions and annulus removal on strip systems.

Each step works on O(r) strips with exact integer arithmetic, so orbit
counting costs a polynomial in (log N, r).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, TextIO

from .strip_system import (
    ABOVE,
    BELOW,
    IntervalBase,
    InvariantError,
    Strip,
    StripSystem,
    aht_complexity,
)

__all__ = [
    "StepResult",
    "StepDetail",
    "ComplexityViolation",
    "step",
    "step_detailed",
    "run",
    "count_components",
    "trace_records",
]

ANNULUS, TRANSMISSION, EMPTY = "annulus_removed", "transmission", "empty"


class ComplexityViolation(AssertionError):
    """A step failed to lower the AHT complexity as much as it must."""


@dataclass(frozen=True)
class StepResult:
    kind: str
    d: int
    components_freed: int
    remainder_width: int | None


@dataclass(frozen=True)
class StepDetail:
    """What the untangler needs to know about a step."""

    result: StepResult
    N_before: int
    N_after: int
    numerator: Strip | None = None  # oriented: left = base containing N_before
    m: int | None = None
    denominators: tuple[Strip, ...] = ()
    new_strips: tuple[Strip, ...] = ()
    complexity_before: float = 0.0
    complexity_after: float = 0.0


def _oriented_at_N(st: Strip, N: int) -> Strip:
    """Write the strip with the base containing N first."""
    if st.right.contains(N) and not (st.left.contains(N) and st.left.hi > st.right.hi):
        st = Strip(st.right, st.left)
    if st.left.i > st.left.j:
        st = Strip(IntervalBase(st.left.j, st.left.i, st.left.side),
                   IntervalBase(st.right.j, st.right.i, st.right.side))
    return st


def _apply_map(num: Strip, shift_steps: int, spiral_shift: int, p: int) -> int:
    if shift_steps:
        return p - shift_steps * spiral_shift
    return num.image(p)


def _clamp(xs, N):
    return tuple(min(x, N) for x in xs)


def _remove_points(s: StripSystem, lo: int, hi: int) -> tuple:
    """Renumber after deleting points lo..hi (no remaining base touches them)."""
    k = hi - lo + 1

    def sh(p: int) -> int:
        return p - k if p > hi else p

    def shb(b: IntervalBase) -> IntervalBase:
        return IntervalBase(sh(b.i), sh(b.j), b.side)

    def pos(x: int) -> int:
        if x >= hi:
            return x - k
        if x >= lo:
            return lo - 1
        return x

    return shb, pos


def step_detailed(s: StripSystem, check: bool = True) -> tuple[StripSystem, StepDetail]:
    if s.is_empty():
        return s, StepDetail(StepResult(EMPTY, 0, 0, None), s.N, s.N)
    N = s.N
    c_before = aht_complexity(s)
    att = s.strips_at(N)
    if len(att) != 2:
        raise InvariantError(f"{len(att)} bases contain N={N}")
    (t1, w1), (t2, w2) = att
    if t1 == t2:
        # one strip attached at N from both sides: an annulus
        st = s.strips[t1]
        a, b = st.left, st.right
        if not (a.lo == b.lo and a.hi == b.hi and st.image(a.i) == a.i and a.side != b.side):
            raise InvariantError("strip attached twice at N is not an annulus")
        w = st.width
        strips = tuple(x for k, x in enumerate(s.strips) if k != t1)
        new = StripSystem(a.lo - 1, strips, _clamp(s.punctures, a.lo - 1),
                          None if s.false_puncture is None else min(s.false_puncture, a.lo - 1),
                          s.counter + w)
        return new, _detail(StepResult(ANNULUS, 0, w, None), s, new, c_before, check)
    sa, sb = s.strips[t1], s.strips[t2]
    side1 = sa.left.side if w1 == "left" else sa.right.side
    side2 = sb.left.side if w2 == "left" else sb.right.side
    if {side1, side2} != {ABOVE, BELOW}:
        raise InvariantError("N must carry one strip above and one below")
    # two different strips realizing the same identification: concentric circles
    if _same_identification(sa, sb):
        w = sa.width
        lo1, hi1 = sa.left.lo, sa.left.hi
        lo2, hi2 = sa.right.lo, sa.right.hi
        strips = [x for k, x in enumerate(s.strips) if k not in (t1, t2)]
        cur = replace(s, strips=tuple(strips), counter=s.counter + w)
        # delete the two point blocks, right one first
        for lo, hi in sorted([(lo1, hi1), (lo2, hi2)], reverse=True):
            if lo > hi:
                continue
            shb, pos = _remove_points(cur, lo, hi)
            cur = StripSystem(
                cur.N - (hi - lo + 1),
                tuple(Strip(shb(x.left), shb(x.right)) for x in cur.strips),
                tuple(pos(x) for x in cur.punctures),
                None if cur.false_puncture is None else pos(cur.false_puncture),
                cur.counter,
            )
            if lo1 == lo2:
                break
        return cur, _detail(StepResult(ANNULUS, 0, w, None), s, cur, c_before, check)
    # numerator: the wider strip, ties to the one attached from above
    if sa.width > sb.width or (sa.width == sb.width and side1 == ABOVE):
        tn = t1
    else:
        tn = t2
    num = _oriented_at_N(s.strips[tn], N)
    i_t = num.left.lo
    k_t, l_t = num.right.i, num.right.j
    # X: bases of other strips inside [i_t, N]
    X = []
    for k, st in enumerate(s.strips):
        if k == tn:
            continue
        for which, b in (("left", st.left), ("right", st.right)):
            if i_t <= b.lo and b.hi <= N:
                X.append((k, which))
    if not X:
        raise InvariantError("transmission without denominators")
    m = min((s.strips[k].left if wh == "left" else s.strips[k].right).lo for k, wh in X)
    w = N - i_t + 1
    shift = N - m + 1
    d = 1
    spiral = max(k_t, l_t) >= i_t and m - 1 == max(k_t, l_t) and min(k_t, l_t) < i_t
    if spiral:
        if k_t > l_t:
            raise InvariantError("overlapping bases with reversed orientation")
        d = w // shift
        if d < 2:
            spiral = False
            d = 1
    num_side = num.right.side

    def carry(p: int) -> int:
        if spiral:
            return p - d * shift
        return num.image(p)

    in_X = {}
    for k, wh in X:
        in_X.setdefault(k, set()).add(wh)
    new_strips: list[Strip] = []
    denoms: list[Strip] = []
    for k, st in enumerate(s.strips):
        if k == tn:
            continue
        if k not in in_X:
            new_strips.append(st)
            continue
        denoms.append(st)
        left, right = st.left, st.right
        if "left" in in_X[k]:
            left = IntervalBase(carry(left.i), carry(left.j), num_side)
        if "right" in in_X[k]:
            right = IntervalBase(carry(right.i), carry(right.j), num_side)
        new_strips.append(Strip(left, right))
    rem_w = None
    if spiral:
        rem_w = w - d * shift
        N_new = N - d * shift
        if rem_w > 0:
            # what is left of the numerator after d turns
            a = IntervalBase(i_t, N_new, num.left.side)
            b = IntervalBase(i_t - shift, N_new - shift, num_side)
            new_strips.append(Strip(a, b))
    else:
        N_new = m - 1
        if m > i_t:
            rem_w = m - i_t
            a = IntervalBase(i_t, m - 1, num.left.side)
            b = IntervalBase(num.image(i_t), num.image(m - 1), num_side)
            new_strips.append(Strip(a, b))
    new = StripSystem(
        N_new,
        tuple(new_strips),
        _clamp(s.punctures, N_new),
        None if s.false_puncture is None else min(s.false_puncture, N_new),
        s.counter,
    )
    res = StepResult(TRANSMISSION, d, 0, rem_w)
    det = _detail(res, s, new, c_before, check, num, m, tuple(denoms))
    return new, det


def _same_identification(a: Strip, b: Strip) -> bool:
    ca, cb = a.canonical(), b.canonical()
    return (ca.left.i, ca.left.j, ca.right.i, ca.right.j) == (cb.left.i, cb.left.j, cb.right.i, cb.right.j)


def _detail(res, s, new, c_before, check, num=None, m=None, denoms=()):
    c_after = aht_complexity(new)
    if check:
        if res.kind == TRANSMISSION:
            need = 1.0 if res.d == 1 else math.log2(res.d + 1)
            if c_before - c_after < need - 1e-9:
                raise ComplexityViolation(
                    f"complexity {c_before:.6f} -> {c_after:.6f} drops less than {need:.6f}"
                )
            if new.r > s.r:
                raise ComplexityViolation("transmission increased the number of strips")
        elif c_after > c_before + 1e-9:
            raise ComplexityViolation("annulus removal increased complexity")
        if new.N >= s.N:
            raise ComplexityViolation("N did not decrease")
    return StepDetail(res, s.N, new.N, num, m, tuple(denoms), (), c_before, c_after)


def step(s: StripSystem, check: bool = True) -> tuple[StripSystem, StepResult]:
    new, det = step_detailed(s, check)
    return new, det.result


def run(s: StripSystem, check: bool = True, on_step: Callable[[StripSystem, StepDetail], None] | None = None):
    """Iterate to the empty system; returns (final system, list of details)."""
    details = []
    cur = s
    while not cur.is_empty():
        cur, det = step_detailed(cur, check)
        details.append(det)
        if on_step is not None:
            on_step(cur, det)
    return cur, details


def count_components(s: StripSystem, check: bool = True) -> int:
    """|Ω_S| plus whatever the counter already holds."""
    final, _ = run(s, check)
    return final.counter


def trace_records(details) -> Iterator[str]:
    for det in details:
        yield json.dumps(
            {
                "kind": det.result.kind,
                "d": str(det.result.d),
                "components_freed": str(det.result.components_freed),
                "remainder_width": None if det.result.remainder_width is None else str(det.result.remainder_width),
                "N_before": str(det.N_before),
                "N_after": str(det.N_after),
                "complexity_before": det.complexity_before,
                "complexity_after": det.complexity_after,
            }
        )
