"""Untangling laminations: engine steps interleaved with puncture slides.

The driver builds the initial strip system of the closure, runs the
transmission engine on it, and after every step looks for a slide (or a twist)
that shortens the strips of the new system while the lamination still carries
it.  Carrying is verified exactly on the compressed matchings.  When the engine
loop ends, a norm-descent completion pass relaxes whatever is left.

Two variants share this driver:

``optimized``
    refined initial system (false puncture ``*`` inside no base, true
    punctures inside no A-base), almost-relaxed length limits AA ≤ 1,
    AB/BA ≤ 2, BB ≤ 3, and the loop stops once the numerator lies left of
    ``*``.
``basic``
    unrefined system, all strips limited to length 2, no false puncture.

The untangling braid never touches ``*`` (it is built from letters of B_n), so
the (n+1)-strand word is the shifted n-strand word and removing the ``*``
strand gives the word back.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from . import lamination_coords as lc
from .aht_engine import ANNULUS, TRANSMISSION, StepDetail, StepResult, step_detailed
from .braid_core import (
    BraidLetter,
    BraidWord,
    delta_length,
    include_shift,
    invert,
    normalize,
    remove_strand,
)
from .lamination_coords import CoordVector, apply_delta_power, norm, standard_diagram
from .strip_system import to_json as ss_to_json
from .strip_system import (
    ABOVE,
    InvariantError,
    Matching,
    StripSystem,
    aht_complexity,
    carried_lengths,
    follow_strip,
    initial_iis,
    matching_of,
    refine_for_untangling,
    relaxation_census,
)

__all__ = [
    "SlideMove",
    "UntangleTrace",
    "RelaxOutcome",
    "UntangleStuck",
    "NotACurveDiagram",
    "relax_after_step",
    "untangle",
    "untangle_basic",
    "untangle_traced",
    "recover_braid",
    "sigma1_negative_only",
    "ALMOST_RELAXED_LIMITS",
]

ALMOST_RELAXED_LIMITS = {"AA": 1, "AB": 2, "BA": 2, "BB": 3}
RELAXED_LIMIT = 2
CARRY_CAP = 64

Letters = tuple[tuple[int, int, int], ...]
Allow = Callable[[Letters], bool]


class UntangleStuck(RuntimeError):
    """No admissible move lowers the norm of a non-relaxed lamination."""

    def __init__(self, message: str, witness: CoordVector):
        super().__init__(message)
        self.witness = witness


class NotACurveDiagram(ValueError):
    """The relaxed form of the input is not the standard diagram E."""

    def __init__(self, message: str, witness: CoordVector):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SlideMove:
    """A slide Δ_ij^ε·Δ_{i'j'}^{-ε} of a puncture group, or a twist Δ_ij^k.

    ``punctures`` is the moved group (inclusive true-puncture indices, before
    the move), ``side`` the half-plane of the sliding arcs ("upper",
    "lower", or "twist" for a pure twist), and ``start``/``end`` the axis
    positions of the group before and after (a position x means "between
    points x and x+1" of the lamination the move acts on / produces).
    """

    letters: tuple[BraidLetter, ...]
    punctures: tuple[int, int]
    side: str
    start: int = 0
    end: int = 0

    @property
    def delta_length(self) -> float:
        return sum(math.log2(abs(x.power) + 1) for x in self.letters)

    def to_record(self) -> dict:
        return {
            "type": "slide",
            "punctures": [self.punctures[0], self.punctures[1]],
            "side": self.side,
            "start": str(self.start),
            "end": str(self.end),
            "letters": [[x.lo, x.hi, str(x.power)] for x in self.letters],
        }


def _describe(letters: Letters) -> tuple[tuple[int, int], str]:
    """Moved group and arc side of a letter tuple (left letter acts last)."""
    if len(letters) == 1:
        i, j, _ = letters[0]
        return (i, j), "twist"
    (i, j, e), (i2, j2, _) = letters
    # the outer block contains the inner one and they share an end
    if (i2, j2) == (i, j):
        return (i, j), "twist"
    big, small = ((i, j), (i2, j2)) if (j - i) >= (j2 - i2) else ((i2, j2), (i, j))
    e_big = e if big == (i, j) else -e
    if small[0] == big[0]:
        group, leftward = (small[1] + 1, big[1]), True
    else:
        group, leftward = (big[0], small[0] - 1), False
    # a positive half twist turns clockwise: a point moving left goes below
    lower = (e_big > 0) == leftward
    return group, "lower" if lower else "upper"


def _as_move(letters: Letters, before: Matching | None, after: Matching | None) -> SlideMove:
    group, side = _describe(letters)
    bl = tuple(BraidLetter(i, j, k) for i, j, k in letters)
    start = before.punctures[group[0] - 1] if before is not None else 0
    end = 0
    if after is not None:
        # where the first puncture of the group ended up
        perm = _perm_of(letters, len(after.punctures))
        end = after.punctures[perm[group[0] - 1] - 1]
    return SlideMove(bl, group, side, start, end)


def _perm_of(letters: Letters, n: int) -> list[int]:
    """pos[p-1] = final position of the puncture starting at p."""
    pos = list(range(1, n + 1))
    for i, j, k in reversed(letters):
        if k % 2:
            pos = [i + j - p if i <= p <= j else p for p in pos]
    return pos


def _family(n: int, extended: bool) -> list[Letters]:
    out: list[Letters] = []
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            for e in (1, -1):
                out.append(((i, j, e),))
                if extended:
                    partners = [(i, j2) for j2 in range(i + 1, n + 1) if j2 != j]
                    partners += [(i2, j) for i2 in range(1, j) if i2 != i]
                else:
                    partners = [(i, j - 1), (i, j + 1), (i - 1, j), (i + 1, j)]
                for i2, j2 in partners:
                    if 1 <= i2 < j2 <= n and (extended or (i2, j2) != (i, j)):
                        out.append(((i, j, e), (i2, j2, -e)))
    if extended:
        base = set(_family(n, False))
        out = [c for c in out if c not in base]
    return out


_FAMILY_CACHE: dict[tuple[int, bool], list[tuple[Letters, list]]] = {}


def _compiled(n: int, extended: bool) -> list[tuple[Letters, list]]:
    key = (n, extended)
    if key not in _FAMILY_CACHE:
        items = []
        for c in _family(n, extended):
            seq: list = []
            for i, j, k in reversed(c):
                seq.extend(lc._delta_seq(i, j, k))
            items.append((c, seq))
        _FAMILY_CACHE[key] = items
    return _FAMILY_CACHE[key]


def _act(v: CoordVector, seq) -> CoordVector:
    return CoordVector(v.n, tuple(lc.KERNEL.artin_seq(list(v.entries), seq)))


def _apply_letters(v: CoordVector, letters: Letters) -> CoordVector:
    for i, j, k in reversed(letters):
        v = apply_delta_power(v, i, j, k)
    return v


def sigma1_negative_only(letters: Letters) -> bool:
    """Admissible for σ₁-negative untangling: no letter Δ_{1j}^k with k > 0."""
    return all(not (i == 1 and k > 0) for i, _, k in letters)


def _best_power(v: CoordVector, i: int, j: int, s: int, f1: int) -> tuple[int, CoordVector]:
    """Largest-gain power s·k (k ≥ 1) along a direction where k = 1 helps."""
    cache: dict[int, tuple[int, CoordVector]] = {}

    def f(k: int) -> int:
        if k not in cache:
            w = apply_delta_power(v, i, j, s * k)
            cache[k] = (norm(w), w)
        return cache[k][0]

    hi = 1
    while f(hi + 1) < f(hi):
        hi *= 2
    lo = hi // 2 if hi > 1 else 1
    while lo < hi:
        mid = (lo + hi) // 2
        if f(mid + 1) < f(mid):
            lo = mid + 1
        else:
            hi = mid
    f(lo)
    return s * lo, cache[lo][1]


# ---------------------------------------------------------------------------
# norm-descent completion
# ---------------------------------------------------------------------------


def _descend_once(v: CoordVector, allow: Allow, cur: int) -> tuple[Letters, CoordVector] | None:
    n = v.n
    for extended in (False, True):
        best = None
        for c, seq in _compiled(n, extended):
            if not allow(c):
                continue
            w = _act(v, seq)
            key = (norm(w), len(c))
            if best is None or key < best[0]:
                best = (key, c, w)
        if best is not None and best[0][0] < cur:
            return best[1], best[2]
    return None


def _lookahead(v: CoordVector, allow: Allow, cur: int, depth: int,
              singles: bool = False) -> tuple[Letters, CoordVector] | None:
    """Breadth-first search over basic moves for a strictly lower norm."""
    fam = [(c, seq) for c, seq in _compiled(v.n, False) if allow(c) and (not singles or len(c) == 1)]
    frontier = [(v, ())]
    seen = {v.entries}
    for _ in range(depth):
        nxt = []
        for x, path in frontier:
            for c, seq in fam:
                w = _act(x, seq)
                if w.entries in seen:
                    continue
                seen.add(w.entries)
                p = path + c
                if norm(w) < cur or relaxation_census(w).relaxed:
                    return p, w
                nxt.append((w, p))
        frontier = nxt
    return None


def _complete(v: CoordVector, allow: Allow, emit: Callable[[Letters, CoordVector, CoordVector], None],
              done: Callable[[CoordVector], bool] | None = None) -> CoordVector:
    """Lower the norm move by move until the lamination is relaxed."""
    done = done or (lambda x: relaxation_census(x).relaxed)
    n = v.n
    while not done(v):
        cur = norm(v)
        got = _descend_once(v, allow, cur)
        if got is None:
            for depth, limit, singles in ((2, 12, False), (3, 5, False), (3, 8, True)):
                if n <= limit:
                    got = _lookahead(v, allow, cur, depth, singles)
                    if got is not None:
                        break
        if got is None:
            raise UntangleStuck("no admissible move lowers the norm", v)
        letters, w = got
        if len(letters) == 1:
            i, j, e = letters[0]
            k, w = _best_power(v, i, j, e, norm(w))
            letters = ((i, j, k),)
        # split lookahead paths back into single moves
        chunks = _chunks(letters)
        x = v
        for ch in chunks:
            y = _apply_letters(x, ch)
            emit(ch, x, y)
            x = y
        v = x
    return v


def _chunks(letters: Letters) -> list[Letters]:
    out: list[Letters] = []
    t = 0
    while t < len(letters):
        a = letters[t]
        if t + 1 < len(letters):
            b = letters[t + 1]
            if b[2] == -a[2] and abs(a[2]) == 1 and (b[0] == a[0] or b[1] == a[1]) and (b[0], b[1]) != (a[0], a[1]):
                out.append((a, b))
                t += 2
                continue
        out.append((a,))
        t += 1
    return out


# ---------------------------------------------------------------------------
# relaxation against a strip system
# ---------------------------------------------------------------------------


@dataclass
class RelaxOutcome:
    lamination: CoordVector
    system: StripSystem
    moves: list[SlideMove]
    lengths: list[int] | None


def _limits(s: StripSystem, variant: str) -> list[int]:
    if variant == "basic":
        return [RELAXED_LIMIT] * s.r
    return [ALMOST_RELAXED_LIMITS[st.type] for st in s.strips]


def _strip_tuples(s: StripSystem) -> list[tuple]:
    return [(st.left.i, st.left.j, st.left.side == ABOVE, st.right.i, st.right.j, st.right.side == ABOVE)
            for st in s.strips]


def _lengths(v: CoordVector, s: StripSystem, hint: list[int] | None = None,
             packed: list[tuple] | None = None) -> list[int] | None:
    """Per-strip lengths if v carries s, else None (machine-word fast path
    first, compressed matchings otherwise)."""
    total, fast = lc.KERNEL.carried(v.entries, packed if packed is not None else _strip_tuples(s), s.N, CARRY_CAP)
    if total is not None:
        return fast
    mt = matching_of(v)
    if mt.N < s.N:
        return None
    lens = [0] * s.r
    order = list(range(s.r))
    if hint and 0 <= hint[0] < s.r:
        order.remove(hint[0])
        order.insert(0, hint[0])
    for t in order:
        ln = follow_strip(mt, s.strips[t], s.N, CARRY_CAP)
        if ln is None:
            if hint is not None:
                hint[0] = t
            return None
        lens[t] = ln
    return lens


def _score(v: CoordVector, s: StripSystem, limits: Sequence[int], hint: list[int] | None = None,
           packed: list[tuple] | None = None):
    """((excess, norm, total length), lengths), or (None, None) when v does
    not carry s."""
    lens = _lengths(v, s, hint, packed)
    if lens is None:
        return None, None
    excess = sum(max(0, a - b) for a, b in zip(lens, limits))
    return (excess, norm(v), sum(lens)), lens


def _sync_punctures(s: StripSystem, mt: Matching) -> StripSystem:
    fp = s.false_puncture
    if fp is not None:
        fp = min(mt.false_puncture, s.N)
    return replace(s, punctures=tuple(min(x, s.N) for x in mt.punctures), false_puncture=fp)


def relax_after_step(v: CoordVector, s: StripSystem, step: StepDetail | None = None, variant: str = "optimized",
                     allow: Allow = lambda c: True, max_moves: int | None = None) -> RelaxOutcome:
    """Shorten the strips of ``s`` by slides while ``v`` keeps carrying it.

    Candidates are single half twists (extended to their best power),
    semicircular slides, and, when the strips are too long to be followed,
    the spiral-undoing twist of every block.  A candidate is admissible only
    if the new lamination still carries ``s``; the one with the least excess
    length (then norm, then total length) wins.
    """
    limits = _limits(s, variant)
    packed = _strip_tuples(s)
    score, lens = _score(v, s, limits, packed=packed)
    mt = matching_of(v)
    moves: list[SlideMove] = []
    n = v.n
    max_moves = max_moves if max_moves is not None else 4 * n + 8
    while len(moves) < max_moves and (score is None or score[0] > 0):
        best = None
        cands: list[tuple[Letters, CoordVector]] = []
        # obstructing punctures sit right of N: every useful block reaches one
        q0 = next((q + 1 for q, x in enumerate(mt.punctures) if x >= s.N), n + 1)
        for c, seq in _compiled(n, False):
            if allow(c) and max(x[1] for x in c) >= q0:
                cands.append((c, _act(v, seq)))
        if score is None:
            for i in range(1, n):
                for j in range(max(i + 1, q0), n + 1):
                    k0 = lc.detect_spiral(v, i, j).k0
                    if abs(k0) < 2:
                        continue
                    # the exact untwist depends on how the spiral was cut; try a small window
                    for k in range(k0 - 3, k0 + 4):
                        if abs(k) >= 2 and allow(((i, j, k),)):
                            cands.append((((i, j, k),), apply_delta_power(v, i, j, k)))
        # lowest norm first; the first candidate that is carried with no
        # excess length is the best one under the ordering used here
        order = sorted(range(len(cands)), key=lambda t: (norm(cands[t][1]), len(cands[t][0]), t))
        hint = [-1]
        for t in order:
            c, w = cands[t]
            sc, lens2 = _score(w, s, limits, hint, packed)
            if sc is None:
                continue
            key = (sc, len(c))
            if best is None or key < best[0]:
                best = (key, c, w, lens2)
                if sc[0] == 0:
                    break
        if best is None or (score is not None and best[0][0] >= score):
            break
        _, c, w, lens2 = best
        if len(c) == 1 and abs(c[0][2]) == 1:
            c, w, lens2 = _extend_twist(v, s, limits, packed, c, w, lens2, allow)
        mt2 = matching_of(w)
        moves.append(_as_move(c, mt, mt2))
        v, mt, lens = w, mt2, lens2
        score = _score(v, s, limits, packed=packed)[0]
    return RelaxOutcome(v, _sync_punctures(s, mt), moves, lens)


def _extend_twist(v, s, limits, packed, c, w, lens, allow):
    (i, j, e), = c
    best = (_score(w, s, limits, packed=packed)[0], c, w, lens)
    k = 1
    while True:
        k2 = 2 * k
        cand = ((i, j, e * k2),)
        if not allow(cand):
            break
        w2 = apply_delta_power(v, i, j, e * k2)
        sc, lens2 = _score(w2, s, limits, packed=packed)
        if sc is None or sc >= best[0]:
            break
        best = (sc, cand, w2, lens2)
        k = k2
    return best[1], best[2], best[3]


# ---------------------------------------------------------------------------
# the driver
# ---------------------------------------------------------------------------


@dataclass
class UntangleTrace:
    """Everything an untangling run did, in order."""

    n: int
    variant: str
    initial_norm: int
    initial_complexity: float
    steps: list[tuple[StepResult, list[SlideMove]]] = field(default_factory=list)
    final: list[SlideMove] = field(default_factory=list)
    stop_reason: str = ""
    word: BraidWord | None = None            # over n + 1 strands, * is strand 1
    projected: BraidWord | None = None       # over n strands
    relaxed: CoordVector | None = None
    initial: CoordVector | None = None
    systems: list[StripSystem] = field(default_factory=list)   # before the first step, then after each
    details: list[StepDetail] = field(default_factory=list)

    @property
    def relax_length(self) -> float:
        return sum(m.delta_length for _, ms in self.steps for m in ms)

    @property
    def final_length(self) -> float:
        return sum(m.delta_length for m in self.final)

    @property
    def transmission_budget(self) -> float:
        return 3 * sum(math.log2(r.d + 1) for r, _ in self.steps if r.kind == TRANSMISSION)

    @property
    def total_length(self) -> float:
        return delta_length(self.projected) if self.projected is not None else 0.0

    @property
    def norm_bound(self) -> float:
        factor = 9 if self.variant == "optimized" else None
        if self.initial_norm <= 1:
            return 0.0
        if factor is None:
            return 8 * self.n * self.n * (math.log2(self.initial_norm) + 1)
        return 9 * self.n * math.log2(self.initial_norm)

    def ledger(self) -> dict:
        """The budget checks of a run, as booleans plus the raw numbers."""
        tol = 1e-9
        return {
            "relax_length": self.relax_length,
            "relax_budget": self.transmission_budget,
            "relax_ok": self.relax_length <= self.transmission_budget + tol,
            "final_length": self.final_length,
            "final_ok": self.final_length <= 2 * self.n + tol,
            "total_length": self.total_length,
            "complexity_budget": 3 * self.initial_complexity + 2 * self.n,
            "complexity_ok": self.total_length <= 3 * self.initial_complexity + 2 * self.n + tol,
            "norm_bound": self.norm_bound,
            "bound_ok": self.total_length <= self.norm_bound + tol,
        }

    def records(self) -> list[str]:
        """JSON lines: step records interleaved with their slide records."""
        sysj = [json.loads(ss_to_json(x)) for x in self.systems]
        out = [json.dumps({"type": "start", "n": self.n, "variant": self.variant,
                           "norm": str(self.initial_norm),
                           "coords": None if self.initial is None else [str(x) for x in self.initial.entries],
                           "system": sysj[0] if sysj else None})]
        for t, (res, ms) in enumerate(self.steps):
            out.append(json.dumps({
                "type": "step", "kind": res.kind, "d": str(res.d),
                "components_freed": str(res.components_freed),
                "remainder_width": None if res.remainder_width is None else str(res.remainder_width),
                "system": sysj[t + 1] if t + 1 < len(sysj) else None,
            }))
            out.extend(json.dumps(m.to_record()) for m in ms)
        out.append(json.dumps({"type": "final"}))
        out.extend(json.dumps(m.to_record()) for m in self.final)
        out.append(json.dumps({"type": "end", "stop": self.stop_reason,
                               "relaxed": None if self.relaxed is None else [str(x) for x in self.relaxed.entries]}))
        return out


def _numerator_left_of_star(s: StripSystem) -> bool:
    if s.false_puncture is None or s.is_empty():
        return False
    att = s.strips_at(s.N)
    if len(att) != 2:
        return False
    (t1, _), (t2, _) = att
    a, b = s.strips[t1], s.strips[t2]
    num = a if a.width >= b.width else b
    return num.left.hi <= s.false_puncture and num.right.hi <= s.false_puncture


def untangle_traced(v: CoordVector, variant: str = "optimized", allow: Allow = lambda c: True,
                    engine: bool = True) -> UntangleTrace:
    """Full untangling run with its trace."""
    if variant not in ("optimized", "basic"):
        raise ValueError(f"unknown variant {variant!r}")
    n = v.n
    s0 = initial_iis(v)
    if variant == "optimized":
        s0 = refine_for_untangling(s0)
    else:
        s0 = replace(s0, false_puncture=None)
    tr = UntangleTrace(n, variant, norm(v), aht_complexity(s0), initial=v, systems=[s0])
    applied: list[SlideMove] = []
    cur, s = v, s0
    if relaxation_census(v).relaxed:
        tr.stop_reason = "relaxed"
        engine = False
    while engine and not s.is_empty():
        if variant == "optimized" and _numerator_left_of_star(s):
            tr.stop_reason = "numerator left of *"
            break
        if relaxation_census(cur).relaxed:
            tr.stop_reason = "relaxed"
            break
        s_new, det = step_detailed(s, check=True)
        tr.systems.append(s_new)
        tr.details.append(det)
        if det.result.kind == ANNULUS:
            tr.steps.append((det.result, []))
            tr.stop_reason = "annulus"
            break
        out = relax_after_step(cur, s_new, det, variant, allow)
        if out.lengths is None and not out.moves:
            # the tight lamination cannot be shown to carry the new system
            tr.steps.append((det.result, []))
            tr.stop_reason = "carry unverified"
            break
        tr.steps.append((det.result, out.moves))
        applied.extend(out.moves)
        cur, s = out.lamination, out.system
        tr.systems[-1] = s
    else:
        if engine:
            tr.stop_reason = "empty system"

    def emit(ch: Letters, x: CoordVector, y: CoordVector) -> None:
        m = _as_move(ch, matching_of(x) if x.n >= 2 else None, None)
        tr.final.append(m)
        applied.append(m)

    cur = _complete(cur, allow, emit)
    # moves were applied first to last, so the word lists them last to first
    proj = normalize([x for m in reversed(applied) for x in m.letters], n)
    tr.projected = proj
    tr.word = include_shift(proj, 1) if n >= 1 else proj
    tr.relaxed = cur
    return tr


def untangle(v: CoordVector, variant: str = "optimized") -> tuple[BraidWord, CoordVector]:
    """A braid word u with u·v relaxed, and u·v."""
    tr = untangle_traced(v, variant)
    return tr.projected, tr.relaxed


def untangle_basic(v: CoordVector) -> BraidWord:
    return untangle_traced(v, "basic").projected


def recover_braid(v: CoordVector, variant: str = "optimized") -> BraidWord:
    """The braid β with β·E = v, or NotACurveDiagram."""
    u, rel = untangle(v, variant)
    e = standard_diagram("E", v.n)
    if rel.entries != e.entries:
        c = relaxation_census(rel)
        why = (f"relaxed form has {c.odd_arcs} odd arcs, {c.even_arcs} even arcs and {c.circles} closed curves;"
               f" a curve diagram relaxes to {v.n - 1} odd arcs only")
        raise NotACurveDiagram("not a curve diagram: " + why, rel)
    return invert(u)
