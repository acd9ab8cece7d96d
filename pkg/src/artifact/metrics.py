"""Complexity and the two braid metrics at the fidelity we can certify.

``rho_L`` is a supremum over all laminations, so only lower bounds from a
sample set are reported; ``rho_Delta`` needs a shortest word, so only the
Δ-length of an explicit representative is reported.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .braid_core import BraidWord, concat, delta_length, invert, random_artin_word
from .lamination_coords import CoordVector, apply_word, norm, standard_diagram
from .untangler import recover_braid

__all__ = [
    "C1",
    "C2",
    "complexity",
    "log_norm",
    "rho_delta_upper",
    "rho_L_lower",
    "lift_left",
    "sample_laminations",
    "MetricReport",
    "metric_report",
]

C1 = math.log2(3)
C2 = 9


def log_norm(v: CoordVector) -> float:
    return math.log2(norm(v))


def complexity(w: BraidWord) -> float:
    """log₂‖w·E‖ − log₂‖E‖."""
    if w.n < 2:
        raise ValueError("complexity needs at least two strands")
    e = standard_diagram("E", w.n)
    return log_norm(apply_word(e, w)) - math.log2(w.n - 1)


def _relative(w1: BraidWord, w2: BraidWord) -> BraidWord:
    if w1.n != w2.n:
        raise ValueError("strand count mismatch")
    return concat(invert(w1), w2)


def rho_delta_upper(w1: BraidWord, w2: BraidWord) -> float:
    """Δ-length of the recovered word for w1⁻¹w2, an upper bound on ρ_Δ."""
    x = _relative(w1, w2)
    e = standard_diagram("E", x.n)
    return delta_length(recover_braid(apply_word(e, x)))


def rho_L_lower(w1: BraidWord, w2: BraidWord, samples: Sequence[CoordVector]) -> float:
    """max over samples of |log₂‖w1⁻¹L‖ − log₂‖w2⁻¹L‖|."""
    if not samples:
        raise ValueError("samples must be nonempty")
    i1, i2 = invert(w1), invert(w2)
    return max(abs(log_norm(apply_word(L, i1)) - log_norm(apply_word(L, i2))) for L in samples)


def lift_left(v: CoordVector) -> CoordVector:
    """The same lamination with an extra puncture next to ``*``.

    The new puncture sits where no strand passes, so it acts as strand 1 of
    the shifted braids and leaves every norm unchanged.
    """
    return CoordVector(v.n + 1, (0, 0) + v.entries)


def sample_laminations(n: int, count: int, seed: int = 0) -> list[CoordVector]:
    """E, E2, then images of E and E2 under random words and random vectors.

    Word lengths and vector magnitudes cycle through doubling ladders so the
    sample spreads over log norms.
    """
    rng = random.Random(seed)
    e, e2 = standard_diagram("E", n), standard_diagram("E2", n)
    out = [e, e2][:count]
    t = 0
    while len(out) < count:
        rung = t // 3 % 7
        kind = t % 3
        if kind < 2:
            w = random_artin_word(rng, n, 2 << rung)
            out.append(apply_word(e if kind == 0 else e2, w))
        else:
            R = 2 << (2 * rung)
            x = tuple(rng.randint(-R, R) for _ in range(2 * n - 2))
            if any(x):
                out.append(CoordVector(n, x))
        t += 1
    return out


@dataclass
class MetricReport:
    """Certified quantities for the pair (w1, w2)."""

    n: int
    delta_length_input: float
    c: float
    delta_length_upper: float
    rhoL_lower: float
    envelope: float                 # 9n·log₂‖(w1⁻¹w2)·E‖

    @property
    def easy_ok(self) -> bool:
        # |log‖βL‖ − log‖L‖| ≤ log₂3·ℓ_Δ(β) for every L
        return self.rhoL_lower <= C1 * self.delta_length_upper + 1e-9

    @property
    def envelope_ok(self) -> bool:
        return self.delta_length_upper <= self.envelope + 1e-9

    @property
    def input_ok(self) -> bool:
        return self.c <= C1 * self.delta_length_input + 1e-9

    @property
    def ok(self) -> bool:
        return self.easy_ok and self.envelope_ok and self.input_ok


def metric_report(w1: BraidWord, w2: BraidWord, samples: Sequence[CoordVector]) -> MetricReport:
    x = _relative(w1, w2)
    e = standard_diagram("E", x.n)
    img = apply_word(e, x)
    return MetricReport(
        n=x.n,
        delta_length_input=delta_length(x),
        c=log_norm(img) - math.log2(x.n - 1),
        delta_length_upper=delta_length(recover_braid(img)),
        rhoL_lower=rho_L_lower(w1, w2, samples),
        envelope=C2 * x.n * log_norm(img),
    )
