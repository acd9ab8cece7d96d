"""Shared deterministic corpora."""

from __future__ import annotations

import random

import pytest

from artifact.braid_core import BraidWord, artin_word
from artifact.lamination_coords import CoordVector, apply_word, standard_diagram


def random_words(seed: int, count: int, n_range: tuple[int, int], max_len: int) -> list[BraidWord]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(*n_range)
        L = rng.randint(0, max_len)
        out.append(artin_word(n, [(rng.randint(1, n - 1), rng.choice((1, -1))) for _ in range(L)]))
    return out


def random_vectors(seed: int, count: int, n_range: tuple[int, int], R: int) -> list[CoordVector]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(*n_range)
        e = tuple(rng.randint(-R, R) for _ in range(2 * n - 2))
        if any(e):
            out.append(CoordVector(n, e))
    return out


def E(n: int) -> CoordVector:
    return standard_diagram("E", n)


def image(w: BraidWord) -> CoordVector:
    return apply_word(E(w.n), w)


@pytest.fixture(scope="session")
def small_words() -> list[BraidWord]:
    return random_words(101, 120, (2, 6), 30)
