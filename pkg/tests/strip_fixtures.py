"""Golden strip systems for the two-fold Fibonacci example."""

from __future__ import annotations

from artifact.braid_core import parse_word
from artifact.lamination_coords import apply_word, standard_diagram

EXAMPLE_WORD = "s2^-1 s1 s2^-1 s1"

# (N, identifications [i,j]<->[k,l] meaning i<->k and j<->l)
GOLDEN = [
    (26, {((1, 6), (12, 7)), ((13, 19), (26, 20)), ((1, 1), (26, 26)), ((2, 2), (3, 3)), ((4, 14), (25, 15))}),
    (25, {((1, 6), (12, 7)), ((14, 19), (25, 20)), ((1, 1), (13, 13)), ((2, 2), (3, 3)), ((4, 14), (25, 15))}),
    (19, {((1, 6), (12, 7)), ((4, 9), (14, 19)), ((1, 1), (13, 13)), ((2, 2), (3, 3)), ((10, 14), (19, 15))}),
    (14, {((1, 6), (12, 7)), ((4, 4), (14, 14)), ((1, 1), (13, 13)), ((2, 2), (3, 3)), ((5, 9), (14, 10))}),
]


def example_lamination():
    return apply_word(standard_diagram("E", 3), parse_word(EXAMPLE_WORD, 3))


def normal_pair(a: tuple[int, int], b: tuple[int, int]) -> tuple:
    (i, j), (k, l) = a, b
    return min(((i, j), (k, l)), ((k, l), (i, j)), ((j, i), (l, k)), ((l, k), (j, i)))


def identifications(s) -> set:
    return {normal_pair((st.left.i, st.left.j), (st.right.i, st.right.j)) for st in s.strips}


def golden_identifications(pairs) -> set:
    return {normal_pair(a, b) for a, b in pairs}
