import math

import pytest

from artifact.braid_core import (
    BraidLetter,
    BraidWord,
    ExpansionTooLarge,
    StrandError,
    artin_word,
    concat,
    delta_length,
    delta_length_exact,
    expand_to_artin,
    format_word,
    include_shift,
    invert,
    normalize,
    parse_word,
    permutation,
    remove_strand,
)
from artifact.lamination_coords import apply_word

from conftest import E, random_words


def test_parse_format_round_trip():
    w = parse_word("s1 s2^-1 D(1,3)^5 s2^3", 3)
    assert format_word(w) == "s1 s2^-1 D(1,3)^5 D(2,3)^3"
    assert parse_word(format_word(w), 3) == w


def test_parse_rejects_bad_tokens():
    with pytest.raises(ValueError):
        parse_word("s0", 3)
    with pytest.raises(ValueError):
        parse_word("s3", 3)
    with pytest.raises(ValueError):
        parse_word("x1", 3)


def test_normalize_merges_and_cancels():
    w = normalize([BraidLetter(1, 2, 1), BraidLetter(1, 2, 1), BraidLetter(2, 3, 4), BraidLetter(2, 3, -4)], 3)
    assert w == BraidWord(3, (BraidLetter(1, 2, 2),))
    assert normalize(artin_word(3, [(1, 1), (1, -1)])).letters == ()


def test_word_rejects_adjacent_same_block():
    with pytest.raises(ValueError):
        BraidWord(3, (BraidLetter(1, 2, 1), BraidLetter(1, 2, 1)))
    with pytest.raises(ValueError):
        BraidLetter(2, 2, 1)
    with pytest.raises(ValueError):
        BraidLetter(1, 2, 0)


def test_delta_length_values():
    w = BraidWord(4, (BraidLetter(1, 3, 3), BraidLetter(2, 4, -1)))
    assert delta_length(w) == pytest.approx(math.log2(4) + math.log2(2))
    ex = delta_length_exact(w)
    assert ex.exp2() == 8
    assert ex.at_most(3) and not ex.at_most(2.99)


def test_half_twist_expansion():
    assert expand_to_artin(parse_word("D(1,3)", 3)) == [(1, 1), (2, 1), (1, 1)]
    assert expand_to_artin(parse_word("D(1,3)^-1", 3)) == [(1, -1), (2, -1), (1, -1)]
    with pytest.raises(ExpansionTooLarge):
        expand_to_artin(parse_word("D(1,2)^100", 2), cap=10)


def test_expansion_same_braid():
    import random

    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(2, 5)
        letters = []
        for _ in range(rng.randint(1, 6)):
            lo = rng.randint(1, n - 1)
            letters.append(BraidLetter(lo, rng.randint(lo + 1, n), rng.choice((-3, -2, -1, 1, 2, 3))))
        w = normalize(letters, n)
        assert apply_word(E(n), artin_word(n, expand_to_artin(w))) == apply_word(E(n), w)


def test_invert_and_concat():
    w = parse_word("s1 D(1,3)^2 s2^-1", 3)
    assert invert(invert(w)) == w
    assert concat(w, invert(w)).letters == ()


def test_permutation():
    assert permutation(parse_word("s1", 3)) == [0, 2, 1, 3]
    assert permutation(parse_word("D(1,3)", 3)) == [0, 3, 2, 1]
    assert permutation(parse_word("D(1,3)^2", 3)) == [0, 1, 2, 3]


def test_remove_strand_and_shift():
    w = parse_word("s2 s3^-1 D(2,4)^3", 4)
    assert remove_strand(include_shift(remove_strand(w))) == remove_strand(w)
    assert remove_strand(include_shift(parse_word("s1 s2", 3))) == parse_word("s1 s2", 3)
    # Δ_13^2 restricted to strands 2, 3 is σ_1^2
    assert remove_strand(parse_word("D(1,3)^2", 3)) == parse_word("s1^2", 2)
    with pytest.raises(StrandError):
        remove_strand(parse_word("s1", 3))


def test_remove_strand_is_a_homomorphism_on_first_strand_fixing_braids():
    for t, u in enumerate(random_words(7, 30, (2, 4), 10)):
        n = u.n + 1
        v = random_words(50 + t, 1, (n, n), 8)[0]
        # a and b both return strand 1 to position 1
        a = concat(include_shift(u), parse_word("D(1,3)^2", n))
        b = concat(v, parse_word("D(1,2)^2", n), invert(v)) if permutation(v)[1] == 1 else include_shift(u)
        lhs = remove_strand(concat(a, b))
        rhs = concat(remove_strand(a), remove_strand(b))
        assert apply_word(E(n - 1), lhs) == apply_word(E(n - 1), rhs)


def test_artin_length():
    assert parse_word("D(1,3)^2 s1", 3).artin_length == 7
