import os
import random
import subprocess
import sys

import pytest

from artifact import _pykernel
from artifact.strip_system import carried_lengths, initial_iis
from artifact.untangler import _strip_tuples

from conftest import random_vectors, random_words

ck = pytest.importorskip("artifact._ckernel")


def seqs(seed: int, count: int):
    rng = random.Random(seed)
    for v in random_vectors(seed, count, (2, 8), 10**rng.choice((1, 3, 20))):
        j_max = v.n
        yield list(v.entries), [(rng.randint(2, j_max), rng.choice((1, -1))) for _ in range(rng.randint(0, 60))]


def test_artin_seq_parity():
    for c, seq in seqs(1, 300):
        assert ck.artin_seq(list(c), seq) == _pykernel.artin_seq(list(c), seq)


def test_overflow_fallback():
    # values beyond the machine-word fast path switch to Python integers
    c = [2**60, -(2**61), 3, 2**62 + 1]
    seq = [(2, 1), (3, -1)] * 20
    assert ck.artin_seq(list(c), seq) == _pykernel.artin_seq(list(c), seq)


def test_normal_and_norms():
    for c, _ in seqs(2, 300):
        if not any(c):
            continue
        assert ck.normal(list(c)) == _pykernel.normal(list(c))
        assert ck.norm(list(c)) == _pykernel.norm(list(c))
        assert ck.closure_norm(list(c)) == _pykernel.closure_norm(list(c))


def test_carried_parity():
    from artifact.lamination_coords import apply_word, standard_diagram

    for w in random_words(3, 100, (2, 6), 30):
        v = apply_word(standard_diagram("E", w.n), w)
        s = initial_iis(v)
        packed = _strip_tuples(s)
        total, lens = ck.carried(v.entries, packed, s.N, 64)
        assert total == sum(ck.normal(list(v.entries))[0])
        # the pure kernel has no fast path; the compressed matchings decide
        assert _pykernel.carried(v.entries, packed, s.N, 64) == (None, None)
        assert lens == carried_lengths(v, s)


def test_pure_python_selected_by_environment():
    env = dict(os.environ, ARTIFACT_PURE_PYTHON="1")
    code = "from artifact import lamination_coords as lc; print(lc.KERNEL.__name__)"
    p = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert p.stdout.strip() == "artifact._pykernel"
