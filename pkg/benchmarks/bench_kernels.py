"""Compiled kernel vs pure-Python kernel on identical workloads.

    python benchmarks/bench_kernels.py [--seed S] [--repeat R]

Each workload is run on both kernels; results are compared for equality and
the per-call time is printed as a table.
"""

from __future__ import annotations

import argparse
import random
import time

from artifact import _pykernel
from artifact.lamination_coords import _delta_seq

try:
    from artifact import _ckernel
except ImportError:  # pragma: no cover - extension not built
    _ckernel = None


def _workloads(seed: int):
    rng = random.Random(seed)
    out = []
    for n, length in ((4, 200), (8, 200), (16, 400)):
        coords = [rng.randint(-50, 50) for _ in range(2 * n - 2)]
        seq = [(rng.randint(2, n), rng.choice((1, -1))) for _ in range(length)]
        out.append((f"artin_seq n={n} len={length}", "artin_seq", (coords, seq)))
    for n in (4, 16):
        coords = [rng.randint(-10**6, 10**6) for _ in range(2 * n - 2)]
        out.append((f"normal n={n}", "normal", (coords,)))
    coords = [rng.randint(-9, 9) for _ in range(10)]
    out.append(("full twists D(2,5)^2 x 50", "artin_seq", (coords, _delta_seq(2, 5, 2) * 50)))
    return out


def _time(fn, args, repeat: int) -> tuple[float, object]:
    best = float("inf")
    res = None
    for _ in range(repeat):
        t = time.perf_counter()
        res = fn(*[list(a) if isinstance(a, list) else a for a in args])
        best = min(best, time.perf_counter() - t)
    return best, res


def main() -> None:
    p = argparse.ArgumentParser()
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=20)
    a = p.parse_args()
    print(f"{'workload':34s} {'python us':>11s} {'cython us':>11s} {'speedup':>8s} same")
    for name, fn, args in _workloads(a.seed):
        tp, rp = _time(getattr(_pykernel, fn), args, a.repeat)
        if _ckernel is None:
            print(f"{name:34s} {tp * 1e6:11.1f} {'-':>11s} {'-':>8s} -")
            continue
        tc, rc = _time(getattr(_ckernel, fn), args, a.repeat)
        same = list(rp) == list(rc) if fn == "artin_seq" else tuple(map(list, rp)) == tuple(map(list, rc))
        print(f"{name:34s} {tp * 1e6:11.1f} {tc * 1e6:11.1f} {tp / tc:8.1f} {same}")


if __name__ == "__main__":
    main()
