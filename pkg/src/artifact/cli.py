"""Command-line front end.

Verbs: act, untangle, recover, wordproblem, order, sigma-rep, count, bench,
render.  Exit codes: 0 success, 1 usage, 2 invalid input, 3 internal
invariant violation, 10/11/12 comparison results (less/equal/greater).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from . import aht_engine, lamination_coords as lc, strip_system as ss
from .aht_engine import ComplexityViolation
from .braid_core import (
    BraidLetter,
    BraidWord,
    delta_length,
    format_word,
    normalize,
    parse_word,
    random_artin_word,
)
from .lamination_coords import CoordVector, apply_word, apply_word_naive, norm, standard_diagram
from .metrics import metric_report, sample_laminations
from .ordering import EXIT_CODES, braid_sign, compare, sigma_consistent_report, within_budget, word_sigma_class
from .render import render_trace
from .strip_system import InvariantError
from .untangler import NotACurveDiagram, UntangleStuck, recover_braid, untangle_traced

__all__ = ["main", "run", "render_trace", "engine_trace", "EXIT_OK", "EXIT_USAGE", "EXIT_INPUT", "EXIT_INTERNAL"]

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
EXIT_DIFFERENT = EXIT_CODES["less"]


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def _read_text(arg: str, stdin) -> str:
    if arg == "-":
        return stdin.read()
    return arg


def _read_json_arg(arg: str, stdin):
    """Inline JSON, a path to a JSON file, or ``-`` for stdin."""
    text = arg
    if arg == "-":
        text = stdin.read()
    elif not arg.lstrip().startswith(("{", "[")):
        p = Path(arg)
        if not p.exists():
            raise InputError(f"no such file: {arg}")
        text = p.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON: {exc}") from exc


def _word(text: str, n: int, stdin) -> BraidWord:
    try:
        return parse_word(_read_text(text, stdin).strip(), n)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _coords(arg: str, stdin) -> CoordVector:
    obj = _read_json_arg(arg, stdin)
    try:
        v = lc.from_json(obj)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if not any(v.entries):
        raise InputError("the zero vector is not a lamination")
    return v


def _system(arg: str, stdin) -> ss.StripSystem:
    obj = _read_json_arg(arg, stdin)
    try:
        s = ss.from_json(obj)
        s.validate()
    except (ValueError, InvariantError) as exc:
        raise InputError(str(exc)) from exc
    return s


def _coords_obj(v: CoordVector) -> dict:
    return {"n": v.n, "coords": [str(x) for x in v.entries], "norm": str(norm(v))}


def _emit(out, obj) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def _cmd_act(a, out, stdin) -> int:
    w = _word(a.word, a.n, stdin)
    if a.start in ("E", "E2"):
        v = standard_diagram(a.start, a.n)
    else:
        v = _coords(a.start, stdin)
        if v.n != a.n:
            raise InputError("start lamination has a different strand count")
    r = apply_word_naive(v, w) if a.naive else apply_word(v, w)
    _emit(out, _coords_obj(r))
    return EXIT_OK


def _check_ledger(led: dict) -> None:
    bad = [k for k, x in led.items() if k.endswith("_ok") and not x]
    if bad:
        raise InvariantError("untangling ledger violated: " + ", ".join(bad))


def _slide_word(rec: dict, n: int) -> BraidWord:
    try:
        letters = [BraidLetter(int(lo), int(hi), int(k)) for lo, hi, k in rec["letters"]]
        return BraidWord(n, tuple(letters))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad slide record: {exc}") from exc


def _replay(lines: Sequence[str]) -> dict:
    """Re-apply the recorded slides and compare with the recorded end state."""
    try:
        recs = [json.loads(x) for x in lines if x.strip()]
    except json.JSONDecodeError as exc:
        raise InputError(f"bad trace line: {exc}") from exc
    if not recs or recs[0].get("type") != "start" or recs[0].get("coords") is None:
        raise InputError("trace must begin with a start record carrying coordinates")
    if recs[-1].get("type") != "end" or recs[-1].get("relaxed") is None:
        raise InputError("trace must finish with an end record")
    n = int(recs[0]["n"])
    cur = CoordVector(n, tuple(int(x) for x in recs[0]["coords"]))
    slides = [_slide_word(r, n) for r in recs if r.get("type") == "slide"]
    for w in slides:
        cur = apply_word(cur, w)
    if cur.entries != tuple(int(x) for x in recs[-1]["relaxed"]):
        raise InvariantError("replayed slides do not reach the recorded lamination")
    if not lc.is_relaxed_vector(cur):
        raise InvariantError("replayed end state is not relaxed")
    # slides were applied first to last, so the braid word lists them in reverse
    word = normalize([x for w in reversed(slides) for x in w.letters], n)
    return {"n": n, "relaxed": [str(x) for x in cur.entries], "word": format_word(word), "slides": len(slides)}


def _cmd_untangle(a, out, stdin) -> int:
    if a.replay:
        lines = Path(a.replay).read_text(encoding="utf-8").splitlines() if a.replay != "-" else stdin.read().splitlines()
        _emit(out, _replay(lines))
        return EXIT_OK
    if a.coords is None:
        raise UsageError("untangle needs coordinates or --replay")
    v = _coords(a.coords, stdin)
    tr = untangle_traced(v, a.variant)
    recs = tr.records()
    if a.trace:
        Path(a.trace).write_text("\n".join(recs) + "\n", encoding="utf-8")
    led = tr.ledger()
    _emit(out, {
        "word": format_word(tr.projected),
        "delta_length": round(led["total_length"], 9),
        "relaxed": _coords_obj(tr.relaxed),
        "stop": tr.stop_reason,
        "steps": len(tr.steps),
        "bound": round(led["norm_bound"], 9),
    })
    try:
        _check_ledger(led)
    except InvariantError:
        sys.stderr.write("\n".join(recs) + "\n")
        raise
    return EXIT_OK


def _cmd_recover(a, out, stdin) -> int:
    v = _coords(a.coords, stdin)
    try:
        w = recover_braid(v, a.variant)
    except NotACurveDiagram as exc:
        raise InputError(str(exc)) from exc
    _emit(out, {"n": v.n, "word": format_word(w), "delta_length": round(delta_length(w), 9)})
    return EXIT_OK


def _cmd_wordproblem(a, out, stdin) -> int:
    w1, w2 = _word(a.w1, a.n, stdin), _word(a.w2, a.n, stdin)
    e = standard_diagram("E", a.n)
    same = apply_word(e, w1).entries == apply_word(e, w2).entries
    out.write(("equal" if same else "different") + "\n")
    return EXIT_CODES["equal"] if same else EXIT_DIFFERENT


def _cmd_order(a, out, stdin) -> int:
    w1 = _word(a.w1, a.n, stdin)
    if a.w2 is None:
        out.write(str(braid_sign(w1)) + "\n")
        return EXIT_OK
    res = compare(w1, _word(a.w2, a.n, stdin))
    out.write(res + "\n")
    return EXIT_CODES[res]


def _cmd_sigma_rep(a, out, stdin) -> int:
    w = _word(a.word, a.n, stdin)
    rep = sigma_consistent_report(w)
    e = standard_diagram("E", a.n)
    cls = word_sigma_class(rep.word)
    _emit(out, {
        "word": format_word(rep.word),
        "class": str(cls),
        "delta_length_input": round(delta_length(w), 9),
        "delta_length_output": round(delta_length(rep.word), 9),
        "budget": round(30 * a.n * delta_length(w), 9),
    })
    if not cls.consistent or apply_word(e, rep.word).entries != apply_word(e, w).entries or not within_budget(w, rep.word):
        raise InvariantError("σ-consistent representative failed its checks")
    return EXIT_OK


def engine_trace(s: ss.StripSystem, check: bool = True) -> tuple[int, list[str]]:
    """Run the engine to the empty system; records carry every intermediate system."""
    recs = [json.dumps({"type": "start", "system": json.loads(ss.to_json(s))})]

    def on_step(new: ss.StripSystem, det) -> None:
        rec = json.loads(next(aht_engine.trace_records([det])))
        rec.update({"type": "step", "system": json.loads(ss.to_json(new))})
        recs.append(json.dumps(rec))

    final, _ = aht_engine.run(s, check, on_step)
    recs.append(json.dumps({"type": "end", "count": str(final.counter)}))
    return final.counter, recs


def _cmd_count(a, out, stdin) -> int:
    s = _system(a.iis, stdin)
    c, recs = engine_trace(s)
    if a.trace:
        Path(a.trace).write_text("\n".join(recs) + "\n", encoding="utf-8")
    out.write(f"{c}\n")
    return EXIT_OK


BENCH_COLUMNS = ["n", "word_id", "delta_length_input", "c", "rho_delta_upper", "rho_L_lower",
                 "envelope_9nc", "easy_ok", "envelope_ok", "input_ok"]


def _bench_case(args) -> list:
    idx, n, word, samples = args
    r = metric_report(BraidWord.identity(n), word, samples)
    return [n, idx, f"{r.delta_length_input:.6f}", f"{r.c:.6f}", f"{r.delta_length_upper:.6f}",
            f"{r.rhoL_lower:.6f}", f"{r.envelope:.6f}", int(r.easy_ok), int(r.envelope_ok), int(r.input_ok)]


def bench_rows(seed: int, count: int, n_min: int, n_max: int, length: int, samples: int, workers: int = 1) -> list[list]:
    rng = random.Random(seed)
    cases = []
    for idx in range(count):
        n = rng.randint(n_min, n_max)
        w = random_artin_word(rng, n, rng.randint(1, length))
        cases.append((idx, n, w, sample_laminations(n, samples, seed * 1_000_003 + idx)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_bench_case, cases))   # map keeps case order
    return [_bench_case(c) for c in cases]


def _cmd_bench(a, out, stdin) -> int:
    if not (2 <= a.n_min <= a.n_max):
        raise InputError("need 2 <= n-min <= n-max")
    rows = bench_rows(a.seed, a.count, a.n_min, a.n_max, a.length, a.samples, a.workers)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(BENCH_COLUMNS)
    wr.writerows(rows)
    text = buf.getvalue()
    if a.out:
        Path(a.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _cmd_render(a, out, stdin) -> int:
    src = stdin.read() if a.trace == "-" else Path(a.trace).read_text(encoding="utf-8")
    try:
        paths = render_trace(src.splitlines(), a.out, a.max_frames)
    except (ValueError, KeyError) as exc:
        raise InputError(f"malformed trace: {exc}") from exc
    out.write(f"{len(paths)}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artifact", description="Braids acting on laminations by exact integer coordinates.")
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)

    q = sub.add_parser("act", help="apply a braid word to E, E2 or a coordinate vector")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("word", help="word text such as 's1 s2^-1 D(1,3)^5', or - for stdin")
    q.add_argument("--start", default="E", help="E, E2, or coordinate JSON (inline, file or -)")
    q.add_argument("--naive", action="store_true", help="expand to Artin generators before acting")

    q = sub.add_parser("untangle", help="untangle a lamination; --trace writes JSON lines")
    q.add_argument("coords", nargs="?")
    q.add_argument("--variant", choices=("optimized", "basic"), default="optimized")
    q.add_argument("--trace")
    q.add_argument("--replay", help="re-execute a trace file and re-verify it")

    q = sub.add_parser("recover", help="braid word whose curve diagram has these coordinates")
    q.add_argument("coords")
    q.add_argument("--variant", choices=("optimized", "basic"), default="optimized")

    q = sub.add_parser("wordproblem", help="exit 11 if the two words are the same braid, 10 otherwise")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("w1")
    q.add_argument("w2")

    q = sub.add_parser("order", help="sign of one braid, or compare two (exit 10/11/12)")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("w1")
    q.add_argument("w2", nargs="?")

    q = sub.add_parser("sigma-rep", help="σ-consistent representative")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("word")

    q = sub.add_parser("count", help="number of orbits of a strip system (JSON)")
    q.add_argument("iis")
    q.add_argument("--trace")

    q = sub.add_parser("bench", help="deterministic CSV of metric bounds on random words")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--count", type=int, default=20)
    q.add_argument("--n-min", type=int, default=3)
    q.add_argument("--n-max", type=int, default=6)
    q.add_argument("--length", type=int, default=30)
    q.add_argument("--samples", type=int, default=8)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--out")

    q = sub.add_parser("render", help="SVG frames from a trace")
    q.add_argument("trace")
    q.add_argument("--out", required=True)
    q.add_argument("--max-frames", type=int)
    return p


_DISPATCH = {
    "act": _cmd_act,
    "untangle": _cmd_untangle,
    "recover": _cmd_recover,
    "wordproblem": _cmd_wordproblem,
    "order": _cmd_order,
    "sigma-rep": _cmd_sigma_rep,
    "count": _cmd_count,
    "bench": _cmd_bench,
    "render": _cmd_render,
}


def run(argv: Sequence[str], out=None, err=None, stdin=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    stdin = stdin or sys.stdin
    try:
        a = build_parser().parse_args(list(argv))
        if a.verb is None:
            raise UsageError("a verb is required")
        if getattr(a, "n", None) is not None and a.n < 2:
            raise InputError("n must be at least 2")
        return _DISPATCH[a.verb](a, out, stdin)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_INPUT
    except (InvariantError, ComplexityViolation, UntangleStuck, AssertionError) as exc:
        err.write(f"internal invariant violated: {exc}\n")
        traceback.print_exc(file=err)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
