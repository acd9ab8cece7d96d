"""SVG frames for strip systems: the axis, punctures, ``*`` and strips as bands.

Output is byte-deterministic: coordinates are computed with integer
arithmetic and printed with two decimals, and each frame embeds the system
it shows as JSON inside ``<metadata>``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from .strip_system import ABOVE, StripSystem, from_json, to_json

__all__ = ["frame_svg", "frames_from_records", "render_trace", "frame_metadata"]

WIDTH, HEIGHT, MARGIN = 800, 400, 20
_AXIS_Y = HEIGHT // 2
_PALETTE = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c")


def _hundredths(num: int, den: int) -> int:
    """num/den in hundredths, rounded half up."""
    return (200 * num + den) // (2 * den)


def _fmt(h: int) -> str:
    sign = "-" if h < 0 else ""
    h = abs(h)
    return f"{sign}{h // 100}.{h % 100:02d}"


class _Scale:
    def __init__(self, N: int):
        self.N = max(N, 1)
        self.span = WIDTH - 2 * MARGIN

    def x(self, p2: int) -> str:
        """Position of p2/2 on the axis; point p occupies the cell [p-1, p]."""
        return _fmt(_hundredths(MARGIN * 2 * self.N + (p2 - 1) * self.span, 2 * self.N))

    def offset(self, lo2: int, hi2: int) -> int:
        """Control-point offset (hundredths) for an arc spanning lo2/2 .. hi2/2."""
        return _hundredths(max(hi2 - lo2, 0) * (HEIGHT // 2 - MARGIN), 2 * self.N)


def _band_path(sc: _Scale, st) -> str:
    a, b = st.left, st.right
    sa = -1 if a.side == ABOVE else 1
    sb = -1 if b.side == ABOVE else 1
    # doubled positions of the outer cell edges of each base
    l1, l2 = 2 * a.lo - 1, 2 * a.hi + 1
    r1, r2 = 2 * b.lo - 1, 2 * b.hi + 1
    lo_o, hi_o = min(l1, r1), max(l2, r2)
    lo_i, hi_i = (l2, r1) if l2 <= r1 else (r2, l1)
    outer, inner = sc.offset(lo_o, hi_o), sc.offset(lo_i, hi_i)
    s_lo, s_hi = (sa, sb) if l1 <= r1 else (sb, sa)
    y = _AXIS_Y * 100

    def c(side: int, h: int) -> str:
        return _fmt(y + side * h)

    Y = _fmt(y)
    return (f"M {sc.x(lo_o)} {Y} C {sc.x(lo_o)} {c(s_lo, outer)} {sc.x(hi_o)} {c(s_hi, outer)} {sc.x(hi_o)} {Y} "
            f"L {sc.x(hi_i)} {Y} C {sc.x(hi_i)} {c(s_hi, inner)} {sc.x(lo_i)} {c(s_lo, inner)} {sc.x(lo_i)} {Y} Z")


def frame_metadata(s: StripSystem) -> dict:
    return json.loads(to_json(s))


def frame_svg(s: StripSystem, index: int = 0, label: str = "") -> str:
    sc = _Scale(s.N)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<metadata>{escape(json.dumps({'frame': index, 'system': frame_metadata(s)}, sort_keys=True))}</metadata>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for t, st in enumerate(s.strips):
        color = _PALETTE[t % len(_PALETTE)]
        out.append(f'<path d="{_band_path(sc, st)}" fill="{color}" fill-opacity="0.35" '
                   f'stroke="{color}" stroke-width="0.8" data-strip="{t}" data-type="{st.type}"/>')
    out.append(f'<line x1="{MARGIN}" y1="{_AXIS_Y}" x2="{WIDTH - MARGIN}" y2="{_AXIS_Y}" stroke="black" stroke-width="1"/>')
    # punctures sit after point x, i.e. at the right edge of cell x
    for x in s.punctures:
        out.append(f'<circle cx="{sc.x(2 * x + 1)}" cy="{_AXIS_Y}" r="3" fill="black"/>')
    if s.false_puncture is not None:
        cx = sc.x(2 * s.false_puncture + 1)
        out.append(f'<text x="{cx}" y="{_AXIS_Y + 4}" font-size="14" text-anchor="middle">*</text>')
    if label:
        out.append(f'<text x="{MARGIN}" y="{MARGIN}" font-size="12">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def frames_from_records(lines: Iterable[str]) -> list[tuple[StripSystem, str]]:
    """Systems carried by trace records (``system`` key), with a short label."""
    frames: list[tuple[StripSystem, str]] = []
    for raw in lines:
        raw = raw.strip()
        if not raw:
            continue
        rec = json.loads(raw)
        if not isinstance(rec, dict):
            raise ValueError("trace records must be JSON objects")
        sysj = rec.get("system")
        if sysj is None:
            continue
        label = rec.get("type", "")
        if rec.get("kind"):
            label = f"{label} {rec['kind']} d={rec.get('d', '')}".strip()
        frames.append((from_json(sysj), label))
    return frames


def render_trace(lines: Sequence[str] | Iterable[str], out_dir: str | Path, max_frames: int | None = None) -> list[Path]:
    """Write one SVG per frame as ``frame_0000.svg``, ``frame_0001.svg``, …"""
    frames = frames_from_records(lines)
    if max_frames is not None:
        frames = frames[:max_frames]
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for t, (s, label) in enumerate(frames):
        p = d / f"frame_{t:04d}.svg"
        p.write_text(frame_svg(s, t, label), encoding="utf-8")
        paths.append(p)
    return paths
