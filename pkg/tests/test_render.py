import json
import re

from artifact.render import frame_svg, frames_from_records, render_trace
from artifact.strip_system import StripSystem, from_json, initial_iis, to_json

from strip_fixtures import example_lamination


def metadata(svg: str) -> dict:
    return json.loads(re.search(r"<metadata>(.*)</metadata>", svg).group(1).replace("&quot;", '"'))


def test_empty_system_is_axis_only():
    svg = frame_svg(StripSystem(0, ()))
    assert "<line" in svg and "<path" not in svg and "<circle" not in svg


def test_frame_contents():
    s = initial_iis(example_lamination())
    svg = frame_svg(s, 0, "start")
    assert svg.count("<path") == s.r
    assert svg.count("<circle") == len(s.punctures)
    assert ">*</text>" in svg
    assert from_json(metadata(svg)["system"]) == s
    assert frame_svg(s, 0, "start") == svg


def test_frames_from_records(tmp_path):
    s = initial_iis(example_lamination())
    lines = [json.dumps({"type": "start", "system": json.loads(to_json(s))}), json.dumps({"type": "final"}), ""]
    assert len(frames_from_records(lines)) == 1
    paths = render_trace(lines, tmp_path)
    assert [p.name for p in paths] == ["frame_0000.svg"]
