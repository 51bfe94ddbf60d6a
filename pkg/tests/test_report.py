import json

import pytest

from modules.analysis import d_points, voronoi_region
from modules.errors import JobError
from modules.report import (
    DEFAULT_REPORT, checks_block, d_points_block, decomposition_block, norm_block, read_report,
    region_block, summary_lines, write_report,
)


def test_norm_block(linf2):
    block = norm_block(linf2)
    assert block["dim"] == 2
    assert sorted(block["forms"]) == [["-1", "0"], ["0", "-1"], ["0", "1"], ["1", "0"]]
    assert block["symmetric"] is True


def test_decomposition_block(z2_linf):
    block = decomposition_block(z2_linf)
    assert block["strategy"] == "linf"
    assert block["group_order"] == 8
    assert block["volume_sum"] == "1"
    (orbit,) = block["orbits"]
    assert orbit["volume"] == "1/4"
    assert (orbit["stabilizer_order"], orbit["orbit_size"]) == (2, 4)
    assert len(orbit["vertices"]) == 3
    assert all(edge["face_to_face"] for edge in block["facet_graph"])


def test_checks_block(z2_l1):
    block = checks_block(z2_l1.checks)
    assert block["ok"] is True
    assert block["volume_sum"] == "1"
    assert block["random_point_failures"] == []
    assert checks_block(None) is None


def test_region_and_d_points_blocks(z2_l1):
    region = region_block(voronoi_region(z2_l1, (0, 0)))
    assert region["volume"] == "1"
    assert region["closed"] is True
    assert len(region["pieces"]) == 4
    assert sorted(region["extreme_points"]) == [["-1/2", "-1/2"], ["-1/2", "1/2"], ["1/2", "-1/2"], ["1/2", "1/2"]]
    dblock = d_points_block(d_points(z2_l1))
    assert dblock["dimension"] == 0
    assert all(len(p["vertices"]) == 1 for p in dblock["pieces"])


def test_write_and_read(tmp_path, z2_linf):
    report = {"schema_version": "1.0", "decomposition": decomposition_block(z2_linf)}
    path = write_report(tmp_path / "nested" / "run.json", report)
    assert path.exists()
    loaded = read_report(path)
    assert loaded["decomposition"]["orbits"][0]["volume"] == "1/4"
    # missing keys come from the defaults
    assert loaded["orbits"] == [] and loaded["checks"] is None
    assert json.loads(path.read_text())["schema_version"] == "1.0"


def test_write_replaces_file(tmp_path):
    path = tmp_path / "run.json"
    write_report(path, {"schema_version": "1.0", "extra": 1})
    write_report(path, {"schema_version": "1.1"})
    assert "extra" not in read_report(path)


def test_read_missing_or_broken(tmp_path):
    with pytest.raises(JobError):
        read_report(tmp_path / "nope.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert read_report(broken) == DEFAULT_REPORT


def test_summary_lines(z2_linf):
    report = {
        "schema_version": "1.0",
        "norm": norm_block(z2_linf.norm),
        "decomposition": decomposition_block(z2_linf),
        "checks": checks_block(z2_linf.checks),
        "covering_radius": {"value": "1/2", "witness": ["1/2", "0"]},
        "vertices": [["-1/2", "-1/2"]] * 4,
    }
    lines = summary_lines(report)
    assert lines[0] == "schema 1.0"
    assert "group order 8, 1 orbit(s), volume sum 1" in lines
    assert any(line.startswith("covering radius 1/2") for line in lines)
    assert lines[-1] == "4 Voronoi vertices"
    assert "covering radius 1/2 at (1/2, 0)" in lines
    report["timings"] = {"decompose": 75.0, "verify": 0.5}
    assert summary_lines(report)[-1] == "timings decompose 1m 15s, verify 0.50s"
