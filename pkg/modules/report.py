"""
Run reports - JSON blocks for a decomposition and its analyses, plus file storage.

Every rational travels as a "p/q" string. A report is written whole: no merging
with whatever was on disk before.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import JobError
from .utils import fmt_q, fmt_vec, human_duration, jsonable

logger = logging.getLogger("report")

DEFAULT_REPORT = {
    "schema_version": "",
    "settings": {},
    "job": {},
    "norm": {},
    "orbits": [],
    "checks": None,
}


# ---------- blocks ----------

def norm_block(norm) -> Dict[str, Any]:
    return {
        "dim": norm.dim,
        "forms": jsonable([f.coeffs for f in norm.forms]),
        "symmetric": norm.symmetric,
        "simplicial": norm.simplicial,
    }


def space_block(space) -> Dict[str, Any]:
    return {
        "vertices": jsonable(list(space.vertices)),
        "v": list(space.v),
        "ell0": jsonable(space.ell0.coeffs),
        "near": [list(w) for w in space.near],
        "volume": fmt_q(space.volume),
    }


def decomposition_block(D) -> Dict[str, Any]:
    orbits = []
    for o in D.orbits:
        block = space_block(o.rep)
        block["stabilizer_order"] = o.stabilizer_order
        block["orbit_size"] = o.orbit_size
        orbits.append(block)
    return {
        "strategy": D.strategy,
        "seed": D.seed,
        "adapted_set": jsonable([c.form.coeffs for c in D.aha.classes]),
        "group_order": D.group.order,
        "orbits": orbits,
        "facet_graph": [
            {
                "orbit": e.orbit,
                "facet": e.facet,
                "neighbour": e.neighbour,
                "linear": [list(r) for r in e.symmetry.linear],
                "shift": list(e.symmetry.shift),
                "face_to_face": e.face_to_face,
            }
            for e in D.facet_graph
        ],
        "volume_sum": fmt_q(D.volume_sum()),
    }


def checks_block(record) -> Optional[Dict[str, Any]]:
    if record is None:
        return None
    return {
        "ok": record.ok,
        "trials": record.trials,
        "volume_sum": fmt_q(record.volume_sum),
        "orbit_volumes": [fmt_q(v) for v in record.orbit_volumes],
        "random_point_failures": jsonable(record.random_point_failures),
        "non_face_to_face": jsonable(record.non_face_to_face),
    }


def region_block(region) -> Dict[str, Any]:
    return {
        "center": list(region.center),
        "closed": region.closed,
        "pieces": [
            {"orbit": p.orbit, "vertices": jsonable(list(p.space.vertices)), "near": [list(w) for w in p.space.near]}
            for p in region.pieces
        ],
        "volume": fmt_q(region.volume),
        "extreme_points": jsonable(region.extreme_points()),
    }


def d_points_block(dset) -> Dict[str, Any]:
    return {
        "dimension": dset.dimension,
        "pieces": [{"orbit": o, "vertices": jsonable(list(P.vertices))} for o, P in zip(dset.orbits, dset.pieces)],
    }


# ---------- storage ----------

def read_report(path: Path) -> Dict[str, Any]:
    """Read a report file; missing keys are filled from DEFAULT_REPORT. A missing file is a JobError."""
    path = Path(path)
    if not path.exists():
        raise JobError(f"job-error: no report at {path}")
    try:
        with open(path, "r") as f:
            data = json.load(f)
        for key, default in DEFAULT_REPORT.items():
            if key not in data:
                data[key] = default
        return data
    except (json.JSONDecodeError, IOError) as e:
        logger.error(f"Failed to read report: {e}")
        return dict(DEFAULT_REPORT)


def write_report(path: Path, report: Dict[str, Any]) -> Path:
    """Write the report file. REPLACES the entire file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(jsonable(report), f, indent=2, sort_keys=True)
    logger.info("report written to %s", path)
    return path


def summary_lines(report: Dict[str, Any]) -> List[str]:
    """Short human summary of a report (CLI `report` subcommand)."""
    lines = [f"schema {report.get('schema_version', '?')}"]
    norm = report.get("norm") or {}
    if norm:
        lines.append(f"norm on R^{norm.get('dim')}: {len(norm.get('forms', []))} forms, symmetric={norm.get('symmetric')}")
    dec = report.get("decomposition") or {}
    if dec:
        lines.append(f"group order {dec.get('group_order')}, {len(dec.get('orbits', []))} orbit(s), volume sum {dec.get('volume_sum')}")
        for i, o in enumerate(dec.get("orbits", [])):
            lines.append(f"  orbit {i}: {len(o['vertices'])} vertices, |Stab|={o['stabilizer_order']}, |O|={o['orbit_size']}, vol={o['volume']}")
    checks = report.get("checks")
    if checks:
        lines.append(f"checks ok={checks.get('ok')}")
    cov = report.get("covering_radius")
    if cov:
        lines.append(f"covering radius {cov.get('value')} at {fmt_vec(cov.get('witness') or ())}")
    if report.get("d_points"):
        lines.append(f"D-point dimension {report['d_points'].get('dimension')}")
    if report.get("vertices") is not None:
        lines.append(f"{len(report['vertices'])} Voronoi vertices")
    timings = report.get("timings")
    if timings:
        lines.append("timings " + ", ".join(f"{k} {human_duration(v)}" for k, v in timings.items()))
    return lines
