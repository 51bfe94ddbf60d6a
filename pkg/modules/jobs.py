"""
Job model and the task runner shared by the CLI and the service.

Tasks run in dependency order: decompose -> verify -> analyses. Analyses need a
decomposition whose checks passed.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, field_validator

from .errors import DimensionMismatch, JobError, VerificationFailed
from .exact import LinearForm
from .lattices import (
    LatticeBasis, an_basis, conjecture_check, covolume, dn_basis, gram_matrix,
    pullback_norm, to_ambient, zn_basis,
)
from .norms import STRATEGIES, PolyhedralNorm, l1_forms, linf_forms, validate_norm
from .parser import norm_name, parse_forms, parse_generators, parse_lattice
from . import report as reports
from .utils import fmt_q, human_duration, jsonable, timed

logger = logging.getLogger("jobs")

TASKS = ("decompose", "covering-radius", "voronoi", "d-points", "vertices", "svg", "conjecture")
DEFAULT_TASKS = ["decompose", "covering-radius", "voronoi", "d-points", "vertices"]


class JobSpec(BaseModel):
    dim: Optional[int] = None
    norm: Union[str, Dict[str, Any]] = "linf"
    lattice: Union[str, Dict[str, Any]] = "Zn"
    adapted: str = "auto"
    group: Optional[Union[str, Dict[str, Any]]] = None
    tasks: List[str] = list(DEFAULT_TASKS)
    seed: Optional[int] = None
    trials: Optional[int] = None

    @field_validator("dim")
    @classmethod
    def _dim_positive(cls, v):
        if v is not None and v < 1:
            raise ValueError("dim must be >= 1")
        return v

    @field_validator("adapted")
    @classmethod
    def _known_strategy(cls, v):
        v = v.strip().lower()
        if v not in STRATEGIES:
            raise ValueError(f"adapted must be one of {', '.join(STRATEGIES)}")
        return v

    @field_validator("tasks")
    @classmethod
    def _known_tasks(cls, v):
        unknown = [t for t in v if t not in TASKS]
        if unknown:
            raise ValueError(f"unknown task(s): {', '.join(unknown)}")
        return v

    @field_validator("trials")
    @classmethod
    def _trials_non_negative(cls, v):
        if v is not None and v < 0:
            raise ValueError("trials must be >= 0")
        return v


@dataclass
class JobResult:
    report: Dict[str, Any]
    svg: Optional[str] = None
    decomposition: Any = None
    files: List[Path] = field(default_factory=list)


# ---------- setup ----------

def resolve_lattice(job: JobSpec) -> LatticeBasis:
    if isinstance(job.lattice, dict):
        parsed = parse_lattice(job.lattice, job.dim)
    else:
        dim = job.dim
        if dim is None and isinstance(job.norm, dict) and job.norm.get("forms"):
            dim = len(job.norm["forms"][0])
        parsed = parse_lattice(job.lattice, dim)
    if parsed["kind"] == "basis":
        basis = LatticeBasis("basis", tuple(parsed["basis"]))
        if job.dim is not None and basis.dim != job.dim:
            raise DimensionMismatch(f"dimension mismatch: basis of rank {basis.dim} vs dim {job.dim}")
        return basis
    builders = {"Z": zn_basis, "A": an_basis, "D": dn_basis}
    return builders[parsed["kind"]](parsed["dim"])


def ambient_forms(job: JobSpec, m: int) -> List[LinearForm]:
    if isinstance(job.norm, str):
        name = norm_name(job.norm)
        if name == "l1":
            return l1_forms(m)
        if name == "linf":
            return linf_forms(m)
        forms = parse_forms(job.norm)
    else:
        forms = parse_forms(job.norm)
    if forms[0].dim != m:
        raise DimensionMismatch(f"dimension mismatch: norm on R^{forms[0].dim}, lattice in R^{m}")
    return forms


def resolve_norm(job: JobSpec) -> Tuple[PolyhedralNorm, LatticeBasis]:
    basis = resolve_lattice(job)
    forms = ambient_forms(job, basis.ambient_dim)
    ambient = validate_norm(forms)
    return pullback_norm(ambient, basis), basis


def resolve_group(job: JobSpec, norm: PolyhedralNorm):
    from .symmetry import group_from_generators, point_group
    if job.group is None:
        return point_group(norm)
    return group_from_generators(norm, parse_generators(job.group))


def norm_slug(job: JobSpec) -> str:
    """File-name part for the norm: the named norm, a norm file's stem, or "custom"."""
    if isinstance(job.norm, dict):
        return "custom"
    return norm_name(job.norm) or Path(job.norm).stem or "custom"


def lattice_block(basis: LatticeBasis) -> Dict[str, Any]:
    return {
        "name": basis.name,
        "basis": jsonable(list(basis.vectors)),
        "gram": jsonable(gram_matrix(basis)),
        "covolume": str(covolume(basis)),
    }


# ---------- runner ----------

def run(job: JobSpec, out_dir: Optional[Path] = None) -> JobResult:
    from config import DEFAULT_SEED, DEFAULT_TRIALS, REPORT_SCHEMA_VERSION, effective_settings
    from .analysis import covering_radius, d_points, expand_pieces, voronoi_region, voronoi_vertices
    from .vn_core import decompose, verify

    seed = DEFAULT_SEED if job.seed is None else job.seed
    trials = DEFAULT_TRIALS if job.trials is None else job.trials
    timings: Dict[str, float] = {}

    norm, basis = resolve_norm(job)
    report: Dict[str, Any] = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "settings": effective_settings(),
        "job": jsonable(job.model_dump()),
        "lattice": lattice_block(basis),
        "norm": reports.norm_block(norm),
    }
    result = JobResult(report)
    if not job.tasks:
        return result

    group = resolve_group(job, norm)
    with timed(timings, "decompose"):
        D = decompose(norm, job.adapted, group, seed)
    result.decomposition = D
    report["decomposition"] = reports.decomposition_block(D)

    with timed(timings, "verify"):
        record = verify(D, trials, seed)
    report["checks"] = reports.checks_block(record)
    report["timings"] = timings
    if not record.ok:
        raise VerificationFailed("verification failed: decomposition checks did not pass", witness=report["checks"])

    origin = tuple([0] * norm.dim)
    region = None
    if "covering-radius" in job.tasks:
        with timed(timings, "covering-radius"):
            value, witness = covering_radius(D)
        report["covering_radius"] = {
            "value": fmt_q(value),
            "witness": jsonable(witness),
            "ambient_witness": jsonable(to_ambient(basis, witness)),
        }
    if "voronoi" in job.tasks or "svg" in job.tasks:
        with timed(timings, "voronoi"):
            region = voronoi_region(D, origin, closed=True)
            opened = voronoi_region(D, origin, closed=False)
        report["voronoi"] = {
            "closed": reports.region_block(region),
            "open": reports.region_block(opened),
            "non_degenerate": region.volume == opened.volume,
        }
    dset = None
    if "d-points" in job.tasks or "svg" in job.tasks:
        with timed(timings, "d-points"):
            dset = d_points(D)
        report["d_points"] = reports.d_points_block(dset)
    if "vertices" in job.tasks:
        with timed(timings, "vertices"):
            report["vertices"] = jsonable(voronoi_vertices(D, origin))
    if "conjecture" in job.tasks:
        with timed(timings, "conjecture"):
            report["conjecture"] = jsonable(conjecture_check(D, basis))
    if "svg" in job.tasks:
        if norm.dim != 2:
            raise JobError("job-error: svg task needs n = 2")
        from config import SVG_VIEWPORT
        from .svg import render
        view = SVG_VIEWPORT
        pieces = expand_pieces(D, list(zip(dset.orbits, dset.pieces)), (-view, -view), (view, view))
        result.svg = render(D, region, pieces, view)

    if out_dir is not None:
        out_dir = Path(out_dir)
        name = f"{basis.name}-{norm_slug(job)}-seed{seed}"
        if result.svg is not None:
            svg_path = out_dir / f"{name}.svg"
            svg_path.parent.mkdir(parents=True, exist_ok=True)
            svg_path.write_text(result.svg)
            result.files.append(svg_path)
            report["svg"] = str(svg_path)
        result.files.insert(0, reports.write_report(out_dir / f"{name}.json", report))
    logger.info("job finished: %s", ", ".join(f"{k} {human_duration(v)}" for k, v in timings.items()))
    return result
