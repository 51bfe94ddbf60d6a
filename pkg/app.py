from __future__ import annotations

import logging
import time
from typing import Any, Dict, List, Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ValidationError, field_validator
from starlette.concurrency import run_in_threadpool

from config import LOG_LEVEL, effective_settings
from modules.errors import VNSpaceError
from modules.jobs import JobSpec, run
from modules.lattice_enum import closest_lattice_points
from modules.norms import l1_forms, linf_forms, validate_norm
from modules.parser import norm_name, parse_forms, parse_point, parse_rational
from modules.symmetry import point_group
from modules.utils import fmt_q, jsonable

app = FastAPI(title="vnspace")

# ---------------- Logging + middleware ----------------
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
)
logger = logging.getLogger("vnspace")
logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))

@app.middleware("http")
async def timing_and_errors(request, call_next):
    start = time.time()
    try:
        resp = await call_next(request)
        return resp
    except Exception:
        logger.exception("Unhandled error on %s %s", request.method, request.url.path)
        raise
    finally:
        dur_ms = int((time.time() - start) * 1000)
        logger.info("%s %s -> %dms", request.method, request.url.path, dur_ms)

@app.exception_handler(VNSpaceError)
async def vnspace_error(request, exc: VNSpaceError):
    return JSONResponse(status_code=422, content=exc.to_dict())


# ---------------- Request models ----------------
class NormSpec(BaseModel):
    """Named norm ("l1" / "linf" with dim) or explicit forms as "p/q" strings."""
    name: Optional[str] = None
    dim: Optional[int] = None
    forms: Optional[List[List[Union[str, int]]]] = None

    @field_validator("name")
    @classmethod
    def _known_name(cls, v):
        if v is not None and norm_name(v) is None:
            raise ValueError("name must be l1 or linf")
        return v

    def resolve(self):
        if self.forms:
            return validate_norm(parse_forms({"forms": self.forms, "dim": self.dim}))
        if self.name is None or self.dim is None:
            raise HTTPException(400, "norm needs either forms or name + dim")
        forms = l1_forms(self.dim) if norm_name(self.name) == "l1" else linf_forms(self.dim)
        return validate_norm(forms)


class ClosestRequest(BaseModel):
    norm: NormSpec
    point: Union[str, List[Union[str, int]]]

    def vector(self):
        if isinstance(self.point, str):
            return parse_point(self.point)
        return tuple(parse_rational(c) for c in self.point)


# ---------------- Endpoints ----------------
@app.get("/health")
def health():
    return {"ok": True}


@app.get("/api/config")
def api_config():
    return effective_settings()


@app.post("/api/norm/validate")
async def api_norm_validate(spec: NormSpec):
    norm = spec.resolve()
    group = await run_in_threadpool(point_group, norm)
    return {
        "dim": norm.dim,
        "forms": jsonable([f.coeffs for f in norm.forms]),
        "symmetric": norm.symmetric,
        "simplicial": norm.simplicial,
        "group_order": group.order,
    }


@app.post("/api/closest")
async def api_closest(req: ClosestRequest):
    norm = req.norm.resolve()
    x = req.vector()
    if len(x) != norm.dim:
        raise HTTPException(400, f"point has {len(x)} coordinates, norm lives in R^{norm.dim}")
    d, points = await run_in_threadpool(closest_lattice_points, x, norm)
    return {"distance": fmt_q(d), "closest": [list(p) for p in points]}


@app.post("/api/run")
async def api_run(payload: Dict[str, Any]):
    try:
        job = JobSpec(**payload)
    except ValidationError as e:
        raise HTTPException(400, e.errors()[0]["msg"])
    result = await run_in_threadpool(run, job)
    body = jsonable(result.report)
    if result.svg is not None:
        body["svg_text"] = result.svg
    return body
