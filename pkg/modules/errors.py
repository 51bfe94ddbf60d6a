"""
Error taxonomy for vnspace.

Every failure the library raises is a VNSpaceError carrying:
- kind: short machine-readable tag (also the JSON "error" field)
- message: human text
- witness: optional payload (a point, a ray, a class index, a record)
- exit_code: process exit status used by the CLI

Probe failures inside find_initial are NOT exceptions (see vn_core.ProbeFailure);
callers retry those.
"""

from __future__ import annotations
from typing import Any, Dict, Optional


class VNSpaceError(Exception):
    kind = "error"
    exit_code = 1

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> Dict[str, Any]:
        from .utils import jsonable
        out: Dict[str, Any] = {"error": self.kind, "message": self.message}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        return out


class JobError(VNSpaceError):
    kind = "job-error"
    exit_code = 2


class DimensionMismatch(VNSpaceError):
    kind = "dimension mismatch"
    exit_code = 3


class DegenerateForm(VNSpaceError):
    kind = "degenerate form"
    exit_code = 4


class DegenerateNorm(VNSpaceError):
    kind = "degenerate norm"
    exit_code = 4


class NotPositiveDefinite(VNSpaceError):
    kind = "not positive definite"
    exit_code = 4


class IncompatibleStrategy(VNSpaceError):
    kind = "incompatible strategy"
    exit_code = 5


class UnboundedPolyhedron(VNSpaceError):
    kind = "unbounded"
    exit_code = 6


class DegeneratePolytope(VNSpaceError):
    kind = "degenerate polytope"
    exit_code = 6


class OnWall(VNSpaceError):
    kind = "on-wall"
    exit_code = 7

    def __init__(self, message: str, class_index: int, witness: Any = None):
        super().__init__(message, witness)
        self.class_index = class_index


class NotAdapted(VNSpaceError):
    kind = "AHA not adapted"
    exit_code = 8


class InitialPointFailed(VNSpaceError):
    kind = "initial point failed"
    exit_code = 9


class AdjacencyProbeFailed(VNSpaceError):
    kind = "adjacency probe failed"
    exit_code = 9


class NonFaceToFace(VNSpaceError):
    kind = "non face-to-face"
    exit_code = 10


class VerificationFailed(VNSpaceError):
    kind = "verification failed"
    exit_code = 11


def exit_code_for(exc: Optional[BaseException]) -> int:
    if exc is None:
        return 0
    if isinstance(exc, VNSpaceError):
        return exc.exit_code
    return 1
