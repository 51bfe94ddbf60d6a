"""
Regex-validated parsing of the text inputs: rationals, norms, lattices, group files.

What it accepts:
- rational: "p/q", "p", "-p/q" (ints are fine too); no floats, no spaces inside
- norm: "l1" | "linf" | {"dim": n, "forms": [["p/q", ...], ...]} | {"forms": [...]}
- lattice: "Zn" | "An" | "Dn" (dimension from --dim / "dim"), "Z3"-style names, or {"basis": [[...], ...]}
- group file: {"generators": [[[int, ...], ...], ...]}
"""

from __future__ import annotations
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from .errors import DimensionMismatch, JobError
from .exact import LinearForm, QVector

# --- core patterns ---
RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

# "Z", "Zn", "Z3", "A2", "An", "dn" ...
LATTICE_RE = re.compile(r"^\s*([ZAD])(n|\d+)?\s*$", re.IGNORECASE)

NORM_NAMES = {"l1": "l1", "linf": "linf", "l_inf": "linf", "l-inf": "linf", "max": "linf"}


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise JobError(f"job-error: not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = RATIONAL_RE.match(str(text))
    if not m:
        raise JobError(f"job-error: not a rational: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise JobError(f"job-error: zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_vector(values: Sequence) -> QVector:
    if not isinstance(values, (list, tuple)):
        raise JobError(f"job-error: expected a list of rationals, got {values!r}")
    return tuple(parse_rational(v) for v in values)


def parse_point(text: str) -> QVector:
    """"1/2,1/4" or "(1/2, 1/4)" -> vector."""
    body = text.strip().strip("()[]")
    return tuple(parse_rational(part) for part in body.split(",") if part.strip())


def _load_json(source: Union[str, Path, Dict, List]) -> Any:
    if isinstance(source, (dict, list)):
        return source
    path = Path(source)
    try:
        with open(path, "r") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise JobError(f"job-error: cannot read {path}: {e}")


def norm_name(text: str) -> Optional[str]:
    return NORM_NAMES.get(str(text).strip().lower())


def parse_forms(spec: Union[str, Dict]) -> List[LinearForm]:
    """Inline {"forms": [...]} or a path to such a JSON file."""
    data = _load_json(spec)
    if not isinstance(data, dict) or "forms" not in data:
        raise JobError("job-error: norm file needs a \"forms\" list")
    forms = [LinearForm(parse_vector(row)) for row in data["forms"]]
    if not forms:
        raise JobError("job-error: norm has no forms")
    dim = data.get("dim")
    if dim is not None and any(f.dim != int(dim) for f in forms):
        raise DimensionMismatch(f"dimension mismatch: forms do not live in R^{dim}")
    return forms


def parse_lattice(spec: Union[str, Dict], dim: Optional[int] = None) -> Dict[str, Any]:
    """-> {"kind": "Z"|"A"|"D", "dim": n} or {"kind": "basis", "basis": [...]}."""
    if isinstance(spec, dict):
        if "basis" not in spec:
            raise JobError("job-error: lattice object needs a \"basis\" list")
        return {"kind": "basis", "basis": [parse_vector(row) for row in spec["basis"]]}
    m = LATTICE_RE.match(str(spec))
    if not m:
        path = Path(str(spec))
        if path.suffix == ".json":
            return parse_lattice(_load_json(path), dim)
        raise JobError(f"job-error: unknown lattice {spec!r}")
    kind = m.group(1).upper()
    size = m.group(2)
    if size and size.lower() != "n":
        n = int(size)
        if dim is not None and int(dim) != n:
            raise DimensionMismatch(f"dimension mismatch: lattice {spec} vs dim {dim}")
    elif dim is not None:
        n = int(dim)
    else:
        raise JobError(f"job-error: lattice {spec!r} needs a dimension")
    return {"kind": kind, "dim": n}


def parse_generators(spec: Union[str, Dict]) -> List[List[List[int]]]:
    data = _load_json(spec)
    if not isinstance(data, dict) or not isinstance(data.get("generators"), list):
        raise JobError("job-error: group file needs a \"generators\" list")
    out = []
    for g in data["generators"]:
        try:
            out.append([[int(v) for v in row] for row in g])
        except (TypeError, ValueError):
            raise JobError(f"job-error: generator entries must be integers: {g!r}")
    return out
