"""
Utility functions for vnspace.
"""

from __future__ import annotations
import time
from contextlib import contextmanager
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, Sequence


def fmt_q(q) -> str:
    """Fraction -> "p/q" (or "p")."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_vec(v: Sequence) -> str:
    """(1/2, 0) -> "(1/2, 0)"."""
    return "(" + ", ".join(fmt_q(c) for c in v) + ")"


def jsonable(obj: Any) -> Any:
    """Recursively convert Fractions to "p/q" strings and containers to lists/dicts."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return fmt_q(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return [jsonable(x) for x in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "coeffs"):
        return jsonable(obj.coeffs)
    if hasattr(obj, "vertices") and not is_dataclass(obj):
        return jsonable(obj.vertices)
    if is_dataclass(obj):
        return jsonable(asdict(obj))
    return str(obj)


def human_duration(seconds: float) -> str:
    """1.234 -> "1.23s", 75 -> "1m 15s"."""
    if seconds < 60:
        return f"{seconds:.2f}s"
    minutes = int(seconds // 60)
    secs = int(seconds % 60)
    if minutes < 60:
        return f"{minutes}m {secs}s" if secs else f"{minutes}m"
    hours = minutes // 60
    minutes = minutes % 60
    return f"{hours}h {minutes}m" if minutes else f"{hours}h"


@contextmanager
def timed(timings: Dict[str, float], name: str) -> Iterator[None]:
    """Record wall time of a block under timings[name] (seconds)."""
    t0 = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = round(time.perf_counter() - t0, 4)
