"""
vnspace command line.

  decompose  enumerate VN-spaces up to symmetry and verify them
  analyze    decompose, then covering radius, Voronoi region, D-points, vertices
  check      decompose + the conjecture harness against the Euclidean Voronoi cell
  report     print a summary of a saved JSON report

Exit status is the failing error's exit code (0 on success).
"""

from __future__ import annotations
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config import LOG_LEVEL, OUTPUT_DIR
from modules.errors import JobError, VNSpaceError, exit_code_for
from modules.report import read_report, summary_lines

logger = logging.getLogger("cli")

SUBCOMMAND_TASKS = {
    "decompose": ["decompose"],
    "analyze": ["decompose", "covering-radius", "voronoi", "d-points", "vertices"],
    "check": ["decompose", "conjecture"],
}


def _job_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--job", help="job file (JSON); flags given explicitly override its fields")
    p.add_argument("--norm", help="l1 | linf | path to a norm JSON file")
    p.add_argument("--lattice", help="Zn | An | Dn | path to a basis JSON file")
    p.add_argument("--dim", type=int, help="lattice rank n")
    p.add_argument("--adapted", choices=["auto", "generic", "symmetric", "l1", "linf"], help="adapted-set strategy")
    p.add_argument("--group", help="group generator file (JSON), bypasses the point-group search")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, help="random interior points per orbit during verification")
    p.add_argument("--svg", action="store_true", help="also write an SVG figure (n = 2)")
    p.add_argument("--out", help=f"output directory (default {OUTPUT_DIR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vnspace", description="VN-space tilings of lattices under polyhedral norms")
    parser.add_argument("--log-level", default=LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("decompose", "analyze", "check"):
        _job_arguments(sub.add_parser(name))
    rep = sub.add_parser("report")
    rep.add_argument("path", help="report JSON file")
    return parser


def job_from_args(args: argparse.Namespace):
    from modules.jobs import JobSpec
    from pydantic import ValidationError

    data = {}
    if args.job:
        try:
            with open(args.job, "r") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise JobError(f"job-error: cannot read {args.job}: {e}")
    for key in ("norm", "lattice", "dim", "adapted", "group", "seed", "trials"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    tasks = list(SUBCOMMAND_TASKS[args.command])
    if args.svg:
        tasks.append("svg")
    if args.command == "analyze" and data.get("tasks"):
        tasks = list(dict.fromkeys(["decompose"] + list(data["tasks"]) + (["svg"] if args.svg else [])))
    data["tasks"] = tasks
    try:
        return JobSpec(**data)
    except ValidationError as e:
        raise JobError(f"job-error: {e.errors()[0]['msg']}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
    )
    try:
        if args.command == "report":
            for line in summary_lines(read_report(Path(args.path))):
                print(line)
            return 0
        from modules.jobs import run
        job = job_from_args(args)
        result = run(job, Path(args.out or OUTPUT_DIR))
        for path in result.files:
            print(path)
        if args.command == "check" and "conjecture" in result.report:
            print(json.dumps(result.report["conjecture"], indent=2))
        return 0
    except VNSpaceError as e:
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
