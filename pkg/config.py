"""
vnspace config loader (env + tracked JSON)

- Local overrides: from .env (NOT tracked)
- Solver knobs: from settings.json (tracked in repo); env can override
- Nothing here changes a result's meaning; knobs only steer search budgets,
  seeds, logging and output locations.
"""

from __future__ import annotations
from dotenv import load_dotenv
from pathlib import Path

load_dotenv(Path(__file__).parent / ".env")

import os, json

BASE_DIR = Path(__file__).parent
SETTINGS_PATH = BASE_DIR / "settings.json"

def _load_settings() -> dict:
    try:
        if SETTINGS_PATH.exists():
            with open(SETTINGS_PATH, "r") as f:
                return json.load(f) or {}
    except Exception:
        pass
    return {}

_SETTINGS = _load_settings()

def _knob(env_name: str, json_path: str, default):
    """
    env overrides -> settings.json -> default
    json_path like "search.initial_retry_budget"
    """
    if env_name in os.environ and os.environ[env_name] != "":
        val = os.environ[env_name]
        try:
            if isinstance(default, bool): return val == "1" or val.lower() in ("true", "yes", "on")
            if isinstance(default, int): return int(val)
            return val
        except Exception:
            return val
    cur = _SETTINGS
    for part in json_path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            cur = None
            break
        cur = cur[part]
    return cur if cur is not None else default

# Logging
LOG_LEVEL = str(_knob("LOG_LEVEL", "log_level", "INFO")).upper()

# Randomness (every random choice goes through random.Random(seed))
DEFAULT_SEED   = int(_knob("DEFAULT_SEED",   "search.default_seed", 0))
DEFAULT_TRIALS = int(_knob("DEFAULT_TRIALS", "search.default_trials", 20))

# Search budgets
INITIAL_RETRY_BUDGET     = int(_knob("INITIAL_RETRY_BUDGET",     "search.initial_retry_budget", 100))
PROBE_MAX_HALVINGS       = int(_knob("PROBE_MAX_HALVINGS",       "search.probe_max_halvings", 64))
RANDOM_DENOMINATOR_POWER = int(_knob("RANDOM_DENOMINATOR_POWER", "search.random_denominator_power", 5))
MAX_GROUP_ORDER          = int(_knob("MAX_GROUP_ORDER",          "search.max_group_order", 46080))

# Output
OUTPUT_DIR            = str(_knob("OUTPUT_DIR",            "output.dir", "out"))
SVG_VIEWPORT          = int(_knob("SVG_VIEWPORT",          "output.svg_viewport", 2))
REPORT_SCHEMA_VERSION = str(_knob("REPORT_SCHEMA_VERSION", "output.report_schema_version", "1.0"))

def effective_settings() -> dict:
    return {
        "log_level": LOG_LEVEL,
        "search": {
            "default_seed": DEFAULT_SEED,
            "default_trials": DEFAULT_TRIALS,
            "initial_retry_budget": INITIAL_RETRY_BUDGET,
            "probe_max_halvings": PROBE_MAX_HALVINGS,
            "random_denominator_power": RANDOM_DENOMINATOR_POWER,
            "max_group_order": MAX_GROUP_ORDER,
        },
        "output": {
            "dir": OUTPUT_DIR,
            "svg_viewport": SVG_VIEWPORT,
            "report_schema_version": REPORT_SCHEMA_VERSION,
        },
    }
