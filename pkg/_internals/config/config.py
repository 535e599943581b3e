"""
CONFIGURATION FILE FOR THE POPMATCH TOOLKIT
===========================================

Every tunable of the toolkit lives here: size guards, seeds, output format,
logging, and the command table the launcher builds its menu from.

SETUP INSTRUCTIONS:
1. Defaults work out of the box; nothing has to be edited to run launcher.py.
2. To override a guard or the log level without touching this file, copy
   the keys below into _internals/.env:
       POPMATCH_ORACLE_GUARD=8
       POPMATCH_MAX_CANDIDATES=1000000
       POPMATCH_LOG_LEVEL=INFO
       POPMATCH_SEED=0
3. Enable/disable commands by changing "enabled" in COMMANDS.

NOTE: guards exist to keep exhaustive searches desk-sized. Raising them is
allowed (or use --guard-override on the command line) but the oracle and the
reduction search are exponential.
"""

import os

try:
    from dotenv import load_dotenv
except ImportError:  # pragma: no cover - optional at import time
    load_dotenv = None

# ============================================================================
# SYSTEM CONFIGURATION
# ============================================================================

# config.py is at _internals/config/config.py, so BASE_DIR = root (up 3 levels)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

ENV_FILE = os.path.join(BASE_DIR, "_internals", ".env")

if load_dotenv is not None and os.path.exists(ENV_FILE):
    load_dotenv(ENV_FILE)

# Enable debug mode for troubleshooting
DEBUG = False


def _env_int(key, default):
    """Read an integer override from the environment, falling back to default."""
    raw = os.environ.get(key)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.strip())
    except ValueError:
        print(f"[config] Ignoring non-integer {key}={raw!r}")
        return default


# ============================================================================
# DATA FOLDER CONFIGURATION
# ============================================================================

DATA_PATHS = {
    "input": os.path.join(BASE_DIR, "input"),
    "output": os.path.join(BASE_DIR, "output"),
    "reports": os.path.join(BASE_DIR, "output", "reports"),
}

# ============================================================================
# ALGORITHM SETTINGS
# ============================================================================

SOLVER_SETTINGS = {
    # Print one line per demotion round (posts moved X->Y and Y->Z)
    "trace": False,
}

ORACLE_SETTINGS = {
    # Exhaustive enumeration is refused above these sizes
    "max_applicants": _env_int("POPMATCH_ORACLE_GUARD", 8),
    "max_posts": _env_int("POPMATCH_ORACLE_GUARD", 8),
    # Memory for one block of pairwise elections (int32 differences)
    "block_bytes": _env_int("POPMATCH_ORACLE_BLOCK_BYTES", 256 * 2 ** 20),
}

REDUCTION_SETTINGS = {
    # decide_reduced refuses formulas with 2^n * 3^m above this
    "max_candidates": _env_int("POPMATCH_MAX_CANDIDATES", 1_000_000),
    # Brute-force SAT used for fixtures
    "max_sat_vars": 20,
    # Shuffles tried by the random (2,2)-E3 generator before giving up
    "cnf_attempts": 10_000,
}

GEN_SETTINGS = {
    "default_seed": _env_int("POPMATCH_SEED", 0),
    "density": 0.6,
    "tie_fraction": 1.0,
    "random_applicants": 5,
    "random_posts": 5,
}

# ============================================================================
# OUTPUT & LOGGING
# ============================================================================

OUTPUT_SETTINGS = {
    # "text" for people, "tsv" for scripts and golden tests
    "format": "text",
    "report_folder": DATA_PATHS["reports"],
    "excel_sheet_names": {
        "solve": "Solve",
        "margin": "Margin",
        "oracle": "Oracle",
        "reduce": "Reduce",
        "gen": "Gen",
    },
}

LOGGING_SETTINGS = {
    "level": os.environ.get("POPMATCH_LOG_LEVEL", "WARNING").upper(),
    "format": "[popmatch v{version}] %(levelname)s %(name)s: %(message)s",
    # Level used for --trace output
    "trace_level": "INFO",
}

# ============================================================================
# COMMAND DEFINITIONS
# ============================================================================
# Each command entry has:
#   "name": what shows in the menu
#   "enabled": True to register the subcommand, False to hide it
#   "description": one-line help text

COMMANDS = {
    "solve": {
        "name": "Solve (one-sided ties)",
        "enabled": True,
        "description": "Decide whether a popular matching exists and print one",
    },
    "verify": {
        "name": "Verify a matching",
        "enabled": True,
        "description": "Report whether a matching is popular (exit 0 iff popular)",
    },
    "margin": {
        "name": "Unpopularity margin",
        "enabled": True,
        "description": "Print the unpopularity margin and a witness matching",
    },
    "oracle": {
        "name": "Brute-force oracle",
        "enabled": True,
        "description": "Enumerate every matching and print the popular ones",
    },
    "reduce": {
        "name": "(2,2)-E3-SAT reduction",
        "enabled": True,
        "description": "Build a popular-matching instance from a DIMACS formula",
    },
    "gen": {
        "name": "Instance generator",
        "enabled": True,
        "description": "Write a fixture, tight-family or random instance",
    },
}

# ============================================================================
# UTILITY FUNCTIONS
# ============================================================================

def get_enabled_commands():
    """Return only commands that are enabled"""
    return {k: v for k, v in COMMANDS.items() if v.get("enabled", False)}


def validate_paths():
    """Check the data folders. Returns list of missing paths."""
    return [p for p in DATA_PATHS.values() if not os.path.isdir(p)]


def ensure_dirs():
    """Create the data folders if they are missing."""
    for p in DATA_PATHS.values():
        os.makedirs(p, exist_ok=True)


def print_config_info():
    """Print configuration summary for debugging"""
    if DEBUG:
        print(f"Base Directory: {BASE_DIR}")
        print(f"Enabled Commands: {len(get_enabled_commands())}")
        print(f"Oracle guard: {ORACLE_SETTINGS['max_applicants']}x{ORACLE_SETTINGS['max_posts']}")
        print(f"Reduction guard: {REDUCTION_SETTINGS['max_candidates']}")
        missing = validate_paths()
        if missing:
            print("\nWARNING - Missing data folders:")
            for m in missing:
                print(f"  - {m}")
