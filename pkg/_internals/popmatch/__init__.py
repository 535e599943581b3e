"""
popmatch - popular matchings with one-sided ties
================================================

Solver, exact verifier, brute-force oracle and the SAT gadget reduction for
bipartite instances where applicants rank strictly and posts either hold all
their neighbors in a single tie or rank them strictly.
"""

import sys
from pathlib import Path

# Import config from the sibling config folder
_CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"
if str(_CONFIG_DIR) not in sys.path:
    sys.path.insert(0, str(_CONFIG_DIR))

__version__ = "1.0"

from popmatch.errors import (  # noqa: E402
    NO_POPULAR_MATCHING,
    NoPopularMatching,
    PopMatchError,
)
from popmatch.core import Instance, Matching, LAST_RESORT  # noqa: E402

__all__ = [
    "__version__",
    "Instance",
    "Matching",
    "LAST_RESORT",
    "NO_POPULAR_MATCHING",
    "NoPopularMatching",
    "PopMatchError",
]
