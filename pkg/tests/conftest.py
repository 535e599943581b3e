import logging
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "_internals", "config"))
sys.path.insert(0, os.path.join(ROOT, "_internals"))

from popmatch import gen  # noqa: E402
from popmatch.core import Matching  # noqa: E402

# fig1_right: two popular matchings and their non-popular union
RED = [("a1", "b1"), ("a2", "b2"), ("a3", "b3"), ("x1", "y2"), ("x2", "y1")]
GREEN = [("a1", "b2"), ("a2", "b1"), ("a3", "b3"), ("x1", "y1"), ("x2", "y2")]
UNION = [("a1", "b1"), ("a2", "b2"), ("a3", "b3"), ("x1", "y1"), ("x2", "y2")]


@pytest.fixture
def top_left():
    return gen.fig1_top_left()


@pytest.fixture
def bottom_left():
    return gen.fig1_bottom_left()


@pytest.fixture
def middle():
    return gen.fig1_middle()


@pytest.fixture
def right():
    return gen.fig1_right()


def matching_by_name(inst, pairs):
    """Matching from (applicant name, post name) pairs."""
    return Matching.from_pairs(
        inst.num_applicants,
        [(inst.applicant_index(a), inst.post_index(b)) for a, b in pairs],
    )


def posts_by_name(inst, names):
    return frozenset(inst.post_index(n) for n in names)


def edges_by_name(inst, pairs):
    return {(inst.applicant_index(a), inst.post_index(b)) for a, b in pairs}


@pytest.fixture(autouse=True)
def _restore_logging():
    # cli.main reconfigures the root logger onto the captured stderr
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
