"""
Instance fixtures and generators
================================

- the four small worked instances (`fixture(name)`)
- the chained family that forces n+1 solver iterations (`tight_family(n)`)
- seeded random instances, single-tie, mixed or all-strict
"""

import logging
from typing import Callable, Dict, List, Optional

import numpy as np

import config

from popmatch.core import SINGLE_TIE, Instance, Matching, Strict

log = logging.getLogger(__name__)


def _named(prefs: Dict[str, List[str]], posts: List[str]) -> Instance:
    applicants = list(prefs)
    index = {p: j for j, p in enumerate(posts)}
    return Instance(
        num_applicants=len(applicants),
        num_posts=len(posts),
        prefs=tuple(tuple(index[p] for p in prefs[a]) for a in applicants),
        applicant_names=tuple(applicants),
        post_names=tuple(posts),
    )


# ============================================================================
# FIXTURES
# ============================================================================

def fig1_top_left() -> Instance:
    return _named({
        "a1": ["b1", "b2"],
        "a2": ["b1", "b2"],
        "a3": ["b1", "b2", "b3"],
    }, ["b1", "b2", "b3"])


def fig1_bottom_left() -> Instance:
    # no popular matching
    return _named({
        "a1": ["b1", "b2", "b3"],
        "a2": ["b1", "b2", "b3"],
        "a3": ["b1", "b2", "b3"],
    }, ["b1", "b2", "b3"])


def fig1_middle() -> Instance:
    return _named({
        "a0": ["b0", "b3"],
        "a1": ["b1", "b2"],
        "a2": ["b1", "b2"],
        "a3": ["b1", "b0", "b2"],
    }, ["b0", "b1", "b2", "b3"])


def fig1_right() -> Instance:
    return _named({
        "a1": ["b1", "b2"],
        "a2": ["b1", "y1", "b2"],
        "a3": ["b1", "b2", "b3"],
        "x1": ["y1", "y2", "y3"],
        "x2": ["y1", "y2"],
    }, ["b1", "b2", "b3", "y1", "y2", "y3"])


FIXTURES: Dict[str, Callable[[], Instance]] = {
    "fig1_top_left": fig1_top_left,
    "fig1_bottom_left": fig1_bottom_left,
    "fig1_middle": fig1_middle,
    "fig1_right": fig1_right,
}


def fixture_names() -> List[str]:
    return list(FIXTURES)


def fixture(name: str) -> Instance:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None


# ============================================================================
# TIGHT FAMILY
# ============================================================================

def tight_family(n: int) -> Instance:
    """
    2n+1 applicants, 2n+2 posts, 6n+1 edges; the solver needs n+1 iterations.

        a0          : f0 > s0
        a_i, a_i'   : f_i > f_{i-1} > s_i      for 1 <= i < n
        a_n         : f_n > f_{n-1} > s_n
        a_n'        : f_n > s_n

    Iteration k demotes s_{k-1} to Z; that pushes a_{k-1}, a_{k-1}' off f_{k-1},
    which then drops into Y and becomes the next target of a_k and a_k'.
    """
    if n < 1:
        raise ValueError("tight_family needs n >= 1")
    posts = [f"f{i}" for i in range(n + 1)] + [f"s{i}" for i in range(n + 1)]
    prefs: Dict[str, List[str]] = {"a0": ["f0", "s0"]}
    for i in range(1, n + 1):
        chained = [f"f{i}", f"f{i - 1}", f"s{i}"]
        prefs[f"a{i}"] = chained
        prefs[f"a{i}'"] = chained if i < n else [f"f{i}", f"s{i}"]
    return _named(prefs, posts)


def tight_family_popular(n: int) -> Matching:
    """{(a0,f0), (a_i,f_i), (a_i',s_i)}, a popular matching of tight_family(n)."""
    inst = tight_family(n)
    pairs = [(inst.applicant_index("a0"), inst.post_index("f0"))]
    for i in range(1, n + 1):
        pairs.append((inst.applicant_index(f"a{i}"), inst.post_index(f"f{i}")))
        pairs.append((inst.applicant_index(f"a{i}'"), inst.post_index(f"s{i}")))
    return Matching.from_pairs(inst.num_applicants, pairs)


# ============================================================================
# RANDOM INSTANCES
# ============================================================================

def random_instance(seed: Optional[int] = None,
                    n_applicants: Optional[int] = None,
                    n_posts: Optional[int] = None,
                    density: Optional[float] = None,
                    tie_fraction: Optional[float] = None) -> Instance:
    """
    Seeded random instance.

    Each applicant lists a random-permutation prefix of the posts, of length
    Binomial(n_posts, density) but at least 1. Each post holds a single tie
    with probability tie_fraction, otherwise a random strict order of its
    neighbors.
    """
    settings = config.GEN_SETTINGS
    seed = settings["default_seed"] if seed is None else seed
    n_applicants = settings["random_applicants"] if n_applicants is None else n_applicants
    n_posts = settings["random_posts"] if n_posts is None else n_posts
    density = settings["density"] if density is None else density
    tie_fraction = settings["tie_fraction"] if tie_fraction is None else tie_fraction

    if n_applicants < 0 or n_posts < 1:
        raise ValueError("need at least one post and a non-negative applicant count")
    if not 0.0 <= tie_fraction <= 1.0:
        raise ValueError(f"tie_fraction must be in [0, 1], got {tie_fraction}")
    if not 0.0 < density <= 1.0 or density * n_posts < 1.0:
        raise ValueError(
            f"density {density} is too low to give every applicant a neighbor among {n_posts} posts")

    rng = np.random.default_rng(seed)
    prefs = []
    for _ in range(n_applicants):
        k = max(1, int(rng.binomial(n_posts, density)))
        prefs.append(tuple(int(b) for b in rng.permutation(n_posts)[:k]))

    neighbors: List[List[int]] = [[] for _ in range(n_posts)]
    for a, lst in enumerate(prefs):
        for b in lst:
            neighbors[b].append(a)
    policies = []
    for b in range(n_posts):
        if rng.random() < tie_fraction:
            policies.append(SINGLE_TIE)
        else:
            order = rng.permutation(len(neighbors[b]))
            policies.append(Strict(tuple(neighbors[b][int(i)] for i in order)))

    log.debug("random instance seed=%s %dx%d density=%s tie_fraction=%s",
              seed, n_applicants, n_posts, density, tie_fraction)
    return Instance(n_applicants, n_posts, tuple(prefs), tuple(policies))


def stable_instance(seed: int, n_applicants: int, n_posts: int, density: float = 1.0) -> Instance:
    """All posts strict; the setting where stable matchings are popular."""
    return random_instance(seed, n_applicants, n_posts, density, tie_fraction=0.0)
