"""
Exact popularity test and unpopularity margin
=============================================

Works for any mix of single-tie and strict posts. The margin of M is the
best total vote Sum_v vote_v(M'(v), M(v)) any matching M' can collect against
M; M is popular iff the margin is 0.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import networkx as nx

from popmatch.core import (
    Instance,
    Matching,
    Vote,
    applicant,
    post,
    vote,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarginReport:
    margin: int
    witness: Matching
    # votes for the witness and for M in the witness-vs-M election
    votes_for_witness: int
    votes_for_matching: int


def score(inst: Instance, m: Matching, other: Matching) -> Tuple[int, int]:
    """(number of vertices preferring m, number preferring other)."""
    m.check(inst)
    other.check(inst)
    for_m = for_other = 0
    for a in range(inst.num_applicants):
        v = vote(inst, applicant(a), m.partner(a), other.partner(a))
        for_m += v is Vote.FOR
        for_other += v is Vote.AGAINST
    for b in range(inst.num_posts):
        v = vote(inst, post(b), m.partner_of_post(b), other.partner_of_post(b))
        for_m += v is Vote.FOR
        for_other += v is Vote.AGAINST
    return for_m, for_other


def vote_labels(inst: Instance, m: Matching) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """(applicant's vote, post's vote) for swapping onto each non-matching edge."""
    m.check(inst)
    labels = {}
    for a, b in inst.edges():
        if m.partner(a) == b:
            continue
        labels[(a, b)] = (int(vote(inst, applicant(a), b, m.partner(a))),
                          int(vote(inst, post(b), a, m.partner_of_post(b))))
    return labels


def margin(inst: Instance, m: Matching) -> MarginReport:
    """
    Unpopularity margin of m, with a matching that attains it.

    For a candidate M' the total vote splits over vertices. A vertex matched in
    M' contributes its vote on its M' edge; a vertex left unmatched by M'
    contributes -u(v), where u(v) = 1 if v is matched in M. Adding u(a) + u(b)
    to every edge weight turns the unmatched terms into -Sum u, a constant:

        total(M') = Sum_{(a,b) in M'} w(a,b) - Sum_v u(v)
        w(a,b)    = vote_a(b, M(a)) + vote_b(a, M(b)) + u(a) + u(b)

    so the margin is a maximum-weight matching minus Sum u. M scores 2 per edge,
    hence the margin is never negative. Non-positive edges never help and are
    left out of the graph.
    """
    m.check(inst)
    g = nx.Graph()
    matched_posts = {b for _, b in m.pairs()}
    for a, b in inst.edges():
        u_a = int(m.partner(a) is not None)
        u_b = int(b in matched_posts)
        w = (int(vote(inst, applicant(a), b, m.partner(a)))
             + int(vote(inst, post(b), a, m.partner_of_post(b)))
             + u_a + u_b)
        if w > 0:
            g.add_edge(("a", a), ("b", b), weight=w)

    chosen = nx.max_weight_matching(g, maxcardinality=False, weight="weight")
    best = sum(g[x][y]["weight"] for x, y in chosen)
    result = best - 2 * m.size

    if result == 0:
        witness = m.project()
    else:
        pairs = []
        for x, y in chosen:
            (_, a), (_, b) = (x, y) if x[0] == "a" else (y, x)
            pairs.append((a, b))
        witness = Matching.from_pairs(inst.num_applicants, pairs)
    for_witness, for_m = score(inst, witness, m)
    if for_witness - for_m != result:
        # max_weight_matching is exact on integer weights; this would be a weight bug
        raise AssertionError(f"witness re-scores to {for_witness - for_m}, expected {result}")
    log.debug("margin %d (witness %s)", result, witness.describe(inst))
    return MarginReport(result, witness, for_witness, for_m)


def is_popular(inst: Instance, m: Matching) -> bool:
    return margin(inst, m).margin == 0
