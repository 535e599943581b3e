"""
Popular matchings when every post holds a single tie
====================================================

build_helper() runs the iterative partition of the posts into X, Y and Z and
returns the helper graph H; solve() answers with an applicant-complete
matching of H that matches every real post of X and Y, or with
NO_POPULAR_MATCHING when H has no applicant-complete matching.

Bookkeeping per applicant:
    best_y[a]  list position of a's best post in Y with rank <= r_a, or None.
               f-posts never reach Z, so the cursor only drops to None when
               its post (necessarily the r_a post) leaves Y, and only moves
               to an earlier position when an f-post is demoted into Y.
               Both updates are charged to the degree of the demoted post.
    in_nbr_z[a] whether a has a neighbor in Z.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple, Union

import config

from popmatch.core import (
    INFINITY,
    LAST_RESORT,
    Instance,
    Matching,
    applicant,
    f_set,
    r_rank,
    vote,
)
from popmatch.dm import BipartiteGraph, Label, augment, classify, max_matching_low_degree
from popmatch.errors import NO_POPULAR_MATCHING, ModelViolation, NoPopularMatching

log = logging.getLogger(__name__)


class Side(Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


class EdgeKind(Enum):
    TOP = "top"
    Y_EDGE = "y"
    Z_EDGE = "z"
    DUMMY = "dummy"


@dataclass(frozen=True)
class Partition:
    X: frozenset
    Y: frozenset
    Z: frozenset
    # applicants whose last-resort post sits in Y
    dummies: frozenset = frozenset()

    def side_of(self, b: int) -> Side:
        if b in self.X:
            return Side.X
        if b in self.Y:
            return Side.Y
        return Side.Z


@dataclass
class HelperGraph:
    """H over applicants and posts; node num_posts + a is the last resort of a."""

    num_applicants: int
    num_posts: int
    edges: Dict[Tuple[int, int], EdgeKind] = field(default_factory=dict)

    def add(self, a: int, node: int, kind: EdgeKind) -> None:
        self.edges.setdefault((a, node), kind)

    def dummy(self, a: int) -> int:
        return self.num_posts + a

    def is_dummy(self, node: int) -> bool:
        return node >= self.num_posts

    def degree(self, a: int) -> int:
        return sum(1 for (x, _) in self.edges if x == a)

    def real_edges(self) -> Set[Tuple[int, int]]:
        return {(a, b) for (a, b) in self.edges if b < self.num_posts}

    def edges_of_kind(self, *kinds: EdgeKind) -> List[Tuple[int, int]]:
        return [e for e, k in self.edges.items() if k in kinds]

    def to_bipartite(self, kinds: Optional[Tuple[EdgeKind, ...]] = None) -> BipartiteGraph:
        chosen = self.edges if kinds is None else {e: k for e, k in self.edges.items() if k in kinds}
        return BipartiteGraph.from_edges(self.num_applicants, self.num_posts + self.num_applicants, chosen)


@dataclass(frozen=True)
class IterationRecord:
    index: int
    x_to_y: Tuple[int, ...]
    y_to_z: Tuple[int, ...]


@dataclass
class SolveTrace:
    iterations: List[IterationRecord] = field(default_factory=list)
    # elementary steps, for the running-time check
    work: int = 0


@dataclass
class SolveReport:
    instance: Instance
    result: Union[Matching, NoPopularMatching]
    partition: Partition
    helper: HelperGraph
    trace: SolveTrace
    # maximum matching of H, last-resort placements kept
    helper_matching: Matching

    @property
    def found(self) -> bool:
        return self.result is not NO_POPULAR_MATCHING


def iteration_count(trace: SolveTrace) -> int:
    return len(trace.iterations)


def _labels(inst: Instance, posts) -> str:
    return "{" + ",".join(inst.post_label(b) for b in sorted(posts)) + "}"


# ============================================================================
# PARTITION AND HELPER GRAPH
# ============================================================================

def build_helper(inst: Instance, trace: Optional[bool] = None) -> Tuple[HelperGraph, Partition, SolveTrace]:
    if not inst.is_single_tie_model():
        bad = ", ".join(inst.post_label(b) for b in inst.strict_posts())
        raise ModelViolation(f"every post must hold a single tie; strict posts: {bad}")
    if trace is None:
        trace = config.SOLVER_SETTINGS["trace"]
    level = logging.INFO if trace else logging.DEBUG

    n_a, n_b = inst.num_applicants, inst.num_posts
    fs = f_set(inst)
    first = [lst[0] for lst in inst.prefs]
    r = [r_rank(inst, a, fs) for a in range(n_a)]

    side = [Side.X if b in fs else Side.Y for b in range(n_b)]
    in_nbr_z = [False] * n_a
    best_y: List[Optional[int]] = [None if r[a] == INFINITY else r[a] - 1 for a in range(n_a)]
    record = SolveTrace(work=inst.num_edges + n_a + n_b)

    def demote_to_y(b: int) -> None:
        side[b] = Side.Y
        for a in inst.neighbors(b):
            pos = inst.rank(a, b) - 1
            if pos < r[a] and (best_y[a] is None or pos < best_y[a]):
                best_y[a] = pos
        record.work += len(inst.neighbors(b))

    def demote_to_z(b: int) -> None:
        side[b] = Side.Z
        for a in inst.neighbors(b):
            in_nbr_z[a] = True
            if best_y[a] is not None and inst.prefs[a][best_y[a]] == b:
                best_y[a] = None
        record.work += len(inst.neighbors(b))

    while True:
        k = len(record.iterations) + 1
        helper = HelperGraph(n_a, n_b)

        # 1. top edges
        covered_x = set()
        for a in range(n_a):
            if not in_nbr_z[a] and side[first[a]] is Side.X:
                helper.add(a, first[a], EdgeKind.TOP)
                covered_x.add(first[a])

        # 2. isolated X posts
        x_to_y = [b for b in range(n_b) if side[b] is Side.X and b not in covered_x]
        for b in x_to_y:
            demote_to_y(b)

        # 3. best Y post, if ranked r_a or better
        for a in range(n_a):
            if best_y[a] is not None:
                helper.add(a, inst.prefs[a][best_y[a]], EdgeKind.Y_EDGE)

        # 4. even posts of Y
        g = helper.to_bipartite()
        labels = classify(g, max_matching_low_degree(g))
        y_to_z = [b for b in range(n_b) if side[b] is Side.Y and labels.right[b] is Label.EVEN]
        record.work += 2 * (n_a + n_b) + 3 * len(helper.edges)

        record.iterations.append(IterationRecord(k, tuple(x_to_y), tuple(y_to_z)))
        log.log(level, "iteration %d: X->Y %s Y->Z %s", k, _labels(inst, x_to_y), _labels(inst, y_to_z))
        if not y_to_z:
            break
        for b in y_to_z:
            demote_to_z(b)

    # best Z post for every applicant with a neighbor in Z
    for a in range(n_a):
        if in_nbr_z[a]:
            for b in inst.prefs[a]:
                record.work += 1
                if side[b] is Side.Z:
                    helper.add(a, b, EdgeKind.Z_EDGE)
                    break

    # last resorts
    dummies = frozenset(a for a in range(n_a) if r[a] == INFINITY)
    for a in dummies:
        if all(side[b] is Side.X for b in inst.prefs[a]):
            helper.add(a, helper.dummy(a), EdgeKind.DUMMY)

    partition = Partition(
        X=frozenset(b for b in range(n_b) if side[b] is Side.X),
        Y=frozenset(b for b in range(n_b) if side[b] is Side.Y),
        Z=frozenset(b for b in range(n_b) if side[b] is Side.Z),
        dummies=dummies,
    )
    log.debug("partition X=%s Y=%s Z=%s after %d iterations",
              _labels(inst, partition.X), _labels(inst, partition.Y), _labels(inst, partition.Z),
              iteration_count(record))
    return helper, partition, record


def solve_report(inst: Instance, trace: Optional[bool] = None) -> SolveReport:
    helper, partition, record = build_helper(inst, trace)

    # maximum matching on the real X and Y posts, then grow it with Z and last-resort edges
    core_graph = helper.to_bipartite((EdgeKind.TOP, EdgeKind.Y_EDGE))
    pairs = augment(helper.to_bipartite(), max_matching_low_degree(core_graph))
    record.work += 2 * len(helper.edges)

    assignment = [None] * inst.num_applicants
    for a, node in pairs.items():
        assignment[a] = LAST_RESORT if helper.is_dummy(node) else node
    helper_matching = Matching(tuple(assignment))

    if helper_matching.is_applicant_complete():
        result = helper_matching.project()
        log.info("popular matching of size %d found", result.size)
    else:
        result = NO_POPULAR_MATCHING
        missing = [inst.applicant_label(a) for a, b in enumerate(assignment) if b is None]
        log.info("no popular matching: H leaves %s unmatched", ", ".join(missing))
    return SolveReport(inst, result, partition, helper, record, helper_matching)


def solve(inst: Instance) -> Union[Matching, NoPopularMatching]:
    return solve_report(inst).result


# ============================================================================
# EDGE SIGNS
# ============================================================================

@dataclass(frozen=True)
class EdgeSign:
    applicant: int
    post: int
    label: int
    # side of the post a is matched to (last resorts count as Y), side of the post b
    matched_side: Side
    post_side: Side


def edge_signs(inst: Instance, matching: Matching, partition: Partition) -> List[EdgeSign]:
    """
    a's vote for b over M(a) on every non-matching edge (a, b) of G.

    `matching` is an applicant-complete matching of H; an applicant on its
    last resort counts as matched into Y.
    """
    out = []
    for a, b in inst.edges():
        m = matching[a]
        if m == b:
            continue
        if m is None:
            raise ValueError(f"applicant {inst.applicant_label(a)} is unmatched")
        matched_side = Side.Y if m is LAST_RESORT else partition.side_of(m)
        label = int(vote(inst, applicant(a), b, m))
        out.append(EdgeSign(a, b, label, matched_side, partition.side_of(b)))
    return out
