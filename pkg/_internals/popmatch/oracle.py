"""
Brute-force ground truth for small instances.

Every matching is enumerated, every vertex's satisfaction with it is put in a
row of a numpy array, and an election between two matchings is the sum of
signs of the difference of their rows. Independent of the verifier's
weight transformation.
"""

import logging
from typing import Iterator, List, Optional

import numpy as np

import config

from popmatch.core import Instance, Matching, applicant, post, satisfaction
from popmatch.errors import GuardExceeded

log = logging.getLogger(__name__)


def check_guard(inst: Instance, guard_override: bool = False) -> None:
    max_a = config.ORACLE_SETTINGS["max_applicants"]
    max_b = config.ORACLE_SETTINGS["max_posts"]
    if inst.num_applicants <= max_a and inst.num_posts <= max_b:
        return
    if guard_override:
        log.warning("oracle guard %dx%d overridden for a %dx%d instance",
                    max_a, max_b, inst.num_applicants, inst.num_posts)
        return
    raise GuardExceeded(
        f"oracle handles at most {max_a} applicants and {max_b} posts, "
        f"got {inst.num_applicants}x{inst.num_posts} (use --guard-override)")


def enumerate_matchings(inst: Instance, guard_override: bool = False) -> Iterator[Matching]:
    """Every matching of inst exactly once, the empty matching first."""
    check_guard(inst, guard_override)
    n = inst.num_applicants
    assignment: List[Optional[int]] = [None] * n

    def extend(a: int, used: int) -> Iterator[Matching]:
        if a == n:
            yield Matching(tuple(assignment))
            return
        assignment[a] = None
        yield from extend(a + 1, used)
        for b in inst.prefs[a]:
            bit = 1 << b
            if used & bit:
                continue
            assignment[a] = b
            yield from extend(a + 1, used | bit)
        assignment[a] = None

    yield from extend(0, 0)


def count_matchings(inst: Instance, guard_override: bool = False) -> int:
    return sum(1 for _ in enumerate_matchings(inst, guard_override))


def satisfaction_row(inst: Instance, m: Matching) -> np.ndarray:
    row = [satisfaction(inst, applicant(a), m.partner(a)) for a in range(inst.num_applicants)]
    row += [satisfaction(inst, post(b), m.partner_of_post(b)) for b in range(inst.num_posts)]
    return np.array(row, dtype=np.int16)


def satisfaction_matrix(inst: Instance, matchings: List[Matching]) -> np.ndarray:
    if not matchings:
        return np.zeros((0, inst.num_applicants + inst.num_posts), dtype=np.int16)
    return np.stack([satisfaction_row(inst, m) for m in matchings])


def block_rows(num_matchings: int, width: int) -> int:
    """Rows per election block so one int32 difference array fits in block_bytes."""
    per_row = max(1, num_matchings) * max(1, width) * np.dtype(np.int32).itemsize
    return max(1, config.ORACLE_SETTINGS["block_bytes"] // per_row)


def best_challenge(levels: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """For each row r of `rows`: max over all matchings M' of phi(M', r) - phi(r, M')."""
    out = np.empty(len(rows), dtype=np.int64)
    step = block_rows(len(levels), levels.shape[1])
    wide = levels.astype(np.int32)[None, :, :]
    for start in range(0, len(rows), step):
        block = rows[start:start + step]
        diff = np.sign(wide - block[:, None, :])
        out[start:start + step] = diff.sum(axis=2).max(axis=1)
    return out


def popular_set(inst: Instance, guard_override: bool = False) -> List[Matching]:
    """All matchings that no other matching beats in a head-to-head election."""
    matchings = list(enumerate_matchings(inst, guard_override))
    levels = satisfaction_matrix(inst, matchings)
    challenge = best_challenge(levels, levels)
    popular = [m for m, c in zip(matchings, challenge) if c <= 0]
    log.debug("%d of %d matchings are popular", len(popular), len(matchings))
    return popular


def unpopularity_margin_brute(inst: Instance, m: Matching, guard_override: bool = False) -> int:
    m.check(inst)
    matchings = list(enumerate_matchings(inst, guard_override))
    levels = satisfaction_matrix(inst, matchings)
    row = satisfaction_row(inst, m.project())[None, :]
    return int(best_challenge(levels, row)[0])
