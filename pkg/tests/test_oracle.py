import math

import numpy as np
import pytest

import config

from popmatch import oracle, verifier
from popmatch.core import Instance, Matching
from popmatch.errors import GuardExceeded

from conftest import GREEN, RED, UNION, matching_by_name


def test_count_matchings(top_left, bottom_left):
    assert oracle.count_matchings(top_left) == 20
    # partial injections of 3 applicants into 3 posts
    assert oracle.count_matchings(bottom_left) == 34


def test_enumeration_starts_with_the_empty_matching(top_left):
    first = next(oracle.enumerate_matchings(top_left))
    assert first == Matching.empty(3)
    seen = list(oracle.enumerate_matchings(top_left))
    assert len(set(seen)) == len(seen)


def test_bottom_left_has_empty_popular_set(bottom_left):
    assert oracle.popular_set(bottom_left) == []


def test_popular_set_agrees_with_verifier(top_left):
    popular = oracle.popular_set(top_left)
    assert popular
    for m in oracle.enumerate_matchings(top_left):
        assert (m in popular) == verifier.is_popular(top_left, m)


def test_right_popular_set(right):
    popular = oracle.popular_set(right)
    assert matching_by_name(right, RED) in popular
    assert matching_by_name(right, GREEN) in popular
    assert matching_by_name(right, UNION) not in popular


def test_satisfaction_rows(top_left):
    m = matching_by_name(top_left, [("a1", "b2"), ("a3", "b3")])
    row = oracle.satisfaction_row(top_left, m)
    # a1 at rank 2 of 2, a2 unmatched, a3 at rank 3 of 3; b1 free, b2 and b3 matched
    assert row.tolist() == [1, 0, 1, 0, 1, 1]
    assert oracle.satisfaction_matrix(top_left, []).shape == (0, 6)


def test_best_challenge_blocks(top_left):
    matchings = list(oracle.enumerate_matchings(top_left))
    levels = oracle.satisfaction_matrix(top_left, matchings)
    whole = oracle.best_challenge(levels, levels)
    one_by_one = np.array([oracle.best_challenge(levels, levels[i:i + 1])[0] for i in range(len(levels))])
    assert (whole == one_by_one).all()
    assert (whole >= 0).all()


def test_block_rows_fit_the_guard_limit():
    # complete 8x8 instance: sum over k of C(8,k)^2 * k! matchings, 16 satisfaction columns
    n = sum(math.comb(8, k) ** 2 * math.factorial(k) for k in range(9))
    assert n == 1_441_729
    rows = oracle.block_rows(n, 16)
    assert rows >= 1
    assert rows * n * 16 * 4 <= config.ORACLE_SETTINGS["block_bytes"]
    assert oracle.block_rows(20, 6) > 256


def test_single_row_blocks_agree(top_left, monkeypatch):
    matchings = list(oracle.enumerate_matchings(top_left))
    levels = oracle.satisfaction_matrix(top_left, matchings)
    whole = oracle.best_challenge(levels, levels)
    monkeypatch.setitem(config.ORACLE_SETTINGS, "block_bytes", 1)
    assert oracle.block_rows(len(levels), levels.shape[1]) == 1
    assert (oracle.best_challenge(levels, levels) == whole).all()


def test_guard(monkeypatch):
    inst = Instance(9, 1, ((0,),) * 9)
    with pytest.raises(GuardExceeded, match="--guard-override"):
        oracle.count_matchings(inst)
    assert oracle.count_matchings(inst, guard_override=True) == 10

    monkeypatch.setitem(config.ORACLE_SETTINGS, "max_applicants", 9)
    assert oracle.count_matchings(inst) == 10


def test_brute_margin_of_popular_matching_is_zero(right):
    assert oracle.unpopularity_margin_brute(right, matching_by_name(right, RED)) == 0
