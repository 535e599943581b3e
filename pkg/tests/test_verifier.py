import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from popmatch import gen, oracle
from popmatch.core import Matching
from popmatch.errors import InvalidMatchingError
from popmatch.verifier import is_popular, margin, score, vote_labels

from conftest import GREEN, RED, UNION, matching_by_name
from deferred_acceptance import deferred_acceptance


@pytest.mark.parametrize("pairs", [RED, GREEN])
def test_red_and_green_are_popular(right, pairs):
    report = margin(right, matching_by_name(right, pairs))
    assert report.margin == 0
    assert report.witness == matching_by_name(right, pairs)
    assert (report.votes_for_witness, report.votes_for_matching) == (0, 0)


def test_union_is_not_popular(right):
    m = matching_by_name(right, UNION)
    report = margin(right, m)
    assert report.margin >= 1
    assert report.votes_for_witness - report.votes_for_matching == report.margin
    assert score(right, report.witness, m) == (report.votes_for_witness, report.votes_for_matching)
    assert not is_popular(right, m)
    assert report.margin == oracle.unpopularity_margin_brute(right, m)


def test_empty_matching_margin(top_left):
    # every applicant and the two posts it can fill prefer being matched
    report = margin(top_left, Matching.empty(3))
    assert report.margin == 6


def test_score_is_antisymmetric(right):
    a = matching_by_name(right, RED)
    b = matching_by_name(right, UNION)
    for_a, for_b = score(right, a, b)
    assert score(right, b, a) == (for_b, for_a)


def test_vote_labels(middle):
    m = matching_by_name(middle, [("a0", "b3"), ("a1", "b1"), ("a2", "b2"), ("a3", "b0")])
    labels = vote_labels(middle, m)
    a0, b0 = middle.applicant_index("a0"), middle.post_index("b0")
    a2, b1 = middle.applicant_index("a2"), middle.post_index("b1")
    # a0 prefers b0 to b3; b0 is already matched and indifferent
    assert labels[(a0, b0)] == (1, 0)
    assert labels[(a2, b1)] == (1, 0)
    assert (a0, middle.post_index("b3")) not in labels
    assert len(labels) == middle.num_edges - m.size


def test_margin_rejects_foreign_matching(top_left):
    with pytest.raises(InvalidMatchingError):
        margin(top_left, Matching((2, None, None)))


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5),
       st.sampled_from([0.0, 0.5, 1.0]))
def test_margin_matches_brute_force(seed, n_a, n_b, tie_fraction):
    inst = gen.random_instance(seed, n_a, n_b, max(0.6, 1.0 / n_b), tie_fraction)
    matchings = list(oracle.enumerate_matchings(inst))
    levels = oracle.satisfaction_matrix(inst, matchings)
    brute = oracle.best_challenge(levels, levels)
    for m, expected in zip(matchings, brute):
        assert margin(inst, m).margin == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6))
def test_stable_matchings_are_popular(seed, n_a, n_b):
    inst = gen.stable_instance(seed, n_a, n_b, density=max(0.5, 1.0 / n_b))
    assert margin(inst, deferred_acceptance(inst)).margin == 0
