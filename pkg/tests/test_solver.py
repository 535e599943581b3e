import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from popmatch import gen, oracle, verifier
from popmatch.core import Instance, Matching, Strict, f_set
from popmatch.errors import NO_POPULAR_MATCHING, ModelViolation
from popmatch.solver import (
    EdgeKind,
    Side,
    build_helper,
    edge_signs,
    iteration_count,
    solve,
    solve_report,
)

from conftest import edges_by_name, matching_by_name, posts_by_name


def assert_partition(inst, partition, x, y, z):
    assert partition.X == posts_by_name(inst, x)
    assert partition.Y == posts_by_name(inst, y)
    assert partition.Z == posts_by_name(inst, z)


# ---- worked examples ----

def test_top_left(top_left):
    report = solve_report(top_left)
    assert_partition(top_left, report.partition, ["b1"], ["b2"], ["b3"])
    assert iteration_count(report.trace) == 2
    assert report.helper.real_edges() == edges_by_name(top_left, [
        ("a1", "b1"), ("a2", "b1"), ("a1", "b2"), ("a2", "b2"), ("a3", "b2"), ("a3", "b3")])
    assert report.found
    assert verifier.margin(top_left, report.result).margin == 0
    assert report.result.partner(top_left.applicant_index("a3")) == top_left.post_index("b3")


def test_bottom_left_has_no_popular_matching(bottom_left):
    report = solve_report(bottom_left)
    assert_partition(bottom_left, report.partition, [], ["b1"], ["b2", "b3"])
    assert iteration_count(report.trace) == 3
    assert report.helper.real_edges() == edges_by_name(
        bottom_left, [(a, b) for a in ("a1", "a2", "a3") for b in ("b1", "b2")])
    assert report.result is NO_POPULAR_MATCHING
    assert not report.found
    assert solve(bottom_left) is NO_POPULAR_MATCHING


def test_middle(middle):
    report = solve_report(middle)
    assert_partition(middle, report.partition, ["b1"], ["b0", "b2"], ["b3"])
    assert iteration_count(report.trace) == 2
    assert report.helper.real_edges() == edges_by_name(middle, [
        ("a1", "b1"), ("a2", "b1"), ("a3", "b1"), ("a1", "b2"), ("a2", "b2"),
        ("a3", "b0"), ("a0", "b0"), ("a0", "b3")])

    m = report.result
    assert m.partner(middle.applicant_index("a0")) == middle.post_index("b3")
    assert m.partner(middle.applicant_index("a3")) == middle.post_index("b0")
    assert {m.partner(middle.applicant_index("a1")), m.partner(middle.applicant_index("a2"))} == \
        posts_by_name(middle, ["b1", "b2"])
    assert verifier.is_popular(middle, m)
    expected = matching_by_name(middle, [("a0", "b3"), ("a1", "b1"), ("a2", "b2"), ("a3", "b0")])
    assert verifier.is_popular(middle, expected)


def test_right(right):
    report = solve_report(right)
    assert_partition(right, report.partition, ["b1", "y1"], ["b2", "y2"], ["b3", "y3"])
    assert iteration_count(report.trace) == 2
    h = report.helper.real_edges()
    assert h == edges_by_name(right, [
        ("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2"), ("a3", "b2"), ("a3", "b3"),
        ("x1", "y2"), ("x1", "y3"), ("x2", "y1"), ("x2", "y2")])
    assert (right.applicant_index("a3"), right.post_index("b1")) not in h
    assert (right.applicant_index("x1"), right.post_index("y1")) not in h
    assert verifier.margin(right, report.result).margin == 0


def test_trace_records_demotions(top_left):
    report = solve_report(top_left, trace=True)
    first, second = report.trace.iterations
    assert first.x_to_y == ()
    assert first.y_to_z == (top_left.post_index("b3"),)
    assert second.y_to_z == ()


def test_trace_logs_at_info(top_left, caplog):
    caplog.set_level("INFO", logger="popmatch.solver")
    solve_report(top_left, trace=True)
    assert "iteration 1: X->Y {} Y->Z {b3}" in caplog.text


def test_strict_posts_are_refused():
    inst = Instance(2, 1, ((0,), (0,)), (Strict((1, 0)),))
    with pytest.raises(ModelViolation, match="b0"):
        solve(inst)


def test_last_resort_when_every_neighbor_is_a_first_choice():
    # a1 lists only f-posts; its last resort keeps it in H
    inst = Instance(2, 2, ((0,), (1, 0)))
    report = solve_report(inst)
    assert report.partition.dummies == {0, 1}
    assert set(report.helper.edges_of_kind(EdgeKind.DUMMY)) == {
        (0, report.helper.dummy(0)), (1, report.helper.dummy(1))}
    assert report.helper_matching.on_last_resort() == []
    assert report.found
    assert report.helper_matching.is_applicant_complete()
    assert verifier.is_popular(inst, report.result)


# ---- tight family ----

@pytest.mark.parametrize("n", range(1, 31))
def test_tight_family_iterations_and_partition(n):
    inst = gen.tight_family(n)
    report = solve_report(inst)
    assert iteration_count(report.trace) == n + 1
    assert_partition(
        inst, report.partition,
        [f"f{n}"],
        [f"f{i}" for i in range(n)] + [f"s{n}"],
        [f"s{i}" for i in range(n)],
    )
    assert report.result == gen.tight_family_popular(n)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_tight_family_output_is_popular(n):
    inst = gen.tight_family(n)
    assert verifier.is_popular(inst, solve(inst))


def test_work_grows_quadratically():
    for n in (5, 10, 20, 30):
        inst = gen.tight_family(n)
        work = solve_report(inst).trace.work
        size = inst.num_applicants + inst.num_posts
        assert work <= 10 * size * size
    small = solve_report(gen.tight_family(10)).trace.work
    large = solve_report(gen.tight_family(30)).trace.work
    # three times the size, at most about nine times the work
    assert large <= 12 * small


# ---- random agreement with the oracle ----

def random_tie_instance(seed, n_a, n_b, density):
    return gen.random_instance(seed, n_a, n_b, max(density, 1.0 / n_b), tie_fraction=1.0)


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5),
       st.sampled_from([0.4, 0.6, 0.8]))
def test_solver_agrees_with_oracle(seed, n_a, n_b, density):
    inst = random_tie_instance(seed, n_a, n_b, density)
    report = solve_report(inst)
    popular = oracle.popular_set(inst)
    assert report.found == bool(popular)
    if not report.found:
        return
    assert report.result in popular

    # every real post of X and Y is matched
    for b in report.partition.X | report.partition.Y:
        assert report.result.partner_of_post(b) is not None

    for sign in edge_signs(inst, report.helper_matching, report.partition):
        if (sign.matched_side, sign.post_side) in ((Side.X, Side.Y), (Side.Y, Side.Z)):
            assert sign.label == -1
        if sign.label == 1:
            assert (sign.matched_side, sign.post_side) in (
                (Side.Y, Side.X), (Side.Z, Side.X), (Side.Z, Side.Y))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12), st.integers(1, 12))
def test_helper_graph_shape(seed, n_a, n_b):
    inst = random_tie_instance(seed, n_a, n_b, 0.5)
    helper, partition, trace = build_helper(inst)

    # first choices all have a top edge in round one
    assert trace.iterations[0].x_to_y == ()
    assert not partition.Z & f_set(inst)
    assert partition.X | partition.Y | partition.Z == set(range(inst.num_posts))
    assert len(partition.X) + len(partition.Y) + len(partition.Z) == inst.num_posts

    core = helper.to_bipartite((EdgeKind.TOP, EdgeKind.Y_EDGE))
    assert core.max_left_degree() <= 2
    for a in range(inst.num_applicants):
        assert helper.degree(a) <= 2

    # no applicant with a neighbor in Z keeps an edge into X
    nbr_z = {a for b in partition.Z for a in inst.neighbors(b)}
    nbr_h_x = {a for a, b in helper.real_edges() if b in partition.X}
    assert not nbr_h_x & nbr_z


def test_edge_signs_need_a_complete_matching(top_left):
    report = solve_report(top_left)
    with pytest.raises(ValueError, match="unmatched"):
        edge_signs(top_left, Matching.empty(3), report.partition)
