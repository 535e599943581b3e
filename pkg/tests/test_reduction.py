import pytest

import config

from popmatch import reduction
from popmatch.core import SINGLE_TIE, Matching, Strict
from popmatch.errors import (
    NO_POPULAR_MATCHING,
    CnfValidationError,
    GuardExceeded,
    StructureError,
    UnsatisfiedAssignmentError,
)
from popmatch.reduction import (
    Cnf,
    Cnf22e3,
    assignment_from_matching,
    build_instance,
    decide_reduced,
    matching_from_assignment,
    parse_dimacs,
    random_cnf22e3,
    satisfies,
    solve_sat_brute,
    validate_cnf,
)
from popmatch.verifier import is_popular

# every variable twice positive and twice negative; every clause has a positive literal
CLAUSES = ((1, 2, 3), (1, -2, -3), (-1, 2, -3), (-1, -2, 3))


@pytest.fixture
def cnf():
    return Cnf22e3(3, CLAUSES)


@pytest.fixture
def reduced(cnf):
    return build_instance(cnf)


# ---- formulas ----

def test_valid_formula_is_accepted(cnf):
    assert validate_cnf(Cnf(3, CLAUSES)) == cnf
    assert cnf.num_clauses == 4


def test_count_identity_is_checked():
    with pytest.raises(CnfValidationError, match="3m = 9 differs from 4n = 12"):
        validate_cnf(Cnf(3, CLAUSES[:3]))


def test_repeated_variable_is_rejected():
    with pytest.raises(CnfValidationError, match="repeats a variable"):
        validate_cnf(Cnf(3, ((1, 1, 2),) + CLAUSES[1:]))


def test_every_problem_is_listed():
    bad = ((1, 2, 3), (1, 2, -3), (-1, 2, -3), (-1, -2, 3))
    with pytest.raises(CnfValidationError) as info:
        validate_cnf(Cnf(3, bad))
    assert info.value.problems == [
        "variable 2 occurs 3x positively and 1x negatively, expected 2 and 2",
    ]


def test_dimacs_round_trip(cnf):
    text = "c a comment\n" + cnf.to_dimacs()
    assert parse_dimacs(text) == cnf
    # clauses may span lines
    assert parse_dimacs("p cnf 3 4\n1 2\n3 0 1 -2 -3 0\n-1 2 -3 0 -1 -2 3 0\n") == cnf


@pytest.mark.parametrize("text, message", [
    ("1 2 3 0\n", "before the 'p cnf' header"),
    ("p cnf 3 5\n1 2 3 0 1 -2 -3 0 -1 2 -3 0 -1 -2 3 0\n", "declares 5 clauses, found 4"),
    ("p cnf 3 4\n1 2 3\n", "not terminated"),
    ("p cnf 3 4\n1 two 3 0\n", "bad literal"),
    ("c only a comment\n", "missing 'p cnf' header"),
])
def test_dimacs_errors(text, message):
    with pytest.raises(CnfValidationError, match=message):
        parse_dimacs(text)


def test_unvalidated_parse_keeps_bad_formulas():
    loose = parse_dimacs("p cnf 2 1\n1 -2 0\n", validate=False)
    assert type(loose) is Cnf
    assert loose.clauses == ((1, -2),)


def test_satisfies_and_brute_force(cnf):
    assert satisfies(cnf, (True, True, True))
    assert not satisfies(cnf, (False, False, False))
    assert solve_sat_brute(cnf) == (True, True, True)
    with pytest.raises(ValueError):
        satisfies(cnf, (True,))


def test_random_formulas_are_valid_and_seeded():
    assert random_cnf22e3(7, 6) == random_cnf22e3(7, 6)
    assert isinstance(random_cnf22e3(7, 6), Cnf22e3)
    with pytest.raises(ValueError):
        random_cnf22e3(0, 4)


# ---- gadgets ----

def test_instance_shape(cnf, reduced):
    inst, index = reduced
    assert (inst.num_applicants, inst.num_posts) == (18, 22)
    assert {len(lst) for lst in inst.prefs} == {2, 4}
    for b, policy in enumerate(inst.post_policies):
        if isinstance(policy, Strict):
            assert len(policy.order) == 2
        else:
            assert policy is SINGLE_TIE
            assert len(inst.neighbors(b)) in (2, 3)


def test_vertex_names(reduced):
    inst, index = reduced
    assert inst.applicant_label(index.a(2, 1)) == "a_2_1"
    assert inst.applicant_label(index.x(3, 2)) == "x_3_2"
    assert inst.post_label(index.c(2)) == "c_2"
    assert inst.post_label(index.y(2, 3)) == "y_2_3"
    text = reduction.write_index(index).splitlines()
    assert text[0] == "a 0 a_1_1"
    assert "b 6 c_1" in text


def test_interconnecting_edges_follow_literal_signs(reduced):
    inst, index = reduced
    # clause 2 is (v1 or not v2 or not v3)
    assert index.linked(2, 1) == (1, 1)
    assert index.linked(2, 2) == (2, 2)
    y = index.y(2, 1)
    assert inst.is_edge(index.a(1, 1), y)
    assert inst.post_policies[y] == Strict((index.x(2, 1), index.a(1, 1)))
    # a_1_1 ranks b_1_1 first, its occurrences in clause order, b_1_2 last
    assert inst.prefs[index.a(1, 1)] == (index.b(1, 1), index.y(1, 1), index.y(2, 1), index.b(1, 2))


# ---- assignments and matchings ----

def test_all_true_assignment_gives_a_popular_matching(cnf, reduced):
    inst, index = reduced
    m = matching_from_assignment(cnf, index, (True, True, True))
    assert is_popular(inst, m)
    assert all(m.partner(a) != y for a, y in index.interconnecting_edges())
    # first true literal of every clause is left open
    assert m.partner_of_post(index.y(1, 1)) is None
    assert m.partner(index.x(1, 1)) == index.c(1)


def test_false_variable_crosses_its_gadget(cnf, reduced):
    inst, index = reduced
    m = matching_from_assignment(cnf, index, (False, True, False))
    assert m.partner(index.a(1, 1)) == index.b(1, 2)
    assert m.partner(index.a(1, 2)) == index.b(1, 1)
    assert is_popular(inst, m)


def test_unsatisfying_assignment_is_refused(cnf, reduced):
    with pytest.raises(UnsatisfiedAssignmentError):
        matching_from_assignment(cnf, reduced[1], (False, False, False))


def test_assignment_round_trip(cnf, reduced):
    _, index = reduced
    for values in [(True, True, True), (False, True, False), (True, False, False)]:
        if satisfies(cnf, values):
            back = assignment_from_matching(cnf, index, matching_from_assignment(cnf, index, values))
            assert satisfies(cnf, back)


def test_interconnecting_edge_is_a_structure_error(cnf, reduced):
    inst, index = reduced
    m = Matching.from_pairs(inst.num_applicants, [(index.a(1, 1), index.y(1, 1))])
    with pytest.raises(StructureError, match="interconnecting"):
        assignment_from_matching(cnf, index, m)
    with pytest.raises(StructureError, match="not perfectly matched"):
        assignment_from_matching(cnf, index, Matching.empty(inst.num_applicants))


# ---- decision ----

def test_decide_finds_a_popular_matching(cnf, reduced):
    inst, index = reduced
    m = decide_reduced(inst, index)
    assert m is not NO_POPULAR_MATCHING
    assert is_popular(inst, m)
    assert satisfies(cnf, assignment_from_matching(cnf, index, m))


def test_decide_reports_none_when_every_candidate_fails(reduced, monkeypatch):
    monkeypatch.setattr(reduction, "is_popular", lambda inst, m: False)
    assert decide_reduced(*reduced) is NO_POPULAR_MATCHING


def test_decide_rejects_shapes_of_the_negated_formula(reduced):
    # Negating every literal keeps the (2,2) counts. Each unmatched y post the
    # negated layout allows is linked here to an applicant holding b_j_2, so
    # the applicant and y both gain from that edge and only b_j_2 loses: every
    # survivor is beaten by one vote.
    inst, _ = reduced
    negated = Cnf22e3(3, tuple(tuple(-lit for lit in clause) for clause in CLAUSES))
    assert solve_sat_brute(negated) is not None
    _, negated_index = build_instance(negated)
    survivors = list(reduction._candidates(negated_index))
    assert survivors
    assert not any(is_popular(inst, m) for m in survivors)
    assert decide_reduced(inst, negated_index) is NO_POPULAR_MATCHING


def test_decide_guard(reduced, monkeypatch):
    monkeypatch.setitem(config.REDUCTION_SETTINGS, "max_candidates", 10)
    with pytest.raises(GuardExceeded):
        decide_reduced(*reduced)
    assert decide_reduced(*reduced, guard_override=True) is not NO_POPULAR_MATCHING


def test_full_oracle_respects_its_guard(reduced):
    # the smallest reduced instance is already past the oracle limit
    assert reduced[0].num_applicants > config.ORACLE_SETTINGS["max_applicants"]
    with pytest.raises(GuardExceeded):
        decide_reduced(*reduced, full_oracle=True)


@pytest.mark.parametrize("num_vars", [3, 6])
@pytest.mark.parametrize("seed", range(30))
def test_reduction_decides_satisfiability(seed, num_vars):
    cnf = random_cnf22e3(seed, num_vars)
    inst, index = build_instance(cnf)
    truth = solve_sat_brute(cnf)
    found = decide_reduced(inst, index)
    assert (truth is not None) == (found is not NO_POPULAR_MATCHING)
    if truth is None:
        return
    assert is_popular(inst, matching_from_assignment(cnf, index, truth))
    assert satisfies(cnf, assignment_from_matching(cnf, index, found))
