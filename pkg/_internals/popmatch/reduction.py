"""
(2,2)-E3-SAT to popular matchings with one-sided ties
=====================================================

Every clause has three literals over distinct variables and every variable
occurs exactly twice positively and twice negatively. The instance has

    variable j:  applicants a_j_1, a_j_2; posts b_j_1, b_j_2 (a 4-cycle)
    clause i:    post c_i; applicants x_i_1..3; posts y_i_1..3 (a subdivided claw)
    occurrence:  y_i_k -- a_j_1 if literal k of clause i is v_j, a_j_2 if it is -v_j

with preferences

    a_j_t : b_j_1 > its two occurrence y's, in clause order > b_j_2
    x_i_k : c_i > y_i_k
    y_i_k : strict x_i_k > a_j_t
    b_j_1, b_j_2, c_i : single tie

Popular matchings of the instance correspond to satisfying assignments:
v_j is true iff a_j_1 holds b_j_1, and each clause leaves exactly one y
unmatched, the one of a true literal. Names and indices below are 1-based.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

import config

from popmatch.core import SINGLE_TIE, Instance, Matching, Strict
from popmatch.errors import (
    NO_POPULAR_MATCHING,
    CnfValidationError,
    GuardExceeded,
    NoPopularMatching,
    PopMatchError,
    StructureError,
    UnsatisfiedAssignmentError,
)
from popmatch.oracle import popular_set
from popmatch.verifier import is_popular

log = logging.getLogger(__name__)

Clause = Tuple[int, ...]
Assignment = Tuple[bool, ...]


# ============================================================================
# FORMULAS
# ============================================================================

@dataclass(frozen=True)
class Cnf:
    """A CNF formula with DIMACS literals: +j is v_j, -j is its negation."""
    num_vars: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for cl in self.clauses:
            lines.append(" ".join(str(l) for l in cl) + " 0")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Cnf22e3(Cnf):
    """A Cnf that is a valid (2,2)-E3 formula; construction validates."""

    def __post_init__(self):
        super().__post_init__()
        problems = cnf_problems(self.num_vars, self.clauses)
        if problems:
            raise CnfValidationError(problems)


def cnf_problems(num_vars: int, clauses: Sequence[Clause]) -> List[str]:
    problems = []
    if num_vars < 1:
        problems.append("formula has no variables")
    if 3 * len(clauses) != 4 * num_vars:
        problems.append(f"3m = {3 * len(clauses)} differs from 4n = {4 * num_vars}")
    positive = [0] * (num_vars + 1)
    negative = [0] * (num_vars + 1)
    for i, clause in enumerate(clauses, start=1):
        if len(clause) != 3:
            problems.append(f"clause {i} has {len(clause)} literals, expected 3")
        variables = [abs(l) for l in clause]
        if len(set(variables)) != len(variables):
            problems.append(f"clause {i} repeats a variable")
        for lit in clause:
            if lit == 0 or abs(lit) > num_vars:
                problems.append(f"clause {i}: literal {lit} out of range 1..{num_vars}")
            elif lit > 0:
                positive[lit] += 1
            else:
                negative[-lit] += 1
    for j in range(1, num_vars + 1):
        if positive[j] != 2 or negative[j] != 2:
            problems.append(
                f"variable {j} occurs {positive[j]}x positively and {negative[j]}x negatively, expected 2 and 2")
    return problems


def validate_cnf(formula: Cnf) -> Cnf22e3:
    if isinstance(formula, Cnf22e3):
        return formula
    return Cnf22e3(formula.num_vars, formula.clauses)


def parse_dimacs(text: Union[str, bytes], validate: bool = True) -> Union[Cnf, Cnf22e3]:
    """DIMACS CNF: `c` comments, a `p cnf n m` header, clauses terminated by 0."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    num_vars: Optional[int] = None
    declared: Optional[int] = None
    clauses: List[Clause] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("c"):
            continue
        if s.startswith("%"):
            break
        if s.startswith("p"):
            parts = s.split()
            if len(parts) != 4 or parts[1] != "cnf" or not all(p.isascii() and p.isdigit() for p in parts[2:]):
                raise CnfValidationError(f"line {lineno}: expected 'p cnf <vars> <clauses>'")
            if num_vars is not None:
                raise CnfValidationError(f"line {lineno}: repeated header")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise CnfValidationError(f"line {lineno}: clause before the 'p cnf' header")
        for tok in s.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfValidationError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise CnfValidationError("missing 'p cnf' header")
    if current:
        raise CnfValidationError("last clause is not terminated by 0")
    if declared != len(clauses):
        raise CnfValidationError(f"header declares {declared} clauses, found {len(clauses)}")
    return Cnf22e3(num_vars, tuple(clauses)) if validate else Cnf(num_vars, tuple(clauses))


def literal_true(lit: int, assignment: Sequence[bool]) -> bool:
    value = bool(assignment[abs(lit) - 1])
    return value if lit > 0 else not value


def satisfies(cnf: Cnf, assignment: Sequence[bool]) -> bool:
    if len(assignment) != cnf.num_vars:
        raise ValueError(f"assignment has {len(assignment)} values, formula has {cnf.num_vars} variables")
    return all(any(literal_true(l, assignment) for l in clause) for clause in cnf.clauses)


def solve_sat_brute(cnf: Cnf, guard_override: bool = False) -> Optional[Assignment]:
    """First satisfying assignment in (True, ..., True) -> (False, ..., False) order, or None."""
    limit = config.REDUCTION_SETTINGS["max_sat_vars"]
    if cnf.num_vars > limit:
        if not guard_override:
            raise GuardExceeded(f"brute-force SAT handles at most {limit} variables, got {cnf.num_vars}")
        log.warning("SAT guard of %d variables overridden (n=%d)", limit, cnf.num_vars)
    for values in itertools.product((True, False), repeat=cnf.num_vars):
        if satisfies(cnf, values):
            return values
    return None


def random_cnf22e3(seed: int, num_vars: int) -> Cnf22e3:
    """
    Seeded random (2,2)-E3 formula: shuffle the 4n literals (each variable twice
    per sign) and cut them into triples, until no triple repeats a variable.
    """
    if num_vars < 3 or num_vars % 3:
        raise ValueError(f"a (2,2)-E3 formula needs a positive multiple of 3 variables, got {num_vars}")
    literals = np.array([s * j for j in range(1, num_vars + 1) for s in (1, 1, -1, -1)])
    rng = np.random.default_rng(seed)
    attempts = config.REDUCTION_SETTINGS["cnf_attempts"]
    for _ in range(attempts):
        triples = rng.permutation(literals).reshape(-1, 3)
        if all(len(set(np.abs(t).tolist())) == 3 for t in triples):
            return Cnf22e3(num_vars, tuple(tuple(int(l) for l in t) for t in triples))
    raise PopMatchError(f"no valid formula after {attempts} shuffles (seed {seed}, n={num_vars})")


# ============================================================================
# GADGETS
# ============================================================================

@dataclass(frozen=True)
class GadgetIndex:
    num_vars: int
    num_clauses: int
    # occurrences[i-1][k-1] = (j, t): y_i_k is joined to a_j_t
    occurrences: Tuple[Tuple[Tuple[int, int], ...], ...]

    def a(self, j: int, t: int) -> int:
        return 2 * (j - 1) + (t - 1)

    def b(self, j: int, t: int) -> int:
        return 2 * (j - 1) + (t - 1)

    def x(self, i: int, k: int) -> int:
        return 2 * self.num_vars + 3 * (i - 1) + (k - 1)

    def c(self, i: int) -> int:
        return 2 * self.num_vars + 4 * (i - 1)

    def y(self, i: int, k: int) -> int:
        return 2 * self.num_vars + 4 * (i - 1) + k

    def linked(self, i: int, k: int) -> Tuple[int, int]:
        return self.occurrences[i - 1][k - 1]

    def applicant_names(self) -> List[str]:
        names = [f"a_{j}_{t}" for j in range(1, self.num_vars + 1) for t in (1, 2)]
        names += [f"x_{i}_{k}" for i in range(1, self.num_clauses + 1) for k in (1, 2, 3)]
        return names

    def post_names(self) -> List[str]:
        names = [f"b_{j}_{t}" for j in range(1, self.num_vars + 1) for t in (1, 2)]
        for i in range(1, self.num_clauses + 1):
            names += [f"c_{i}"] + [f"y_{i}_{k}" for k in (1, 2, 3)]
        return names

    def interconnecting_edges(self) -> List[Tuple[int, int]]:
        return [(self.a(*self.linked(i, k)), self.y(i, k))
                for i in range(1, self.num_clauses + 1) for k in (1, 2, 3)]


def build_instance(cnf: Cnf) -> Tuple[Instance, GadgetIndex]:
    cnf = validate_cnf(cnf)
    n, m = cnf.num_vars, cnf.num_clauses
    index = GadgetIndex(n, m, tuple(
        tuple((abs(lit), 1 if lit > 0 else 2) for lit in clause) for clause in cnf.clauses))

    # occurrence y's per variable applicant, clause order
    linked_ys: Dict[Tuple[int, int], List[int]] = {(j, t): [] for j in range(1, n + 1) for t in (1, 2)}
    for i in range(1, m + 1):
        for k in (1, 2, 3):
            linked_ys[index.linked(i, k)].append(index.y(i, k))

    prefs: List[Tuple[int, ...]] = []
    for j in range(1, n + 1):
        for t in (1, 2):
            prefs.append((index.b(j, 1), *linked_ys[(j, t)], index.b(j, 2)))
    for i in range(1, m + 1):
        for k in (1, 2, 3):
            prefs.append((index.c(i), index.y(i, k)))

    policies = [SINGLE_TIE] * (2 * n)
    for i in range(1, m + 1):
        policies.append(SINGLE_TIE)
        for k in (1, 2, 3):
            policies.append(Strict((index.x(i, k), index.a(*index.linked(i, k)))))

    inst = Instance(2 * n + 3 * m, 2 * n + 4 * m, tuple(prefs), tuple(policies),
                    tuple(index.applicant_names()), tuple(index.post_names()))
    log.info("reduced %d variables / %d clauses to %d applicants and %d posts",
             n, m, inst.num_applicants, inst.num_posts)
    return inst, index


def write_index(index: GadgetIndex) -> str:
    """Sidecar file: one `a|b <id> <name>` line per gadget vertex."""
    lines = [f"a {u} {name}" for u, name in enumerate(index.applicant_names())]
    lines += [f"b {v} {name}" for v, name in enumerate(index.post_names())]
    return "\n".join(lines) + "\n"


# ============================================================================
# ASSIGNMENTS <-> MATCHINGS
# ============================================================================

def candidate_matching(index: GadgetIndex, values: Sequence[bool], choices: Sequence[int]) -> Matching:
    """
    The matching with variable gadgets set by `values` and clause i leaving
    y_i_k unmatched for k = choices[i-1]: (x_i_k, c_i) plus the other two x-y pairs.
    """
    pairs = []
    for j in range(1, index.num_vars + 1):
        if values[j - 1]:
            pairs += [(index.a(j, 1), index.b(j, 1)), (index.a(j, 2), index.b(j, 2))]
        else:
            pairs += [(index.a(j, 1), index.b(j, 2)), (index.a(j, 2), index.b(j, 1))]
    for i in range(1, index.num_clauses + 1):
        k = choices[i - 1]
        pairs.append((index.x(i, k), index.c(i)))
        pairs += [(index.x(i, other), index.y(i, other)) for other in (1, 2, 3) if other != k]
    return Matching.from_pairs(2 * index.num_vars + 3 * index.num_clauses, pairs)


def matching_from_assignment(cnf: Cnf, index: GadgetIndex, assignment: Sequence[bool]) -> Matching:
    if not satisfies(cnf, assignment):
        raise UnsatisfiedAssignmentError("assignment leaves a clause without a true literal")
    choices = [next(k for k, lit in enumerate(clause, start=1) if literal_true(lit, assignment))
               for clause in cnf.clauses]
    return candidate_matching(index, assignment, choices)


def assignment_from_matching(cnf: Cnf, index: GadgetIndex, m: Matching) -> Assignment:
    """v_j is true iff M holds (a_j_1, b_j_1); raises StructureError if M lacks the popular shape."""
    for a, yv in index.interconnecting_edges():
        if m.partner(a) == yv:
            raise StructureError(f"matching uses interconnecting edge ({a}, {yv})")

    values = []
    for j in range(1, index.num_vars + 1):
        a1, a2 = m.partner(index.a(j, 1)), m.partner(index.a(j, 2))
        b1, b2 = index.b(j, 1), index.b(j, 2)
        if (a1, a2) == (b1, b2):
            values.append(True)
        elif (a1, a2) == (b2, b1):
            values.append(False)
        else:
            raise StructureError(f"variable gadget {j} is not perfectly matched")

    for i in range(1, index.num_clauses + 1):
        if m.partner_of_post(index.c(i)) is None:
            raise StructureError(f"clause post c_{i} is unmatched")
        free = [k for k in (1, 2, 3) if m.partner_of_post(index.y(i, k)) is None]
        if len(free) != 1:
            raise StructureError(f"clause {i} leaves {len(free)} y posts unmatched, expected 1")
        j, t = index.linked(i, free[0])
        if m.partner(index.a(j, t)) != index.b(j, 1):
            raise StructureError(f"unmatched y_{i}_{free[0]} is linked to a_{j}_{t}, which does not hold b_{j}_1")

    values = tuple(values)
    if not satisfies(cnf, values):
        raise StructureError("extracted assignment does not satisfy the formula")
    return values


# ============================================================================
# DECISION BY RESTRICTED SEARCH
# ============================================================================

def candidate_count(index: GadgetIndex) -> int:
    return 2 ** index.num_vars * 3 ** index.num_clauses


def _candidates(index: GadgetIndex) -> Iterator[Matching]:
    """
    Matchings with the shape every popular matching has, gadget choice first.

    A clause configuration is skipped when its unmatched y_i_k is linked to an
    applicant holding b_j_2: that applicant and y_i_k both gain from the edge,
    so the candidate has margin >= 1. Skipping is done per clause, so a gadget
    choice with a dead clause drops its whole block of clause choices.
    """
    for values in itertools.product((True, False), repeat=index.num_vars):
        per_clause = []
        for i in range(1, index.num_clauses + 1):
            alive = []
            for k in (1, 2, 3):
                j, t = index.linked(i, k)
                holds_b1 = values[j - 1] == (t == 1)
                if holds_b1:
                    alive.append(k)
            if not alive:
                break
            per_clause.append(alive)
        else:
            for choices in itertools.product(*per_clause):
                yield candidate_matching(index, values, choices)


def decide_reduced(inst: Instance, index: GadgetIndex, full_oracle: bool = False,
                   guard_override: bool = False) -> Union[Matching, NoPopularMatching]:
    """
    A popular matching of a reduced instance, or NO_POPULAR_MATCHING.

    Searches the 2^n * 3^m matchings of the popular shape, verifying each
    survivor exactly. With full_oracle the oracle's exhaustive popular set is
    used instead; every reduced instance has at least 18 applicants, above the
    oracle's enumeration limit, so full_oracle needs guard_override too.
    """
    if full_oracle:
        found = popular_set(inst, guard_override)
        return found[0] if found else NO_POPULAR_MATCHING

    limit = config.REDUCTION_SETTINGS["max_candidates"]
    total = candidate_count(index)
    if total > limit:
        if not guard_override:
            raise GuardExceeded(f"2^n * 3^m = {total} candidates exceeds the limit of {limit}")
        log.warning("candidate guard %d overridden (%d candidates)", limit, total)

    checked = 0
    for candidate in _candidates(index):
        checked += 1
        if is_popular(inst, candidate):
            log.info("popular matching found after %d exact checks", checked)
            return candidate
    log.info("no popular matching; %d candidates survived screening", checked)
    return NO_POPULAR_MATCHING
