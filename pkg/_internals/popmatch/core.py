"""
Instance and matching data model
================================

Applicants and posts are dense 0-based integers. Applicants rank their posts
strictly; every post either holds all its neighbors in a single tie or ranks
them strictly. A matching assigns each applicant a post, nothing, or its
private last-resort post (which counts as unmatched everywhere outside the
solver's helper graph).

Instance text format (UTF-8, `#` starts a comment):

    applicants 3
    posts 3
    a 0 : 0 1          # a0 prefers post 0 to post 1
    a 1 : 0 1
    a 2 : 0 1 2
    b 0 : tie          # single tie over all neighbors (the default)
    b 1 : strict 2 0   # strict list, rank 1 first

Matching text format: one `a <i> <j>` line per pair, `a <i> -` for an
unmatched applicant. Applicants without a line are unmatched.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from popmatch.errors import InstanceError, InstanceFormatError, InvalidMatchingError

log = logging.getLogger(__name__)

INFINITY = math.inf

APPLICANT = "a"
POST = "b"


class _Marker(Enum):
    LAST_RESORT = "last_resort"

    def __repr__(self):
        return self.name


LAST_RESORT = _Marker.LAST_RESORT

# What an applicant can be assigned to: a post, nothing, or its last resort
Assignment = Union[int, None, _Marker]


class Vote(IntEnum):
    AGAINST = -1
    ABSTAIN = 0
    FOR = 1


class Vertex(NamedTuple):
    side: str
    index: int


def applicant(i: int) -> Vertex:
    return Vertex(APPLICANT, i)


def post(j: int) -> Vertex:
    return Vertex(POST, j)


# ============================================================================
# POST POLICIES
# ============================================================================

@dataclass(frozen=True)
class SingleTie:
    """The post is indifferent between its neighbors but prefers any of them to nobody."""

    def __repr__(self):
        return "SingleTie()"


@dataclass(frozen=True)
class Strict:
    """The post ranks its neighbors; `order[0]` is rank 1."""
    order: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))


SINGLE_TIE = SingleTie()

PostPolicy = Union[SingleTie, Strict]


# ============================================================================
# INSTANCE
# ============================================================================

@dataclass(frozen=True)
class Instance:
    """A validated preference instance. Immutable; derived tables are cached."""

    num_applicants: int
    num_posts: int
    prefs: Tuple[Tuple[int, ...], ...]
    post_policies: Tuple[PostPolicy, ...] = ()
    applicant_names: Optional[Tuple[str, ...]] = field(default=None, compare=False, repr=False)
    post_names: Optional[Tuple[str, ...]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "prefs", tuple(tuple(p) for p in self.prefs))
        policies = tuple(self.post_policies) or (SINGLE_TIE,) * self.num_posts
        object.__setattr__(self, "post_policies", policies)
        if self.applicant_names is not None:
            object.__setattr__(self, "applicant_names", tuple(self.applicant_names))
        if self.post_names is not None:
            object.__setattr__(self, "post_names", tuple(self.post_names))
        self._validate()

    def _validate(self):
        if self.num_posts < 1:
            raise InstanceError("instance has no posts")
        if self.num_applicants < 0:
            raise InstanceError("negative applicant count")
        if len(self.prefs) != self.num_applicants:
            raise InstanceError(
                f"expected {self.num_applicants} preference lists, got {len(self.prefs)}")
        if len(self.post_policies) != self.num_posts:
            raise InstanceError(
                f"expected {self.num_posts} post policies, got {len(self.post_policies)}")
        for a, lst in enumerate(self.prefs):
            if not lst:
                raise InstanceError(f"applicant {a}: empty preference list")
            if len(set(lst)) != len(lst):
                raise InstanceError(f"applicant {a}: duplicate post in preference list")
            for b in lst:
                if not 0 <= b < self.num_posts:
                    raise InstanceError(f"applicant {a}: dangling post id {b}")
        for b, policy in enumerate(self.post_policies):
            if isinstance(policy, SingleTie):
                continue
            if not isinstance(policy, Strict):
                raise InstanceError(f"post {b}: unknown policy {policy!r}")
            order = policy.order
            if len(set(order)) != len(order):
                raise InstanceError(f"post {b}: duplicate applicant in strict list")
            for a in order:
                if not 0 <= a < self.num_applicants:
                    raise InstanceError(f"post {b}: dangling applicant id {a}")
            if set(order) != set(self.neighbors(b)):
                raise InstanceError(
                    f"post {b}: strict list {list(order)} does not match the applicants "
                    f"that list it {list(self.neighbors(b))}")
        for names, count, what in ((self.applicant_names, self.num_applicants, "applicant"),
                                   (self.post_names, self.num_posts, "post")):
            if names is not None and len(names) != count:
                raise InstanceError(f"expected {count} {what} names, got {len(names)}")

    # ---- derived tables ----

    @cached_property
    def _applicant_rank(self) -> Tuple[Dict[int, int], ...]:
        return tuple({b: r for r, b in enumerate(lst, start=1)} for lst in self.prefs)

    @cached_property
    def _post_neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        nbrs: List[List[int]] = [[] for _ in range(self.num_posts)]
        for a, lst in enumerate(self.prefs):
            for b in lst:
                nbrs[b].append(a)
        return tuple(tuple(n) for n in nbrs)

    @cached_property
    def _post_rank(self) -> Tuple[Optional[Dict[int, int]], ...]:
        return tuple(
            {a: r for r, a in enumerate(p.order, start=1)} if isinstance(p, Strict) else None
            for p in self.post_policies
        )

    @cached_property
    def num_edges(self) -> int:
        return sum(len(lst) for lst in self.prefs)

    def neighbors(self, b: int) -> Tuple[int, ...]:
        """Applicants that list post b, in applicant order."""
        return self._post_neighbors[b]

    def rank(self, a: int, b: int) -> Optional[int]:
        """1-based rank of post b on a's list, None if b is not listed."""
        return self._applicant_rank[a].get(b)

    def post_rank(self, b: int, a: int) -> Optional[int]:
        """1-based rank of a on a Strict post's list; None for SingleTie posts."""
        table = self._post_rank[b]
        return None if table is None else table.get(a)

    def is_edge(self, a: int, b: int) -> bool:
        return b in self._applicant_rank[a]

    def edges(self) -> Iterator[Tuple[int, int]]:
        for a, lst in enumerate(self.prefs):
            for b in lst:
                yield a, b

    def is_single_tie_model(self) -> bool:
        return all(isinstance(p, SingleTie) for p in self.post_policies)

    def strict_posts(self) -> List[int]:
        return [b for b, p in enumerate(self.post_policies) if isinstance(p, Strict)]

    def applicant_label(self, a: int) -> str:
        return self.applicant_names[a] if self.applicant_names else f"a{a}"

    def post_label(self, b: int) -> str:
        return self.post_names[b] if self.post_names else f"b{b}"

    def applicant_index(self, label: str) -> int:
        """Inverse of applicant_label."""
        if self.applicant_names and label in self.applicant_names:
            return self.applicant_names.index(label)
        raise KeyError(label)

    def post_index(self, label: str) -> int:
        if self.post_names and label in self.post_names:
            return self.post_names.index(label)
        raise KeyError(label)

    def with_names(self, applicant_names: Sequence[str], post_names: Sequence[str]) -> "Instance":
        return Instance(self.num_applicants, self.num_posts, self.prefs, self.post_policies,
                        tuple(applicant_names), tuple(post_names))


# ============================================================================
# DERIVED QUANTITIES
# ============================================================================

def f_post(inst: Instance, a: int) -> int:
    """a's first-choice post."""
    return inst.prefs[a][0]


def f_set(inst: Instance) -> frozenset:
    return frozenset(lst[0] for lst in inst.prefs)


def r_rank(inst: Instance, a: int, fs: Optional[frozenset] = None) -> Union[int, float]:
    """Rank of a's most preferred post outside F, or INFINITY if every neighbor is in F."""
    if fs is None:
        fs = f_set(inst)
    for r, b in enumerate(inst.prefs[a], start=1):
        if b not in fs:
            return r
    return INFINITY


# ============================================================================
# MATCHING
# ============================================================================

@dataclass(frozen=True)
class Matching:
    """Per-applicant assignment. `assignment[a]` is a post id, None, or LAST_RESORT."""

    assignment: Tuple[Assignment, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        seen = set()
        for a, b in enumerate(self.assignment):
            if b is None or b is LAST_RESORT:
                continue
            if not isinstance(b, int) or b < 0:
                raise InvalidMatchingError(f"applicant {a}: bad assignment {b!r}")
            if b in seen:
                raise InvalidMatchingError(f"post {b} matched twice")
            seen.add(b)

    @classmethod
    def empty(cls, num_applicants: int) -> "Matching":
        return cls((None,) * num_applicants)

    @classmethod
    def from_pairs(cls, num_applicants: int, pairs: Iterable[Tuple[int, int]],
                   last_resort: Iterable[int] = ()) -> "Matching":
        assignment: List[Assignment] = [None] * num_applicants
        for a, b in pairs:
            if not 0 <= a < num_applicants:
                raise InvalidMatchingError(f"dangling applicant id {a}")
            if assignment[a] is not None:
                raise InvalidMatchingError(f"applicant {a} matched twice")
            assignment[a] = b
        for a in last_resort:
            if assignment[a] is not None:
                raise InvalidMatchingError(f"applicant {a} matched twice")
            assignment[a] = LAST_RESORT
        return cls(tuple(assignment))

    def __len__(self):
        return len(self.assignment)

    def __getitem__(self, a: int) -> Assignment:
        return self.assignment[a]

    def partner(self, a: int) -> Optional[int]:
        """Real post of a, or None when a is unmatched or on its last resort."""
        b = self.assignment[a]
        return None if b is LAST_RESORT else b

    @cached_property
    def _post_partner(self) -> Dict[int, int]:
        return {b: a for a, b in enumerate(self.assignment) if b is not None and b is not LAST_RESORT}

    def partner_of_post(self, b: int) -> Optional[int]:
        return self._post_partner.get(b)

    def pairs(self) -> List[Tuple[int, int]]:
        return [(a, b) for a, b in enumerate(self.assignment) if b is not None and b is not LAST_RESORT]

    @property
    def size(self) -> int:
        return len(self._post_partner)

    def on_last_resort(self) -> List[int]:
        return [a for a, b in enumerate(self.assignment) if b is LAST_RESORT]

    def is_applicant_complete(self) -> bool:
        """Every applicant holds a real post or its last resort."""
        return all(b is not None for b in self.assignment)

    def project(self) -> "Matching":
        """The same matching in G: last-resort placements become unmatched."""
        return Matching(tuple(None if b is LAST_RESORT else b for b in self.assignment))

    def check(self, inst: Instance) -> "Matching":
        """Raise InvalidMatchingError unless this is a matching of inst."""
        if len(self.assignment) != inst.num_applicants:
            raise InvalidMatchingError(
                f"matching covers {len(self.assignment)} applicants, instance has {inst.num_applicants}")
        for a, b in self.pairs():
            if not 0 <= b < inst.num_posts:
                raise InvalidMatchingError(f"applicant {a}: dangling post id {b}")
            if not inst.is_edge(a, b):
                raise InvalidMatchingError(
                    f"pair ({inst.applicant_label(a)}, {inst.post_label(b)}) is not an edge")
        return self

    def describe(self, inst: Instance) -> str:
        pairs = ", ".join(f"({inst.applicant_label(a)},{inst.post_label(b)})" for a, b in self.pairs())
        return "{" + pairs + "}"


# ============================================================================
# VOTES
# ============================================================================

def satisfaction(inst: Instance, v: Vertex, partner: Assignment) -> int:
    """
    Integer level of how much v likes `partner`; higher is better, 0 is unmatched.

    Applicant matched at rank r: deg+1-r. Single-tie post: 1 when matched.
    Strict post: len+1-rank. Raises InvalidMatchingError for a non-neighbor.
    """
    if partner is None or partner is LAST_RESORT:
        return 0
    if v.side == APPLICANT:
        r = inst.rank(v.index, partner)
        if r is None:
            raise InvalidMatchingError(
                f"{inst.post_label(partner)} is not a neighbor of {inst.applicant_label(v.index)}")
        return len(inst.prefs[v.index]) + 1 - r
    policy = inst.post_policies[v.index]
    if not inst.is_edge(partner, v.index):
        raise InvalidMatchingError(
            f"{inst.applicant_label(partner)} is not a neighbor of {inst.post_label(v.index)}")
    if isinstance(policy, SingleTie):
        return 1
    return len(policy.order) + 1 - inst.post_rank(v.index, partner)


def vote(inst: Instance, v: Vertex, p: Assignment, q: Assignment) -> Vote:
    """+1 if v strictly prefers p to q, -1 if it prefers q, 0 otherwise."""
    diff = satisfaction(inst, v, p) - satisfaction(inst, v, q)
    return Vote((diff > 0) - (diff < 0))


# ============================================================================
# TEXT I/O
# ============================================================================

_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> List[Tuple[str, int]]:
    body = line.split("#", 1)[0]
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(body)]


def _as_int(token: str, lineno: int, col: int, what: str) -> int:
    if not (token.isascii() and token.isdigit()):
        raise InstanceFormatError(f"expected {what}, got {token!r}", lineno, col)
    return int(token)


def _decode(text: Union[str, bytes]) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise InstanceFormatError(f"not UTF-8: {e}") from e
    return text


def parse_instance(text: Union[str, bytes]) -> Instance:
    """Parse the instance text format. Missing `b` lines default to a single tie."""
    text = _decode(text)
    num_a: Optional[int] = None
    num_b: Optional[int] = None
    prefs: Dict[int, List[int]] = {}
    policies: Dict[int, PostPolicy] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        head, col = toks[0]
        if head in ("applicants", "posts"):
            if len(toks) != 2:
                raise InstanceFormatError(f"'{head}' takes exactly one count", lineno, col)
            count = _as_int(toks[1][0], lineno, toks[1][1], "a count")
            if head == "applicants":
                if num_a is not None:
                    raise InstanceFormatError("repeated 'applicants' header", lineno, col)
                num_a = count
            else:
                if num_b is not None:
                    raise InstanceFormatError("repeated 'posts' header", lineno, col)
                num_b = count
            continue
        if head not in (APPLICANT, POST):
            raise InstanceFormatError(f"unknown record {head!r}", lineno, col)
        if num_a is None or num_b is None:
            raise InstanceFormatError("'applicants' and 'posts' headers must come first", lineno, col)
        if len(toks) < 3 or toks[2][0] != ":":
            raise InstanceFormatError("expected '<a|b> <id> : ...'", lineno, col)
        ident = _as_int(toks[1][0], lineno, toks[1][1], "an id")
        rest = toks[3:]

        if head == APPLICANT:
            if ident >= num_a:
                raise InstanceFormatError(f"dangling applicant id {ident}", lineno, toks[1][1])
            if ident in prefs:
                raise InstanceFormatError(f"applicant {ident} listed twice", lineno, col)
            lst: List[int] = []
            for tok, c in rest:
                b = _as_int(tok, lineno, c, "a post id")
                if b >= num_b:
                    raise InstanceFormatError(f"dangling post id {b}", lineno, c)
                if b in lst:
                    raise InstanceFormatError(f"duplicate rank entry for post {b}", lineno, c)
                lst.append(b)
            prefs[ident] = lst
        else:
            if ident >= num_b:
                raise InstanceFormatError(f"dangling post id {ident}", lineno, toks[1][1])
            if ident in policies:
                raise InstanceFormatError(f"post {ident} listed twice", lineno, col)
            if not rest:
                raise InstanceFormatError("expected 'tie' or 'strict'", lineno, col)
            kind, kcol = rest[0]
            if kind == "tie":
                if len(rest) > 1:
                    raise InstanceFormatError("'tie' takes no ids", lineno, rest[1][1])
                policies[ident] = SINGLE_TIE
            elif kind == "strict":
                order: List[int] = []
                for tok, c in rest[1:]:
                    a = _as_int(tok, lineno, c, "an applicant id")
                    if a >= num_a:
                        raise InstanceFormatError(f"dangling applicant id {a}", lineno, c)
                    if a in order:
                        raise InstanceFormatError(f"duplicate rank entry for applicant {a}", lineno, c)
                    order.append(a)
                policies[ident] = Strict(tuple(order))
            else:
                raise InstanceFormatError(f"expected 'tie' or 'strict', got {kind!r}", lineno, kcol)

    if num_a is None or num_b is None:
        raise InstanceFormatError("missing 'applicants' or 'posts' header")
    return Instance(
        num_applicants=num_a,
        num_posts=num_b,
        prefs=tuple(tuple(prefs.get(a, ())) for a in range(num_a)),
        post_policies=tuple(policies.get(b, SINGLE_TIE) for b in range(num_b)),
    )


def serialize_instance(inst: Instance) -> str:
    lines = [f"applicants {inst.num_applicants}", f"posts {inst.num_posts}"]
    for a, lst in enumerate(inst.prefs):
        lines.append(f"a {a} : " + " ".join(map(str, lst)))
    for b, policy in enumerate(inst.post_policies):
        if isinstance(policy, Strict):
            lines.append(f"b {b} : strict " + " ".join(map(str, policy.order)))
        else:
            lines.append(f"b {b} : tie")
    return "\n".join(lines) + "\n"


def parse_matching(inst: Instance, text: Union[str, bytes]) -> Matching:
    text = _decode(text)
    assignment: List[Assignment] = [None] * inst.num_applicants
    seen_applicants = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        if toks[0][0] != APPLICANT or len(toks) != 3:
            raise InstanceFormatError("expected 'a <i> <j>' or 'a <i> -'", lineno, toks[0][1])
        a = _as_int(toks[1][0], lineno, toks[1][1], "an applicant id")
        if a >= inst.num_applicants:
            raise InstanceFormatError(f"dangling applicant id {a}", lineno, toks[1][1])
        if a in seen_applicants:
            raise InstanceFormatError(f"applicant {a} listed twice", lineno, toks[0][1])
        seen_applicants.add(a)
        if toks[2][0] != "-":
            b = _as_int(toks[2][0], lineno, toks[2][1], "a post id or '-'")
            if b >= inst.num_posts:
                raise InstanceFormatError(f"dangling post id {b}", lineno, toks[2][1])
            assignment[a] = b
    return Matching(tuple(assignment)).check(inst)


def serialize_matching(m: Matching) -> str:
    lines = []
    for a in range(len(m)):
        b = m.partner(a)
        lines.append(f"a {a} {'-' if b is None else b}")
    return "\n".join(lines) + "\n"


def load_instance(path: Union[str, Path]) -> Instance:
    path = Path(path)
    log.debug("Loading instance %s", path)
    return parse_instance(path.read_bytes())


def load_matching(inst: Instance, path: Union[str, Path]) -> Matching:
    return parse_matching(inst, Path(path).read_bytes())
