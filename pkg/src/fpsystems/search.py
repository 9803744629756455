"""Extremal search: largest subsets of F_p^n avoiding a solution type.

A point set A avoids a solution type when no k-tuple drawn from A
solves the system and passes the type filter (not all equal, all
distinct, span at least r, at least ell distinct entries).  The
exhaustive search runs a depth first scan over points in a fixed order,
keeping the list of points that can still join the current set; a
candidate entering the set only requires rechecking tuples that use it
together with the new member, since tuples missing the new member were
screened earlier.  Candidate-count pruning cuts branches that cannot
beat the incumbent.

For a homogeneous system the avoidance property is invariant under
invertible linear maps, which act transitively on nonzero points, so
any avoiding set with a nonzero member maps to one containing the first
nonzero point of the order; with symmetry reduction on, that point is
forced into the set and the only sets considered separately are those
inside {0}.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

from .errors import CapExceededError
from .fplinalg import invert_matrix, rref_with_pivots
from .linsystem import (
    ClassFilter,
    PointSet,
    SystemSpec,
    enumerate_solutions,
    pivot_columns,
)
from .slicerank import gamma

DEFAULT_POINT_CAP = 81


@dataclass(frozen=True)
class AvoidanceProblem:
    """A solution type to avoid inside F_p^n."""

    sys_spec: SystemSpec
    mode: ClassFilter
    n: int
    exclude_zero: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        k = self.sys_spec.k
        if self.mode.mode == "span-dim" and not 2 <= self.mode.r <= k:
            raise ValueError(f"need 2 <= r <= {k}")
        if self.mode.mode == "distinct-count" and not 2 <= self.mode.ell <= k:
            raise ValueError(f"need 2 <= ell <= {k}")

    def point_order(self) -> tuple[tuple[int, ...], ...]:
        pts = product(range(self.sys_spec.p), repeat=self.n)
        if self.exclude_zero:
            return tuple(v for v in pts if any(v))
        return tuple(pts)


@dataclass(frozen=True)
class SearchResult:
    best_size: int
    witness: PointSet
    optimal: bool
    nodes: int
    elapsed_s: float


class _Checker:
    """Violation tests shared by the searches, with pivot solving baked in."""

    def __init__(self, sys_spec: SystemSpec, mode: ClassFilter, n: int):
        self.sys = sys_spec
        self.mode = mode
        self.n = n
        self.p = sys_spec.p
        self.k = sys_spec.k
        self.m = sys_spec.m
        self.pivots = pivot_columns(sys_spec)
        self.free = [i for i in range(self.k) if i not in self.pivots]
        self.minv = invert_matrix(
            [[r[j] for j in self.pivots] for r in sys_spec.coeffs], self.p)
        self.bs = sys_spec.constant_rows(n)

    def _admits(self, entries: Sequence[tuple[int, ...]]) -> bool:
        mode = self.mode.mode
        if mode == "any":
            return True
        distinct = len(set(entries))
        if mode == "not-all-equal":
            return distinct > 1
        if mode == "distinct":
            return distinct == len(entries)
        if mode == "distinct-count":
            return distinct >= self.mode.ell
        return len(rref_with_pivots(entries, self.p)[0]) >= self.mode.r

    def _solve(self, assign: Sequence[tuple[int, ...]], member_set: frozenset):
        """Complete a free-position assignment to a full tuple, or None
        when some pivot entry falls outside the pool."""
        p, n, m = self.p, self.n, self.m
        rhs = []
        for t in range(m):
            row = self.sys.coeffs[t]
            acc = list(self.bs[t])
            for pos, vec in zip(self.free, assign):
                c = row[pos]
                if c:
                    for s in range(n):
                        acc[s] = (acc[s] - c * vec[s]) % p
            rhs.append(acc)
        entries: list = [None] * self.k
        for pos, vec in zip(self.free, assign):
            entries[pos] = vec
        for ridx, col in enumerate(self.pivots):
            mrow = self.minv[ridx]
            vec = tuple(sum(mrow[t] * rhs[t][s] for t in range(m)) % p
                        for s in range(n))
            if vec not in member_set:
                return None
            entries[col] = vec
        return entries

    def violates_with(self, members: Sequence[tuple[int, ...]],
                      x: tuple[int, ...]) -> bool:
        """Whether members + x contains an admitted solution using x."""
        pool = list(members) + [x]
        member_set = frozenset(pool)
        for assign in product(pool, repeat=len(self.free)):
            entries = self._solve(assign, member_set)
            if entries is not None and x in entries and self._admits(entries):
                return True
        return False

    def violates_pair(self, members: Sequence[tuple[int, ...]],
                      x: tuple[int, ...], y: tuple[int, ...]) -> bool:
        """Whether members + x + y contains an admitted solution using
        both x and y.  Tuples using at most one of them were screened
        when that point entered the candidate list."""
        pool = list(members) + [x, y]
        member_set = frozenset(pool)
        free_count = len(self.free)
        if self.m == 1 and free_count >= 1:
            # one pivot position holds one value, so a tuple using both
            # x and y puts at least one of them on a free position
            candidates = (a for a in product(pool, repeat=free_count)
                          if x in a or y in a)
        else:
            candidates = product(pool, repeat=free_count)
        for assign in candidates:
            entries = self._solve(assign, member_set)
            if (entries is not None and x in entries and y in entries
                    and self._admits(entries)):
                return True
        return False


class _DepthFirst:
    """Depth first scan with an incumbent shared across branches."""

    def __init__(self, checker: _Checker):
        self.checker = checker
        self.best_size = -1
        self.best_members: tuple = ()
        self.nodes = 0

    def record(self, members: Sequence[tuple[int, ...]]) -> None:
        if len(members) > self.best_size:
            self.best_size = len(members)
            self.best_members = tuple(members)

    def run(self, members: list, candidates: list) -> None:
        self.nodes += 1
        self.record(members)
        for i, x in enumerate(candidates):
            if len(members) + len(candidates) - i <= self.best_size:
                break
            members.append(x)
            remaining = [z for z in candidates[i + 1:]
                         if not self.checker.violates_pair(members[:-1], x, z)]
            self.run(members, remaining)
            members.pop()


def _search_from(checker: _Checker, base: list, candidates: list,
                 threads: int, record: Callable) -> int:
    """Explore every avoiding superset of base inside base + candidates.

    Returns the node count.  With threads > 1 the root branches run on
    a pool, each with a local incumbent, and the results merge in
    branch order, so the outcome is independent of scheduling.
    """
    if threads <= 1 or len(candidates) <= 1:
        walker = _DepthFirst(checker)
        walker.run(list(base), list(candidates))
        record(walker.best_members)
        return walker.nodes

    record(tuple(base))
    jobs = []
    for i, x in enumerate(candidates):
        members = list(base) + [x]
        remaining = [z for z in candidates[i + 1:]
                     if not checker.violates_pair(base, x, z)]
        jobs.append((members, remaining))

    def run_job(job: tuple) -> tuple[tuple, int]:
        members, remaining = job
        walker = _DepthFirst(checker)
        walker.run(list(members), list(remaining))
        return walker.best_members, walker.nodes

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(run_job, jobs))
    nodes = 1
    for members, branch_nodes in results:
        nodes += branch_nodes
        record(members)
    return nodes


def _verify_witness(problem: AvoidanceProblem,
                    members: Sequence[tuple[int, ...]]) -> PointSet:
    witness = PointSet.make(members, problem.sys_spec.p, problem.n)
    for _ in enumerate_solutions(problem.sys_spec, witness, problem.mode):
        raise AssertionError("witness fails re-verification")
    return witness


def exhaustive_max(
    problem: AvoidanceProblem,
    cap_points: int = DEFAULT_POINT_CAP,
    symmetry: bool | None = None,
    threads: int = 1,
    point_order: Sequence[Sequence[int]] | None = None,
) -> SearchResult:
    """Provably maximum size of an avoiding set, by depth first search.

    The result does not depend on the point order.  Symmetry reduction
    (on by default for homogeneous systems, unavailable otherwise)
    restricts the branch exploration as described in the module notes.
    """
    start = time.perf_counter()
    if point_order is None:
        order = problem.point_order()
    else:
        order = tuple(tuple(int(c) % problem.sys_spec.p for c in v)
                      for v in point_order)
        expected = problem.point_order()
        if set(order) != set(expected) or len(order) != len(expected):
            raise ValueError("point order must permute the problem's point space")
    if len(order) > cap_points:
        raise CapExceededError(f"{len(order)} points exceed the cap {cap_points}")
    if symmetry is None:
        symmetry = problem.sys_spec.homogeneous
    if symmetry and not problem.sys_spec.homogeneous:
        raise ValueError("symmetry reduction needs a homogeneous system")

    checker = _Checker(problem.sys_spec, problem.mode, problem.n)
    best = {"size": -1, "members": ()}

    def record(members: Sequence[tuple[int, ...]]) -> None:
        if len(members) > best["size"]:
            best["size"] = len(members)
            best["members"] = tuple(members)

    record(())
    nodes = 0
    if symmetry:
        zero = (0,) * problem.n
        if zero in set(order) and not checker.violates_with([], zero):
            record((zero,))
        anchor = next((v for v in order if any(v)), None)
        if anchor is not None and not checker.violates_with([], anchor):
            candidates = [z for z in order
                          if z != anchor
                          and not checker.violates_with([], z)
                          and not checker.violates_pair([], anchor, z)]
            nodes += _search_from(checker, [anchor], candidates, threads, record)
    else:
        candidates = [z for z in order if not checker.violates_with([], z)]
        nodes += _search_from(checker, [], candidates, threads, record)
    witness = _verify_witness(problem, best["members"])
    return SearchResult(best["size"], witness, True, nodes,
                        time.perf_counter() - start)


def greedy_lower_bound(
    problem: AvoidanceProblem,
    restarts: int = 0,
    rng: random.Random | None = None,
    cap_points: int = 10**6,
) -> SearchResult:
    """Greedy avoiding set: scan points in order and keep what fits.

    With restarts > 0 the order is reshuffled per restart (rng needed)
    and the largest set wins.  Lower bound only, never claimed optimal.
    """
    start = time.perf_counter()
    order = list(problem.point_order())
    if len(order) > cap_points:
        raise CapExceededError(f"{len(order)} points exceed the cap {cap_points}")
    if restarts > 0 and rng is None:
        raise ValueError("restarts need a seeded rng")
    checker = _Checker(problem.sys_spec, problem.mode, problem.n)
    nodes = 0

    def one_pass(pts: Sequence[tuple[int, ...]]) -> list:
        nonlocal nodes
        members: list = []
        for x in pts:
            nodes += 1
            if not checker.violates_with(members, x):
                members.append(x)
        return members

    best = one_pass(order)
    for _ in range(restarts):
        shuffled = list(order)
        rng.shuffle(shuffled)
        cand = one_pass(shuffled)
        if len(cand) > len(best):
            best = cand
    witness = _verify_witness(problem, best)
    return SearchResult(len(best), witness, False, nodes,
                        time.perf_counter() - start)


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    best_size: int
    bound: float | None
    holds: bool | None
    margin: float
    witness_found: bool | None
    notes: str


def verify_theorem_bound(
    problem: AvoidanceProblem,
    theorem: str,
    cap_points: int = DEFAULT_POINT_CAP,
    threads: int = 1,
) -> BoundReport:
    """Check one of the three headline statements at desk scale.

    ``tao``: every set avoiding not-all-equal solutions of a
    rows-sum-zero system with k >= 2m + 1 has size at most
    k * Gamma^n, checked against the exhaustive maximum.

    ``distinct``: for k >= 3m with all maximal minors nonsingular, sets
    avoiding fully distinct solutions are exponentially smaller than
    the whole space; the constants are not effective at this scale, so
    the report records the exhaustive maximum, its margin below
    p^n - 1, and whether the nonzero space itself already contains a
    fully distinct solution.

    ``rank``: same shape for span dimension >= r with k >= 2m + r - 1.
    """
    sys_spec = problem.sys_spec
    k, m, p = sys_spec.k, sys_spec.m, sys_spec.p
    if theorem == "tao":
        if k < 2 * m + 1:
            raise ValueError("need k >= 2m + 1")
        if not sys_spec.rows_sum_zero:
            raise ValueError("rows must sum to zero")
        if problem.mode.mode != "not-all-equal":
            raise ValueError("this statement is about not-all-equal solutions")
        result = exhaustive_max(problem, cap_points=cap_points, threads=threads)
        bound = k * gamma(p, m, k).gamma ** problem.n
        return BoundReport("tao", result.best_size, bound,
                           result.best_size <= bound,
                           bound - result.best_size, None,
                           "exhaustive maximum against k * Gamma^n")
    if theorem == "distinct":
        if k < 3 * m:
            raise ValueError("need k >= 3m")
        if not sys_spec.generic_minors:
            raise ValueError("all m x m minors must be nonsingular")
        if problem.mode.mode != "distinct":
            raise ValueError("this statement is about fully distinct solutions")
    elif theorem == "rank":
        if problem.mode.mode != "span-dim":
            raise ValueError("this statement is about span dimension")
        if k < 2 * m + problem.mode.r - 1:
            raise ValueError("need k >= 2m + r - 1")
    else:
        raise ValueError(f"unknown statement {theorem!r}")
    full = PointSet.full_space(problem.n, p, include_zero=False)
    witness_found = next(
        (True for _ in enumerate_solutions(sys_spec, full, problem.mode)), False)
    result = exhaustive_max(problem, cap_points=cap_points, threads=threads)
    space = p**problem.n - 1
    margin = space - result.best_size
    return BoundReport(theorem, result.best_size, None, None, margin,
                       witness_found,
                       "constants are not effective; margin is against p^n - 1")
