"""Linear systems over F_p and their solutions inside a finite point set.

A system is m equations in k vector variables x_1, ..., x_k ranging over
F_p^n, with scalar coefficients: sum_i a_{j,i} x_i = b_j for each row j
(b_j = 0 when the system is homogeneous).  The module validates the two
structural hypotheses used throughout (rows summing to zero, all m x m
coefficient minors nonsingular), streams every solution with entries in
a given point set exactly once, classifies solutions by distinctness and
span, and counts the extendable independent tuples that the subspace
deletion steps key on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DegenerateSystemError
from .fplinalg import (
    Subspace,
    check_prime,
    coords_of,
    invert_matrix,
    rank,
    reduce_coords,
    rref_with_pivots,
)


@dataclass(frozen=True)
class SystemSpec:
    """An m x k coefficient matrix over F_p plus optional constant terms.

    The two hypothesis flags are computed at construction and never
    trusted from input: ``rows_sum_zero`` means every coefficient row
    sums to 0 mod p (so constant tuples solve the homogeneous system),
    and ``generic_minors`` means every m x m minor of the coefficient
    matrix is nonsingular.
    """

    p: int
    m: int
    k: int
    coeffs: tuple[tuple[int, ...], ...]
    constants: tuple[tuple[int, ...], ...] | None
    rows_sum_zero: bool
    generic_minors: bool

    @classmethod
    def make(cls, coeffs: Sequence[Sequence[int]], p, constants=None) -> "SystemSpec":
        p = check_prime(p)
        rows = tuple(reduce_coords(r, p) for r in coeffs)
        m = len(rows)
        if m < 1:
            raise ValueError("a system needs at least one equation")
        k = len(rows[0])
        if any(len(r) != k for r in rows):
            raise ValueError("coefficient rows have unequal lengths")
        if k < 2:
            raise ValueError("a system needs at least two variables")
        consts = None
        if constants is not None:
            consts = tuple(reduce_coords(coords_of(b), p) for b in constants)
            if len(consts) != m:
                raise ValueError("need one constant vector per equation")
            if len({len(b) for b in consts}) > 1:
                raise ValueError("constant vectors have mixed dimensions")
        rows_sum_zero = all(sum(r) % p == 0 for r in rows)
        generic = m <= k and all(
            len(rref_with_pivots([[r[j] for j in cols] for r in rows], p)[0]) == m
            for cols in combinations(range(k), m)
        )
        return cls(p, m, k, rows, consts, rows_sum_zero, generic)

    @property
    def homogeneous(self) -> bool:
        return self.constants is None

    def constant_rows(self, n: int) -> tuple[tuple[int, ...], ...]:
        """The m constant vectors in F_p^n, zeros for a homogeneous system."""
        if self.constants is None:
            return tuple((0,) * n for _ in range(self.m))
        if any(len(b) != n for b in self.constants):
            raise ValueError("constants do not match the ambient dimension")
        return self.constants


@dataclass(frozen=True)
class ValidationReport:
    rows_sum_zero: bool
    generic_minors: bool
    row_sums: tuple[int, ...]
    failing_minors: tuple[tuple[int, ...], ...]

    @property
    def ok(self) -> bool:
        return self.rows_sum_zero and self.generic_minors


def validate(sys_spec: SystemSpec) -> ValidationReport:
    """Recheck both structural hypotheses, listing every failing minor."""
    p = sys_spec.p
    row_sums = tuple(sum(r) % p for r in sys_spec.coeffs)
    failing = []
    for cols in combinations(range(sys_spec.k), sys_spec.m):
        sub = [[r[j] for j in cols] for r in sys_spec.coeffs]
        if len(rref_with_pivots(sub, p)[0]) != sys_spec.m:
            failing.append(cols)
    return ValidationReport(
        rows_sum_zero=not any(row_sums),
        generic_minors=not failing,
        row_sums=row_sums,
        failing_minors=tuple(failing),
    )


def is_solution(sys_spec: SystemSpec, entries: Sequence) -> bool:
    """Whether the k vectors satisfy every equation of the system."""
    xs = [coords_of(x) for x in entries]
    if len(xs) != sys_spec.k:
        raise ValueError(f"expected {sys_spec.k} vectors, got {len(xs)}")
    dims = {len(x) for x in xs}
    if len(dims) != 1:
        raise ValueError("solution entries have mixed dimensions")
    n = dims.pop()
    p = sys_spec.p
    bs = sys_spec.constant_rows(n)
    for row, target in zip(sys_spec.coeffs, bs):
        for s in range(n):
            if sum(c * x[s] for c, x in zip(row, xs)) % p != target[s]:
                return False
    return True


def _classify(entries: Sequence[tuple[int, ...]], p: int) -> tuple[int, int, bool]:
    distinct = len(set(entries))
    span_dim = rank(entries, p)
    return distinct, span_dim, distinct == 1


@dataclass(frozen=True)
class SolutionTuple:
    """A k-tuple of vectors solving a system, with its classification."""

    entries: tuple[tuple[int, ...], ...]
    p: int
    distinct_count: int
    span_dim: int
    all_equal: bool

    @classmethod
    def create(cls, sys_spec: SystemSpec, entries: Sequence) -> "SolutionTuple":
        xs = tuple(coords_of(x) for x in entries)
        if not is_solution(sys_spec, xs):
            raise ValueError("entries do not solve the system")
        distinct, span_dim, all_equal = _classify(xs, sys_spec.p)
        return cls(xs, sys_spec.p, distinct, span_dim, all_equal)


_MODES = ("any", "not-all-equal", "distinct", "span-dim", "distinct-count")


@dataclass(frozen=True)
class ClassFilter:
    """A predicate on solution tuples.

    Modes: ``any`` admits everything; ``not-all-equal`` drops constant
    tuples; ``distinct`` requires all k entries pairwise distinct;
    ``span-dim`` requires span dimension >= r; ``distinct-count``
    requires at least ell distinct entries.
    """

    mode: str = "any"
    r: int | None = None
    ell: int | None = None

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown filter mode {self.mode!r}")
        if self.mode == "span-dim" and (self.r is None or self.r < 1):
            raise ValueError("span-dim filter needs r >= 1")
        if self.mode == "distinct-count" and (self.ell is None or self.ell < 1):
            raise ValueError("distinct-count filter needs ell >= 1")

    def admits(self, sol: SolutionTuple) -> bool:
        if self.mode == "any":
            return True
        if self.mode == "not-all-equal":
            return not sol.all_equal
        if self.mode == "distinct":
            return sol.distinct_count == len(sol.entries)
        if self.mode == "span-dim":
            return sol.span_dim >= self.r
        return sol.distinct_count >= self.ell

    @classmethod
    def any(cls) -> "ClassFilter":
        return cls("any")

    @classmethod
    def not_all_equal(cls) -> "ClassFilter":
        return cls("not-all-equal")

    @classmethod
    def distinct(cls) -> "ClassFilter":
        return cls("distinct")

    @classmethod
    def span_at_least(cls, r: int) -> "ClassFilter":
        return cls("span-dim", r=r)

    @classmethod
    def distinct_at_least(cls, ell: int) -> "ClassFilter":
        return cls("distinct-count", ell=ell)


@dataclass(frozen=True)
class PointSet:
    """An ordered set of distinct points of F_p^n."""

    p: int
    n: int
    points: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, points: Iterable, p, n: int | None = None) -> "PointSet":
        p = check_prime(p)
        seen = set()
        out = []
        for v in points:
            cs = reduce_coords(coords_of(v), p)
            if cs not in seen:
                seen.add(cs)
                out.append(cs)
        if out:
            dims = {len(v) for v in out}
            if len(dims) != 1:
                raise ValueError("points have mixed dimensions")
            inferred = dims.pop()
            if n is not None and n != inferred:
                raise ValueError("points do not match the requested dimension")
            n = inferred
        elif n is None:
            raise ValueError("an empty point set needs an explicit dimension")
        return cls(p, n, tuple(out))

    @classmethod
    def full_space(cls, n: int, p, include_zero: bool = True) -> "PointSet":
        p = check_prime(p)
        pts = (v for v in product(range(p), repeat=n) if include_zero or any(v))
        return cls(p, n, tuple(pts))

    @classmethod
    def from_file(cls, src) -> "PointSet":
        from .fplinalg import read_vector_file

        p, n, vectors = read_vector_file(src)
        return cls.make(vectors, p, n)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.points)

    def __contains__(self, v) -> bool:
        return tuple(v) in self._members

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def restrict_to(self, subspace: Subspace) -> "PointSet":
        """The points lying in the subspace, order preserved."""
        return PointSet(self.p, self.n,
                        tuple(v for v in self.points if subspace.contains(v)))

    def without(self, removed: Iterable[tuple[int, ...]]) -> "PointSet":
        gone = set(removed)
        return PointSet(self.p, self.n,
                        tuple(v for v in self.points if v not in gone))


def pivot_columns(sys_spec: SystemSpec, excluded: Iterable[int] = ()) -> tuple[int, ...]:
    """Lexicographically first m columns (outside ``excluded``) carrying a
    nonsingular m x m minor; these are the echelon pivots of the column
    slice, so they exist exactly when that slice has rank m."""
    excluded = set(excluded)
    usable = [j for j in range(sys_spec.k) if j not in excluded]
    sub = [[r[j] for j in usable] for r in sys_spec.coeffs]
    _, pivots = rref_with_pivots(sub, sys_spec.p)
    if len(pivots) < sys_spec.m:
        raise DegenerateSystemError(
            "coefficient rank below the equation count on the allowed columns")
    return tuple(usable[j] for j in pivots)


def enumerate_solutions(
    sys_spec: SystemSpec,
    points: PointSet,
    flt: ClassFilter | None = None,
    pinned: Mapping[int, Sequence[int]] | None = None,
) -> Iterator[SolutionTuple]:
    """Stream every solution with all entries in ``points``, exactly once.

    Positions in ``pinned`` are frozen to the given vectors.  The
    remaining positions split into m pivot positions, solved from the
    others, and free positions ranging over the point set.  A solution
    is determined by its free coordinates and every free assignment
    yields at most one solution, so the iteration hits each solution
    exactly once and no dedup pass is needed.
    """
    flt = flt or ClassFilter.any()
    p = sys_spec.p
    if points.p != p:
        raise ValueError("point set prime differs from system prime")
    n = points.n
    k, m = sys_spec.k, sys_spec.m
    pin: dict[int, tuple[int, ...]] = {}
    if pinned:
        for pos, vec in pinned.items():
            if not 0 <= pos < k:
                raise IndexError(f"pinned position {pos} out of range")
            cs = reduce_coords(coords_of(vec), p)
            if len(cs) != n:
                raise ValueError("pinned vector dimension mismatch")
            pin[pos] = cs
    pivots = pivot_columns(sys_spec, excluded=pin.keys())
    free = [i for i in range(k) if i not in pivots and i not in pin]
    minv = invert_matrix([[r[j] for j in pivots] for r in sys_spec.coeffs], p)
    bs = sys_spec.constant_rows(n)
    base_rhs = []
    for t in range(m):
        row = sys_spec.coeffs[t]
        acc = list(bs[t])
        for pos, vec in pin.items():
            c = row[pos]
            if c:
                for s in range(n):
                    acc[s] = (acc[s] - c * vec[s]) % p
        base_rhs.append(acc)
    pts = points.points
    for assign in product(pts, repeat=len(free)):
        rhs = []
        for t in range(m):
            row = sys_spec.coeffs[t]
            acc = list(base_rhs[t])
            for pos, vec in zip(free, assign):
                c = row[pos]
                if c:
                    for s in range(n):
                        acc[s] = (acc[s] - c * vec[s]) % p
            rhs.append(acc)
        entries: list = [None] * k
        for pos, vec in pin.items():
            entries[pos] = vec
        for pos, vec in zip(free, assign):
            entries[pos] = vec
        ok = True
        for ridx, col in enumerate(pivots):
            mrow = minv[ridx]
            vec = tuple(sum(mrow[t] * rhs[t][s] for t in range(m)) % p
                        for s in range(n))
            if vec not in points:
                ok = False
                break
            entries[col] = vec
        if not ok:
            continue
        sol = SolutionTuple.create(sys_spec, tuple(entries))
        if flt.admits(sol):
            yield sol


def is_interesting(
    sys_spec: SystemSpec,
    points: PointSet,
    index_set: Sequence[int],
    tuple_entries: Sequence,
    ell: int,
) -> bool:
    """Whether an (m+1)-tuple on the positions ``index_set`` is linearly
    independent and extends to a full solution in the point set with at
    least ell - m - 1 distinct vectors among the completed positions."""
    m, k = sys_spec.m, sys_spec.k
    idx = tuple(sorted(set(index_set)))
    if len(idx) != m + 1 or len(tuple_entries) != m + 1:
        raise ValueError(f"need an index set and tuple of size m + 1 = {m + 1}")
    if any(not 0 <= i < k for i in idx):
        raise IndexError("index set out of range")
    if not 1 <= ell <= k:
        raise ValueError(f"ell must lie in 1..{k}")
    xs = [reduce_coords(coords_of(x), sys_spec.p) for x in tuple_entries]
    if any(x not in points for x in xs):
        raise ValueError("tuple entries must belong to the point set")
    if rank(xs, sys_spec.p) != m + 1:
        return False
    pin = dict(zip(idx, xs))
    need = max(0, ell - m - 1)
    rest = [j for j in range(k) if j not in pin]
    for sol in enumerate_solutions(sys_spec, points, pinned=pin):
        completion = [sol.entries[j] for j in rest]
        if len(set(completion)) >= need:
            return True
    return False


@dataclass(frozen=True)
class InterestingCountReport:
    index_set: tuple[int, ...]
    ell: int
    count: int
    bound: int
    holds: bool


def count_interesting_tuples(
    sys_spec: SystemSpec, points: PointSet, index_set: Sequence[int], ell: int
) -> InterestingCountReport:
    """Exact count of interesting tuples on ``index_set``, against the
    k^2 * p^(m n) ceiling."""
    m = sys_spec.m
    idx = tuple(sorted(set(index_set)))
    count = 0
    for tup in product(points.points, repeat=m + 1):
        if is_interesting(sys_spec, points, idx, tup, ell):
            count += 1
    bound = sys_spec.k**2 * sys_spec.p ** (m * points.n)
    return InterestingCountReport(idx, ell, count, bound, count <= bound)


def write_system_file(dest, sys_spec: SystemSpec) -> None:
    """Write a system: header ``p=<p> m=<m> k=<k>``, m coefficient rows,
    then an optional ``b:`` block with one constant vector per row."""
    lines = [f"p={sys_spec.p} m={sys_spec.m} k={sys_spec.k}"]
    for row in sys_spec.coeffs:
        lines.append(" ".join(str(c) for c in row))
    if sys_spec.constants is not None:
        lines.append("b:")
        for b in sys_spec.constants:
            lines.append(" ".join(str(c) for c in b))
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def read_system_file(src) -> SystemSpec:
    if hasattr(src, "read"):
        text = src.read()
    else:
        text = Path(src).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty system file")
    from .fplinalg import _header_fields

    fields = _header_fields(lines[0], ("p", "m", "k"))
    p, m, k = fields["p"], fields["m"], fields["k"]
    if len(lines) < 1 + m:
        raise ValueError("system file is missing coefficient rows")
    coeffs = []
    for ln in lines[1:1 + m]:
        row = [int(t) for t in ln.split()]
        if len(row) != k:
            raise ValueError(f"expected {k} coefficients per row: {ln!r}")
        coeffs.append(row)
    constants = None
    rest = lines[1 + m:]
    if rest:
        if rest[0] != "b:":
            raise ValueError(f"unexpected trailing content {rest[0]!r}")
        if len(rest) != 1 + m:
            raise ValueError("constant block needs one vector per equation")
        constants = [[int(t) for t in ln.split()] for ln in rest[1:]]
    return SystemSpec.make(coeffs, p, constants)
