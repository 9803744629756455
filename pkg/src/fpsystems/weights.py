"""Admissible sets and the weight of a tuple of nonzero vectors.

For a tuple (x_1, ..., x_k) of nonzero vectors in V = F_p^n, a subset
I of positions is admissible when the vectors x_i, i in I, are linearly
independent and no other entry of the tuple lies in U = span(x_i : i in I).
The weight of an admissible I is (k+1)|I| plus the number of distinct
lines spanned by the images of the remaining entries in V/U.  The weight
of the tuple, omega, is the maximum over admissible subsets; the chosen
maximizer is tie-broken deterministically (smallest size, then
lexicographic), and the positions outside it partition into blocks with
equal quotient lines.

These definitions never look at any linear system, so every operation
here accepts an arbitrary tuple of nonzero vectors; the operations tied
to a solution hypothesis take the system as an explicit witness and
verify it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import CapExceededError
from .fplinalg import (
    Subspace,
    check_prime,
    coords_of,
    normalize_line_rep,
    reduce_coords,
    rref_with_pivots,
)
from .linsystem import SystemSpec, is_solution

ADMISSIBLE_K_CAP = 20


def _checked_tuple(entries: Sequence, p: int) -> tuple[tuple[tuple[int, ...], ...], int]:
    xs = tuple(reduce_coords(coords_of(x), p) for x in entries)
    if not xs:
        raise ValueError("empty tuple has no weight")
    dims = {len(x) for x in xs}
    if len(dims) != 1:
        raise ValueError("tuple entries have mixed dimensions")
    if any(not any(x) for x in xs):
        raise ValueError("tuple entries must be nonzero")
    return xs, dims.pop()


@dataclass(frozen=True)
class AdmissibleSet:
    """An admissible index set with its span and weight."""

    indices: tuple[int, ...]
    span_u: Subspace
    weight: int
    lines: tuple[tuple[int, ...], ...]


def admissible_sets(entries: Sequence, p, cap_k: int = ADMISSIBLE_K_CAP) -> list[AdmissibleSet]:
    """Every admissible subset of positions, by size then lexicographic.

    The 2^k subsets are checked exhaustively, so k is capped.
    """
    p = check_prime(p)
    xs, n = _checked_tuple(entries, p)
    k = len(xs)
    if k > cap_k:
        raise CapExceededError(f"admissible listing capped at k <= {cap_k}, got {k}")
    out: list[AdmissibleSet] = []
    for size in range(k + 1):
        for idx in combinations(range(k), size):
            rows = [xs[i] for i in idx]
            basis, _ = rref_with_pivots(rows, p)
            if len(basis) != size:
                continue
            u = Subspace(basis, n, p)
            reduced = {}
            ok = True
            for j in range(k):
                if j in idx:
                    continue
                red = u.reduce(xs[j])
                if not any(red):
                    ok = False
                    break
                reduced[j] = red
            if not ok:
                continue
            lines = sorted({normalize_line_rep(red, p) for red in reduced.values()})
            out.append(AdmissibleSet(idx, u, (k + 1) * size + len(lines), tuple(lines)))
    return out


@dataclass(frozen=True)
class WeightReport:
    """omega, the tie-broken maximizer, and the induced line partition."""

    omega: int
    chosen: tuple[int, ...]
    span_u: Subspace
    partition: tuple[tuple[int, ...], ...]
    lines: tuple[tuple[int, ...], ...]
    admissible: tuple[AdmissibleSet, ...]


def weight(entries: Sequence, p, cap_k: int = ADMISSIBLE_K_CAP) -> WeightReport:
    """The weight of a tuple of nonzero vectors.

    Returns omega, the chosen maximizer I (smallest size first, then
    lexicographically smallest), the subspace it spans, and the blocks
    of positions outside I grouped by their quotient line, ordered by
    smallest member.
    """
    p = check_prime(p)
    adm = admissible_sets(entries, p, cap_k=cap_k)
    xs, _ = _checked_tuple(entries, p)
    k = len(xs)
    omega = max(a.weight for a in adm)
    chosen = next(a for a in adm if a.weight == omega)
    by_line: dict[tuple[int, ...], list[int]] = {}
    for j in range(k):
        if j in chosen.indices:
            continue
        line = normalize_line_rep(chosen.span_u.reduce(xs[j]), p)
        by_line.setdefault(line, []).append(j)
    blocks = sorted(by_line.items(), key=lambda item: min(item[1]))
    return WeightReport(
        omega=omega,
        chosen=chosen.indices,
        span_u=chosen.span_u,
        partition=tuple(tuple(members) for _, members in blocks),
        lines=tuple(line for line, _ in blocks),
        admissible=tuple(adm),
    )


@dataclass(frozen=True)
class WeightPropertyReport:
    omega: int
    chosen_size: int
    span_dim: int
    omega_valid: bool
    size_valid: bool
    span_valid: bool

    @property
    def ok(self) -> bool:
        return self.omega_valid and self.size_valid and self.span_valid


def verify_weight_properties(
    entries: Sequence, p, sys_spec: SystemSpec | None = None
) -> WeightPropertyReport:
    """Check the three structural facts about omega.

    omega is never 0 and never one of the multiples (k+1), 2(k+1), ...,
    (k-1)(k+1); the chosen maximizer has exactly floor(omega / (k+1))
    elements; and the span of the whole tuple has dimension at least
    omega / (k+1).  When a system is supplied the tuple must solve it.
    """
    p = check_prime(p)
    xs, _ = _checked_tuple(entries, p)
    k = len(xs)
    if sys_spec is not None:
        if sys_spec.constants is not None:
            raise ValueError("property check expects a homogeneous system")
        if not is_solution(sys_spec, xs):
            raise ValueError("tuple does not solve the supplied system")
    rep = weight(xs, p)
    forbidden = {0} | {(k + 1) * t for t in range(1, k)}
    omega_valid = rep.omega not in forbidden
    size_valid = len(rep.chosen) == rep.omega // (k + 1)
    span_dim = len(rref_with_pivots(xs, p)[0])
    span_valid = span_dim * (k + 1) >= rep.omega
    return WeightPropertyReport(rep.omega, len(rep.chosen), span_dim,
                                omega_valid, size_valid, span_valid)


@dataclass(frozen=True)
class PartitionReport:
    """The quotient-line partition outside the chosen maximizer."""

    omega: int
    chosen: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    lines: tuple[tuple[int, ...], ...]
    min_block_size: int
    lemma_ok: bool


def partition_structure(entries: Sequence, sys_spec: SystemSpec) -> PartitionReport:
    """Partition the positions outside the chosen maximizer by quotient line.

    Requires a genuine solution of a homogeneous system whose rows sum
    to zero.  For such tuples every block must have at least two
    members; ``lemma_ok`` records whether that held (a False value is a
    finding, not an exception).
    """
    if sys_spec.constants is not None:
        raise ValueError("partition structure expects a homogeneous system")
    if not sys_spec.rows_sum_zero:
        raise ValueError("partition structure expects rows summing to zero")
    xs, _ = _checked_tuple(entries, sys_spec.p)
    if not is_solution(sys_spec, xs):
        raise ValueError("tuple does not solve the supplied system")
    rep = weight(xs, sys_spec.p)
    sizes = [len(b) for b in rep.partition]
    min_size = min(sizes) if sizes else 0
    distinct_lines = len(set(rep.lines)) == len(rep.lines)
    return PartitionReport(
        omega=rep.omega,
        chosen=rep.chosen,
        blocks=rep.partition,
        lines=rep.lines,
        min_block_size=min_size,
        lemma_ok=distinct_lines and (not sizes or min_size >= 2),
    )
