"""Slice rank toolbox: the rate constant Gamma, monomial counting,
indicator tensors of linear systems, and exact slice rank on antichain
supports.

Gamma(p, m, k) is the minimum of (1 + z + ... + z^(p-1)) / z^((p-1)m/k)
over 0 < z <= 1.  Writing phi(z) for the mean of the distribution
proportional to (z^0, ..., z^(p-1)) on {0, ..., p-1}, the log derivative
of the objective is (phi(z) - (p-1)m/k) / z and phi increases strictly
from 0 to (p-1)/2 on (0, 1].  So for k >= 2m + 1 the minimizer is the
unique root of phi(z) = (p-1)m/k, found here by bisection; for
k <= 2m the objective decreases on all of (0, 1] and the minimum is the
boundary value p at z = 1, reported rather than raised.

For a k-dimensional array whose support is an antichain in the product
of k total orders on [L], the slice rank equals the minimum over ways
of assigning each support element to one of the k axes of the total
number of distinct projections collected per axis; that minimum is
computed exactly by a branch and bound search.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import CapExceededError
from .fplinalg import check_prime, coords_of, reduce_coords
from .linsystem import SystemSpec, is_solution

DEFAULT_SUPPORT_CAP = 14
DEFAULT_CROSS_CAP = 10**7
DEFAULT_IDENTITY_CAP = 10**5
_TENSOR_SIZE_CAP = 2 * 10**6


@dataclass(frozen=True)
class GammaResult:
    """Value and minimizer of the Gamma objective."""

    gamma: float
    z_star: float
    iterations: int
    tolerance: float
    at_boundary: bool


def _phi(z: float, p: int) -> float:
    powers = [1.0]
    for _ in range(p - 1):
        powers.append(powers[-1] * z)
    total = sum(powers)
    return sum(j * powers[j] for j in range(p)) / total


def _objective(z: float, p: int, alpha: float) -> float:
    powers = [1.0]
    for _ in range(p - 1):
        powers.append(powers[-1] * z)
    return sum(powers) / z**alpha


def gamma(p, m: int, k: int, tol: float = 1e-12) -> GammaResult:
    """Minimize (1 + z + ... + z^(p-1)) / z^((p-1)m/k) over 0 < z <= 1.

    Requires m >= 1 and k >= 1.  For k <= 2m the minimum sits at the
    boundary z = 1 with value p; this is reported with at_boundary set,
    not raised.  Otherwise the interior minimizer is bracketed by
    bisection on the monotone mean phi until the bracket width drops
    below tol.
    """
    p = check_prime(p)
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    if not 0 < tol < 1:
        raise ValueError("tolerance must lie in (0, 1)")
    if k <= 2 * m:
        return GammaResult(float(p), 1.0, 0, 0.0, True)
    alpha = (p - 1) * m / k
    lo, hi = 0.0, 1.0
    iterations = 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _phi(mid, p) < alpha:
            lo = mid
        else:
            hi = mid
        iterations += 1
    z_star = (lo + hi) / 2
    return GammaResult(_objective(z_star, p, alpha), z_star, iterations,
                       (hi - lo) / 2, False)


@dataclass(frozen=True)
class MonomialCountResult:
    count: int
    threshold: int
    bound: float
    holds: bool


def monomial_count(p, m: int, k: int, n: int) -> MonomialCountResult:
    """Exact number of degree tuples (d_1, ..., d_n) in {0, ..., p-1}^n
    with sum at most (p-1)mn/k, against the ceiling Gamma^n.

    The count is a big-integer convolution, so it is exact for every n;
    requires k >= 2m + 1 so the ceiling is meaningful.
    """
    p = check_prime(p)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k < 2 * m + 1:
        raise ValueError("need k >= 2m + 1")
    threshold = (m * n * (p - 1)) // k
    counts = [1]
    for _ in range(n):
        new = [0] * (len(counts) + p - 1)
        for s, c in enumerate(counts):
            if c:
                for d in range(p):
                    new[s + d] += c
        counts = new
    count = sum(counts[: threshold + 1])
    bound = gamma(p, m, k).gamma ** n
    return MonomialCountResult(count, threshold, bound, count <= bound)


@dataclass(frozen=True)
class Tensor:
    """A dense k-dimensional array over F_p on index set [L]^k.

    Values are stored row-major; indices are 0 based.  The support is
    the list of index tuples with nonzero value.
    """

    p: int
    length: int
    k: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.length < 1 or self.k < 2:
            raise ValueError("need L >= 1 and k >= 2")
        if self.length**self.k > _TENSOR_SIZE_CAP:
            raise CapExceededError(f"dense tensor of size {self.length}^{self.k} "
                                   f"exceeds the cap {_TENSOR_SIZE_CAP}")
        if len(self.values) != self.length**self.k:
            raise ValueError("value count does not match L^k")

    @classmethod
    def from_function(cls, p, length: int, k: int,
                      fn: Callable[[tuple[int, ...]], int]) -> "Tensor":
        p = check_prime(p)
        vals = tuple(fn(idx) % p for idx in product(range(length), repeat=k))
        return cls(p, length, k, vals)

    @classmethod
    def from_entries(cls, p, length: int, k: int,
                     entries: dict[tuple[int, ...], int]) -> "Tensor":
        p = check_prime(p)
        vals = [0] * length**k
        for idx, val in entries.items():
            if len(idx) != k or any(not 0 <= i < length for i in idx):
                raise IndexError(f"index {idx} out of range")
            flat = 0
            for i in idx:
                flat = flat * length + i
            vals[flat] = val % p
        return cls(p, length, k, tuple(vals))

    def entry(self, idx: Sequence[int]) -> int:
        if len(idx) != self.k or any(not 0 <= i < self.length for i in idx):
            raise IndexError(f"index {tuple(idx)} out of range")
        flat = 0
        for i in idx:
            flat = flat * self.length + i
        return self.values[flat]

    @cached_property
    def support(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for flat, val in enumerate(self.values):
            if val:
                idx = []
                rest = flat
                for _ in range(self.k):
                    rest, i = divmod(rest, self.length)
                    idx.append(i)
                out.append(tuple(reversed(idx)))
        return tuple(out)


@dataclass(frozen=True)
class OrderFamily:
    """k total orders on {0, ..., L-1}, each given as a permutation read
    from smallest to largest."""

    orders: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.orders:
            raise ValueError("need at least one order")
        length = len(self.orders[0])
        base = tuple(range(length))
        for perm in self.orders:
            if tuple(sorted(perm)) != base:
                raise ValueError("each order must be a permutation of range(L)")

    @property
    def k(self) -> int:
        return len(self.orders)

    @property
    def length(self) -> int:
        return len(self.orders[0])

    @cached_property
    def _ranks(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for perm in self.orders:
            rank_of = [0] * len(perm)
            for pos, elem in enumerate(perm):
                rank_of[elem] = pos
            out.append(tuple(rank_of))
        return tuple(out)

    def le(self, axis: int, a: int, b: int) -> bool:
        """Whether a precedes-or-equals b in the order on the given axis."""
        r = self._ranks[axis]
        return r[a] <= r[b]

    @classmethod
    def all_increasing(cls, length: int, k: int) -> "OrderFamily":
        return cls(tuple(tuple(range(length)) for _ in range(k)))


def corollary_orders(partition: Sequence[Sequence[int]], length: int) -> OrderFamily:
    """Order family attached to a partition of the k axes into blocks of
    size at least two: the smallest axis of each block gets the
    increasing order, the second smallest the reversed order, and every
    other axis the increasing order.  Under these orders the support of
    a block-constant family of index tuples is an antichain."""
    blocks = [tuple(sorted(set(b))) for b in partition]
    if any(len(b) < 2 for b in blocks):
        raise ValueError("every block must have at least two axes")
    covered = sorted(i for b in blocks for i in b)
    k = len(covered)
    if covered != list(range(k)):
        raise ValueError("blocks must partition the axis range exactly")
    increasing = tuple(range(length))
    reversed_order = tuple(range(length - 1, -1, -1))
    orders: list[tuple[int, ...]] = [increasing] * k
    for b in blocks:
        orders[b[1]] = reversed_order
    return OrderFamily(tuple(orders))


def is_antichain(support: Sequence[Sequence[int]], orders: OrderFamily) -> bool:
    """Whether no two distinct support elements are comparable in the
    product of the axis orders."""
    pts = [tuple(e) for e in support]
    ranks = orders._ranks
    k = orders.k
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            if a == b:
                continue
            if all(ranks[ax][a[ax]] <= ranks[ax][b[ax]] for ax in range(k)):
                return False
            if all(ranks[ax][b[ax]] <= ranks[ax][a[ax]] for ax in range(k)):
                return False
    return True


def antichain_slice_rank(tensor: Tensor, orders: OrderFamily,
                         cap: int = DEFAULT_SUPPORT_CAP) -> int:
    """Exact slice rank of a tensor whose support is an antichain.

    Equal to the minimum over assignments of support elements to axes of
    the total number of distinct projections collected on each axis.
    The search assigns elements one at a time, most projection-sharing
    first, pruning whenever the partial count reaches the incumbent
    (the count never decreases as elements are added).
    """
    if orders.k != tensor.k or orders.length != tensor.length:
        raise ValueError("order family does not match the tensor shape")
    support = tensor.support
    if not is_antichain(support, orders):
        raise ValueError("tensor support is not an antichain under these orders")
    size = len(support)
    if size == 0:
        return 0
    if size > cap:
        raise CapExceededError(f"support size {size} exceeds the cap {cap}")
    k = tensor.k
    share = []
    for e in support:
        share.append(sum(1 for f in support if f != e
                         for ax in range(k) if f[ax] == e[ax]))
    elems = [e for _, e in sorted(zip(share, support),
                                  key=lambda t: (-t[0], t[1]))]
    projections: list[set[int]] = [set() for _ in range(k)]
    best = min(len({e[ax] for e in support}) for ax in range(k))

    def greedy() -> int:
        sets: list[set[int]] = [set() for _ in range(k)]
        for e in elems:
            ax = min(range(k), key=lambda i: (e[i] not in sets[i], len(sets[i])))
            sets[ax].add(e[ax])
        return sum(len(s) for s in sets)

    best = min(best, greedy())

    def walk(idx: int, partial: int) -> None:
        nonlocal best
        if partial >= best:
            return
        if idx == len(elems):
            best = partial
            return
        e = elems[idx]
        axes = sorted(range(k), key=lambda i: e[i] not in projections[i])
        for ax in axes:
            proj = e[ax]
            if proj in projections[ax]:
                walk(idx + 1, partial)
            else:
                projections[ax].add(proj)
                walk(idx + 1, partial + 1)
                projections[ax].remove(proj)

    walk(0, 0)
    return best


def indicator_tensor(sys_spec: SystemSpec, columns: Sequence[Sequence]) -> Tensor:
    """The 0/1 tensor recording which mixed tuples solve the system.

    ``columns`` gives, for each of the k variable positions, a list of L
    candidate vectors; entry (l_1, ..., l_k) is 1 exactly when taking
    the l_i-th candidate in position i solves the system.
    """
    if len(columns) != sys_spec.k:
        raise ValueError(f"need {sys_spec.k} candidate columns")
    cols = [[reduce_coords(coords_of(v), sys_spec.p) for v in col] for col in columns]
    lengths = {len(col) for col in cols}
    if len(lengths) != 1:
        raise ValueError("candidate columns have unequal lengths")
    length = lengths.pop()
    if length < 1:
        raise ValueError("candidate columns are empty")
    dims = {len(v) for col in cols for v in col}
    if len(dims) != 1:
        raise ValueError("candidate vectors have mixed dimensions")

    def fn(idx: tuple[int, ...]) -> int:
        return 1 if is_solution(sys_spec, [cols[i][l] for i, l in enumerate(idx)]) else 0

    return Tensor.from_function(sys_spec.p, length, sys_spec.k, fn)


def verify_polynomial_identity(
    sys_spec: SystemSpec,
    columns: Sequence[Sequence],
    samples: int = 1000,
    rng=None,
    exhaustive_cap: int = DEFAULT_IDENTITY_CAP,
) -> bool:
    """Check that the product formula reproduces the indicator tensor.

    The solution indicator factors over equations j and coordinates s as
    1 - (sum_i a_{j,i} x_i(s) - b_j(s))^(p-1) in F_p, by Fermat's little
    theorem.  All L^k index tuples are checked when that count is within
    the cap, otherwise ``samples`` uniformly drawn tuples (which needs a
    seeded rng).
    """
    tensor = indicator_tensor(sys_spec, columns)
    cols = [[reduce_coords(coords_of(v), sys_spec.p) for v in col] for col in columns]
    p, k, m = sys_spec.p, sys_spec.k, sys_spec.m
    n = len(cols[0][0])
    bs = sys_spec.constant_rows(n)
    length = tensor.length

    def product_formula(idx) -> int:
        xs = [cols[i][l] for i, l in enumerate(idx)]
        acc = 1
        for j in range(m):
            row = sys_spec.coeffs[j]
            for s in range(n):
                lin = (sum(row[i] * xs[i][s] for i in range(k)) - bs[j][s]) % p
                acc = (acc * (1 - pow(lin, p - 1, p))) % p
                if acc == 0:
                    return 0
        return acc

    if length**k <= exhaustive_cap:
        tuples: Iterable[tuple[int, ...]] = product(range(length), repeat=k)
    else:
        if rng is None:
            raise ValueError("sampled verification needs a seeded rng")
        tuples = (tuple(rng.randrange(length) for _ in range(k))
                  for _ in range(samples))
    return all(product_formula(idx) == tensor.entry(idx) for idx in tuples)


def clp_upper_bound(sys_spec: SystemSpec, n: int, length: int | None = None) -> float:
    """The certified slice rank ceiling k * Gamma^n for indicator tensors
    of this system over F_p^n, whatever the candidate count L."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    g = gamma(sys_spec.p, sys_spec.m, sys_spec.k)
    if g.at_boundary:
        raise ValueError("ceiling needs k >= 2m + 1")
    return sys_spec.k * g.gamma**n


@dataclass(frozen=True)
class PartitionedBoundReport:
    """Outcome of the cross-solution hypothesis check and rank ceiling."""

    hypothesis_met: bool
    witness: tuple[int, ...] | None
    family_size: int
    bound: float | None
    holds: bool | None


def partitioned_solution_bound(
    sys_spec: SystemSpec,
    solutions: Sequence[Sequence],
    partition: Sequence[Sequence[int]],
    cap: int = DEFAULT_CROSS_CAP,
) -> PartitionedBoundReport:
    """Check a family of solutions for cross-solutions that mix family
    members within a block, and apply the k * Gamma^n ceiling when none
    exist.

    ``solutions`` is a list of L solution k-tuples and ``partition``
    splits the k positions into blocks of size at least two.  If every
    mixed index tuple (l_1, ..., l_k) solving the system is constant on
    each block, the family size L is certified to be at most
    k * Gamma^n; otherwise the first violating index tuple is reported
    and no ceiling is claimed.
    """
    blocks = [tuple(sorted(set(b))) for b in partition]
    if any(len(b) < 2 for b in blocks):
        raise ValueError("every block must have at least two positions")
    covered = sorted(i for b in blocks for i in b)
    if covered != list(range(sys_spec.k)):
        raise ValueError("blocks must partition the variable positions")
    sols = [tuple(reduce_coords(coords_of(x), sys_spec.p) for x in sol)
            for sol in solutions]
    for sol in sols:
        if not is_solution(sys_spec, sol):
            raise ValueError("family contains a non-solution")
    length = len(sols)
    k, m, p = sys_spec.k, sys_spec.m, sys_spec.p
    if length == 0:
        return PartitionedBoundReport(True, None, 0, None, True)
    if length**k > cap:
        raise CapExceededError(f"{length}^{k} cross tuples exceed the cap {cap}")
    n = len(sols[0][0])
    from .linsystem import pivot_columns
    from .fplinalg import invert_matrix

    pivots = pivot_columns(sys_spec)
    free = [i for i in range(k) if i not in pivots]
    minv = invert_matrix([[r[j] for j in pivots] for r in sys_spec.coeffs], p)
    bs = sys_spec.constant_rows(n)
    by_position: list[dict[tuple[int, ...], list[int]]] = []
    for pos in range(k):
        table: dict[tuple[int, ...], list[int]] = {}
        for l, sol in enumerate(sols):
            table.setdefault(sol[pos], []).append(l)
        by_position.append(table)

    def violating(idx: Sequence[int]) -> bool:
        return any(len({idx[i] for i in b}) > 1 for b in blocks)

    witness = None
    for free_choice in product(range(length), repeat=len(free)):
        rhs = []
        for t in range(m):
            row = sys_spec.coeffs[t]
            acc = list(bs[t])
            for pos, l in zip(free, free_choice):
                c = row[pos]
                if c:
                    vec = sols[l][pos]
                    for s in range(n):
                        acc[s] = (acc[s] - c * vec[s]) % p
            rhs.append(acc)
        candidate_lists = []
        feasible = True
        for ridx, col in enumerate(pivots):
            mrow = minv[ridx]
            vec = tuple(sum(mrow[t] * rhs[t][s] for t in range(m)) % p
                        for s in range(n))
            hits = by_position[col].get(vec)
            if not hits:
                feasible = False
                break
            candidate_lists.append(hits)
        if not feasible:
            continue
        for pivot_choice in product(*candidate_lists):
            idx = [0] * k
            for pos, l in zip(free, free_choice):
                idx[pos] = l
            for pos, l in zip(pivots, pivot_choice):
                idx[pos] = l
            if violating(idx):
                witness = tuple(idx)
                break
        if witness is not None:
            break
    if witness is not None:
        return PartitionedBoundReport(False, witness, length, None, None)
    bound = clp_upper_bound(sys_spec, n)
    return PartitionedBoundReport(True, None, length, bound, length <= bound)


def write_tensor_file(dest, tensor: Tensor) -> None:
    """Write a tensor: header ``p L k``, then one line per support
    element with the k indices (0 based) and the value."""
    lines = [f"{tensor.p} {tensor.length} {tensor.k}"]
    for idx in tensor.support:
        lines.append(" ".join(str(i) for i in idx) + f" {tensor.entry(idx)}")
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def read_tensor_file(src) -> Tensor:
    if hasattr(src, "read"):
        text = src.read()
    else:
        text = Path(src).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty tensor file")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError("tensor header must be: p L k")
    p, length, k = (int(t) for t in head)
    entries: dict[tuple[int, ...], int] = {}
    for ln in lines[1:]:
        toks = [int(t) for t in ln.split()]
        if len(toks) != k + 1:
            raise ValueError(f"expected {k} indices and a value: {ln!r}")
        entries[tuple(toks[:-1])] = toks[-1]
    return Tensor.from_entries(p, length, k, entries)
