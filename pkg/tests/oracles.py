"""Independent reference implementations used only by the tests.

Everything here is written from the bare definitions, avoiding the
package's own algorithms: determinant-based rank instead of row
reduction, grid search instead of bisection, full enumeration instead
of pivot solving, unpruned recursion instead of branch and bound, and
explicit span tables instead of echelon bases.  Slow on purpose.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np


def grid_min_ratio(p: int, alpha: float, step: float = 1e-6) -> float:
    """Minimum of (1 + z + ... + z^(p-1)) / z^alpha over z in (0, 1]."""
    z = np.arange(step, 1.0 + step, step)
    vals = np.zeros_like(z)
    for j in range(p):
        vals += z**j
    vals /= z**alpha
    return float(vals.min())


def det_mod(rows: list[list[int]], p: int) -> int:
    """Laplace-expansion determinant mod p."""
    size = len(rows)
    if size == 1:
        return rows[0][0] % p
    total = 0
    for j in range(size):
        if rows[0][j] % p == 0:
            continue
        minor = [[row[c] for c in range(size) if c != j] for row in rows[1:]]
        sign = 1 if j % 2 == 0 else p - 1
        total += sign * rows[0][j] * det_mod(minor, p)
    return total % p


def rank_by_minors(rows: list[list[int]], p: int) -> int:
    """Largest r with some nonsingular r x r submatrix."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    for r in range(min(nrows, ncols), 0, -1):
        for ris in combinations(range(nrows), r):
            for cis in combinations(range(ncols), r):
                sub = [[rows[i][j] for j in cis] for i in ris]
                if det_mod(sub, p) != 0:
                    return r
    return 0


def brute_solutions(coeffs, constants, p: int, points: list[tuple[int, ...]],
                    n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All k-tuples over the point list satisfying the system, by direct
    substitution into every equation."""
    k = len(coeffs[0])
    out = []
    for tup in product(points, repeat=k):
        ok = True
        for j, row in enumerate(coeffs):
            target = constants[j] if constants else (0,) * n
            for s in range(n):
                if sum(row[i] * tup[i][s] for i in range(k)) % p != target[s] % p:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tup)
    return out


def brute_monomial_count(p: int, m: int, k: int, n: int) -> int:
    """Count degree tuples in {0..p-1}^n with sum <= floor(mn(p-1)/k)."""
    cap = (m * n * (p - 1)) // k
    return sum(1 for ds in product(range(p), repeat=n) if sum(ds) <= cap)


def unpruned_slice_rank(support: list[tuple[int, ...]], k: int) -> int:
    """Minimum over all axis assignments of the summed distinct
    projections, by plain recursion over the full k^|S| tree."""
    best = [len(support) * k + 1]

    def walk(idx: int, buckets: list[set]) -> None:
        if idx == len(support):
            best[0] = min(best[0], sum(len(b) for b in buckets))
            return
        elem = support[idx]
        for axis in range(k):
            added = elem[axis] not in buckets[axis]
            if added:
                buckets[axis].add(elem[axis])
            walk(idx + 1, buckets)
            if added:
                buckets[axis].remove(elem[axis])

    walk(0, [set() for _ in range(k)])
    return best[0] if support else 0


def span_table(vectors: list[tuple[int, ...]], p: int, n: int) -> set:
    """Every linear combination of the vectors, by direct enumeration."""
    out = set()
    for coeffs in product(range(p), repeat=len(vectors)):
        v = tuple(sum(c * vec[s] for c, vec in zip(coeffs, vectors)) % p
                  for s in range(n))
        out.add(v)
    if not vectors:
        out.add((0,) * n)
    return out


def weight_by_definition(entries: list[tuple[int, ...]], p: int) -> int:
    """Maximum weight over admissible index sets, straight from the
    definition: independence by span size, membership by span table,
    line classes by explicit orbit enumeration."""
    k = len(entries)
    n = len(entries[0])
    best = None
    for size in range(k + 1):
        for idx in combinations(range(k), size):
            chosen = [entries[i] for i in idx]
            table = span_table(chosen, p, n)
            if len(table) != p**size:
                continue
            rest = [i for i in range(k) if i not in idx]
            if any(entries[j] in table for j in rest):
                continue
            classes: list[set] = []
            for j in rest:
                orbit = {tuple((c * entries[j][s] + u[s]) % p
                               for s in range(n))
                         for c in range(1, p) for u in table}
                for cls in classes:
                    if entries[j] in cls:
                        break
                else:
                    classes.append(orbit)
            w = (k + 1) * size + len(classes)
            if best is None or w > best:
                best = w
    return best


def subspaces_as_sets(n: int, d: int, p: int) -> list[frozenset]:
    """All d-dimensional subspaces of F_p^n, each as its full vector set,
    built from independent tuples and deduplicated."""
    vectors = list(product(range(p), repeat=n))
    found = set()
    for tup in product(vectors, repeat=d):
        table = span_table(list(tup), p, n)
        if len(table) == p**d:
            found.add(frozenset(table))
    return sorted(found, key=sorted)


def containment_fraction(n: int, d: int, p: int,
                         fixed: list[tuple[int, ...]]) -> Fraction:
    """Fraction of d-dimensional subspaces containing every fixed vector."""
    subs = subspaces_as_sets(n, d, p)
    hits = sum(1 for sp in subs if all(v in sp for v in fixed))
    return Fraction(hits, len(subs))


def comparable(a: tuple[int, ...], b: tuple[int, ...],
               ranks: list[dict]) -> bool:
    le = all(ranks[ax][a[ax]] <= ranks[ax][b[ax]] for ax in range(len(a)))
    ge = all(ranks[ax][a[ax]] >= ranks[ax][b[ax]] for ax in range(len(a)))
    return le or ge


def random_antichain(rng, length: int, k: int, max_size: int) -> list[tuple[int, ...]]:
    """Greedy random antichain under the all-increasing orders."""
    ranks = [{v: v for v in range(length)} for _ in range(k)]
    out: list[tuple[int, ...]] = []
    attempts = 0
    while len(out) < max_size and attempts < 200:
        attempts += 1
        cand = tuple(rng.randrange(length) for _ in range(k))
        if cand in out:
            continue
        if all(not comparable(cand, other, ranks) for other in out):
            out.append(cand)
    return out
