"""Exact linear algebra over the prime field F_p.

Vectors and matrices carry their entries as plain integer tuples reduced
mod p, so every computation here is exact.  Subspaces are stored through
their reduced row echelon bases, which makes them canonical: two
subspaces are equal exactly when their stored bases agree, so they can
be hashed, compared, enumerated and counted directly.  Quotient vectors
are represented by the unique coset representative vanishing on the
pivot columns of the subspace being quotiented out.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError, DegenerateLineError

MAX_PRIME = (1 << 31) - 1
_INV_TABLE_MAX = 1 << 16
DEFAULT_SUBSPACE_CAP = 10**6


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p) -> int:
    """Normalize p (an int or a FieldPrime) to a validated prime int."""
    if isinstance(p, FieldPrime):
        return p.p
    p = int(p)
    if not 2 <= p <= MAX_PRIME:
        raise ValueError(f"prime must satisfy 2 <= p <= 2^31 - 1, got {p}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


@lru_cache(maxsize=None)
def _inverse_table(p: int) -> tuple[int, ...]:
    return (0,) + tuple(pow(a, -1, p) for a in range(1, p))


def inverse_mod(a: int, p: int) -> int:
    """Multiplicative inverse mod p: table lookup for small p, pow otherwise."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no multiplicative inverse")
    if p < _INV_TABLE_MAX:
        return _inverse_table(p)[a]
    return pow(a, -1, p)


@dataclass(frozen=True)
class FieldPrime:
    """The prime field F_p; the modulus is validated at construction."""

    p: int

    def __post_init__(self):
        object.__setattr__(self, "p", check_prime(int(self.p)))

    def inv(self, a: int) -> int:
        return inverse_mod(a, self.p)


def coords_of(v) -> tuple[int, ...]:
    """Coordinate tuple of v, accepting FpVector or any int sequence."""
    if isinstance(v, FpVector):
        return v.coords
    return tuple(int(c) for c in v)


def reduce_coords(coords, p: int) -> tuple[int, ...]:
    return tuple(int(c) % p for c in coords)


@dataclass(frozen=True)
class FpVector:
    """A vector in F_p^n with coordinates stored reduced mod p."""

    coords: tuple[int, ...]
    p: int

    @classmethod
    def make(cls, coords: Iterable[int], p) -> "FpVector":
        p = check_prime(p)
        return cls(reduce_coords(coords, p), p)

    @property
    def n(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check_mate(self, other: "FpVector") -> None:
        if self.p != other.p:
            raise ValueError("vectors live over different primes")
        if len(self.coords) != len(other.coords):
            raise ValueError("vectors have mismatched dimensions")

    def __add__(self, other: "FpVector") -> "FpVector":
        self._check_mate(other)
        p = self.p
        return FpVector(tuple((a + b) % p for a, b in zip(self.coords, other.coords)), p)

    def __sub__(self, other: "FpVector") -> "FpVector":
        self._check_mate(other)
        p = self.p
        return FpVector(tuple((a - b) % p for a, b in zip(self.coords, other.coords)), p)

    def scale(self, c: int) -> "FpVector":
        p = self.p
        c %= p
        return FpVector(tuple((c * a) % p for a in self.coords), p)


@dataclass(frozen=True)
class FpMatrix:
    """A matrix over F_p stored as a tuple of row tuples."""

    rows: tuple[tuple[int, ...], ...]
    p: int

    @classmethod
    def make(cls, rows: Iterable[Iterable[int]], p) -> "FpMatrix":
        p = check_prime(p)
        reduced = tuple(reduce_coords(r, p) for r in rows)
        if reduced:
            width = len(reduced[0])
            if any(len(r) != width for r in reduced):
                raise ValueError("matrix rows have unequal lengths")
        return cls(reduced, p)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)


def rref_with_pivots(
    rows: Sequence[Sequence[int]], p: int
) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form over F_p.

    Returns the nonzero rows (pivot entries 1, pivot columns cleared
    elsewhere, pivot columns strictly increasing) together with the
    pivot column indices.  The output rows are a canonical basis of the
    row space, so identical row spaces give identical outputs.
    """
    work = [list(reduce_coords(r, p)) for r in rows]
    if work:
        ncols = len(work[0])
        if any(len(r) != ncols for r in work):
            raise ValueError("rows have unequal lengths")
    else:
        ncols = 0
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        sel = next((r for r in range(row, len(work)) if work[r][col]), None)
        if sel is None:
            continue
        work[row], work[sel] = work[sel], work[row]
        inv = inverse_mod(work[row][col], p)
        work[row] = [(inv * v) % p for v in work[row]]
        piv_row = work[row]
        for r in range(len(work)):
            if r != row and work[r][col]:
                c = work[r][col]
                wr = work[r]
                work[r] = [(wr[j] - c * piv_row[j]) % p for j in range(ncols)]
        pivots.append(col)
        row += 1
        if row == len(work):
            break
    return tuple(tuple(r) for r in work[:row]), tuple(pivots)


def rref(rows: Sequence[Sequence[int]], p: int) -> tuple[tuple[int, ...], ...]:
    return rref_with_pivots(rows, p)[0]


def rank(m, p=None) -> int:
    """Rank over F_p.  Accepts an FpMatrix, or raw rows together with p."""
    if isinstance(m, FpMatrix):
        rows, p = m.rows, m.p
    else:
        if p is None:
            raise ValueError("rank of raw rows needs p")
        rows, p = [coords_of(r) for r in m], check_prime(p)
    return len(rref_with_pivots(rows, p)[0])


def minor_nonsingular(m: FpMatrix, row_idx: Sequence[int], col_idx: Sequence[int]) -> bool:
    """Whether the square submatrix on the given index sets is invertible."""
    row_idx = tuple(row_idx)
    col_idx = tuple(col_idx)
    if len(row_idx) != len(col_idx):
        raise ValueError("minor needs equally many rows and columns")
    nr, nc = m.shape
    if any(not 0 <= i < nr for i in row_idx) or any(not 0 <= j < nc for j in col_idx):
        raise IndexError("minor index out of range")
    sub = [[m.rows[i][j] for j in col_idx] for i in row_idx]
    return len(rref_with_pivots(sub, m.p)[0]) == len(row_idx)


def invert_matrix(rows: Sequence[Sequence[int]], p: int) -> tuple[tuple[int, ...], ...]:
    """Inverse of a square matrix over F_p, by Gauss-Jordan on [M | I]."""
    size = len(rows)
    aug = [list(reduce_coords(r, p)) + [1 if i == j else 0 for j in range(size)]
           for i, r in enumerate(rows)]
    if any(len(r) != 2 * size for r in aug):
        raise ValueError("matrix is not square")
    reduced, pivots = rref_with_pivots(aug, p)
    if pivots != tuple(range(size)):
        raise ValueError("matrix is singular")
    return tuple(r[size:] for r in reduced)


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n held in canonical form.

    ``basis`` is the reduced row echelon basis (possibly empty for the
    zero subspace).  Equality and hashing follow from the dataclass
    fields, which is sound because the basis is canonical.
    """

    basis: tuple[tuple[int, ...], ...]
    ambient_dim: int
    p: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ambient_dim: int, p) -> "Subspace":
        p = check_prime(p)
        rows = [coords_of(r) for r in rows]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError("row length differs from ambient dimension")
        basis, _ = rref_with_pivots(rows, p)
        return cls(basis, ambient_dim, p)

    @classmethod
    def zero(cls, ambient_dim: int, p) -> "Subspace":
        return cls((), ambient_dim, check_prime(p))

    @classmethod
    def full(cls, ambient_dim: int, p) -> "Subspace":
        p = check_prime(p)
        rows = tuple(tuple(1 if j == i else 0 for j in range(ambient_dim))
                     for i in range(ambient_dim))
        return cls(rows, ambient_dim, p)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, v in enumerate(row) if v) for row in self.basis)

    def reduce(self, v) -> tuple[int, ...]:
        """Canonical coset representative of v modulo this subspace.

        The representative vanishes on every pivot column of the basis;
        it is zero exactly when v lies in the subspace.
        """
        y = list(reduce_coords(coords_of(v), self.p))
        if len(y) != self.ambient_dim:
            raise ValueError("vector dimension differs from ambient dimension")
        p = self.p
        for row, pc in zip(self.basis, self.pivots):
            c = y[pc]
            if c:
                y = [(y[j] - c * row[j]) % p for j in range(len(y))]
        return tuple(y)

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All p^dim vectors of the subspace, in a deterministic order."""
        n, p = self.ambient_dim, self.p
        for cs in product(range(p), repeat=self.dim):
            acc = [0] * n
            for c, row in zip(cs, self.basis):
                if c:
                    for j in range(n):
                        acc[j] = (acc[j] + c * row[j]) % p
            yield tuple(acc)


def span(vectors: Sequence, p=None, ambient_dim: int | None = None) -> Subspace:
    """Subspace spanned by the given vectors.

    For an empty collection both p and ambient_dim must be supplied;
    otherwise they are inferred and checked for consistency.
    """
    vs = [coords_of(v) for v in vectors]
    for v in vectors:
        if isinstance(v, FpVector):
            if p is None:
                p = v.p
            elif check_prime(p) != v.p:
                raise ValueError("vectors disagree with the supplied prime")
    if not vs:
        if p is None or ambient_dim is None:
            raise ValueError("empty span needs explicit p and ambient_dim")
        return Subspace.zero(ambient_dim, p)
    if p is None:
        raise ValueError("span of raw tuples needs p")
    dims = {len(v) for v in vs}
    if len(dims) != 1:
        raise ValueError("vectors have mixed ambient dimensions")
    n = dims.pop()
    if ambient_dim is not None and ambient_dim != n:
        raise ValueError("vectors do not match the requested ambient dimension")
    return Subspace.from_rows(vs, n, p)


@dataclass(frozen=True)
class QuotientVector:
    """Image of a vector in F_p^n / U, held as its canonical representative."""

    representative: tuple[int, ...]
    modulo: Subspace

    @property
    def is_zero(self) -> bool:
        return not any(self.representative)


def quotient_project(x, u: Subspace) -> QuotientVector:
    return QuotientVector(u.reduce(x), u)


def normalize_line_rep(coords: Sequence[int], p: int) -> tuple[int, ...]:
    """Scale a nonzero vector so its leading nonzero coordinate is 1."""
    coords = reduce_coords(coords, p)
    lead = next((c for c in coords if c), 0)
    if lead == 0:
        raise ValueError("cannot normalize the zero vector")
    inv = inverse_mod(lead, p)
    return tuple((inv * c) % p for c in coords)


@dataclass(frozen=True)
class QuotientLine:
    """A one-dimensional subspace of F_p^n / U in canonical form.

    ``rep`` is the canonical representative of a spanning vector,
    rescaled so its leading nonzero coordinate is 1.  Two lines over the
    same subspace are equal exactly when their reps agree.
    """

    rep: tuple[int, ...]
    modulo: Subspace


def quotient_line(x, u: Subspace) -> QuotientLine:
    red = u.reduce(x)
    if not any(red):
        raise DegenerateLineError("vector lies in the subspace, no line spanned")
    return QuotientLine(normalize_line_rep(red, u.p), u)


def gaussian_binomial(n: int, d: int, p: int) -> int:
    """Number of d-dimensional subspaces of F_p^n."""
    p = check_prime(p)
    if d < 0 or d > n:
        return 0
    num = 1
    den = 1
    for i in range(d):
        num *= p**n - p**i
        den *= p**d - p**i
    return num // den


def enumerate_subspaces(n: int, d: int, p, cap: int = DEFAULT_SUBSPACE_CAP) -> list[Subspace]:
    """All d-dimensional subspaces of F_p^n, each exactly once.

    Subspaces are generated directly in canonical form: choose the pivot
    columns of the echelon basis, then fill the free entries in every
    possible way.  Raises CapExceededError when the total count exceeds
    the cap.
    """
    p = check_prime(p)
    if d < 0 or d > n:
        raise ValueError(f"dimension {d} out of range for ambient {n}")
    total = gaussian_binomial(n, d, p)
    if total > cap:
        raise CapExceededError(f"{total} subspaces exceed the cap {cap}")
    out: list[Subspace] = []
    for pivots in combinations(range(n), d):
        pivot_set = set(pivots)
        free_cells = [(i, j) for i in range(d) for j in range(pivots[i] + 1, n)
                      if j not in pivot_set]
        for assignment in product(range(p), repeat=len(free_cells)):
            rows = [[0] * n for _ in range(d)]
            for i in range(d):
                rows[i][pivots[i]] = 1
            for (i, j), val in zip(free_cells, assignment):
                rows[i][j] = val
            out.append(Subspace(tuple(tuple(r) for r in rows), n, p))
    return out


def random_subspace(n: int, d: int, p, rng: random.Random) -> Subspace:
    """A uniformly random d-dimensional subspace of F_p^n.

    Samples a d x n matrix with uniform entries and rejects until it has
    full rank; every d-dimensional subspace is the row space of equally
    many full-rank matrices, so the row space is uniform.
    """
    p = check_prime(p)
    if d < 0 or d > n:
        raise ValueError(f"dimension {d} out of range for ambient {n}")
    if d == 0:
        return Subspace.zero(n, p)
    while True:
        rows = [[rng.randrange(p) for _ in range(n)] for _ in range(d)]
        basis, _ = rref_with_pivots(rows, p)
        if len(basis) == d:
            return Subspace(basis, n, p)


def all_vectors(n: int, p) -> Iterator[tuple[int, ...]]:
    """All vectors of F_p^n in lexicographic order."""
    p = check_prime(p)
    return product(range(p), repeat=n)


def write_vector_file(dest, vectors: Sequence, p: int, n: int) -> None:
    """Write vectors in the text format: header ``p=<p> n=<n>``, then one
    vector per line with space-separated coordinates."""
    lines = [f"p={p} n={n}"]
    for v in vectors:
        cs = coords_of(v)
        if len(cs) != n:
            raise ValueError("vector length differs from header dimension")
        lines.append(" ".join(str(c % p) for c in cs))
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def _header_fields(line: str, keys: Sequence[str]) -> dict[str, int]:
    fields = {}
    for tok in line.split():
        if "=" not in tok:
            raise ValueError(f"malformed header token {tok!r}")
        key, _, val = tok.partition("=")
        fields[key] = int(val)
    missing = [k for k in keys if k not in fields]
    if missing:
        raise ValueError(f"header is missing {missing}")
    return fields


def read_vector_file(src) -> tuple[int, int, list[tuple[int, ...]]]:
    """Read the vector text format; returns (p, n, vectors)."""
    if hasattr(src, "read"):
        text = src.read()
    else:
        text = Path(src).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty vector file")
    fields = _header_fields(lines[0], ("p", "n"))
    p, n = check_prime(fields["p"]), fields["n"]
    vectors = []
    for ln in lines[1:]:
        cs = tuple(int(t) % p for t in ln.split())
        if len(cs) != n:
            raise ValueError(f"expected {n} coordinates, got {len(cs)}: {ln!r}")
        vectors.append(cs)
    return p, n, vectors
