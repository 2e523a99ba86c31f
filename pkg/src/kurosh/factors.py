"""Exact lattice arithmetic for the abelian factor groups Z and Z^k.

Sublattices of Z^k are kept in a canonical row-style Hermite normal form:
pivot columns strictly increasing, pivots positive, entries above each pivot
reduced into [0, pivot).  The trivial subgroup is the empty basis.  All
arithmetic is over Python ints, so folding can square magnitudes freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple

Vector = Tuple[int, ...]

LESS, EQUAL, GREATER = -1, 0, 1


class DimensionMismatch(ValueError):
    """Operands live in Z^k for different k."""


def vadd(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vneg(x: Vector) -> Vector:
    return tuple(-a for a in x)


def is_zero(x: Vector) -> bool:
    return all(a == 0 for a in x)


def factor_compare(x: Vector, y: Vector) -> int:
    """Lexicographic comparison of coordinate vectors.

    Total and translation-invariant, so it orders each factor group Z^k.
    """
    if len(x) != len(y):
        raise DimensionMismatch(f"compare of vectors of length {len(x)} and {len(y)}")
    if x < y:
        return LESS
    if x > y:
        return GREATER
    return EQUAL


def _extgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _pivot(row: Sequence[int]) -> int:
    for j, a in enumerate(row):
        if a:
            return j
    return -1


def _echelon_insert(basis: list, vec: list, width: int) -> None:
    """Insert vec into an integer row-echelon basis (pivots over the first
    `width` columns; trailing columns, if any, ride along as bookkeeping)."""
    for j in range(width):
        if vec[j] == 0:
            continue
        hit = None
        for idx, row in enumerate(basis):
            p = _pivot(row[:width])
            if p == j:
                hit = idx
                break
        if hit is None:
            basis.append(vec)
            basis.sort(key=lambda r: _pivot(r[:width]) if _pivot(r[:width]) >= 0 else width)
            return
        row = basis[hit]
        g, s, t = _extgcd(row[j], vec[j])
        new_row = [s * a + t * b for a, b in zip(row, vec)]
        new_vec = [(row[j] // g) * b - (vec[j] // g) * a for a, b in zip(row, vec)]
        basis[hit] = new_row
        vec = new_vec
    # vec is zero on the pivot range; callers that track transforms read it back
    if any(vec[width:]):
        basis.append(vec)


def _normalize_hnf(basis: list, width: int) -> list:
    """Positive pivots, entries above pivots reduced into [0, pivot)."""
    rows = [r for r in basis if _pivot(r[:width]) >= 0]
    rows.sort(key=lambda r: _pivot(r[:width]))
    for i, row in enumerate(rows):
        j = _pivot(row[:width])
        if row[j] < 0:
            rows[i] = [-a for a in row]
    # reduce above-pivot entries left to right: a reduction by rows[i] only
    # changes columns at or after pivot(rows[i]), so later (further-right)
    # reductions never disturb columns already in range
    for i in range(len(rows)):
        j = _pivot(rows[i][:width])
        piv = rows[i][j]
        for k in range(i):
            q = rows[k][j] // piv
            if q:
                rows[k] = [a - q * b for a, b in zip(rows[k], rows[i])]
    return rows


def _hnf(dim: int, vectors: Iterable[Sequence[int]]) -> Tuple[Vector, ...]:
    basis: list = []
    for v in vectors:
        _echelon_insert(basis, list(v), dim)
    rows = _normalize_hnf(basis, dim)
    return tuple(tuple(r) for r in rows)


def _hnf_with_kernel(dim: int, vectors: Sequence[Sequence[int]]):
    """HNF of the rows plus bookkeeping.

    Returns (rows, coeffs, kernel) where rows are the nonzero HNF rows,
    coeffs[i] expresses rows[i] as an integer combination of the input
    vectors, and kernel is a basis of the left kernel (integer combinations
    of the inputs summing to zero).
    """
    m = len(vectors)
    basis: list = []
    for i, v in enumerate(vectors):
        aug = list(v) + [1 if j == i else 0 for j in range(m)]
        _echelon_insert(basis, aug, dim)
    rows, coeffs, kernel = [], [], []
    for r in basis:
        if _pivot(r[:dim]) >= 0:
            rows.append(r)
        else:
            kernel.append(tuple(r[dim:]))
    rows = _normalize_hnf(rows, dim)
    for r in rows:
        coeffs.append(tuple(r[dim:]))
    rows = [tuple(r[:dim]) for r in rows]
    return rows, coeffs, kernel


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^dim with canonical HNF basis rows."""

    dim: int
    rows: Tuple[Vector, ...]

    @staticmethod
    def trivial(dim: int) -> "Lattice":
        return Lattice(dim, ())

    @staticmethod
    def full(dim: int) -> "Lattice":
        rows = tuple(tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim))
        return Lattice(dim, rows)

    @staticmethod
    def from_vectors(dim: int, vectors: Iterable[Sequence[int]]) -> "Lattice":
        for v in vectors:
            if len(v) != dim:
                raise DimensionMismatch(f"vector of length {len(v)} in Z^{dim}")
        return Lattice(dim, _hnf(dim, vectors))

    def is_trivial(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return len(self.rows) == self.dim and all(
            r[_pivot(r)] == 1 for r in self.rows
        )

    def _check(self, x: Sequence[int]) -> None:
        if len(x) != self.dim:
            raise DimensionMismatch(f"vector of length {len(x)} in Z^{self.dim}")

    def join(self, x: Vector) -> "Lattice":
        """Smallest lattice containing self and x."""
        self._check(x)
        return Lattice(self.dim, _hnf(self.dim, list(self.rows) + [list(x)]))

    def join_lattice(self, other: "Lattice") -> "Lattice":
        if other.dim != self.dim:
            raise DimensionMismatch("lattice join across different ambient ranks")
        return Lattice(self.dim, _hnf(self.dim, list(self.rows) + list(other.rows)))

    def intersect(self, other: "Lattice") -> "Lattice":
        """Intersection via the left kernel of the stacked bases."""
        if other.dim != self.dim:
            raise DimensionMismatch("lattice intersection across different ambient ranks")
        if self.is_trivial() or other.is_trivial():
            return Lattice.trivial(self.dim)
        stacked = [list(r) for r in self.rows] + [list(r) for r in other.rows]
        _, _, kernel = _hnf_with_kernel(self.dim, stacked)
        r1 = len(self.rows)
        gens = []
        for c in kernel:
            v = [0] * self.dim
            for ci, row in zip(c[:r1], self.rows):
                if ci:
                    v = [a + ci * b for a, b in zip(v, row)]
            gens.append(v)
        return Lattice(self.dim, _hnf(self.dim, gens))

    def reduce(self, x: Sequence[int]) -> Vector:
        """Canonical representative of x + self (reduce by HNF pivot rows)."""
        self._check(x)
        v = list(x)
        for row in self.rows:
            j = _pivot(row)
            q = v[j] // row[j]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, x: Sequence[int]) -> bool:
        return is_zero(self.reduce(x))

    def express(self, x: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """Coefficients c with sum(c_i * rows_i) == x, or None."""
        self._check(x)
        v = list(x)
        coeffs = [0] * len(self.rows)
        for i, row in enumerate(self.rows):
            j = _pivot(row)
            if v[j] % row[j]:
                return None
            q = v[j] // row[j]
            coeffs[i] = q
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(coeffs) if is_zero(tuple(v)) else None


def lattice_crt(s1: Lattice, x1: Vector, s2: Lattice, x2: Vector) -> Optional[Vector]:
    """A vector congruent to x1 mod s1 and to x2 mod s2, or None.

    Exists iff x1 - x2 lies in s1 + s2; the answer is unique modulo the
    intersection s1 ∩ s2.
    """
    if s1.dim != s2.dim or len(x1) != s1.dim or len(x2) != s1.dim:
        raise DimensionMismatch("CRT operands of mixed ambient rank")
    target = vsub(x2, x1)
    stacked = [list(r) for r in s1.rows] + [list(r) for r in s2.rows]
    rows, coeffs, _ = _hnf_with_kernel(s1.dim, stacked)
    # express target over the HNF rows of s1 + s2
    v = list(target)
    combo = [0] * len(stacked)
    for row, c in zip(rows, coeffs):
        j = _pivot(row)
        if v[j] % row[j]:
            return None
        q = v[j] // row[j]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
            combo = [a + q * b for a, b in zip(combo, c)]
    if not is_zero(tuple(v)):
        return None
    r1 = len(s1.rows)
    s1_part = [0] * s1.dim
    for ci, row in zip(combo[:r1], s1.rows):
        if ci:
            s1_part = [a + ci * b for a, b in zip(s1_part, row)]
    return vadd(x1, tuple(s1_part))


# spec-facing aliases over the Lattice methods

def lattice_join(s: Lattice, x: Vector) -> Lattice:
    return s.join(x)


def lattice_intersect(s1: Lattice, s2: Lattice) -> Lattice:
    return s1.intersect(s2)


def coset_reduce(s: Lattice, x: Vector) -> Vector:
    return s.reduce(x)
