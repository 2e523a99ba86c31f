"""A computable bi-invariant order on free groups via truncated power series.

Each generator a_i maps to 1 + X_i in the ring of integer power series in
noncommuting variables X_1..X_n; a_i^-1 maps to the alternating geometric
series.  Two group elements are compared at the graded-lexicographically
smallest monomial where their expansions differ; the larger coefficient wins.
Truncating at the sum of the generator lengths is always enough to see the
first difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .words import Presentation, Word

Monomial = Tuple[int, ...]  # sequence of variable (= factor) indices
Series = Dict[Monomial, int]

LESS, EQUAL, GREATER = -1, 0, 1


class UnsupportedOrder(ValueError):
    """The whole-group order is implemented for all-Z presentations only."""


def _require_all_z(pres: Presentation) -> None:
    if not pres.all_z():
        raise UnsupportedOrder(
            "the series order needs every factor to be Z (rank 1); "
            f"got ranks {pres.ranks}"
        )


def _binomial_row(n: int, degree: int) -> Tuple[int, ...]:
    """Coefficients of (1+X)^n up to X^degree, n any integer."""
    out = [1]
    c = 1
    for j in range(1, degree + 1):
        c = c * (n - j + 1) // j
        out.append(c)
    return tuple(out)


def _mul_truncated(a: Series, b: Series, degree: int) -> Series:
    out: Series = {}
    for ma, ca in a.items():
        room = degree - len(ma)
        for mb, cb in b.items():
            if len(mb) > room:
                continue
            m = ma + mb
            c = out.get(m, 0) + ca * cb
            if c:
                out[m] = c
            elif m in out:
                del out[m]
    return out


_expansion_cache: Dict[Tuple, Series] = {}
_cache_enabled = True


def set_cache_enabled(flag: bool) -> None:
    """Toggle the expansion memo table (results must not change)."""
    global _cache_enabled
    _cache_enabled = flag
    if not flag:
        _expansion_cache.clear()


def expand(word: Word, degree: int) -> Series:
    """Truncated series image of a word (all-Z presentations)."""
    _require_all_z(word.pres)
    key = (word.syllables, degree)
    if _cache_enabled and key in _expansion_cache:
        return dict(_expansion_cache[key])
    out: Series = {(): 1}
    for index, letter in word.syllables:
        n = letter[0]
        row = _binomial_row(n, degree)
        power: Series = {
            (index,) * j: c for j, c in enumerate(row) if c
        }
        out = _mul_truncated(out, power, degree)
    if _cache_enabled:
        _expansion_cache[key] = dict(out)
    return out


def _monomial_key(m: Monomial, variable_order: Optional[Tuple[int, ...]]):
    if variable_order is None:
        return (len(m), m)
    rank = {v: i for i, v in enumerate(variable_order)}
    return (len(m), tuple(rank[i] for i in m))


def magnus_compare(
    g: Word,
    h: Word,
    variable_order: Optional[Tuple[int, ...]] = None,
) -> int:
    """Compare two free-group elements under the series order.

    variable_order is a permutation of 1..n giving the variable precedence
    (default: X_1 < ... < X_n).  The result is a total bi-invariant order.
    """
    _require_all_z(g.pres)
    if g.pres != h.pres:
        raise ValueError("comparing words over different presentations")
    if g.syllables == h.syllables:
        return EQUAL
    # The first difference sits at the lowest degree where the truncations
    # disagree, and that degree never exceeds the sum of generator lengths;
    # deepen one degree at a time so long words stay cheap to compare.
    bound = g.generator_length() + h.generator_length()
    for degree in range(1, bound + 1):
        sg = expand(g, degree)
        sh = expand(h, degree)
        diffs = [m for m in set(sg) | set(sh) if sg.get(m, 0) != sh.get(m, 0)]
        if diffs:
            first = min(diffs, key=lambda m: _monomial_key(m, variable_order))
            return LESS if sg.get(first, 0) < sh.get(first, 0) else GREATER
    raise AssertionError("distinct free-group elements with equal expansions")


@dataclass(frozen=True)
class EdgeName:
    """An edge of the Bass-Serre tree: (orbit index, group element)."""

    orbit_index: int
    element: Word


def edge_compare(
    e: EdgeName,
    f: EdgeName,
    orbit_order: Optional[Tuple[int, ...]] = None,
    variable_order: Optional[Tuple[int, ...]] = None,
) -> int:
    """Lexicographic order on (orbit, element) pairs.

    orbit_order is a permutation of 1..n listing orbit indices from smallest
    to largest (default: natural order).
    """
    if orbit_order is None:
        ra, rb = e.orbit_index, f.orbit_index
    else:
        rank = {v: i for i, v in enumerate(orbit_order)}
        ra, rb = rank[e.orbit_index], rank[f.orbit_index]
    if ra != rb:
        return LESS if ra < rb else GREATER
    return magnus_compare(e.element, f.element, variable_order)
