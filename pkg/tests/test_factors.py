"""Lattice arithmetic: canonical bases, joins, intersections, coset reps."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kurosh.factors import (
    DimensionMismatch,
    EQUAL,
    GREATER,
    LESS,
    Lattice,
    coset_reduce,
    factor_compare,
    lattice_crt,
    lattice_intersect,
    lattice_join,
    vadd,
    vsub,
)

small_int = st.integers(min_value=-6, max_value=6)


def vectors(dim):
    return st.tuples(*([small_int] * dim))


def lattices(dim):
    return st.lists(vectors(dim), max_size=3).map(
        lambda vs: Lattice.from_vectors(dim, vs)
    )


# -- canonical form -----------------------------------------------------------


@given(st.integers(1, 3).flatmap(lambda d: st.lists(vectors(d), max_size=4)
                                 .map(lambda vs: (d, vs))))
def test_hnf_invariant_under_regeneration(data):
    dim, vs = data
    lat = Lattice.from_vectors(dim, vs)
    rng = random.Random(repr(vs))
    # random integer recombinations of the rows span the same lattice
    rows = [list(r) for r in lat.rows]
    combos = []
    for _ in range(4):
        combo = [0] * dim
        for r in rows:
            c = rng.randint(-3, 3)
            combo = [a + c * b for a, b in zip(combo, r)]
        combos.append(combo)
    combos.extend(rows)
    rng.shuffle(combos)
    assert Lattice.from_vectors(dim, combos) == lat


def test_hnf_shape():
    lat = Lattice.from_vectors(2, [(4, 1), (0, 3)])
    for row in lat.rows:
        pivot = next(j for j, a in enumerate(row) if a)
        assert row[pivot] > 0
    pivots = [next(j for j, a in enumerate(r) if a) for r in lat.rows]
    assert pivots == sorted(set(pivots))


# -- join / intersect ---------------------------------------------------------


def test_intersection_example():
    a = Lattice.from_vectors(2, [(2, 0), (0, 2)])
    b = Lattice.from_vectors(2, [(3, 0), (0, 3)])
    assert lattice_intersect(a, b) == Lattice.from_vectors(2, [(6, 0), (0, 6)])


def test_intersection_against_box_enumeration():
    rng = random.Random(5)
    for _ in range(30):
        dim = rng.choice([1, 2])
        a = Lattice.from_vectors(
            dim, [[rng.randint(-4, 4) for _ in range(dim)] for _ in range(2)]
        )
        b = Lattice.from_vectors(
            dim, [[rng.randint(-4, 4) for _ in range(dim)] for _ in range(2)]
        )
        inter = a.intersect(b)
        box = range(-12, 13)
        pts = [(x,) for x in box] if dim == 1 else [
            (x, y) for x in box for y in box
        ]
        for p in pts:
            assert inter.contains(p) == (a.contains(p) and b.contains(p))


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(lattices(d), lattices(d))))
def test_absorption_laws(pair):
    a, b = pair
    assert a.intersect(a.join_lattice(b)) == a
    assert a.join_lattice(a.intersect(b)) == a


@given(st.integers(1, 2).flatmap(
    lambda d: st.tuples(lattices(d), st.lists(vectors(d), min_size=1, max_size=3))))
def test_join_is_monotone_and_contains(data):
    lat, vs = data
    grown = lat
    for v in vs:
        grown = lattice_join(grown, v)
        assert grown.contains(v)
    for r in lat.rows:
        assert grown.contains(r)


def test_noetherian_chains():
    # every strict join step raises the rank or strictly divides the index
    # (the product of the pivots), so ascending chains terminate
    def measure(lat):
        pivots = [next(a for a in r if a) for r in lat.rows]
        index = 1
        for p in pivots:
            index *= p
        return len(lat.rows), index

    rng = random.Random(11)
    for _ in range(20):
        lat = Lattice.trivial(2)
        for _ in range(100):
            nxt = lat.join((rng.randint(-9, 9), rng.randint(-9, 9)))
            if nxt != lat:
                r0, i0 = measure(lat)
                r1, i1 = measure(nxt)
                assert r1 > r0 or (r1 == r0 and i1 < i0 and i0 % i1 == 0)
                lat = nxt


# -- coset reduction ----------------------------------------------------------


def test_coset_reduce_example():
    lat = Lattice.from_vectors(2, [(2, 0), (0, 3)])
    assert coset_reduce(lat, (5, 4)) == (1, 1)


def test_coset_reduce_against_box():
    lat = Lattice.from_vectors(2, [(2, 0), (0, 3)])
    rng = random.Random(3)
    for _ in range(50):
        x = (rng.randint(-10, 10), rng.randint(-10, 10))
        r = lat.reduce(x)
        assert lat.contains(vsub(x, r))
        # canonical: same rep for everything in the coset
        for s in [(2, 0), (0, 3), (-2, -3), (4, 3)]:
            assert lat.reduce(vadd(x, s)) == r


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(lattices(d), vectors(d))))
def test_reduce_is_a_retraction(data):
    lat, x = data
    r = lat.reduce(x)
    assert lat.reduce(r) == r
    assert lat.contains(vsub(x, r))


@given(st.integers(1, 2).flatmap(
    lambda d: st.tuples(lattices(d), vectors(d), vectors(d))))
def test_contains_and_express_agree(data):
    lat, x, _ = data
    coeffs = lat.express(x)
    assert (coeffs is not None) == lat.contains(x)
    if coeffs is not None:
        acc = (0,) * lat.dim
        for c, row in zip(coeffs, lat.rows):
            acc = vadd(acc, tuple(c * a for a in row))
        assert acc == x


# -- CRT ----------------------------------------------------------------------


@given(st.integers(1, 2).flatmap(
    lambda d: st.tuples(lattices(d), vectors(d), lattices(d), vectors(d))))
@settings(max_examples=200)
def test_lattice_crt(data):
    s1, x1, s2, x2 = data
    z = lattice_crt(s1, x1, s2, x2)
    solvable = s1.join_lattice(s2).contains(vsub(x1, x2))
    assert (z is not None) == solvable
    if z is not None:
        assert s1.contains(vsub(z, x1))
        assert s2.contains(vsub(z, x2))


# -- factor order -------------------------------------------------------------


def test_factor_compare_total_and_translation_invariant():
    rng = random.Random(9)
    for _ in range(100):
        x = (rng.randint(-5, 5), rng.randint(-5, 5))
        y = (rng.randint(-5, 5), rng.randint(-5, 5))
        t = (rng.randint(-5, 5), rng.randint(-5, 5))
        c = factor_compare(x, y)
        assert c in (LESS, EQUAL, GREATER)
        assert factor_compare(y, x) == -c
        assert factor_compare(vadd(x, t), vadd(y, t)) == c
    with pytest.raises(DimensionMismatch):
        factor_compare((1,), (1, 2))
