"""Folded subgroup graphs: folding, membership, ranks, decompositions."""

import random

import pytest

from kurosh.factors import Lattice
from kurosh.graph import FoldBuilder, KuroshGraph, build_folded
from kurosh.oracle import enumerate_ball, subgroup_ball
from kurosh.words import Presentation, PresentationMismatch, random_word
from kurosh.fuzz import random_generators, random_presentation


@pytest.fixture
def zz():
    return Presentation((1, 1))


def test_single_factor_generator(zz, W):
    g = build_folded(zz, [W("a1^2")])
    nontrivial = [f for f, (i, lat) in g.f_info.items() if not lat.is_trivial()]
    assert len(nontrivial) == 1
    f = nontrivial[0]
    assert g.f_info[f] == (1, Lattice.from_vectors(1, [(2,)]))
    assert g.core_f == {f}
    assert g.kurosh_rank() == (1, 0, 1, 0)


def test_full_group(zz, W):
    g = build_folded(zz, [W("a1"), W("a2")])
    assert g.kurosh_rank() == (2, 0, 2, 1)
    assert len(g.core_b) == 1 and len(g.core_f) == 2


def test_hyperbolic_cycle(zz, W):
    g = build_folded(zz, [W("a1 a2")])
    assert g.kurosh_rank() == (0, 1, 1, 0)
    assert len(g.core_edges) == 4
    assert len(g.core_b) == 2 and len(g.core_f) == 2
    assert all(g.f_info[f][1].is_trivial() for f in g.core_f)


def test_trivial_subgroup(zz):
    g = build_folded(zz, [])
    assert g.kurosh_rank() == (0, 0, 0, 0)
    assert g.member(zz.identity())
    assert not g.member(zz.generator(1))


def test_membership_examples(zz, W):
    g = build_folded(zz, [W("a1^2"), W("a2")])
    assert g.member(W("a1^2 a2^-1"))
    assert not g.member(W("a1"))
    assert g.member(zz.identity())
    with pytest.raises(PresentationMismatch):
        g.member(Presentation((1, 1, 1)).generator(1))


def test_membership_agrees_with_product_closure(zz):
    rng = random.Random(17)
    for trial in range(20):
        pres = random_presentation(rng)
        gens = random_generators(rng, pres)
        g = build_folded(pres, gens)
        closure = subgroup_ball(pres, gens, 3, budget=10**6)
        for w in closure:
            assert g.member(w), w
        # closed under multiplication by generators and inversion
        sample = random.Random(trial).sample(sorted(closure, key=repr),
                                             min(10, len(closure)))
        for w in sample:
            assert g.member(w.inverse())
            for h in gens:
                assert g.member(w * h)


def test_non_members_on_small_ball(zz, W):
    g = build_folded(zz, [W("a1^2"), W("a2^2")])
    closure = subgroup_ball(zz, [W("a1^2"), W("a2^2")], 5, budget=10**6)
    for w in enumerate_ball(zz, 3, 3).elements:
        if w in closure:
            assert g.member(w)
        elif w.generator_length() <= 4:
            # small non-members: even exponent sums are necessary but not
            # sufficient; spot-check the graph against parity
            if any(x[0] % 2 for _, x in w.syllables):
                assert not g.member(w)


def test_decomposition_examples(zz, W):
    g = build_folded(zz, [W("a1"), W("a2")])
    parts, free = g.decomposition()
    assert [(i, rep.is_identity(), lat.rows) for i, rep, lat in parts] == [
        (1, True, ((1,),)),
        (2, True, ((1,),)),
    ]
    assert free == []

    g = build_folded(zz, [W("a1^2"), W("a1 a2 a1^-1")])
    parts, free = g.decomposition()
    assert [(i, tuple(rep.syllables), lat.rows) for i, rep, lat in parts] == [
        (1, (), ((2,),)),
        (2, ((1, (1,)),), ((1,),)),
    ]
    assert free == []

    g = build_folded(zz, [W("a1 a2")])
    parts, free = g.decomposition()
    assert parts == []
    assert free == [W("a1 a2")]


def test_decomposition_round_trip_random():
    rng = random.Random(23)
    for _ in range(40):
        pres = random_presentation(rng)
        gens = random_generators(rng, pres)
        g = build_folded(pres, gens)
        c, betti, _, _ = g.kurosh_rank()
        parts, free = g.decomposition()
        assert len(parts) == c
        assert len(free) == betti
        regen = g.regenerators()
        for w in regen:
            assert g.member(w)
        assert build_folded(pres, regen).canonical_form() == g.canonical_form()


def test_canonical_form_properties(zz, W):
    g1 = build_folded(zz, [W("a1"), W("a2")])
    g2 = build_folded(zz, [W("a2"), W("a1")])
    assert g1.canonical_form() == g2.canonical_form()
    assert (
        build_folded(zz, [W("a1")]).canonical_form()
        != build_folded(zz, [W("a2")]).canonical_form()
    )


def test_fold_confluence_under_shuffles():
    rng = random.Random(31)
    for trial in range(25):
        pres = random_presentation(rng)
        gens = random_generators(rng, pres)
        reference = build_folded(pres, gens).canonical_form()
        for k in range(3):
            shuffled = build_folded(pres, gens, rng=random.Random(f"{trial}:{k}"))
            assert shuffled.canonical_form() == reference


def test_spur_invariance_under_conjugation():
    # conjugating every generator by a common word moves the basepoint down
    # a spur; the core invariants cannot change
    rng = random.Random(37)
    for _ in range(30):
        pres = random_presentation(rng)
        gens = random_generators(rng, pres)
        g = build_folded(pres, gens)
        for _ in range(3):
            u = random_word(pres, 3, 2, rng=rng)
            conj = [w.conjugate_by(u) for w in gens]
            g2 = build_folded(pres, conj)
            assert g2.kurosh_rank() == g.kurosh_rank()


def test_unfolded_input_rejected(zz):
    lat = Lattice.trivial(1)
    with pytest.raises(ValueError):
        # two index-1 edges at one B-vertex
        KuroshGraph(zz, 0, {0: (1, lat), 1: (1, lat)}, {(0, 0, (0,)), (0, 1, (0,))})
    with pytest.raises(ValueError):
        # non-canonical label for S = 2Z
        KuroshGraph(zz, 0, {0: (1, Lattice.from_vectors(1, [(2,)]))}, {(0, 0, (3,))})


def test_identity_generators_are_skipped(zz):
    g = build_folded(zz, [zz.identity(), zz.generator(1)])
    assert g.kurosh_rank() == (1, 0, 1, 0)


def test_word_paths_are_consistent():
    rng = random.Random(41)
    for _ in range(20):
        pres = random_presentation(rng)
        gens = random_generators(rng, pres)
        g = build_folded(pres, gens)
        for b in g.b_vertices:
            w = g.word_to_b(b)
            # tracing w from the basepoint lands on b
            cur = g.basepoint
            for index, letter in w.syllables:
                f, p = g.b_adj[cur][index]
                q = g.f_info[f][1].reduce(tuple(
                    a + c for a, c in zip(letter, p)
                ))
                cur = g.f_adj[f][q]
            assert cur == b


def test_z2_factors_fold():
    pres = Presentation((2, 1))
    w1 = pres.syllable(1, (2, 0))
    w2 = pres.syllable(1, (0, 2))
    w3 = pres.syllable(1, (1, 1)) * pres.generator(2) * pres.syllable(1, (-1, -1))
    g = build_folded(pres, [w1, w2, w3])
    c, betti, kappa, _ = g.kurosh_rank()
    assert c == 2 and betti == 0 and kappa == 2
    assert g.member(pres.syllable(1, (2, 2)))
    assert not g.member(pres.syllable(1, (1, 0)))


def test_dot_export(zz, W):
    g = build_folded(zz, [W("a1 a2")])
    dot = g.to_dot()
    assert dot.startswith("graph") and dot.endswith("}")
    assert dot.count("--") == len(g.edges)
