"""Brute-force ground truth: balls of words, closure graphs, intersections.

Everything here is deliberately dumb: enumerate words, filter by membership,
fold the survivors.  Instances are capped by an element budget (env var
KUROSH_ORACLE_BUDGET, default 10**6); the budget counts enumerated
candidates, since balls grow geometrically.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple

from .factors import Vector, is_zero, vadd
from .graph import FoldBuilder, KuroshGraph, build_folded
from .words import Presentation, Word

DEFAULT_BUDGET = 10**6


class OracleBudgetExceeded(RuntimeError):
    pass


def _budget(budget: Optional[int]) -> int:
    if budget is not None:
        return budget
    return int(os.environ.get("KUROSH_ORACLE_BUDGET", DEFAULT_BUDGET))


def _letters(rank: int, max_exponent: int) -> List[Vector]:
    rng = range(-max_exponent, max_exponent + 1)
    return [v for v in itertools.product(rng, repeat=rank) if not is_zero(v)]


def ball_size(pres: Presentation, max_syllables: int, max_exponent: int) -> int:
    """Exact element count of the ball, without enumerating it."""
    letters = [len(_letters(k, max_exponent)) for k in pres.ranks]
    total = 1
    ways = list(letters)
    total += sum(ways)
    for _ in range(2, max_syllables + 1):
        s = sum(ways)
        ways = [letters[i] * (s - ways[i]) for i in range(len(ways))]
        total += sum(ways)
    return total


@dataclass(frozen=True)
class Ball:
    pres: Presentation
    max_syllables: int
    max_exponent: int
    elements: Tuple[Word, ...]


def enumerate_ball(
    pres: Presentation,
    max_syllables: int,
    max_exponent: int,
    budget: Optional[int] = None,
) -> Ball:
    """All normal-form words with <= max_syllables syllables and letter
    coordinates bounded by max_exponent, in a deterministic order."""
    if max_syllables < 0 or max_exponent < 0:
        raise ValueError("bounds must be >= 0")
    cap = _budget(budget)
    size = ball_size(pres, max_syllables, max_exponent)
    if size > cap:
        raise OracleBudgetExceeded(f"ball has {size} elements, budget {cap}")
    letters = {
        i: sorted(_letters(pres.rank_of(i), max_exponent))
        for i in range(1, pres.n_factors + 1)
    }
    out: List[Word] = [pres.identity()]

    def extend(syllables: Tuple, last: int, depth: int) -> None:
        if depth == 0:
            return
        for i in range(1, pres.n_factors + 1):
            if i == last:
                continue
            for letter in letters[i]:
                word = syllables + ((i, letter),)
                out.append(Word(pres, word))
                extend(word, i, depth - 1)

    extend((), 0, max_syllables)
    out.sort(key=lambda w: (w.syllable_length(), w.syllables))
    return Ball(pres, max_syllables, max_exponent, tuple(out))


def subgroup_ball(
    pres: Presentation,
    gens: Sequence[Word],
    length: int,
    budget: Optional[int] = None,
) -> Set[Word]:
    """All products of at most `length` generators and inverses."""
    cap = _budget(budget)
    alphabet = []
    for g in gens:
        if not g.is_identity():
            alphabet.append(g)
            alphabet.append(g.inverse())
    out: Set[Word] = {pres.identity()}
    frontier = {pres.identity()}
    count = 1
    for _ in range(length):
        nxt = set()
        for w in frontier:
            for a in alphabet:
                count += 1
                if count > cap:
                    raise OracleBudgetExceeded(f"product closure exceeded budget {cap}")
                p = w * a
                if p not in out:
                    out.add(p)
                    nxt.add(p)
        frontier = nxt
        if not frontier:
            break
    return out


@dataclass
class OracleResult:
    graph: KuroshGraph
    stable: bool
    candidates: int
    members: int


def _fold_words(pres: Presentation, words: Sequence[Word]) -> FoldBuilder:
    builder = FoldBuilder(pres)
    builder.fold()
    for w in sorted(words, key=lambda w: (w.syllable_length(), w.syllables)):
        if w.is_identity():
            continue
        if not builder.trace(w):
            builder.add_loop(w)
            builder.fold()
    return builder


def closure_graph(
    pres: Presentation,
    gens: Sequence[Word],
    length: int,
    budget: Optional[int] = None,
    check_stability: bool = True,
) -> OracleResult:
    """Fold the set of all products of <= length generators/inverses."""
    if length < 1:
        raise ValueError("length must be >= 1")
    words = subgroup_ball(pres, gens, length, budget)
    graph = _fold_words(pres, words).snapshot()
    stable = False
    if check_stability:
        bigger = subgroup_ball(pres, gens, length + 1, budget)
        stable = (
            _fold_words(pres, bigger).snapshot().canonical_form()
            == graph.canonical_form()
        )
    return OracleResult(graph, stable, len(words), len(words))


def _joint_members(
    gh: KuroshGraph,
    gk: KuroshGraph,
    max_syllables: int,
    max_exponent: int,
    cap: int,
) -> Tuple[FoldBuilder, int, int]:
    """DFS over normal-form words traceable in both graphs at once.

    Tracing is deterministic, so a word that leaves either graph has no
    member extensions; this prunes the ball without changing the member set.
    """
    pres = gh.pres
    letters = {
        i: sorted(_letters(pres.rank_of(i), max_exponent))
        for i in range(1, pres.n_factors + 1)
    }
    builder = FoldBuilder(pres)
    candidates = 0
    members = 0

    def step(g: KuroshGraph, b: int, index: int, letter: Vector) -> Optional[int]:
        hit = g.b_adj[b].get(index)
        if hit is None:
            return None
        f, p = hit
        q = g.f_info[f][1].reduce(vadd(letter, p))
        return g.f_adj[f].get(q)

    stack: List[Tuple[Tuple, int, int, int]] = [((), 0, gh.basepoint, gk.basepoint)]
    while stack:
        syllables, last, bh, bk = stack.pop()
        if len(syllables) == max_syllables:
            continue
        for i in range(1, pres.n_factors + 1):
            if i == last:
                continue
            for letter in letters[i]:
                candidates += 1
                if candidates > cap:
                    raise OracleBudgetExceeded(
                        f"intersection enumeration exceeded budget {cap}"
                    )
                nh = step(gh, bh, i, letter)
                if nh is None:
                    continue
                nk = step(gk, bk, i, letter)
                if nk is None:
                    continue
                word = syllables + ((i, letter),)
                if nh == gh.basepoint and nk == gk.basepoint:
                    members += 1
                    w = Word(pres, word)
                    if not builder.trace(w):
                        builder.add_loop(w)
                        builder.fold()
                stack.append((word, i, nh, nk))
    return builder, candidates, members


def intersection_oracle(
    pres: Presentation,
    gens_h: Sequence[Word],
    gens_k: Sequence[Word],
    max_syllables: int,
    max_exponent: int,
    budget: Optional[int] = None,
    check_stability: bool = True,
) -> OracleResult:
    """Fold every ball word that is a member of both subgroups."""
    if max_syllables < 1 or max_exponent < 1:
        raise ValueError("bounds must be >= 1")
    cap = _budget(budget)
    gh = build_folded(pres, gens_h)
    gk = build_folded(pres, gens_k)
    builder, candidates, members = _joint_members(
        gh, gk, max_syllables, max_exponent, cap
    )
    graph = builder.snapshot()
    stable = False
    if check_stability:
        bigger, c2, _ = _joint_members(
            gh, gk, max_syllables + 1, max_exponent + 1, cap
        )
        candidates += c2
        stable = bigger.snapshot().canonical_form() == graph.canonical_form()
    return OracleResult(graph, stable, candidates, members)


def auto_bounds(gens_h: Sequence[Word], gens_k: Sequence[Word]) -> Tuple[int, int]:
    """Modest enumeration bounds scaled to the generator sizes."""
    longest = max(
        [w.syllable_length() for w in list(gens_h) + list(gens_k)] or [1]
    )
    biggest = max(
        [
            max((abs(a) for _, x in w.syllables for a in x), default=1)
            for w in list(gens_h) + list(gens_k)
        ]
        or [1]
    )
    return (min(2 * longest + 2, 8), min(biggest + 1, 4))
