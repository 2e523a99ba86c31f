"""Folded quotient graphs for finitely generated subgroups of free products.

The graph is bipartite: untyped B-vertices, and F-vertices each carrying a
factor index and a stabiliser sublattice S.  Edges join a B-vertex to an
F-vertex and carry a canonical coset representative of S as label.  A wedge
of generator loops at the basepoint is folded to a fixed point with three
moves:

  F1  a B-vertex with two same-index edges merges the two F-endpoints,
      transporting the second chart by the entry-label difference and
      joining the stabiliser records;
  F2  two edges at an F-vertex whose labels agree modulo S merge their
      B-endpoints;
  F3  two edges at an F-vertex sharing a B-endpoint but not a coset enlarge
      S by the label difference.

Folding terminates: each move either drops the edge count or strictly
enlarges a stabiliser lattice, and ascending lattice chains are finite.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .factors import Lattice, Vector, vadd, vneg, vsub
from .words import Presentation, PresentationMismatch, Word

log = logging.getLogger(__name__)

Edge = Tuple[int, int, Vector]  # (B-vertex, F-vertex, label)


def _syllable_word(pres: Presentation, index: int, letter: Vector) -> Word:
    if all(a == 0 for a in letter):
        return pres.identity()
    return Word(pres, ((index, tuple(letter)),))


class FoldBuilder:
    """Mutable graph under construction; fold() drives it to a fixed point."""

    def __init__(self, pres: Presentation, rng: Optional[random.Random] = None):
        self.pres = pres
        self.rng = rng
        self.basepoint = 0
        self._next_b = 1
        self._next_f = 0
        self.f_index: Dict[int, int] = {}
        self.f_lat: Dict[int, Lattice] = {}
        self.edges: Set[Edge] = set()

    def _new_b(self) -> int:
        b = self._next_b
        self._next_b += 1
        return b

    def _new_f(self, index: int) -> int:
        f = self._next_f
        self._next_f += 1
        self.f_index[f] = index
        self.f_lat[f] = Lattice.trivial(self.pres.rank_of(index))
        return f

    def add_loop(self, w: Word) -> None:
        if w.pres != self.pres:
            raise PresentationMismatch("generator over a different presentation")
        if w.is_identity():
            log.warning("skipping identity generator")
            return
        b = self.basepoint
        syls = w.syllables
        for t, (index, letter) in enumerate(syls):
            f = self._new_f(index)
            nxt = self.basepoint if t == len(syls) - 1 else self._new_b()
            zero = (0,) * self.pres.rank_of(index)
            self.edges.add((b, f, zero))
            self.edges.add((nxt, f, letter))
            b = nxt

    # -- folding ----------------------------------------------------------

    def _merge_b(self, keep: int, drop: int) -> None:
        if keep == drop:
            return
        self.edges = {(keep if b == drop else b, f, l) for (b, f, l) in self.edges}
        if self.basepoint == drop:
            self.basepoint = keep

    def _merge_f(self, keep: int, drop: int, shift: Vector) -> None:
        moved = set()
        for (b, f, l) in self.edges:
            if f == drop:
                moved.add((b, keep, vadd(l, shift)))
            else:
                moved.add((b, f, l))
        self.edges = moved
        self.f_lat[keep] = self.f_lat[keep].join_lattice(self.f_lat[drop])
        del self.f_lat[drop]
        del self.f_index[drop]

    def _scan(self, items: Iterable) -> List:
        out = list(items)
        if self.rng is not None:
            self.rng.shuffle(out)
        return out

    def _pass(self) -> bool:
        # canonicalize labels (no merges, safe to batch)
        dirty = False
        for (b, f, l) in self._scan(self.edges):
            red = self.f_lat[f].reduce(l)
            if red != l:
                self.edges.discard((b, f, l))
                self.edges.add((b, f, red))
                dirty = True
        if dirty:
            return True
        by_f: Dict[int, List[Edge]] = {}
        for e in self.edges:
            by_f.setdefault(e[1], []).append(e)
        for f in self._scan(by_f):
            by_label: Dict[Vector, int] = {}
            by_b: Dict[int, Vector] = {}
            for (b, _, l) in self._scan(by_f[f]):
                if l in by_label and by_label[l] != b:
                    self._merge_b(by_label[l], b)  # F2
                    return True
                by_label[l] = b
                if b in by_b and by_b[b] != l:
                    self.f_lat[f] = self.f_lat[f].join(vsub(l, by_b[b]))  # F3
                    return True
                by_b[b] = l
        seen: Dict[Tuple[int, int], Tuple[int, Vector]] = {}
        for (b, f, l) in self._scan(self.edges):
            key = (b, self.f_index[f])
            if key in seen:
                f0, l0 = seen[key]
                if f0 != f:
                    self._merge_f(f0, f, vsub(l0, l))  # F1
                    return True
            else:
                seen[key] = (f, l)
        return False

    def fold(self) -> None:
        while self._pass():
            pass

    def trace(self, w: Word) -> bool:
        """Membership on the folded builder state (fold() first)."""
        b_adj: Dict[Tuple[int, int], Tuple[int, Vector]] = {}
        f_adj: Dict[Tuple[int, Vector], int] = {}
        for (b, f, l) in self.edges:
            b_adj[(b, self.f_index[f])] = (f, l)
            f_adj[(f, l)] = b
        b = self.basepoint
        for index, letter in w.syllables:
            hit = b_adj.get((b, index))
            if hit is None:
                return False
            f, p = hit
            q = self.f_lat[f].reduce(vadd(letter, p))
            nxt = f_adj.get((f, q))
            if nxt is None:
                return False
            b = nxt
        return b == self.basepoint

    def snapshot(self) -> "KuroshGraph":
        f_info = {f: (self.f_index[f], self.f_lat[f]) for f in self.f_index}
        return KuroshGraph(self.pres, self.basepoint, f_info, self.edges)


class KuroshGraph:
    """Folded subgroup graph: core plus a spur path from the basepoint."""

    def __init__(
        self,
        pres: Presentation,
        basepoint: int,
        f_info: Dict[int, Tuple[int, Lattice]],
        edges: Iterable[Edge],
    ):
        self.pres = pres
        self.basepoint = basepoint
        self.f_info = dict(f_info)
        self.edges = frozenset(edges)
        self.b_vertices = {basepoint} | {b for b, _, _ in self.edges}
        self.b_adj: Dict[int, Dict[int, Tuple[int, Vector]]] = {
            b: {} for b in self.b_vertices
        }
        self.f_adj: Dict[int, Dict[Vector, int]] = {f: {} for f in self.f_info}
        for (b, f, l) in self.edges:
            index, lat = self.f_info[f]
            if index in self.b_adj[b]:
                raise ValueError("unfolded graph: two same-index edges at a B-vertex")
            if lat.reduce(l) != l or l in self.f_adj[f]:
                raise ValueError("unfolded graph: non-canonical or clashing labels")
            self.b_adj[b][index] = (f, l)
            self.f_adj[f][l] = b
        self._compute_core()
        self._paths: Optional[Tuple[Dict, Dict, Set[Edge]]] = None

    # -- core -------------------------------------------------------------

    def _compute_core(self) -> None:
        deg: Dict[Tuple[str, int], int] = {}
        for b in self.b_vertices:
            deg[("B", b)] = len(self.b_adj[b])
        for f in self.f_info:
            deg[("F", f)] = len(self.f_adj[f])
        live_edges = set(self.edges)
        alive = set(deg)
        removable = deque(
            v
            for v in alive
            if deg[v] <= 1
            and (v[0] == "B" or self.f_info[v[1]][1].is_trivial())
        )
        while removable:
            v = removable.popleft()
            if v not in alive or deg[v] > 1:
                continue
            alive.discard(v)
            for e in [e for e in live_edges if ("B", e[0]) == v or ("F", e[1]) == v]:
                live_edges.discard(e)
                for u in (("B", e[0]), ("F", e[1])):
                    if u in alive:
                        deg[u] -= 1
                        if deg[u] <= 1 and (
                            u[0] == "B" or self.f_info[u[1]][1].is_trivial()
                        ):
                            removable.append(u)
        self.core_b = {v[1] for v in alive if v[0] == "B"}
        self.core_f = {v[1] for v in alive if v[0] == "F"}
        self.core_edges = frozenset(live_edges)

    def core_b_adj(self, b: int) -> Dict[int, Tuple[int, Vector]]:
        return {
            i: (f, l)
            for i, (f, l) in self.b_adj[b].items()
            if (b, f, l) in self.core_edges
        }

    def core_f_labels(self, f: int) -> Dict[Vector, int]:
        return {
            l: b for l, b in self.f_adj[f].items() if (b, f, l) in self.core_edges
        }

    # -- membership ------------------------------------------------------

    def member(self, w: Word) -> bool:
        """Trace w from the basepoint; accept iff the trace closes up."""
        if w.pres != self.pres:
            raise PresentationMismatch("membership query over a different presentation")
        b = self.basepoint
        for index, letter in w.syllables:
            hit = self.b_adj[b].get(index)
            if hit is None:
                return False
            f, p = hit
            lat = self.f_info[f][1]
            q = lat.reduce(vadd(letter, p))
            nxt = self.f_adj[f].get(q)
            if nxt is None:
                return False
            b = nxt
        return b == self.basepoint

    # -- ranks -------------------------------------------------------------

    def kurosh_rank(self) -> Tuple[int, int, int, int]:
        """(c, betti, kappa, kappa_reduced), computed on the core."""
        c = sum(1 for f in self.core_f if not self.f_info[f][1].is_trivial())
        n_vertices = len(self.core_b) + len(self.core_f)
        betti = len(self.core_edges) - n_vertices + 1 if n_vertices else 0
        kappa = c + betti
        return (c, betti, kappa, max(0, kappa - 1))

    # -- spanning tree and path words ---------------------------------------

    def _spanning(self) -> Tuple[Dict, Dict, Set[Edge]]:
        """BFS spanning tree over the whole graph.

        Returns (b_word, f_word, tree_edges): b_word[b] is the word read from
        the basepoint to b; f_word[f] is the canonical representative of the
        F-vertex (the word positioned at chart label 0).
        """
        if self._paths is not None:
            return self._paths
        b_word: Dict[int, Word] = {self.basepoint: self.pres.identity()}
        f_word: Dict[int, Word] = {}
        tree: Set[Edge] = set()
        queue = deque([("B", self.basepoint)])
        while queue:
            kind, v = queue.popleft()
            if kind == "B":
                w = b_word[v]
                for index in sorted(self.b_adj[v]):
                    f, p = self.b_adj[v][index]
                    if f not in f_word:
                        f_word[f] = w * _syllable_word(self.pres, index, vneg(p))
                        tree.add((v, f, p))
                        queue.append(("F", f))
            else:
                r = f_word[v]
                index = self.f_info[v][0]
                for label in sorted(self.f_adj[v]):
                    b = self.f_adj[v][label]
                    if b not in b_word:
                        b_word[b] = r * _syllable_word(self.pres, index, label)
                        tree.add((b, v, label))
                        queue.append(("B", b))
        self._paths = (b_word, f_word, tree)
        return self._paths

    def word_to_b(self, b: int) -> Word:
        return self._spanning()[0][b]

    def word_to_f(self, f: int) -> Word:
        return self._spanning()[1][f]

    # -- Kurosh decomposition ----------------------------------------------

    def decomposition(self) -> Tuple[List[Tuple[int, Word, Lattice]], List[Word]]:
        """(parts, free_basis) realizing H as a free product.

        Each part (index, rep, S) contributes the conjugates rep * s * rep^-1
        for s in S; each free-basis word is the loop of a non-tree edge.
        """
        b_word, f_word, tree = self._spanning()
        order = {f: i for i, f in enumerate(f_word)}
        parts = [
            (self.f_info[f][0], f_word[f], self.f_info[f][1])
            for f in sorted(self.core_f, key=order.get)
            if not self.f_info[f][1].is_trivial()
        ]
        free_basis = []
        for (b, f, l) in sorted(
            self.edges - tree, key=lambda e: (order[e[1]], e[2], e[0])
        ):
            index = self.f_info[f][0]
            at_f = b_word[b] * _syllable_word(self.pres, index, vneg(l))
            free_basis.append(at_f * f_word[f].inverse())
        return parts, free_basis

    def regenerators(self) -> List[Word]:
        """A flat generating set read off the decomposition."""
        parts, free_basis = self.decomposition()
        gens: List[Word] = []
        for index, rep, lat in parts:
            for row in lat.rows:
                gens.append(rep * _syllable_word(self.pres, index, row) * rep.inverse())
        gens.extend(free_basis)
        return gens

    # -- canonical serialization -------------------------------------------

    def canonical_form(self) -> str:
        """Gauge-normalized BFS serialization; equal iff graphs are isomorphic
        as based subgroup graphs (each F-chart is only defined up to a
        translation, so the first-discovered edge is pinned to label 0)."""
        names: Dict[Tuple[str, int], str] = {("B", self.basepoint): "B0"}
        gauge: Dict[int, Vector] = {}
        nb, nf = 1, 0
        out_edges: List[str] = []
        out_f: List[str] = []
        queue = deque([("B", self.basepoint)])
        while queue:
            kind, v = queue.popleft()
            if kind == "B":
                for index in sorted(self.b_adj[v]):
                    f, p = self.b_adj[v][index]
                    lat = self.f_info[f][1]
                    if ("F", f) not in names:
                        names[("F", f)] = f"F{nf}"
                        nf += 1
                        gauge[f] = p
                        out_f.append(
                            f"{names[('F', f)]} A{index} S{list(map(list, lat.rows))}"
                        )
                        queue.append(("F", f))
                    out_edges.append(
                        f"{names[(kind, v)]} {names[('F', f)]} "
                        f"{list(lat.reduce(vsub(p, gauge[f])))}"
                    )
            else:
                lat = self.f_info[v][1]
                by_gauged = sorted(
                    (lat.reduce(vsub(l, gauge[v])), l) for l in self.f_adj[v]
                )
                for _, l in by_gauged:
                    b = self.f_adj[v][l]
                    if ("B", b) not in names:
                        names[("B", b)] = f"B{nb}"
                        nb += 1
                        queue.append(("B", b))
        lines = [f"P{list(self.pres.ranks)}"] + out_f + sorted(out_edges)
        return "\n".join(lines)

    # -- DOT export ----------------------------------------------------------

    def to_dot(
        self,
        highlight_edges: Optional[Set[Edge]] = None,
        f_colors: Optional[Dict[int, str]] = None,
        b_colors: Optional[Dict[int, str]] = None,
    ) -> str:
        highlight_edges = highlight_edges or set()
        lines = ["graph kurosh {"]
        for b in sorted(self.b_vertices):
            shape = "doublecircle" if b == self.basepoint else "circle"
            color = f', style=filled, fillcolor="{b_colors[b]}"' if b_colors and b in b_colors else ""
            lines.append(f'  b{b} [shape={shape}, label="{b}"{color}];')
        for f, (index, lat) in sorted(self.f_info.items()):
            basis = ",".join(str(list(r)) for r in lat.rows) or "0"
            color = f', style=filled, fillcolor="{f_colors[f]}"' if f_colors and f in f_colors else ""
            lines.append(f'  f{f} [shape=box, label="A_{index} / {basis}"{color}];')
        for (b, f, l) in sorted(self.edges):
            extra = ", color=red, penwidth=2" if (b, f, l) in highlight_edges else ""
            lines.append(f'  b{b} -- f{f} [label="{list(l)}"{extra}];')
        lines.append("}")
        return "\n".join(lines)


def build_folded(
    pres: Presentation,
    gens: Sequence[Word],
    rng: Optional[random.Random] = None,
) -> KuroshGraph:
    """Fold the wedge of generator loops; rng only shuffles the fold
    schedule (the result is confluent)."""
    builder = FoldBuilder(pres, rng=rng)
    for g in gens:
        builder.add_loop(g)
    builder.fold()
    return builder.snapshot()
