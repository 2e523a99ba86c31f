"""Intersections across double cosets via the product of folded graphs.

The product of two folded subgroup graphs pairs same-index edges; its
F-vertices are classes (u, u', delta) with delta taken modulo the join of
the two stabiliser lattices, and carry the intersected lattice as their own
stabiliser.  The product of folded graphs is already folded, which is
asserted rather than assumed.  Each connected component, trimmed to its core
plus a path from a fixed base pair, is the subgroup graph of one conjugate
intersection; the base pair's pair of access words yields the double coset
representative.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .factors import Lattice, Vector, lattice_crt, vsub
from .graph import Edge, KuroshGraph, build_folded
from .words import Presentation, PresentationMismatch, Word


@dataclass
class PullbackComponent:
    graph: KuroshGraph
    g_rep: Word
    is_basepoint_component: bool
    base_pair: Tuple[int, int]
    # projections of the component's vertices, for tests and reports
    b_pairs: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    f_pairs: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    def kappa_reduced(self) -> int:
        return self.graph.kurosh_rank()[3]


def _bfs_rank(graph: KuroshGraph) -> Dict[int, int]:
    """Deterministic breadth-first discovery rank of B-vertices."""
    rank = {graph.basepoint: 0}
    queue = deque([graph.basepoint])
    while queue:
        b = queue.popleft()
        for index in sorted(graph.b_adj[b]):
            f, _ = graph.b_adj[b][index]
            for label in sorted(graph.f_adj[f]):
                nxt = graph.f_adj[f][label]
                if nxt not in rank:
                    rank[nxt] = len(rank)
                    queue.append(nxt)
    return rank


def _trim_to_core_with_spur(
    pres: Presentation,
    basepoint: int,
    f_info: Dict[int, Tuple[int, Lattice]],
    edges: Set[Edge],
) -> KuroshGraph:
    """Drop hanging trees: keep the core plus the path from the basepoint.

    Hanging trivial-stabiliser trees carry no loops, so membership is
    unchanged; the result satisfies the spur-shape invariant.
    """
    probe = KuroshGraph(pres, basepoint, f_info, edges)
    if not probe.core_b and not probe.core_f:
        return KuroshGraph(pres, basepoint, {}, set())
    core_vertices = {("B", b) for b in probe.core_b} | {("F", f) for f in probe.core_f}
    # shortest path from the basepoint to the core (unique: its lift to the
    # tree is the geodesic from the base vertex to the minimal subtree)
    start = ("B", basepoint)
    spur_edges: List[Edge] = []
    if start not in core_vertices:
        parent: Dict[Tuple, Tuple[Tuple, Edge]] = {}
        seen = {start}
        queue = deque([start])
        goal = None
        while queue and goal is None:
            v = queue.popleft()
            incident = [
                e
                for e in probe.edges
                if (v[0] == "B" and e[0] == v[1]) or (v[0] == "F" and e[1] == v[1])
            ]
            for e in incident:
                w = ("F", e[1]) if v[0] == "B" else ("B", e[0])
                if w in seen:
                    continue
                seen.add(w)
                parent[w] = (v, e)
                if w in core_vertices:
                    goal = w
                    break
                queue.append(w)
        if goal is None:
            raise AssertionError("disconnected component: no path to its core")
        v = goal
        while v != start:
            v, e = parent[v]
            spur_edges.append(e)
    kept = set(probe.core_edges) | set(spur_edges)
    kept_f = {f for _, f, _ in kept} | set(probe.core_f)
    return KuroshGraph(
        pres, basepoint, {f: f_info[f] for f in kept_f}, kept
    )


def pullback_components(
    gh: KuroshGraph, gk: KuroshGraph
) -> List[PullbackComponent]:
    """Components of the edge-pair product of two folded graphs.

    The component list carries the basepoint component first (always), then
    every component visible in the product of the two cores, in a
    deterministic order.
    """
    if gh.pres != gk.pres:
        raise PresentationMismatch("pullback of graphs over different presentations")
    pres = gh.pres

    class_ids: Dict[Tuple[int, int, Vector], int] = {}
    class_info: Dict[int, Tuple[int, Lattice]] = {}
    class_origin: Dict[int, Tuple[Vector, Vector]] = {}
    class_pair: Dict[int, Tuple[int, int]] = {}
    b_ids: Dict[Tuple[int, int], int] = {}
    edges: Set[Tuple[int, int, Vector]] = set()
    edge_sources: Dict[Tuple[int, int, Vector], Tuple[Edge, Edge]] = {}

    def b_id(pair: Tuple[int, int]) -> int:
        if pair not in b_ids:
            b_ids[pair] = len(b_ids)
        return b_ids[pair]

    base_pair = (gh.basepoint, gk.basepoint)
    b_id(base_pair)

    for (bh, fh, p) in sorted(gh.edges):
        index_h, lat_h = gh.f_info[fh]
        for (bk, fk, q) in sorted(gk.edges):
            index_k, lat_k = gk.f_info[fk]
            if index_h != index_k:
                continue
            joined = lat_h.join_lattice(lat_k)
            delta = joined.reduce(vsub(q, p))
            key = (fh, fk, delta)
            if key not in class_ids:
                cid = len(class_ids)
                class_ids[key] = cid
                class_info[cid] = (index_h, lat_h.intersect(lat_k))
                class_origin[cid] = (p, q)
                class_pair[cid] = (fh, fk)
            cid = class_ids[key]
            p0, q0 = class_origin[cid]
            rel = lattice_crt(lat_h, vsub(p, p0), lat_k, vsub(q, q0))
            if rel is None:
                raise AssertionError("edge pair escaped its own coset class")
            label = class_info[cid][1].reduce(rel)
            edge = (b_id((bh, bk)), cid, label)
            if edge in edge_sources:
                raise AssertionError(
                    "product graph is not folded: duplicate edge pair"
                )
            edge_sources[edge] = ((bh, fh, p), (bk, fk, q))
            edges.add(edge)

    # connected components over the product's vertices
    adjacency: Dict[Tuple, List[Tuple]] = {}
    for (b, c, _) in edges:
        adjacency.setdefault(("B", b), []).append(("F", c))
        adjacency.setdefault(("F", c), []).append(("B", b))
    all_vertices = (
        {("B", i) for i in b_ids.values()} | {("F", c) for c in class_info}
    )
    comp_of: Dict[Tuple, int] = {}
    for v in sorted(all_vertices):
        if v in comp_of:
            continue
        cid = len(set(comp_of.values()))
        queue = deque([v])
        comp_of[v] = cid
        while queue:
            u = queue.popleft()
            for w in adjacency.get(u, ()):
                if w not in comp_of:
                    comp_of[w] = cid
                    queue.append(w)

    pair_of_b = {i: pair for pair, i in b_ids.items()}
    rank_h = _bfs_rank(gh)
    rank_k = _bfs_rank(gk)

    def visible(comp: int) -> bool:
        for v, c in comp_of.items():
            if c != comp:
                continue
            if v[0] == "B":
                bh, bk = pair_of_b[v[1]]
                if bh in gh.core_b and bk in gk.core_b:
                    return True
            else:
                fh, fk = class_pair[v[1]]
                if fh in gh.core_f and fk in gk.core_f:
                    return True
        return False

    base_comp = comp_of[("B", b_ids[base_pair])]
    components: List[PullbackComponent] = []
    order: List[Tuple[int, int]] = []  # (sort key, component id)
    for comp in sorted(set(comp_of.values())):
        members_b = [v[1] for v in comp_of if comp_of[v] == comp and v[0] == "B"]
        if comp == base_comp:
            base_b = b_ids[base_pair]
        elif visible(comp):
            base_b = min(
                members_b,
                key=lambda i: (rank_h[pair_of_b[i][0]], rank_k[pair_of_b[i][1]]),
            )
        else:
            continue
        comp_edges = {e for e in edges if comp_of[("B", e[0])] == comp}
        comp_f = {c for c in class_info if comp_of[("F", c)] == comp}
        graph = _trim_to_core_with_spur(
            pres, base_b, {c: class_info[c] for c in comp_f}, comp_edges
        )
        bh, bk = pair_of_b[base_b]
        w_h = gh.word_to_b(bh)
        w_k = gk.word_to_b(bk)
        g_rep = w_h * w_k.inverse()
        component = PullbackComponent(
            graph=graph,
            g_rep=g_rep,
            is_basepoint_component=(comp == base_comp),
            base_pair=(bh, bk),
            b_pairs={i: pair_of_b[i] for i in members_b},
            f_pairs={c: class_pair[c] for c in comp_f},
        )
        key = (0, 0) if comp == base_comp else (1, rank_h[bh] * 10**6 + rank_k[bk])
        order.append(key)
        components.append(component)
    components = [c for _, c in sorted(zip(order, components), key=lambda t: t[0])]
    return components


@dataclass
class TheoremAReport:
    kappa_reduced_h: int
    kappa_reduced_k: int
    components: List[Tuple[Word, int]]
    lhs_sum: int
    rhs_product: int
    holds_strengthened: bool
    holds_hn1: bool
    holds_hn2: bool
    pullback: List[PullbackComponent] = field(default_factory=list)

    def all_hold(self) -> bool:
        return self.holds_strengthened and self.holds_hn1 and self.holds_hn2


def theorem_a_report(
    pres: Presentation,
    gens_h: Sequence[Word],
    gens_k: Sequence[Word],
) -> TheoremAReport:
    """Check the strengthened bound and the two historical factor-2 bounds."""
    gh = build_folded(pres, gens_h)
    gk = build_folded(pres, gens_k)
    kr_h = gh.kurosh_rank()[3]
    kr_k = gk.kurosh_rank()[3]
    comps = pullback_components(gh, gk)
    summands = [(c.g_rep, c.kappa_reduced()) for c in comps]
    lhs = sum(k for _, k in summands)
    rhs = kr_h * kr_k
    base = next(c for c in comps if c.is_basepoint_component)
    return TheoremAReport(
        kappa_reduced_h=kr_h,
        kappa_reduced_k=kr_k,
        components=summands,
        lhs_sum=lhs,
        rhs_product=rhs,
        holds_strengthened=lhs <= rhs,
        holds_hn1=base.kappa_reduced() <= 2 * kr_h * kr_k,
        holds_hn2=lhs <= 2 * kr_h * kr_k,
        pullback=comps,
    )
