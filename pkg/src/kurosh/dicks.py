"""Bridge and island analysis of the minimal subtree, for free groups.

A core edge lifts to an edge of the minimal subtree; it is a bridge when
both of its endpoints see an infinite component in the subgraph of strictly
smaller edges.  The search walks the tree locally through the core:

  * a factor vertex with a non-trivial stabiliser is an infinite verdict:
    the stabiliser orbit of the entered edge is a monotone family with an
    infinite down-set;
  * two distinct central vertices over the same core B-vertex are an
    infinite verdict: the relative translation pushes the connecting path
    below its largest edge forever;
  * exhausting the frontier is a finite verdict; at most one central vertex
    per core B-vertex is visited first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple, Union

from .graph import Edge, KuroshGraph, _syllable_word
from .magnus import LESS, EdgeName, UnsupportedOrder, edge_compare
from .words import Word


@dataclass(frozen=True)
class OrderConfig:
    """Orbit order on edge orbits and variable order for the series order."""

    orbit_order: Optional[Tuple[int, ...]] = None
    variable_order: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class TreeEdgeRef:
    """Edge of the tree: joins Central(element) and Factor(index, strip)."""

    element: Word
    index: int

    def name(self) -> EdgeName:
        return EdgeName(self.index, self.element)


@dataclass(frozen=True)
class CentralState:
    word: Word
    core_b: int


@dataclass(frozen=True)
class FactorState:
    index: int
    rep: Word  # no trailing index-syllable
    core_f: int
    offset: int  # chart alignment: tree edge rep*a_i^y maps to label y+offset


@dataclass
class BridgeCertificate:
    side: str  # "central" or "factor"
    kind: str  # "stabilizer_fan" or "orbit_repeat"
    path: List[TreeEdgeRef]
    fan_vertex: Optional[FactorState] = None
    fan_samples: List[TreeEdgeRef] = field(default_factory=list)
    v1: Optional[Word] = None
    v2: Optional[Word] = None
    v1_path: List[TreeEdgeRef] = field(default_factory=list)
    h: Optional[Word] = None


@dataclass
class Exhaustion:
    side: str
    explored: List[TreeEdgeRef]


SideResult = Tuple[bool, Union[BridgeCertificate, Exhaustion]]


def _strip(word: Word, index: int) -> Tuple[Word, int]:
    """Remove a trailing syllable of the given index; (rep, exponent)."""
    if word.syllables and word.syllables[-1][0] == index:
        return Word(word.pres, word.syllables[:-1]), word.syllables[-1][1][0]
    return word, 0


def _append_power(rep: Word, index: int, exponent: int) -> Word:
    return rep * _syllable_word(rep.pres, index, (exponent,))


def _require_tree_order(graph: KuroshGraph) -> None:
    if not graph.pres.all_z():
        raise UnsupportedOrder(
            "bridge detection needs an all-Z presentation (free group)"
        )


def lift_core_edge(
    graph: KuroshGraph, core_edge: Edge
) -> Tuple[TreeEdgeRef, CentralState, FactorState]:
    """A tree representative of a core edge, with both endpoint states."""
    _require_tree_order(graph)
    if core_edge not in graph.core_edges:
        if not graph.core_edges:
            raise ValueError("the minimal subtree has no edges")
        raise ValueError("edge is not in the core")
    b, f, label = core_edge
    index = graph.f_info[f][0]
    word = graph.word_to_b(b)
    rep, exponent = _strip(word, index)
    central = CentralState(word, b)
    factor = FactorState(index, rep, f, label[0] - exponent)
    return TreeEdgeRef(word, index), central, factor


def side_infinite(
    graph: KuroshGraph,
    e: TreeEdgeRef,
    endpoint: Union[CentralState, FactorState],
    orders: OrderConfig = OrderConfig(),
) -> SideResult:
    """Explore the component of the endpoint among edges strictly below e."""
    _require_tree_order(graph)

    def below(edge: TreeEdgeRef) -> bool:
        return (
            edge_compare(
                edge.name(), e.name(), orders.orbit_order, orders.variable_order
            )
            == LESS
        )

    seen_central: Dict[int, Tuple[Word, List[TreeEdgeRef]]] = {}
    seen_factor: Set[Tuple[int, Tuple]] = set()
    explored: List[TreeEdgeRef] = []
    queue: deque = deque([(endpoint, [])])
    while queue:
        state, path = queue.popleft()
        if isinstance(state, CentralState):
            if state.core_b in seen_central:
                prev_word, prev_path = seen_central[state.core_b]
                if prev_word == state.word:
                    continue
                h = state.word * prev_word.inverse()
                return True, BridgeCertificate(
                    side="", kind="orbit_repeat", path=path,
                    v1=prev_word, v2=state.word, v1_path=prev_path, h=h,
                )
            seen_central[state.core_b] = (state.word, path)
            for index in sorted(graph.core_b_adj(state.core_b)):
                f, p = graph.core_b_adj(state.core_b)[index]
                edge = TreeEdgeRef(state.word, index)
                if edge == e or not below(edge):
                    continue
                explored.append(edge)
                rep, exponent = _strip(state.word, index)
                nxt = FactorState(index, rep, f, p[0] - exponent)
                queue.append((nxt, path + [edge]))
        else:
            key = (state.index, state.rep.syllables)
            if key in seen_factor:
                continue
            seen_factor.add(key)
            lat = graph.f_info[state.core_f][1]
            if not lat.is_trivial():
                # monotone family: the entered edge (or e itself, at the
                # start) recurs at exponents shifted by the stabiliser
                # period, strictly decreasing below e
                period = lat.rows[0][0]
                entered = path[-1] if path else e
                _, exponent = _strip(entered.element, state.index)
                samples = [
                    TreeEdgeRef(
                        _append_power(state.rep, state.index, exponent - period * k),
                        state.index,
                    )
                    for k in (1, 2, 3)
                ]
                return True, BridgeCertificate(
                    side="", kind="stabilizer_fan", path=path,
                    fan_vertex=state, fan_samples=samples,
                )
            labels = graph.core_f_labels(state.core_f)
            for q in sorted(labels):
                y = q[0] - state.offset
                element = _append_power(state.rep, state.index, y)
                edge = TreeEdgeRef(element, state.index)
                if edge == e or not below(edge):
                    continue
                explored.append(edge)
                queue.append(
                    (CentralState(element, labels[q]), path + [edge])
                )
    return False, Exhaustion(side="", explored=explored)


def is_bridge(
    graph: KuroshGraph,
    core_edge: Edge,
    orders: OrderConfig = OrderConfig(),
) -> bool:
    verdict, _ = bridge_verdict(graph, core_edge, orders)
    return verdict


def bridge_verdict(
    graph: KuroshGraph,
    core_edge: Edge,
    orders: OrderConfig = OrderConfig(),
) -> Tuple[bool, Dict[str, SideResult]]:
    """Bridge test with both side results, for certificates and reports."""
    e, central, factor = lift_core_edge(graph, core_edge)
    central_res = side_infinite(graph, e, central, orders)
    central_res[1].side = "central"
    sides = {"central": central_res}
    if not central_res[0]:
        return False, sides
    factor_res = side_infinite(graph, e, factor, orders)
    factor_res[1].side = "factor"
    sides["factor"] = factor_res
    return central_res[0] and factor_res[0], sides


@dataclass
class Island:
    b_vertices: Set[int]
    f_vertices: Set[int]
    edges: Set[Edge]
    c: int
    betti: int
    kappa: int


@dataclass
class IslandReport:
    islands: List[Island]
    bridge_edges: List[Edge]


@dataclass
class TheoremMainReport:
    bridge_count: int
    kappa_reduced: int
    islands: IslandReport
    holds: bool
    verdicts: Dict[Edge, bool] = field(default_factory=dict)


def _islands(graph: KuroshGraph, bridges: Set[Edge]) -> List[Island]:
    remaining = set(graph.core_edges) - bridges
    vertices = {("B", b) for b in graph.core_b} | {("F", f) for f in graph.core_f}
    adjacency: Dict[Tuple, List[Tuple[Tuple, Edge]]] = {v: [] for v in vertices}
    for e in remaining:
        adjacency[("B", e[0])].append((("F", e[1]), e))
        adjacency[("F", e[1])].append((("B", e[0]), e))
    seen: Set[Tuple] = set()
    out: List[Island] = []
    for v in sorted(vertices):
        if v in seen:
            continue
        comp_v = {v}
        comp_e: Set[Edge] = set()
        queue = deque([v])
        seen.add(v)
        while queue:
            u = queue.popleft()
            for w, e in adjacency[u]:
                comp_e.add(e)
                if w not in seen:
                    seen.add(w)
                    comp_v.add(w)
                    queue.append(w)
        bs = {x[1] for x in comp_v if x[0] == "B"}
        fs = {x[1] for x in comp_v if x[0] == "F"}
        c = sum(1 for f in fs if not graph.f_info[f][1].is_trivial())
        betti = len(comp_e) - len(comp_v) + 1
        out.append(Island(bs, fs, comp_e, c, betti, c + betti))
    return out


def theorem_main_report(
    graph: KuroshGraph, orders: OrderConfig = OrderConfig()
) -> TheoremMainReport:
    """Count bridges, assemble islands, and check that the bridge count
    equals the reduced Kurosh rank with every island of rank exactly one."""
    _require_tree_order(graph)
    _, _, kappa, kappa_reduced = graph.kurosh_rank()
    if kappa == 0:
        raise ValueError("the trivial subgroup has no Dicks tree to report on")
    verdicts: Dict[Edge, bool] = {}
    for core_edge in sorted(graph.core_edges):
        verdicts[core_edge] = is_bridge(graph, core_edge, orders)
    bridges = {e for e, v in verdicts.items() if v}
    islands = _islands(graph, bridges)
    holds = len(bridges) == kappa_reduced and all(i.kappa == 1 for i in islands)
    return TheoremMainReport(
        bridge_count=len(bridges),
        kappa_reduced=kappa_reduced,
        islands=IslandReport(islands, sorted(bridges)),
        holds=holds,
        verdicts=verdicts,
    )
