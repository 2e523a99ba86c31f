"""Command-line front end and the line-oriented text grammar.

Grammar (whitespace-insensitive):

    presentation := factor ("," factor)*
    factor       := "Z" | "Z^" int
    word         := "e" | syllable+
    syllable     := "a" idx ("^" int)? | "a" idx "[" int ("," int)* "]"

Generator lists are ";"-separated.  Subcommands: rank, intersect, dicks,
order-compare, fuzz, export-dot.  Exit codes: 0 success / all holds flags
true, 1 some holds flag false (a theorem violation, i.e. a bug), 2 input
error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional, Sequence, Tuple

from . import fuzz as fuzz_mod
from .dicks import OrderConfig, theorem_main_report
from .factors import Lattice
from .graph import KuroshGraph, build_folded
from .magnus import EQUAL, GREATER, LESS, EdgeName, edge_compare, magnus_compare
from .oracle import intersection_oracle
from .pullback import theorem_a_report
from .words import Presentation, Word


class GrammarError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.column = col


def parse_presentation(text: str) -> Presentation:
    ranks: List[int] = []
    for chunk in text.split(","):
        piece = chunk.strip()
        pos = text.find(piece) if piece else text.find(chunk)
        m = re.fullmatch(r"Z(\^\s*(\d+))?", piece)
        if not m:
            raise GrammarError(f"expected Z or Z^k, got {piece!r}", text, max(pos, 0))
        ranks.append(int(m.group(2)) if m.group(2) else 1)
    return Presentation(tuple(ranks))


_SYLLABLE = re.compile(
    r"\s*a(?P<idx>\d+)\s*(?:\^\s*(?P<exp>-?\d+)|\[(?P<vec>[-\d,\s]*)\])?"
)


def parse_word(pres: Presentation, text: str) -> Word:
    stripped = text.strip()
    if stripped in ("", "e", "1"):
        return pres.identity()
    word = pres.identity()
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _SYLLABLE.match(text, pos)
        if not m:
            raise GrammarError(f"expected a syllable, got {text[pos:]!r}", text, pos)
        index = int(m.group("idx"))
        if not 1 <= index <= pres.n_factors:
            raise GrammarError(f"factor index {index} out of range", text, pos)
        rank = pres.rank_of(index)
        if m.group("vec") is not None:
            try:
                coords = tuple(int(c) for c in m.group("vec").split(","))
            except ValueError:
                raise GrammarError("malformed coordinate vector", text, pos) from None
            if len(coords) != rank:
                raise GrammarError(
                    f"factor {index} has rank {rank}, got {len(coords)} coordinates",
                    text,
                    pos,
                )
        else:
            exp = int(m.group("exp")) if m.group("exp") else 1
            if rank != 1:
                raise GrammarError(
                    f"factor {index} has rank {rank}; use a{index}[..]", text, pos
                )
            coords = (exp,)
        if any(coords):
            word = word * Word(pres, ((index, coords),))
        pos = m.end()
    return word


def parse_generators(pres: Presentation, text: str) -> List[Word]:
    if not text.strip():
        return []
    return [parse_word(pres, chunk) for chunk in text.split(";")]


def format_presentation(pres: Presentation) -> str:
    return ",".join("Z" if k == 1 else f"Z^{k}" for k in pres.ranks)


def format_word(w: Word) -> str:
    if w.is_identity():
        return "e"
    parts = []
    for index, letter in w.syllables:
        if len(letter) == 1:
            parts.append(f"a{index}" if letter[0] == 1 else f"a{index}^{letter[0]}")
        else:
            parts.append(f"a{index}[{','.join(map(str, letter))}]")
    return " ".join(parts)


def format_generators(gens: Sequence[Word]) -> str:
    return " ; ".join(format_word(g) for g in gens)


def _lattice_json(lat: Lattice):
    return [list(r) for r in lat.rows]


def _parse_permutation(text: Optional[str], n: int, flag: str) -> Optional[Tuple[int, ...]]:
    if text is None:
        return None
    try:
        perm = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise GrammarError(f"{flag} expects a comma-separated permutation", text, 0) from None
    if sorted(perm) != list(range(1, n + 1)):
        raise GrammarError(f"{flag} must be a permutation of 1..{n}", text, 0)
    return perm


COMPARISON_NAMES = {LESS: "Less", EQUAL: "Equal", GREATER: "Greater"}


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def _cmd_rank(args) -> int:
    pres = parse_presentation(args.presentation)
    gens = parse_generators(pres, args.generators)
    graph = build_folded(pres, gens)
    c, betti, kappa, kappa_reduced = graph.kurosh_rank()
    parts, free_basis = graph.decomposition()
    payload = {
        "instance": {
            "presentation": format_presentation(pres),
            "generators": format_generators(gens),
        },
        "c": c,
        "betti": betti,
        "kappa": kappa,
        "kappa_reduced": kappa_reduced,
        "parts": [
            {"factor": index, "rep": format_word(rep), "basis": _lattice_json(lat)}
            for index, rep, lat in parts
        ],
        "free_basis": [format_word(w) for w in free_basis],
    }
    human = (
        f"c={c} betti={betti} kappa={kappa} kappa_reduced={kappa_reduced}\n"
        + "\n".join(
            f"part: A_{i} conjugated by {format_word(rep)}, basis {_lattice_json(lat)}"
            for i, rep, lat in parts
        )
        + ("\n" if parts and free_basis else "")
        + "\n".join(f"free: {format_word(w)}" for w in free_basis)
    )
    _emit(args, payload, human.rstrip() or "trivial subgroup")
    _maybe_dot(args, graph)
    return 0


def _maybe_dot(args, graph: KuroshGraph, **kw) -> None:
    if getattr(args, "dot", None):
        with open(args.dot, "w") as fh:
            fh.write(graph.to_dot(**kw))


def _cmd_intersect(args) -> int:
    pres = parse_presentation(args.presentation)
    gens_h = parse_generators(pres, args.generators)
    gens_k = parse_generators(pres, args.generators_k)
    report = theorem_a_report(pres, gens_h, gens_k)
    payload = {
        "instance": {
            "presentation": format_presentation(pres),
            "generators": format_generators(gens_h),
            "generators_k": format_generators(gens_k),
        },
        "kappa_reduced_h": report.kappa_reduced_h,
        "kappa_reduced_k": report.kappa_reduced_k,
        "components": [
            {"g_rep": format_word(g), "kappa_reduced": k}
            for g, k in report.components
        ],
        "lhs_sum": report.lhs_sum,
        "rhs_product": report.rhs_product,
        "holds_strengthened": report.holds_strengthened,
        "holds_hn1": report.holds_hn1,
        "holds_hn2": report.holds_hn2,
    }
    if args.ball:
        ls, le = (int(x) for x in args.ball.split(","))
        oracle = intersection_oracle(pres, gens_h, gens_k, ls, le)
        base = next(c for c in report.pullback if c.is_basepoint_component)
        payload["oracle"] = {
            "stable": oracle.stable,
            "matches_basepoint_component": oracle.graph.canonical_form()
            == base.graph.canonical_form(),
        }
    human = (
        f"sum of component kappa_reduced = {report.lhs_sum} "
        f"<= {report.rhs_product} = product: {report.holds_strengthened}\n"
        f"historical factor-2 bounds: basepoint {report.holds_hn1}, "
        f"summed {report.holds_hn2}"
    )
    _emit(args, payload, human)
    return 0 if report.all_hold() else 1


def _cmd_dicks(args) -> int:
    pres = parse_presentation(args.presentation)
    gens = parse_generators(pres, args.generators)
    graph = build_folded(pres, gens)
    cfg = OrderConfig(
        _parse_permutation(args.orbit_order, pres.n_factors, "--orbit-order"),
        _parse_permutation(args.variable_order, pres.n_factors, "--variable-order"),
    )
    report = theorem_main_report(graph, cfg)
    payload = {
        "instance": {
            "presentation": format_presentation(pres),
            "generators": format_generators(gens),
            "orbit_order": list(cfg.orbit_order) if cfg.orbit_order else None,
            "variable_order": list(cfg.variable_order) if cfg.variable_order else None,
        },
        "bridge_count": report.bridge_count,
        "kappa_reduced": report.kappa_reduced,
        "holds": report.holds,
        "islands": [
            {"c": i.c, "betti": i.betti, "kappa": i.kappa}
            for i in report.islands.islands
        ],
        "edge_verdicts": [
            {"edge": [e[0], e[1], list(e[2])], "bridge": v}
            for e, v in sorted(report.verdicts.items())
        ],
    }
    human = (
        f"bridge_count={report.bridge_count} kappa_reduced={report.kappa_reduced} "
        f"islands={[i.kappa for i in report.islands.islands]} holds={report.holds}"
    )
    _emit(args, payload, human)
    if getattr(args, "dot", None):
        bridges = set(report.islands.bridge_edges)
        palette = ["lightblue", "lightgreen", "lightyellow", "lightpink", "lightgray"]
        f_colors, b_colors = {}, {}
        for n, island in enumerate(report.islands.islands):
            color = palette[n % len(palette)]
            for f in island.f_vertices:
                f_colors[f] = color
            for b in island.b_vertices:
                b_colors[b] = color
        with open(args.dot, "w") as fh:
            fh.write(
                graph.to_dot(
                    highlight_edges=bridges, f_colors=f_colors, b_colors=b_colors
                )
            )
    return 0 if report.holds else 1


def _cmd_order_compare(args) -> int:
    pres = parse_presentation(args.presentation)
    u = parse_word(pres, args.left)
    v = parse_word(pres, args.right)
    variable_order = _parse_permutation(
        args.variable_order, pres.n_factors, "--variable-order"
    )
    if args.orbits:
        o1, o2 = (int(x) for x in args.orbits.split(","))
        orbit_order = _parse_permutation(
            args.orbit_order, pres.n_factors, "--orbit-order"
        )
        result = edge_compare(
            EdgeName(o1, u), EdgeName(o2, v), orbit_order, variable_order
        )
    else:
        result = magnus_compare(u, v, variable_order)
    name = COMPARISON_NAMES[result]
    _emit(args, {"comparison": name}, name)
    return 0


def _cmd_fuzz(args) -> int:
    failures = 0
    payload = {"seed": args.seed, "instances": args.instances, "checks": {}}
    lines = []
    if args.check in ("theorem-a", "all"):
        outcomes = fuzz_mod.theorem_a_campaign(args.instances, args.seed, args.jobs)
        ok = sum(1 for o in outcomes if o.report.all_hold())
        failures += len(outcomes) - ok
        payload["checks"]["theorem_a"] = {
            "holds": ok,
            "total": len(outcomes),
            "violations": [
                {
                    "presentation": format_presentation(o.pres),
                    "generators": format_generators(o.gens_h),
                    "generators_k": format_generators(o.gens_k),
                }
                for o in outcomes
                if not o.report.all_hold()
            ],
        }
        lines.append(f"theorem-a: {ok}/{len(outcomes)} hold")
    if args.check in ("theorem-main", "all"):
        outcomes = fuzz_mod.theorem_main_campaign(
            args.instances, args.seed, jobs=args.jobs
        )
        ok = sum(1 for o in outcomes if o.holds)
        failures += len(outcomes) - ok
        # whether the bridge SET moves under the order choice is data worth
        # keeping: the count provably cannot
        varies = 0
        by_instance = {}
        for o in outcomes:
            by_instance.setdefault(o.index, set()).add(o.bridge_edges)
        varies = sum(1 for s in by_instance.values() if len(s) > 1)
        payload["checks"]["theorem_main"] = {
            "holds": ok,
            "total": len(outcomes),
            "bridge_set_varies_with_order": varies,
        }
        lines.append(
            f"theorem-main: {ok}/{len(outcomes)} hold "
            f"(bridge set depends on the order in {varies} instances)"
        )
    _emit(args, payload, "\n".join(lines))
    return 1 if failures else 0


def _cmd_export_dot(args) -> int:
    pres = parse_presentation(args.presentation)
    gens = parse_generators(pres, args.generators)
    graph = build_folded(pres, gens)
    text = graph.to_dot()
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(text)
    else:
        print(text)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kurosh",
        description="Kurosh ranks, intersections, and Dicks trees for free products",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, k_gens=False):
        p.add_argument("-p", "--presentation", required=True)
        p.add_argument("-g", "--generators", required=True)
        if k_gens:
            p.add_argument("-k", "--generators-k", required=True)
        p.add_argument("--json", action="store_true")
        p.add_argument("--dot", metavar="PATH")

    p = sub.add_parser("rank", help="Kurosh rank and decomposition")
    common(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("intersect", help="Theorem A report over double cosets")
    common(p, k_gens=True)
    p.add_argument("--ball", metavar="L,E", help="cross-check with the brute-force oracle")
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("dicks", help="bridge/island report (free groups)")
    common(p)
    p.add_argument("--orbit-order")
    p.add_argument("--variable-order")
    p.set_defaults(func=_cmd_dicks)

    p = sub.add_parser("order-compare", help="compare two elements or edge names")
    p.add_argument("-p", "--presentation", required=True)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--orbits", metavar="I,J", help="compare edge names (eps_I, left) vs (eps_J, right)")
    p.add_argument("--orbit-order")
    p.add_argument("--variable-order")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_order_compare)

    p = sub.add_parser("fuzz", help="seeded random verification campaign")
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", choices=["theorem-a", "theorem-main", "all"], default="all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_fuzz)

    p = sub.add_parser("export-dot", help="DOT drawing of a subgroup graph")
    common(p)
    p.set_defaults(func=_cmd_export_dot)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GrammarError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
