"""Seeded random instance generation and verification campaigns."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .dicks import OrderConfig, theorem_main_report
from .graph import build_folded
from .pullback import TheoremAReport, theorem_a_report
from .words import Presentation, Word, random_word


def random_presentation(
    rng: random.Random, max_factors: int = 3, allow_z2: bool = True
) -> Presentation:
    n = rng.randint(2, max_factors)
    ranks = tuple(rng.choice([1, 2]) if allow_z2 else 1 for _ in range(n))
    return Presentation(ranks)


def random_generators(
    rng: random.Random,
    pres: Presentation,
    max_gens: int = 3,
    max_syllables: int = 4,
    max_exponent: int = 3,
) -> List[Word]:
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        w = random_word(pres, max_syllables, max_exponent, rng=rng)
        if not w.is_identity():
            gens.append(w)
    return gens


@dataclass
class TheoremAOutcome:
    index: int
    pres: Presentation
    gens_h: List[Word]
    gens_k: List[Word]
    report: TheoremAReport


def run_theorem_a_instance(args: Tuple[int, int]) -> TheoremAOutcome:
    index, seed = args
    rng = random.Random(f"theorem-a:{seed}:{index}")
    pres = random_presentation(rng)
    gens_h = random_generators(rng, pres)
    gens_k = random_generators(rng, pres)
    report = theorem_a_report(pres, gens_h, gens_k)
    return TheoremAOutcome(index, pres, gens_h, gens_k, report)


def theorem_a_campaign(
    instances: int, seed: int, jobs: int = 1
) -> List[TheoremAOutcome]:
    tasks = [(i, seed) for i in range(instances)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(run_theorem_a_instance, tasks))
    else:
        out = [run_theorem_a_instance(t) for t in tasks]
    return sorted(out, key=lambda o: o.index)


@dataclass
class TheoremMainOutcome:
    index: int
    pres: Presentation
    gens: List[Word]
    orders: OrderConfig
    bridge_count: int
    kappa_reduced: int
    holds: bool
    bridge_edges: tuple


def random_order_config(rng: random.Random, n: int) -> OrderConfig:
    orbit = list(range(1, n + 1))
    variables = list(range(1, n + 1))
    rng.shuffle(orbit)
    rng.shuffle(variables)
    return OrderConfig(tuple(orbit), tuple(variables))


def run_theorem_main_instance(args: Tuple[int, int, int, int]) -> List[TheoremMainOutcome]:
    index, seed, n_orbit_orders, n_variable_orders = args
    rng = random.Random(f"theorem-main:{seed}:{index}")
    pres = random_presentation(rng, allow_z2=False)
    while True:
        gens = random_generators(rng, pres)
        graph = build_folded(pres, gens)
        if graph.kurosh_rank()[2] >= 1:
            break
    out = []
    orbits = [random_order_config(rng, pres.n_factors).orbit_order
              for _ in range(n_orbit_orders)]
    variables = [random_order_config(rng, pres.n_factors).variable_order
                 for _ in range(n_variable_orders)]
    for orbit in orbits:
        for var in variables:
            cfg = OrderConfig(orbit, var)
            report = theorem_main_report(graph, cfg)
            out.append(
                TheoremMainOutcome(
                    index, pres, gens, cfg,
                    report.bridge_count, report.kappa_reduced, report.holds,
                    tuple(report.islands.bridge_edges),
                )
            )
    return out


def theorem_main_campaign(
    instances: int,
    seed: int,
    n_orbit_orders: int = 3,
    n_variable_orders: int = 2,
    jobs: int = 1,
) -> List[TheoremMainOutcome]:
    tasks = [(i, seed, n_orbit_orders, n_variable_orders) for i in range(instances)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            nested = list(pool.map(run_theorem_main_instance, tasks))
    else:
        nested = [run_theorem_main_instance(t) for t in tasks]
    out = [o for group in nested for o in group]
    return sorted(out, key=lambda o: (o.index, o.orders.orbit_order, o.orders.variable_order))
