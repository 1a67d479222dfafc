"""
Exhaustive agreement sweep over small labelled weighted graphs.

Every labelled graph on up to ``max_vertices`` vertices is paired with every
assignment of weights from a pool. For each instance three conditions are
evaluated and compared:

    weo          -- a weighted elimination ordering exists
    forbidden    -- chordal and no induced incomparable edge or valley path
    unimodal     -- chordal and every induced path is unimodal

A seeded random subsample additionally compares WEO existence against
supersolvability of the intersection lattice.
"""
from __future__ import annotations

__docformat__ = 'reStructuredText'

import itertools
import logging
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from arrangement import build_psi_arrangement, intersection_lattice, supersolvable_mchain
from constants import SWEEP_MAX_VERTICES
from exact import parse_rat
from wgraph import (Ordering, Unimodal, WeightedGraph, find_weo, forbidden_paths, induced_paths,
                    is_chordal, unimodal_decompose)

LOGGER = logging.getLogger(__name__)

_POOL_TOKEN = re.compile(r"\s*(∅|\{[^{}]*\})\s*(,|$)")

class SweepGuardExceeded(ValueError):
    pass


# Disagreeing instances kept in the report.
EXAMPLE_LIMIT = 5


def parse_weight_pool(text: str) -> list[frozenset[Fraction]]:
    """
    Parse a pool such as ``"∅,{0},{1},{0,1}"``.

    :raises ValueError: on malformed input or an empty pool.
    """
    pool = []
    position = 0
    while position < len(text):
        match = _POOL_TOKEN.match(text, position)
        if match is None:
            raise ValueError(f"cannot parse weight pool at {text[position:]!r}")
        token = match.group(1)
        if token == "∅":
            pool.append(frozenset())
        else:
            inner = token[1:-1].strip()
            pool.append(frozenset(parse_rat(v) for v in inner.split(",")) if inner else frozenset())
        position = match.end()
    if not pool:
        raise ValueError("empty weight pool")
    return pool


def format_weight(w: frozenset[Fraction]) -> str:
    if not w:
        return "∅"
    return "{" + ",".join(str(v) for v in sorted(w)) + "}"


def labelled_graphs(n: int) -> Iterator[frozenset[tuple[int, int]]]:
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)


def instances(max_vertices: int, pool: list[frozenset[Fraction]]) -> Iterator[WeightedGraph]:
    for n in range(1, max_vertices + 1):
        for edges in labelled_graphs(n):
            for psi in itertools.product(pool, repeat=n):
                yield WeightedGraph(n, edges, tuple(psi))


def has_weo(g: WeightedGraph) -> bool:
    return isinstance(find_weo(g), Ordering)


def free_of_forbidden_paths(g: WeightedGraph) -> bool:
    return is_chordal(g) and not forbidden_paths(g)


def all_paths_unimodal(g: WeightedGraph) -> bool:
    return is_chordal(g) and all(
        isinstance(unimodal_decompose([g.weight(v) for v in path]), Unimodal)
        for path in induced_paths(g)
    )


def is_supersolvable(g: WeightedGraph) -> bool:
    return supersolvable_mchain(intersection_lattice(build_psi_arrangement(g))) is not None


def describe(g: WeightedGraph) -> dict:
    return {
        "vertices": g.n_vertices,
        "edges": [list(e) for e in g.sorted_edges()],
        "psi": [format_weight(w) for w in g.psi],
    }


@dataclass
class SweepReport:
    max_vertices: int
    pool: list[frozenset[Fraction]]
    seed: int
    instances: int = 0
    counts: dict[str, int] = field(default_factory=lambda: {"weo": 0, "forbidden": 0, "unimodal": 0})
    disagreements: int = 0
    examples: list[dict] = field(default_factory=list)
    sample_size: int = 0
    sample_agreements: int = 0
    sample_examples: list[dict] = field(default_factory=list)

    @property
    def sample_disagreements(self) -> int:
        return self.sample_size - self.sample_agreements

    def as_dict(self) -> dict:
        return {
            "max_vertices": self.max_vertices,
            "weight_pool": [format_weight(w) for w in self.pool],
            "instances": self.instances,
            "counts": dict(self.counts),
            "disagreements": self.disagreements,
            "disagreement_examples": self.examples,
            "supersolvable_sample": {
                "seed": self.seed,
                "size": self.sample_size,
                "agreements": self.sample_agreements,
                "disagreements": self.sample_disagreements,
                "disagreement_examples": self.sample_examples,
            },
        }


def run_sweep(max_vertices: int, pool: list[frozenset[Fraction]], samples: int, seed: int) -> SweepReport:
    """
    :raises SweepGuardExceeded: if max_vertices is above SWEEP_MAX_VERTICES.
    :raises ValueError: if max_vertices is below 1 or samples is negative.
    """
    if max_vertices < 1:
        raise ValueError("max vertices must be at least 1")
    if max_vertices > SWEEP_MAX_VERTICES:
        raise SweepGuardExceeded(f"sweeping {max_vertices} vertices exceeds the guard of {SWEEP_MAX_VERTICES}")
    if samples < 0:
        raise ValueError("sample size must be nonnegative")
    report = SweepReport(max_vertices, pool, seed)
    weo_holders = []
    population = []
    for g in instances(max_vertices, pool):
        verdicts = {
            "weo": has_weo(g),
            "forbidden": free_of_forbidden_paths(g),
            "unimodal": all_paths_unimodal(g),
        }
        report.instances += 1
        for name, holds in verdicts.items():
            report.counts[name] += holds
        if len(set(verdicts.values())) > 1:
            report.disagreements += 1
            if len(report.examples) < EXAMPLE_LIMIT:
                report.examples.append({**describe(g), **verdicts})
        population.append(g)
        weo_holders.append(verdicts["weo"])
    LOGGER.info("swept %d instances, %d disagreements", report.instances, report.disagreements)

    rng = random.Random(seed)
    chosen = rng.sample(range(len(population)), min(samples, len(population)))
    for index in chosen:
        g = population[index]
        supersolvable = is_supersolvable(g)
        report.sample_size += 1
        if supersolvable == weo_holders[index]:
            report.sample_agreements += 1
        elif len(report.sample_examples) < EXAMPLE_LIMIT:
            report.sample_examples.append({**describe(g), "weo": weo_holders[index],
                                           "supersolvable": supersolvable})
    LOGGER.info("supersolvability sample: %d of %d agree", report.sample_agreements, report.sample_size)
    return report
