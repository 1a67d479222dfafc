"""
psi-graphical multiarrangements.

For a graph with nonnegative integer weights the multiarrangement has the
braid forms x_i - x_j with multiplicity 1 and the coordinate forms x_i with
multiplicity psi(i). It is the Ziegler restriction, along z = 0, of the
psi-graphical arrangement of the lifted weights {1, ..., psi(i)}, and the
restricted basis of that arrangement certifies its freeness.
"""
from __future__ import annotations

__docformat__ = 'reStructuredText'

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from arrangement import Arrangement, Flat, localization, restriction_map
from exact import LinForm, MPoly, coordinate_names, product
from logderiv import (CertificationError, Derivation, NotFree, SaitoFailure, build_theta_k,
                      saito_scalar)
from wgraph import GraphError, Ordering, WeightedGraph, find_weo

LOGGER = logging.getLogger(__name__)


def int_weighted_graph(g: WeightedGraph) -> WeightedGraph:
    """:raises GraphError: unless every weight is a nonnegative integer."""
    if not g.integer_weighted:
        raise GraphError("expected nonnegative integer weights")
    return g


@dataclass(frozen=True)
class Multiarrangement:
    """An arrangement with a positive multiplicity on every hyperplane."""

    arr: Arrangement
    mult: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.mult) != len(self.arr):
            raise ValueError(f"{len(self.mult)} multiplicities for {len(self.arr)} hyperplanes")
        if any(m < 1 for m in self.mult):
            raise ValueError("multiplicities must be positive; drop zero ones")

    @classmethod
    def of(cls, names: Sequence[str], pairs: Iterable[tuple[Union[LinForm, Sequence], int]]) -> Multiarrangement:
        """Normalize forms, add multiplicities of repeated forms, drop zeros."""
        names = tuple(names)
        counts: dict[LinForm, int] = {}
        for form, m in pairs:
            if not isinstance(form, LinForm):
                form = LinForm.of(names, form)
            counts[form] = counts.get(form, 0) + m
        kept = [(form, m) for form, m in counts.items() if m > 0]
        return cls(Arrangement(names, tuple(f for f, _ in kept)), tuple(m for _, m in kept))

    @property
    def names(self) -> tuple[str, ...]:
        return self.arr.names

    @property
    def degree(self) -> int:
        return sum(self.mult)

    def multiplicity_map(self) -> dict[LinForm, int]:
        return dict(zip(self.arr.forms, self.mult))

    def defining_polynomial(self) -> MPoly:
        return product(self.names, (f.as_poly() ** m for f, m in zip(self.arr.forms, self.mult)))

    def as_dict(self) -> list[dict]:
        return [{"form": f.display(), "m": m} for f, m in zip(self.arr.forms, self.mult)]


def build_multi(g: WeightedGraph) -> Multiarrangement:
    """Braid forms of the edges, then x_i with multiplicity psi(i) > 0."""
    int_weighted_graph(g)
    names = coordinate_names(g.n_vertices, with_z=False)
    pairs = []
    for i, j in g.sorted_edges():
        coeffs = [0] * g.n_vertices
        coeffs[i - 1], coeffs[j - 1] = 1, -1
        pairs.append((coeffs, 1))
    for v in g.vertices:
        coeffs = [0] * g.n_vertices
        coeffs[v - 1] = 1
        pairs.append((coeffs, g.weight(v)))
    return Multiarrangement.of(names, pairs)


def lift_weights(g: WeightedGraph) -> WeightedGraph:
    """psi(i) = n becomes the set {1, ..., n}."""
    int_weighted_graph(g)
    psi = tuple(frozenset(Fraction(a) for a in range(1, w + 1)) for w in g.psi)
    return WeightedGraph(g.n_vertices, g.edges, psi, g.origin)


def ziegler_restrict(a: Arrangement, h0: int) -> Multiarrangement:
    """
    Restrict to H0, giving each restricted hyperplane X the number of
    hyperplanes of A other than H0 that contain it.
    """
    names, restricted = restriction_map(a, h0)
    return Multiarrangement.of(names, ((r.form, 1) for r in restricted))


def multi_basis(g: WeightedGraph, o: Ordering) -> list[Derivation]:
    """
    theta_k restricted to z = 0 for the lifted weights: coefficient
    prod_{j in E_{<k}} (x_{v_j} - x_{v_i}) * x_{v_i} ** psi(v_k) on x_{v_i}.
    """
    lifted = lift_weights(g)
    return [build_theta_k(lifted, o, k).restrict_z0() for k in range(1, g.n_vertices + 1)]


def multi_saito_verify(m: Multiarrangement, ders: Sequence[Derivation],
                       rows: Optional[Sequence[int]] = None) -> Union[Fraction, SaitoFailure]:
    return saito_scalar(m.arr, m.mult, ders, rows)


@dataclass(frozen=True)
class MultiFree:
    ordering: Ordering
    basis: tuple[Derivation, ...]
    exponents: tuple[int, ...]
    saito_scalar: Fraction
    multiarrangement: Multiarrangement


def decide_multi_freeness(g: WeightedGraph) -> Union[MultiFree, NotFree]:
    """
    Free iff the lifted graph has a WEO; the restricted basis is verified
    against Q(A, m) before it is returned.

    :raises CertificationError: if the restricted basis fails verification.
    """
    lifted = lift_weights(g)
    found = find_weo(lifted)
    if not isinstance(found, Ordering):
        LOGGER.info("multiarrangement not free: %s", found)
        return NotFree(found)
    m = build_multi(g)
    basis = multi_basis(g, found)
    rows = tuple(v - 1 for v in found.perm)
    scalar = multi_saito_verify(m, basis, rows)
    if isinstance(scalar, SaitoFailure):
        raise CertificationError(f"restricted basis for {found.perm} failed: {scalar.reason}")
    exponents = tuple(sorted(d.degree for d in basis))
    LOGGER.info("multiarrangement free with ordering %s, exponents %s", found.perm, exponents)
    return MultiFree(found, tuple(basis), exponents, scalar, m)


def multi_localization(g: WeightedGraph, x: Flat) -> WeightedGraph:
    """
    The integer-weighted graph whose multiarrangement is the localization of
    M_{G,psi} at x: edges of the braid forms through x, and weight psi(i)
    where x_i passes through x, 0 elsewhere.
    """
    m = build_multi(g)
    local = localization(m.arr, x)
    edges = []
    psi = [0] * g.n_vertices
    for form in local.forms:
        support = [i for i, c in enumerate(form.coeffs) if c]
        if len(support) == 2:
            edges.append((support[0] + 1, support[1] + 1))
        else:
            psi[support[0]] = g.weight(support[0] + 1)
    return WeightedGraph.build(g.n_vertices, edges, psi, g.origin)
