"""
Vertex-weighted graphs.

Weights are either finite sets of rationals ordered by inclusion or
nonnegative integers ordered by <=. Both support the ``<=`` and ``<``
operators, so the elimination algorithms below are written once for both.
Vertices are labelled 1..n.
"""
from __future__ import annotations

__docformat__ = 'reStructuredText'

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Generic, Iterable, Iterator, Optional, Sequence, TypeVar, Union

import networkx as nx

from constants import FORBIDDEN_PATHS_MAX_VERTICES, ObstructionKind

LOGGER = logging.getLogger(__name__)

W = TypeVar('W', frozenset, int)
Edge = tuple[int, int]


class GraphError(ValueError):
    pass


def weight_set(values: Iterable) -> frozenset[Fraction]:
    return frozenset(Fraction(v) for v in values)


def comparable(a: W, b: W) -> bool:
    return a <= b or b <= a


def edge_key(u: int, v: int) -> Edge:
    if u == v:
        raise GraphError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph(Generic[W]):
    """
    A simple graph on vertices 1..n_vertices with one weight per vertex.

    ``origin`` records, for each vertex, its label in the graph this one was
    derived from by induced subgraphs or contractions.
    """

    n_vertices: int
    edges: frozenset[Edge]
    psi: tuple[W, ...]
    origin: tuple[int, ...] = field(default=(), compare=False)
    graph: nx.Graph = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.psi) != self.n_vertices:
            raise GraphError(f"{len(self.psi)} weights for {self.n_vertices} vertices")
        kinds = {isinstance(w, int) for w in self.psi}
        if len(kinds) > 1:
            raise GraphError("weights mix integers and sets")
        for w in self.psi:
            if isinstance(w, bool) or not isinstance(w, (int, frozenset)):
                raise GraphError(f"unsupported weight {w!r}")
            if isinstance(w, int) and w < 0:
                raise GraphError(f"negative weight {w}")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n_vertices):
                raise GraphError(f"bad edge ({u}, {v})")
        # nodes and edges in sorted order so traversals are deterministic
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(sorted(self.edges))
        object.__setattr__(self, "graph", graph)
        if not self.origin:
            object.__setattr__(self, "origin", tuple(range(1, self.n_vertices + 1)))
        elif len(self.origin) != self.n_vertices:
            raise GraphError("origin labels do not match the vertex count")

    @classmethod
    def build(cls, n_vertices: int, edges: Iterable[Sequence[int]], psi: Sequence,
              origin: Sequence[int] = ()) -> WeightedGraph:
        """
        Build a graph from loose data: edges in either orientation and
        weights as integers or iterables of rationals.
        """
        keys = set()
        for e in edges:
            if len(e) != 2:
                raise GraphError(f"edge {e!r} does not have two endpoints")
            key = edge_key(int(e[0]), int(e[1]))
            if key in keys:
                raise GraphError(f"repeated edge {key}")
            keys.add(key)
        weights = tuple(
            w if isinstance(w, (int, frozenset)) and not isinstance(w, bool) else weight_set(w)
            for w in psi
        )
        return cls(n_vertices, frozenset(keys), weights, tuple(origin))

    @property
    def vertices(self) -> range:
        return range(1, self.n_vertices + 1)

    @property
    def integer_weighted(self) -> bool:
        return isinstance(self.psi[0], int)

    def weight(self, v: int) -> W:
        self._check_vertex(v)
        return self.psi[v - 1]

    def neighbours(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return frozenset(self.graph[v])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        return u != v and self.graph.has_edge(u, v)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def is_complete(self) -> bool:
        return len(self.edges) == self.n_vertices * (self.n_vertices - 1) // 2

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = sorted(vs)
        return all(self.has_edge(u, w) for i, u in enumerate(vs) for w in vs[i + 1:])

    def _check_vertex(self, v: int) -> None:
        if not (1 <= v <= self.n_vertices):
            raise GraphError(f"vertex {v} out of range 1..{self.n_vertices}")


@dataclass(frozen=True)
class Ordering:
    """A vertex ordering (v_1, ..., v_l); positions are 1-based."""

    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise GraphError(f"{self.perm} is not a permutation of 1..{len(self.perm)}")

    def __len__(self) -> int:
        return len(self.perm)

    def __iter__(self) -> Iterator[int]:
        return iter(self.perm)

    def vertex_at(self, k: int) -> int:
        return self.perm[k - 1]

    def position_of(self, v: int) -> int:
        return self.perm.index(v) + 1

    def restrict(self, vs: Iterable[int]) -> Ordering:
        """The subsequence on ``vs``, relabelled as ``induced_subgraph`` does."""
        relabel = {v: i + 1 for i, v in enumerate(sorted(set(vs)))}
        return Ordering(tuple(relabel[v] for v in self.perm if v in relabel))


@dataclass(frozen=True)
class ChordlessCycle:
    cycle: tuple[int, ...]
    kind = ObstructionKind.CHORDLESS_CYCLE


@dataclass(frozen=True)
class IncomparableEdge:
    u: int
    v: int
    kind = ObstructionKind.INCOMPARABLE_EDGE


@dataclass(frozen=True)
class ValleyPath:
    path: tuple[int, ...]
    kind = ObstructionKind.VALLEY_PATH


Obstruction = Union[ChordlessCycle, IncomparableEdge, ValleyPath]


@dataclass(frozen=True)
class Unimodal:
    peak: int


@dataclass(frozen=True)
class Subpath:
    start: int
    end: int
    kind: ObstructionKind


def is_simplicial(g: WeightedGraph, v: int, within: Optional[Iterable[int]] = None) -> bool:
    """
    True iff the neighbours of v (inside ``within`` when given) form a clique.

    :raises GraphError: if v is not a vertex of g.
    """
    nbrs = g.neighbours(v)
    if within is not None:
        nbrs = nbrs & frozenset(within)
    return g.is_clique(nbrs)


def simplicial_vertices(g: WeightedGraph) -> list[int]:
    return [v for v in g.vertices if is_simplicial(g, v)]


def validate_peo(g: WeightedGraph, o: Ordering) -> bool:
    """Each v_i is simplicial in the subgraph induced by v_1..v_i."""
    if len(o) != g.n_vertices:
        return False
    return _first_peo_violation(g, o) is None


def _first_peo_violation(g: WeightedGraph, o: Ordering) -> Optional[tuple[int, int, int]]:
    seen: set[int] = set()
    for v in o:
        earlier = sorted(g.neighbours(v) & seen)
        for i, a in enumerate(earlier):
            for b in earlier[i + 1:]:
                if not g.has_edge(a, b):
                    return v, a, b
        seen.add(v)
    return None


def validate_weo(g: WeightedGraph, o: Ordering) -> bool:
    """
    A PEO in which every edge {v_i, v_j} with i < j has psi(v_i) >= psi(v_j).
    """
    if not validate_peo(g, o):
        return False
    position = {v: k for k, v in enumerate(o, start=1)}
    for u, v in g.edges:
        first, second = (u, v) if position[u] < position[v] else (v, u)
        if not g.weight(second) <= g.weight(first):
            return False
    return True


def _shortest_path(g: WeightedGraph, source: int, target: int, allowed: set[int]) -> Optional[list[int]]:
    try:
        return nx.shortest_path(g.graph.subgraph(allowed), source, target)
    except nx.NetworkXNoPath:
        return None


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    start = cycle.index(min(cycle))
    rotated = list(cycle[start:]) + list(cycle[:start])
    if rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[1:][::-1]
    return tuple(rotated)


def _canonical_path(path: Sequence[int]) -> tuple[int, ...]:
    return tuple(path) if path[0] < path[-1] else tuple(reversed(path))


def _cycle_through(g: WeightedGraph, v: int, a: int, b: int) -> Optional[ChordlessCycle]:
    blocked = (g.neighbours(v) | {v}) - {a, b}
    allowed = set(g.vertices) - blocked
    path = _shortest_path(g, a, b, allowed)
    if path is None:
        return None
    return ChordlessCycle(_canonical_cycle([v] + path))


def mcs_peo(g: WeightedGraph) -> Union[Ordering, ChordlessCycle]:
    """
    Maximum cardinality search from vertex 1, lowest index on ties.

    The visit order is a PEO exactly when g is chordal. Otherwise a chordless
    cycle is extracted through the first vertex whose earlier neighbours are
    not a clique.

    :complexity: O(n^2) for the search, O(n^2 * (n + m)) worst case for
        extracting a cycle.
    """
    weight = {v: 0 for v in g.vertices}
    order: list[int] = []
    while weight:
        v = min(weight, key=lambda u: (-weight[u], u))
        del weight[v]
        order.append(v)
        for w in g.neighbours(v):
            if w in weight:
                weight[w] += 1
    ordering = Ordering(tuple(order))
    violation = _first_peo_violation(g, ordering)
    if violation is None:
        return ordering
    v, a, b = violation
    LOGGER.debug("search order %s fails at vertex %d (%d, %d not adjacent)", order, v, a, b)
    cycle = _cycle_through(g, v, a, b)
    if cycle is not None:
        return cycle
    for v in g.vertices:
        nbrs = sorted(g.neighbours(v))
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if not g.has_edge(a, b):
                    cycle = _cycle_through(g, v, a, b)
                    if cycle is not None:
                        return cycle
    raise RuntimeError("search order is not perfect but no chordless cycle was found")


def is_chordal(g: WeightedGraph) -> bool:
    return nx.is_chordal(g.graph)


def _components(g: WeightedGraph, vs: set[int]) -> list[list[int]]:
    """Connected components of the subgraph on ``vs``, by smallest member."""
    return sorted((sorted(c) for c in nx.connected_components(g.graph.subgraph(vs))), key=lambda c: c[0])


def find_weo(g: WeightedGraph) -> Union[Ordering, Obstruction]:
    """
    Construct a weighted elimination ordering or an obstruction to one.

    Elimination runs from the back: at each step the remaining vertices of
    poset-minimal weight are split into connected components S. If the
    neighbourhood N of S is a clique, S holds a vertex that is simplicial in
    what remains and whose weight is below all its neighbours'; it is placed
    last. If N is not a clique, two non-adjacent vertices of N joined
    through S form a valley path.

    :complexity: O(n^2 * (n + m)) in the worst case.
    """
    peo = mcs_peo(g)
    if isinstance(peo, ChordlessCycle):
        return peo
    for u, v in g.sorted_edges():
        if not comparable(g.weight(u), g.weight(v)):
            return IncomparableEdge(u, v)

    remaining = set(g.vertices)
    tail: list[int] = []
    while remaining:
        minimal = {
            v for v in remaining
            if not any(g.weight(u) < g.weight(v) for u in remaining)
        }
        component = _components(g, minimal)[0]
        members = set(component)
        boundary = sorted(set().union(*(g.neighbours(v) for v in component)) & remaining - members)
        for i, u in enumerate(boundary):
            for w in boundary[i + 1:]:
                if not g.has_edge(u, w):
                    path = _shortest_path(g, u, w, members | {u, w})
                    LOGGER.debug("valley between %d and %d through %s", u, w, component)
                    return ValleyPath(_canonical_path(path))
        chosen = next((v for v in component if is_simplicial(g, v, remaining)), None)
        if chosen is None:
            raise RuntimeError(f"no simplicial vertex in component {component}")
        tail.append(chosen)
        remaining.discard(chosen)
    return Ordering(tuple(reversed(tail)))


def induced_paths(g: WeightedGraph, max_vertices: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """
    Every induced path on at least two vertices, once, oriented from its
    smaller endpoint.
    """
    limit = max_vertices or g.n_vertices

    def extend(path: list[int], on_path: set[int]) -> Iterator[tuple[int, ...]]:
        if len(path) >= 2 and path[0] < path[-1]:
            yield tuple(path)
        if len(path) == limit:
            return
        last = path[-1]
        for w in sorted(g.neighbours(last)):
            if w in on_path:
                continue
            if any(g.has_edge(w, p) for p in path[:-1]):
                continue
            path.append(w)
            on_path.add(w)
            yield from extend(path, on_path)
            path.pop()
            on_path.discard(w)

    for start in g.vertices:
        yield from extend([start], {start})


def _is_valley(values: Sequence) -> bool:
    if len(values) < 3:
        return False
    interior = values[1:-1]
    return (
        all(w == interior[0] for w in interior)
        and interior[0] < values[0]
        and interior[-1] < values[-1]
    )


def forbidden_paths(g: WeightedGraph) -> list[Obstruction]:
    """
    All induced paths of incomparable-edge or valley type, by exhaustive
    search: incomparable edges first, then valley paths by length.
    """
    if g.n_vertices > FORBIDDEN_PATHS_MAX_VERTICES:
        LOGGER.warning("enumerating induced paths of a graph with %d vertices", g.n_vertices)
    edges = []
    valleys = []
    for path in induced_paths(g):
        values = [g.weight(v) for v in path]
        if len(path) == 2 and not comparable(*values):
            edges.append(IncomparableEdge(*path))
        elif _is_valley(values):
            valleys.append(ValleyPath(path))
    edges.sort(key=lambda e: (e.u, e.v))
    valleys.sort(key=lambda p: (len(p.path), p.path))
    return edges + valleys


def unimodal_decompose(values: Sequence) -> Union[Unimodal, Subpath]:
    """
    Locate the peak of a unimodal weight sequence, or a forbidden subpath.

    Positions are 1-based. A sequence that is not unimodal contains either an
    incomparable adjacent pair or, between its first descent i0 and the first
    ascent i2 after it, a valley starting at the last descent i1 before i2.
    """
    if not values:
        raise ValueError("empty weight sequence")
    k = len(values)
    for i in range(k - 1):
        if not comparable(values[i], values[i + 1]):
            return Subpath(i + 1, i + 2, ObstructionKind.INCOMPARABLE_EDGE)
    descents = [i + 1 for i in range(k - 1) if values[i + 1] < values[i]]
    if not descents:
        return Unimodal(k)
    i0 = descents[0]
    ascent = next((i + 1 for i in range(i0, k - 1) if values[i] < values[i + 1]), None)
    if ascent is None:
        return Unimodal(i0)
    i2 = ascent + 1
    i1 = max(d for d in descents if d < i2)
    return Subpath(i1, i2, ObstructionKind.VALLEY_PATH)


def induced_subgraph(g: WeightedGraph, vs: Iterable[int]) -> WeightedGraph:
    """
    The subgraph on ``vs`` relabelled 1..|vs| in increasing order.

    :raises GraphError: if vs is empty or contains a non-vertex.
    """
    chosen = sorted(set(vs))
    if not chosen:
        raise GraphError("induced subgraph on no vertices")
    for v in chosen:
        g._check_vertex(v)
    relabel = {v: i + 1 for i, v in enumerate(chosen)}
    edges = frozenset(
        (relabel[u], relabel[v]) for u, v in g.edges if u in relabel and v in relabel
    )
    return WeightedGraph(
        len(chosen), edges, tuple(g.weight(v) for v in chosen),
        tuple(g.origin[v - 1] for v in chosen),
    )


def _require_edge(g: WeightedGraph, e: Sequence[int]) -> Edge:
    key = edge_key(*e)
    if key not in g.edges:
        raise GraphError(f"{key} is not an edge")
    return key


def delete_edge(g: WeightedGraph, e: Sequence[int]) -> WeightedGraph:
    key = _require_edge(g, e)
    return WeightedGraph(g.n_vertices, g.edges - {key}, g.psi, g.origin)


def contract_edge(g: WeightedGraph, e: Sequence[int]) -> WeightedGraph:
    """
    Merge the endpoints u < v of an edge into u with weight psi(u) | psi(v).

    Labels above v shift down by one, parallel edges collapse.

    :raises GraphError: if e is not an edge or weights are integers.
    """
    u, v = _require_edge(g, e)
    if g.integer_weighted:
        raise GraphError("contraction needs set weights")

    def relabel(w: int) -> int:
        if w == v:
            return u
        return w - 1 if w > v else w

    edges = frozenset(
        edge_key(relabel(a), relabel(b)) for a, b in g.edges if {a, b} != {u, v}
    )
    psi = list(g.psi)
    psi[u - 1] = g.weight(u) | g.weight(v)
    del psi[v - 1]
    origin = list(g.origin)
    del origin[v - 1]
    return WeightedGraph(g.n_vertices - 1, edges, tuple(psi), tuple(origin))


def dirac_pair(g: WeightedGraph) -> Optional[tuple[int, int]]:
    """The lexicographically first pair of non-adjacent simplicial vertices."""
    simplicial = simplicial_vertices(g)
    for i, a in enumerate(simplicial):
        for b in simplicial[i + 1:]:
            if not g.has_edge(a, b):
                return a, b
    return None


def _is_induced_path(g: WeightedGraph, path: Sequence[int]) -> bool:
    if len(set(path)) != len(path):
        return False
    for i, a in enumerate(path):
        for j in range(i + 1, len(path)):
            if g.has_edge(a, path[j]) != (j == i + 1):
                return False
    return True


def check_obstruction(g: WeightedGraph, obstruction: Obstruction) -> bool:
    """Verify an obstruction against its witness invariants."""
    try:
        if isinstance(obstruction, ChordlessCycle):
            cycle = obstruction.cycle
            if len(cycle) < 4 or len(set(cycle)) != len(cycle):
                return False
            n = len(cycle)
            for i in range(n):
                for j in range(i + 1, n):
                    adjacent = j == i + 1 or (i == 0 and j == n - 1)
                    if g.has_edge(cycle[i], cycle[j]) != adjacent:
                        return False
            return True
        if isinstance(obstruction, IncomparableEdge):
            return g.has_edge(obstruction.u, obstruction.v) and not comparable(
                g.weight(obstruction.u), g.weight(obstruction.v))
        if isinstance(obstruction, ValleyPath):
            path = obstruction.path
            return (
                len(path) >= 3
                and _is_induced_path(g, path)
                and _is_valley([g.weight(v) for v in path])
            )
    except GraphError:
        return False
    return False
