"""
Central hyperplane arrangements over the rationals.

Construction of psi-graphical and N-Ish arrangements, the intersection
lattice with its Moebius function, characteristic polynomials, modular
flats and supersolvability, localizations and restrictions, plus the
point-counting and chamber-counting oracles used to cross-check them.
"""
from __future__ import annotations

__docformat__ = 'reStructuredText'

import itertools
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from constants import (CHAMBER_GRID_LIMIT, CHAMBER_GRID_START, CHAMBER_MAX_DIM, LATTICE_GUARD,
                       LATTICE_GUARD_ENV, MAX_AMBIENT_DIM, POINT_COUNT_LIMIT)
from exact import LinForm, MPoly, coordinate_names, product
from wgraph import GraphError, WeightedGraph

LOGGER = logging.getLogger(__name__)

Row = tuple[Fraction, ...]


class ArrangementError(ValueError):
    pass


class LatticeGuardExceeded(ArrangementError):
    pass


class FlatNotInLattice(ArrangementError):
    pass


def lattice_guard() -> int:
    """The largest arrangement whose lattice may be enumerated."""
    raw = os.environ.get(LATTICE_GUARD_ENV)
    if raw is None:
        return LATTICE_GUARD
    try:
        value = int(raw)
    except ValueError:
        raise ArrangementError(f"{LATTICE_GUARD_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise ArrangementError(f"{LATTICE_GUARD_ENV} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Arrangement:
    """Pairwise non-proportional normalized forms over the coordinates ``names``."""

    names: tuple[str, ...]
    forms: tuple[LinForm, ...]

    def __post_init__(self) -> None:
        for form in self.forms:
            if form.names != self.names:
                raise ArrangementError(f"form {form} lives over {form.names}, not {self.names}")
        if len(set(self.forms)) != len(self.forms):
            raise ArrangementError("repeated hyperplane")

    @classmethod
    def of(cls, names: Sequence[str], forms: Iterable[Union[LinForm, Sequence]]) -> Arrangement:
        """Normalize and deduplicate, keeping first occurrences."""
        names = tuple(names)
        kept: list[LinForm] = []
        seen = set()
        for form in forms:
            if not isinstance(form, LinForm):
                form = LinForm.of(names, form)
            if form not in seen:
                seen.add(form)
                kept.append(form)
        return cls(names, tuple(kept))

    def __len__(self) -> int:
        return len(self.forms)

    @property
    def ambient_dim(self) -> int:
        return len(self.names)

    @property
    def form_set(self) -> frozenset[LinForm]:
        return frozenset(self.forms)

    def index_of(self, form: LinForm) -> int:
        return self.forms.index(form)

    def display(self) -> str:
        return "\n".join(form.display() for form in self.forms)


def rref(rows: Iterable[Sequence[Fraction]]) -> tuple[Row, ...]:
    """Reduced row echelon form; zero rows are dropped."""
    matrix = [[Fraction(c) for c in row] for row in rows]
    if not matrix:
        return ()
    width = len(matrix[0])
    pivot_row = 0
    for col in range(width):
        pivot = next((r for r in range(pivot_row, len(matrix)) if matrix[r][col]), None)
        if pivot is None:
            continue
        matrix[pivot_row], matrix[pivot] = matrix[pivot], matrix[pivot_row]
        lead = matrix[pivot_row][col]
        matrix[pivot_row] = [c / lead for c in matrix[pivot_row]]
        for r in range(len(matrix)):
            if r != pivot_row and matrix[r][col]:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[pivot_row])]
        pivot_row += 1
        if pivot_row == len(matrix):
            break
    return tuple(tuple(row) for row in matrix[:pivot_row])


def matrix_rank(rows: Iterable[Sequence[Fraction]]) -> int:
    return len(rref(rows))


def in_row_space(normals: Sequence[Row], vector: Sequence[Fraction]) -> bool:
    """Membership in the span of rows already in reduced row echelon form."""
    rest = list(vector)
    for row in normals:
        pivot = next(i for i, c in enumerate(row) if c)
        if rest[pivot]:
            factor = rest[pivot]
            rest = [a - factor * b for a, b in zip(rest, row)]
    return not any(rest)


@dataclass(frozen=True)
class Flat:
    """
    An intersection of hyperplanes, identified by the RREF of its normal space.

    ``members`` are the indices of the hyperplanes containing it.
    """

    normals: tuple[Row, ...]
    members: frozenset[int] = field(compare=False)

    @property
    def rank(self) -> int:
        return len(self.normals)


def flat_of(a: Arrangement, indices: Iterable[int]) -> Flat:
    """The flat cut out by the hyperplanes at ``indices``."""
    indices = set(indices)
    for i in indices:
        if not (0 <= i < len(a)):
            raise ArrangementError(f"no hyperplane with index {i}")
    normals = rref(a.forms[i].coeffs for i in sorted(indices))
    members = frozenset(
        i for i, form in enumerate(a.forms)
        if i in indices or in_row_space(normals, form.coeffs)
    )
    return Flat(normals, members)


class Lattice:
    """
    The intersection lattice L(A), ordered by reverse inclusion.

    Flats are stored by rank; X <= Y iff the hyperplanes through X are among
    those through Y.
    """

    def __init__(self, arrangement: Arrangement, flats: Sequence[Flat], moebius: dict[Flat, int]) -> None:
        self.arrangement = arrangement
        self.flats = sorted(flats, key=lambda x: (x.rank, sorted(x.members)))
        self.moebius = moebius
        self._by_members = {x.members: x for x in self.flats}

    def __len__(self) -> int:
        return len(self.flats)

    def __contains__(self, x: Flat) -> bool:
        return self._by_members.get(x.members) == x

    @property
    def rank(self) -> int:
        return self.flats[-1].rank

    def bottom(self) -> Flat:
        return self.flats[0]

    def top(self) -> Flat:
        return self.flats[-1]

    def of_rank(self, r: int) -> list[Flat]:
        return [x for x in self.flats if x.rank == r]

    def rank_counts(self) -> list[int]:
        return [len(self.of_rank(r)) for r in range(self.rank + 1)]

    def moebius_sums(self) -> list[int]:
        """Sum of |mu| per rank, the absolute coefficients of chi."""
        return [sum(abs(self.moebius[x]) for x in self.of_rank(r)) for r in range(self.rank + 1)]

    def le(self, x: Flat, y: Flat) -> bool:
        return x.members <= y.members

    def join(self, x: Flat, y: Flat) -> Flat:
        return self.lookup(x.members | y.members)

    def meet(self, x: Flat, y: Flat) -> Flat:
        return self.lookup(x.members & y.members)

    def lookup(self, members: Iterable[int]) -> Flat:
        members = frozenset(members)
        found = self._by_members.get(members)
        if found is None:
            found = self._by_members[flat_of(self.arrangement, members).members]
        return found

    def require(self, x: Flat) -> None:
        if x not in self:
            raise FlatNotInLattice(f"flat with members {sorted(x.members)} is not in the lattice")


def intersection_lattice(a: Arrangement) -> Lattice:
    """
    Enumerate L(A) rank by rank, joining each flat with every atom.

    :raises LatticeGuardExceeded: if |A| or the ambient dimension is too large.
    :complexity: O(|L(A)| * |A| * rref) where rref is O(d^3) on d columns.
    """
    guard = lattice_guard()
    if len(a) > guard:
        raise LatticeGuardExceeded(f"{len(a)} hyperplanes exceeds the lattice guard {guard}")
    if a.ambient_dim > MAX_AMBIENT_DIM:
        raise LatticeGuardExceeded(f"ambient dimension {a.ambient_dim} exceeds {MAX_AMBIENT_DIM}")
    bottom = Flat((), frozenset())
    levels = [[bottom]]
    while True:
        found: dict[frozenset[int], Flat] = {}
        for x in levels[-1]:
            for i in range(len(a)):
                if i not in x.members:
                    y = flat_of(a, x.members | {i})
                    found.setdefault(y.members, y)
        if not found:
            break
        levels.append(list(found.values()))
    moebius: dict[Flat, int] = {bottom: 1}
    below: list[Flat] = [bottom]
    for level in levels[1:]:
        for x in level:
            moebius[x] = -sum(moebius[y] for y in below if y.members < x.members)
        below.extend(level)
    LOGGER.debug("lattice of %d hyperplanes has %d flats", len(a), len(below))
    return Lattice(a, below, moebius)


def characteristic_polynomial(lat: Lattice) -> MPoly:
    """chi(q) = sum over flats X of mu(X) * q^(dim X)."""
    d = lat.arrangement.ambient_dim
    terms: dict[tuple[int], int] = {}
    for x in lat.flats:
        key = (d - x.rank,)
        terms[key] = terms.get(key, 0) + lat.moebius[x]
    return MPoly(("q",), terms)


def charpoly_coefficients(lat: Lattice) -> list[int]:
    """Coefficients of chi from q^d down to q^0."""
    chi = characteristic_polynomial(lat)
    d = lat.arrangement.ambient_dim
    return [int(chi.coefficient((k,))) for k in range(d, -1, -1)]


def is_modular(lat: Lattice, x: Flat) -> bool:
    lat.require(x)
    return all(
        x.rank + y.rank == matrix_rank(x.normals + y.normals) + lat.meet(x, y).rank
        for y in lat.flats
    )


def supersolvable_mchain(lat: Lattice) -> Optional[list[Flat]]:
    """
    A maximal chain of modular flats from bottom to top, or None.

    Depth-first over covering modular flats, remembering dead ends.
    """
    top = lat.top()
    modular: dict[Flat, bool] = {}
    dead: set[Flat] = set()

    def check(x: Flat) -> bool:
        if x not in modular:
            modular[x] = is_modular(lat, x)
        return modular[x]

    def extend(chain: list[Flat]) -> Optional[list[Flat]]:
        x = chain[-1]
        if x == top:
            return chain
        for y in lat.of_rank(x.rank + 1):
            if y in dead or not lat.le(x, y) or not check(y):
                continue
            found = extend(chain + [y])
            if found is not None:
                return found
            dead.add(y)
        return None

    return extend([lat.bottom()])


def localization(a: Arrangement, x: Flat) -> Arrangement:
    """
    The hyperplanes of A containing x.

    :raises FlatNotInLattice: if x is not an intersection of hyperplanes of A.
    """
    if any(not (0 <= i < len(a)) for i in x.members):
        raise FlatNotInLattice(f"flat members {sorted(x.members)} are not hyperplanes of A")
    closure = flat_of(a, x.members)
    if closure != x or closure.members != x.members:
        raise FlatNotInLattice(f"flat with members {sorted(x.members)} is not in L(A)")
    return Arrangement(a.names, tuple(a.forms[i] for i in sorted(x.members)))


class Restricted(NamedTuple):
    source: int
    form: LinForm


def restriction_map(a: Arrangement, h0: int) -> tuple[tuple[str, ...], list[Restricted]]:
    """
    Express every other hyperplane of A on H0.

    The highest-index coordinate t with a nonzero coefficient in alpha_0 is
    eliminated: alpha maps to alpha - (alpha[t] / alpha_0[t]) * alpha_0 with
    coordinate t dropped. Restrictions are returned with their source
    indices, duplicates included.
    """
    if not (0 <= h0 < len(a)):
        raise ArrangementError(f"no hyperplane with index {h0}")
    base = a.forms[h0].coeffs
    t = max(i for i, c in enumerate(base) if c)
    names = a.names[:t] + a.names[t + 1:]
    restricted = []
    for i, form in enumerate(a.forms):
        if i == h0:
            continue
        ratio = form.coeffs[t] / base[t]
        coeffs = [c - ratio * b for c, b in zip(form.coeffs, base)]
        del coeffs[t]
        restricted.append(Restricted(i, LinForm.of(names, coeffs)))
    return names, restricted


class Triple(NamedTuple):
    deleted: Arrangement
    restricted: Arrangement


def triple_restrict(a: Arrangement, h0: int) -> Triple:
    names, restricted = restriction_map(a, h0)
    deleted = Arrangement(a.names, a.forms[:h0] + a.forms[h0 + 1:])
    return Triple(deleted, Arrangement.of(names, (r.form for r in restricted)))


def _braid(names: Sequence[str], i: int, j: int, offset: int) -> list[Fraction]:
    coeffs = [Fraction(0)] * len(names)
    coeffs[offset + i] = Fraction(1)
    coeffs[offset + j] = Fraction(-1)
    return coeffs


def build_psi_arrangement(g: WeightedGraph) -> Arrangement:
    """
    z, then x_i - x_j for each edge in order, then x_i - a z for each vertex
    i and weight a in increasing order.
    """
    if g.integer_weighted:
        raise GraphError("psi-graphical arrangements need set weights")
    names = coordinate_names(g.n_vertices)
    forms = [[Fraction(1)] + [Fraction(0)] * g.n_vertices]
    forms.extend(_braid(names, i, j, 0) for i, j in g.sorted_edges())
    for v in g.vertices:
        for value in sorted(g.weight(v)):
            coeffs = [Fraction(0)] * len(names)
            coeffs[0] = -value
            coeffs[v] = Fraction(1)
            forms.append(coeffs)
    return Arrangement.of(names, forms)


def graphical_arrangement(g: WeightedGraph, *, with_z: bool = True) -> Arrangement:
    """The braid forms x_i - x_j of the edges, over (z, x1, ...) by default."""
    names = coordinate_names(g.n_vertices, with_z=with_z)
    offset = 0 if with_z else -1
    return Arrangement.of(names, (_braid(names, i, j, offset) for i, j in g.sorted_edges()))


def defining_polynomial(a: Arrangement) -> MPoly:
    return product(a.names, (form.as_poly() for form in a.forms))


def is_nest(sets: Sequence[Iterable]) -> Optional[tuple[int, ...]]:
    """
    A permutation w with N_w(1) <= ... <= N_w(l) by inclusion, or None.
    Positions are 1-based.
    """
    frozen = [frozenset(Fraction(v) for v in s) for s in sets]
    order = sorted(range(len(frozen)), key=lambda i: (len(frozen[i]), i))
    for first, second in zip(order, order[1:]):
        if not frozen[first] <= frozen[second]:
            return None
    return tuple(i + 1 for i in order)


def build_nish(sets: Sequence[Iterable]) -> Arrangement:
    """z, x_i - x_j for 1 <= i < j, and x_0 - x_i - a z, over (z, x0, x1, ...)."""
    ell = len(sets)
    names = coordinate_names(ell, with_x0=True)
    forms = [[Fraction(1)] + [Fraction(0)] * (ell + 1)]
    forms.extend(_braid(names, i, j, 1) for i, j in itertools.combinations(range(1, ell + 1), 2))
    for i, values in enumerate(sets, start=1):
        for value in sorted(Fraction(v) for v in values):
            coeffs = [Fraction(0)] * len(names)
            coeffs[0] = -value
            coeffs[1] = Fraction(1)
            coeffs[i + 1] = Fraction(-1)
            forms.append(coeffs)
    return Arrangement.of(names, forms)


def affine_equiv_check(g: WeightedGraph) -> bool:
    """
    Substitute x_i -> x_0 - x_i in every form of A_{G,psi} (with x_0 added as
    an unused coordinate) and compare with the N-Ish arrangement of psi.

    :raises GraphError: if g is not complete.
    """
    if not g.is_complete():
        raise GraphError("affine equivalence needs a complete graph")
    a = build_psi_arrangement(g)
    nish = build_nish([g.weight(v) for v in g.vertices])
    mapped = []
    for form in a.forms:
        c_z, xs = form.coeffs[0], form.coeffs[1:]
        mapped.append([c_z, sum(xs, Fraction(0))] + [-c for c in xs])
    return Arrangement.of(nish.names, mapped).form_set == nish.form_set


def localization_vector(g: WeightedGraph, vs: Iterable[int], *, graphical: bool = False) -> tuple[Fraction, ...]:
    """
    A point on the flat of A_{S,psi_S} (z = 0) or of A_S (z = -1): x_i = 0 on
    S and x_i = i elsewhere.
    """
    chosen = set(vs)
    z = Fraction(-1) if graphical else Fraction(0)
    return (z,) + tuple(Fraction(0) if v in chosen else Fraction(v) for v in g.vertices)


def generic_localization_vector(g: WeightedGraph, vs: Iterable[int], *,
                                graphical: bool = False) -> tuple[Fraction, ...]:
    """
    As ``localization_vector``, with coordinates shifted so that no weight
    hyperplane x_i = a z passes through the point by accident.
    """
    chosen = set(vs)
    if not graphical:
        return localization_vector(g, chosen)
    z = Fraction(-1)

    def avoids(value: int, v: int) -> bool:
        return all(value != a * z for a in g.weight(v))

    inside = next(c for c in itertools.count() if all(avoids(c, v) for v in chosen))
    used = {inside}
    point = [z]
    candidates = itertools.count(inside + 1)
    for v in g.vertices:
        if v in chosen:
            point.append(Fraction(inside))
            continue
        value = next(c for c in candidates if c not in used and avoids(c, v))
        used.add(value)
        point.append(Fraction(value))
    return tuple(point)


def vanishing_forms(a: Arrangement, point: Sequence[Fraction]) -> list[int]:
    return [i for i, form in enumerate(a.forms) if form.evaluate(point) == 0]


def _mod_p(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise ArrangementError(f"coefficient {c} is undefined modulo {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


def count_points_mod_p(a: Arrangement, p: int) -> int:
    """
    Points of F_p^d lying on no hyperplane, after reducing forms modulo p.

    :raises ArrangementError: if p^d exceeds the enumeration limit.
    """
    d = a.ambient_dim
    if p ** d > POINT_COUNT_LIMIT:
        raise ArrangementError(f"{p}^{d} points exceed the enumeration limit")
    forms = [[_mod_p(c, p) for c in form.coeffs] for form in a.forms]
    count = 0
    for point in itertools.product(range(p), repeat=d):
        if all(sum(c * x for c, x in zip(form, point)) % p for form in forms):
            count += 1
    return count


def _sign_vectors(a: Arrangement, radius: int) -> set[tuple[bool, ...]]:
    """Sign vectors of integer points on the surface of the cube of given radius."""
    d = a.ambient_dim
    signs = set()
    span = range(-radius, radius + 1)
    for axis in range(d):
        for end in (-radius, radius):
            for rest in itertools.product(span, repeat=d - 1):
                point = rest[:axis] + (end,) + rest[axis:]
                values = [form.evaluate(point) for form in a.forms]
                if all(values):
                    signs.add(tuple(v > 0 for v in values))
    return signs


def count_chambers(a: Arrangement) -> int:
    """
    Chambers of a central arrangement counted by distinct sign vectors on an
    integer grid, doubling the grid until the count repeats.

    :raises ArrangementError: for ambient dimension above 3 or no convergence.
    """
    if a.ambient_dim > CHAMBER_MAX_DIM:
        raise ArrangementError(f"chamber counting supports dimension <= {CHAMBER_MAX_DIM}")
    radius = CHAMBER_GRID_START
    previous = len(_sign_vectors(a, radius))
    while radius < CHAMBER_GRID_LIMIT:
        radius *= 2
        current = len(_sign_vectors(a, radius))
        if current == previous:
            return current
        previous = current
    raise ArrangementError(f"chamber count did not stabilise by radius {CHAMBER_GRID_LIMIT}")
