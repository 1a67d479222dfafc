"""
Logarithmic derivations of psi-graphical arrangements.

Builds the triangular basis attached to a weighted elimination ordering,
certifies it with Saito's criterion and decides freeness, returning either
a verified basis or an obstruction witness. Non-freeness along a valley
path can additionally be audited with the addition-deletion theorem.
"""
from __future__ import annotations

__docformat__ = 'reStructuredText'

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from arrangement import Arrangement, build_psi_arrangement
from exact import (LinForm, MPoly, NotTriangular, VariableMismatch, coordinate_names,
                   det_triangular, divides_power, product)
from wgraph import (GraphError, Obstruction, Ordering, ValleyPath, WeightedGraph,
                    contract_edge, delete_edge, edge_key, find_weo, validate_weo)

LOGGER = logging.getLogger(__name__)


class InvalidOrdering(ValueError):
    pass


class AuditInconclusive(ValueError):
    pass


class CertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Derivation:
    """sum over coordinates v of coeffs[v] * d/dv."""

    names: tuple[str, ...]
    coeffs: tuple[MPoly, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.names):
            raise VariableMismatch(f"{len(self.coeffs)} coefficients for {self.names}")
        for coeff in self.coeffs:
            if coeff.names != self.names:
                raise VariableMismatch(f"coefficient over {coeff.names}, not {self.names}")

    @classmethod
    def partial(cls, names: Sequence[str], index: int) -> Derivation:
        names = tuple(names)
        return cls(names, tuple(
            MPoly.constant(names, 1 if i == index else 0) for i in range(len(names))
        ))

    def apply(self, p: MPoly) -> MPoly:
        result = MPoly.zero(self.names)
        for i, coeff in enumerate(self.coeffs):
            if not coeff.is_zero():
                result = result + coeff * p.diff(i)
        return result

    def apply_form(self, form: LinForm) -> MPoly:
        result = MPoly.zero(self.names)
        for coeff, c in zip(self.coeffs, form.coeffs):
            if c:
                result = result + coeff * c
        return result

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    @property
    def degree(self) -> Optional[int]:
        """The common degree of the coefficients, None if they disagree."""
        degrees = set()
        for coeff in self.coeffs:
            if coeff.is_zero():
                continue
            if not coeff.is_homogeneous():
                return None
            degrees.add(coeff.total_degree())
        if len(degrees) > 1:
            return None
        return degrees.pop() if degrees else -1

    def restrict_z0(self) -> Derivation:
        """Set z = 0 and drop the z coordinate."""
        z = self.names.index("z")
        names = self.names[:z] + self.names[z + 1:]
        zero = MPoly.zero(self.names)
        coeffs = tuple(
            c.substitute(z, zero).drop_variable(z)
            for i, c in enumerate(self.coeffs) if i != z
        )
        return Derivation(names, coeffs)

    def display(self) -> str:
        parts = [
            f"({coeff.display()})*d{name}"
            for name, coeff in zip(self.names, self.coeffs) if not coeff.is_zero()
        ]
        return " + ".join(parts) or "0"

    def as_dict(self) -> dict[str, str]:
        return {f"d{name}": coeff.display() for name, coeff in zip(self.names, self.coeffs)}


def euler_derivation(ell: int) -> Derivation:
    if ell < 1:
        raise ValueError("the Euler derivation needs at least one vertex")
    names = coordinate_names(ell)
    return Derivation(names, tuple(MPoly.variable(names, i) for i in range(len(names))))


def _require_weo(g: WeightedGraph, o: Ordering) -> None:
    if len(o) != g.n_vertices or not validate_weo(g, o):
        raise InvalidOrdering(f"{o.perm} is not a weighted elimination ordering")


def _weight_size(w) -> int:
    return w if isinstance(w, int) else len(w)


def c_geq(g: WeightedGraph, o: Ordering, k: int) -> set[int]:
    """
    Positions i >= k reachable from v_k by a path whose positions increase.

    :complexity: O(l^2)
    """
    reached = {k}
    for i in range(k + 1, len(o) + 1):
        v = o.vertex_at(i)
        if any(g.has_edge(o.vertex_at(j), v) for j in reached):
            reached.add(i)
    return reached


def e_lt(g: WeightedGraph, o: Ordering, k: int) -> set[int]:
    v = o.vertex_at(k)
    return {j for j in range(1, k) if g.has_edge(o.vertex_at(j), v)}


def build_theta_k(g: WeightedGraph, o: Ordering, k: int) -> Derivation:
    """
    theta_k = sum over i in C_{>=k} of
    prod_{j in E_{<k}} (x_{v_j} - x_{v_i}) * prod_{a in psi(v_k)} (x_{v_i} - a z)
    times d/dx_{v_i}.

    :raises InvalidOrdering: if o is not a WEO of g.
    """
    _require_weo(g, o)
    names = coordinate_names(g.n_vertices)
    z = MPoly.variable(names, 0)
    x = [None] + [MPoly.variable(names, v) for v in g.vertices]
    earlier = sorted(e_lt(g, o, k))
    weights = sorted(g.weight(o.vertex_at(k)))
    coeffs = [MPoly.zero(names)] * len(names)
    for i in sorted(c_geq(g, o, k)):
        vi = o.vertex_at(i)
        factors = [x[o.vertex_at(j)] - x[vi] for j in earlier]
        factors.extend(x[vi] - z * a for a in weights)
        coeffs[vi] = product(names, factors)
    return Derivation(names, tuple(coeffs))


def theta_basis(g: WeightedGraph, o: Ordering) -> tuple[list[Derivation], tuple[int, ...]]:
    """
    (theta_E, theta_1, ..., theta_l) and the triangular row order
    (z, x_{v_1}, ..., x_{v_l}) as coordinate indices.
    """
    ders = [euler_derivation(g.n_vertices)]
    ders.extend(build_theta_k(g, o, k) for k in range(1, g.n_vertices + 1))
    return ders, (0,) + o.perm


@dataclass(frozen=True)
class LogCheck:
    ok: bool
    report: tuple[bool, ...]

    def __bool__(self) -> bool:
        return self.ok


def is_logarithmic(theta: Derivation, a: Arrangement,
                   multiplicities: Optional[Sequence[int]] = None) -> LogCheck:
    """
    theta(alpha_H) divisible by alpha_H ** m(H) for every hyperplane H, with
    m = 1 unless multiplicities are given.
    """
    if theta.names != a.names:
        raise VariableMismatch(f"{theta.names} vs {a.names}")
    mult = multiplicities if multiplicities is not None else [1] * len(a)
    report = tuple(
        divides_power(theta.apply_form(form), form, m) for form, m in zip(a.forms, mult)
    )
    return LogCheck(all(report), report)


def coefficient_matrix(ders: Sequence[Derivation], rows: Sequence[int]) -> list[list[MPoly]]:
    """Entry (r, c) is the coefficient of derivation c on coordinate rows[r]."""
    return [[d.coeffs[row] for d in ders] for row in rows]


def _infer_rows(ders: Sequence[Derivation]) -> Optional[tuple[int, ...]]:
    """Row order making the matrix lower triangular; each column, from the
    last, must bring exactly one new nonzero row."""
    assigned: list[int] = []
    for d in reversed(ders):
        support = {i for i, c in enumerate(d.coeffs) if not c.is_zero()}
        new = support - set(assigned)
        if len(new) != 1:
            return None
        assigned.append(new.pop())
    return tuple(reversed(assigned))


@dataclass(frozen=True)
class SaitoFailure:
    reason: str


def saito_scalar(arr: Arrangement, mult: Sequence[int], ders: Sequence[Derivation],
                 rows: Optional[Sequence[int]] = None) -> Union[Fraction, SaitoFailure]:
    """
    The nonzero c with det = c * Q(A, m), the determinant taken as the
    diagonal product of the lower triangular coefficient matrix.
    """
    if len(ders) != arr.ambient_dim:
        return SaitoFailure(f"{len(ders)} derivations in dimension {arr.ambient_dim}")
    degrees = []
    for d in ders:
        if d.names != arr.names:
            return SaitoFailure(f"derivation over {d.names}, not {arr.names}")
        if d.is_zero() or d.degree is None:
            return SaitoFailure(f"derivation {d.display()} is zero or not homogeneous")
        degrees.append(d.degree)
    if sum(degrees) != sum(mult):
        return SaitoFailure(f"degree sum {sum(degrees)} differs from deg Q = {sum(mult)}")
    for d in ders:
        check = is_logarithmic(d, arr, mult)
        if not check.ok:
            bad = [arr.forms[i].display() for i, ok in enumerate(check.report) if not ok]
            return SaitoFailure(f"derivation {d.display()} is not logarithmic along {bad}")
    if rows is None:
        rows = _infer_rows(ders)
        if rows is None:
            return SaitoFailure("coefficient matrix is not triangular in any row order")
    try:
        det = det_triangular(coefficient_matrix(ders, rows))
    except NotTriangular as e:
        return SaitoFailure(f"coefficient matrix is not lower triangular: {e}")
    q = product(arr.names, (form.as_poly() ** m for form, m in zip(arr.forms, mult)))
    lead_mono, lead = q.sorted_terms()[0]
    c = det.coefficient(lead_mono) / lead
    if c == 0 or det != q * c:
        return SaitoFailure(f"determinant {det.display()} is not a multiple of Q")
    return c


def saito_verify(a: Arrangement, ders: Sequence[Derivation],
                 rows: Optional[Sequence[int]] = None) -> Union[Fraction, SaitoFailure]:
    return saito_scalar(a, [1] * len(a), ders, rows)


def exponents_formula(g: WeightedGraph, o: Ordering) -> tuple[int, ...]:
    """{1} together with |E_{<k}| + |psi(v_k)| for k = 1..l, sorted."""
    _require_weo(g, o)
    exps = [1] + [
        len(e_lt(g, o, k)) + _weight_size(g.weight(o.vertex_at(k)))
        for k in range(1, g.n_vertices + 1)
    ]
    return tuple(sorted(exps))


@dataclass(frozen=True)
class AuditReport:
    edge: tuple[int, int]
    exp_deleted: tuple[int, ...]
    exp_restricted: tuple[int, ...]
    subset_holds: bool

    @property
    def refutes_freeness(self) -> bool:
        """With the deletion free, a failed inclusion rules out freeness."""
        return not self.subset_holds


@dataclass(frozen=True)
class Free:
    ordering: Ordering
    basis: tuple[Derivation, ...]
    exponents: tuple[int, ...]
    saito_scalar: Fraction


@dataclass(frozen=True)
class NotFree:
    obstruction: Obstruction
    audit: Optional[AuditReport] = None


FreenessCertificate = Union[Free, NotFree]


def addition_deletion_audit(g: WeightedGraph, e: Sequence[int]) -> AuditReport:
    """
    Compare the exponents of the deletion and the restriction along an edge.

    The restriction of A_{G,psi} to x_u = x_v is A_{G/e,psi'} with the
    merged weight psi(u) | psi(v).

    :raises GraphError: if e is not an edge.
    :raises AuditInconclusive: if the deleted or contracted graph has no WEO.
    """
    key = edge_key(*e)
    deleted = delete_edge(g, key)
    contracted = contract_edge(g, key)
    o_deleted = find_weo(deleted)
    o_contracted = find_weo(contracted)
    if not isinstance(o_deleted, Ordering):
        raise AuditInconclusive(f"deleting {key} leaves no WEO: {o_deleted}")
    if not isinstance(o_contracted, Ordering):
        raise AuditInconclusive(f"contracting {key} leaves no WEO: {o_contracted}")
    exp_deleted = exponents_formula(deleted, o_deleted)
    exp_restricted = exponents_formula(contracted, o_contracted)
    have = Counter(exp_deleted)
    need = Counter(exp_restricted)
    holds = all(have[k] >= n for k, n in need.items())
    LOGGER.debug("audit %s: exp' %s, exp'' %s", key, exp_deleted, exp_restricted)
    return AuditReport(key, exp_deleted, exp_restricted, holds)


def valley_path_audit(g: WeightedGraph, path: Sequence[int]) -> AuditReport:
    """
    Shrink a valley path v_1..v_k by contracting its last edge until three
    vertices remain, then audit the edge {2, 3}.
    """
    if len(path) < 3:
        raise GraphError(f"{path} is too short for a valley path")
    k = len(path)
    current = WeightedGraph.build(
        k, [(i, i + 1) for i in range(1, k)], [g.weight(v) for v in path]
    )
    while current.n_vertices > 3:
        last = current.n_vertices
        current = contract_edge(current, (last - 1, last))
    return addition_deletion_audit(current, (2, 3))


def decide_freeness(g: WeightedGraph) -> FreenessCertificate:
    """
    Free with a Saito-verified basis when a WEO exists, NotFree with an
    obstruction otherwise.

    :raises CertificationError: if the constructed basis fails verification.
    """
    found = find_weo(g)
    if not isinstance(found, Ordering):
        audit = None
        if isinstance(found, ValleyPath):
            try:
                audit = valley_path_audit(g, found.path)
            except AuditInconclusive as e:
                LOGGER.info("valley path audit inconclusive: %s", e)
        LOGGER.info("not free: %s", found)
        return NotFree(found, audit)
    a = build_psi_arrangement(g)
    ders, rows = theta_basis(g, found)
    scalar = saito_verify(a, ders, rows)
    if isinstance(scalar, SaitoFailure):
        raise CertificationError(f"basis for ordering {found.perm} failed: {scalar.reason}")
    exponents = tuple(sorted(d.degree for d in ders))
    if exponents != exponents_formula(g, found):
        raise CertificationError(f"basis degrees {exponents} disagree with the exponent formula")
    LOGGER.info("free with ordering %s, exponents %s", found.perm, exponents)
    return Free(found, tuple(ders), exponents, scalar)

