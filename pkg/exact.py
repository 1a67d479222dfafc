"""
Exact arithmetic over the rationals.

Sparse multivariate polynomials with Fraction coefficients, normalized
linear forms, division by a linear form and triangular determinants.
Coordinates are named; the conventional order is (z, x0, x1, ..., xl)
with ``x0`` only present for N-Ish arrangements.
"""
from __future__ import annotations

__docformat__ = 'reStructuredText'

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

LOGGER = logging.getLogger(__name__)

Rat = Fraction
Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

_RAT_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class VariableMismatch(ValueError):
    pass


class NotTriangular(ValueError):
    pass


def parse_rat(value: Union[str, int, Fraction]) -> Fraction:
    """
    Read an exact rational from ``"p/q"`` or an integer string.

    Decimal strings and floats are rejected.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"expected an exact rational string, got {value!r}")
    match = _RAT_PATTERN.match(value)
    if match is None:
        raise ValueError(f"not an exact rational: {value!r}")
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise ValueError(f"zero denominator: {value!r}")
    return Fraction(int(numerator), int(denominator) if denominator else 1)


def coordinate_names(ell: int, *, with_z: bool = True, with_x0: bool = False) -> tuple[str, ...]:
    names = ["z"] if with_z else []
    if with_x0:
        names.append("x0")
    names.extend(f"x{i}" for i in range(1, ell + 1))
    return tuple(names)


def scan_order(names: Sequence[str]) -> list[int]:
    """Coordinate indices with ``z`` moved behind every x-coordinate."""
    return [i for i, n in enumerate(names) if n != "z"] + [i for i, n in enumerate(names) if n == "z"]


class MPoly:
    """
    Sparse polynomial with Fraction coefficients.

    ``terms`` maps exponent vectors (one entry per coordinate name) to
    nonzero coefficients. Instances are never mutated after construction.
    """

    __slots__ = ("names", "_terms", "_hash")

    def __init__(self, names: Sequence[str], terms: Mapping[Sequence[int], Scalar] | None = None) -> None:
        self.names = tuple(names)
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != len(self.names):
                raise VariableMismatch(f"exponent vector {mono} does not match {self.names}")
            coeff = Fraction(coeff)
            if coeff:
                clean[mono] = clean.get(mono, Fraction(0)) + coeff
        self._terms = {mono: coeff for mono, coeff in clean.items() if coeff}
        self._hash = None

    @classmethod
    def zero(cls, names: Sequence[str]) -> MPoly:
        return cls(names)

    @classmethod
    def constant(cls, names: Sequence[str], value: Scalar) -> MPoly:
        return cls(names, {(0,) * len(names): value})

    @classmethod
    def variable(cls, names: Sequence[str], index: int) -> MPoly:
        mono = [0] * len(names)
        mono[index] = 1
        return cls(names, {tuple(mono): 1})

    @classmethod
    def linear(cls, names: Sequence[str], coeffs: Sequence[Scalar]) -> MPoly:
        if len(coeffs) != len(names):
            raise VariableMismatch(f"{len(coeffs)} coefficients for {len(names)} coordinates")
        terms = {}
        for i, c in enumerate(coeffs):
            mono = [0] * len(names)
            mono[i] = 1
            terms[tuple(mono)] = c
        return cls(names, terms)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(mono) for mono in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(mono) for mono in self._terms}) <= 1

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def _coerce(self, other: Union[MPoly, Scalar]) -> MPoly:
        if isinstance(other, MPoly):
            if other.names != self.names:
                raise VariableMismatch(f"{self.names} vs {other.names}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MPoly.constant(self.names, other)
        return NotImplemented

    def __add__(self, other: Union[MPoly, Scalar]) -> MPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return MPoly(self.names, terms)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly(self.names, {mono: -coeff for mono, coeff in self._terms.items()})

    def __sub__(self, other: Union[MPoly, Scalar]) -> MPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> MPoly:
        return (-self) + other

    def __mul__(self, other: Union[MPoly, Scalar]) -> MPoly:
        """
        :complexity: O(|self| * |other| * n) for n coordinates.
        """
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[Monomial, Fraction] = {}
        for mono1, coeff1 in self._terms.items():
            for mono2, coeff2 in other._terms.items():
                mono = tuple(e1 + e2 for e1, e2 in zip(mono1, mono2))
                terms[mono] = terms.get(mono, Fraction(0)) + coeff1 * coeff2
        return MPoly(self.names, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> MPoly:
        if exponent < 0:
            raise ValueError("negative exponent")
        result = MPoly.constant(self.names, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MPoly):
            return self.names == other.names and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == MPoly.constant(self.names, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.names, frozenset(self._terms.items())))
        return self._hash

    def diff(self, index: int) -> MPoly:
        terms = {}
        for mono, coeff in self._terms.items():
            if mono[index]:
                lowered = list(mono)
                lowered[index] -= 1
                terms[tuple(lowered)] = coeff * mono[index]
        return MPoly(self.names, terms)

    def substitute(self, index: int, value: MPoly) -> MPoly:
        """Replace the coordinate ``index`` by ``value``."""
        value = self._coerce(value)
        powers = {0: MPoly.constant(self.names, 1)}
        result = MPoly.zero(self.names)
        for mono, coeff in self._terms.items():
            e = mono[index]
            if e not in powers:
                powers[e] = value ** e
            rest = list(mono)
            rest[index] = 0
            result = result + MPoly(self.names, {tuple(rest): coeff}) * powers[e]
        return result

    def drop_variable(self, index: int) -> MPoly:
        """Forget a coordinate that does not occur in any term."""
        names = self.names[:index] + self.names[index + 1:]
        terms = {}
        for mono, coeff in self._terms.items():
            if mono[index]:
                raise VariableMismatch(f"{self.names[index]} still occurs in {self}")
            terms[mono[:index] + mono[index + 1:]] = coeff
        return MPoly(names, terms)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise VariableMismatch(f"point of length {len(point)} for {self.names}")
        point = [Fraction(p) for p in point]
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            term = coeff
            for p, e in zip(point, mono):
                if e:
                    term *= p ** e
            total += term
        return total

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded order: degree first, then lex with x1 > x2 > ... > z."""
        priority = scan_order(self.names)
        return sorted(
            self._terms.items(),
            key=lambda item: (sum(item[0]), tuple(item[0][i] for i in priority)),
            reverse=True,
        )

    def display(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for position, (mono, coeff) in enumerate(self.sorted_terms()):
            factors = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.names, mono) if e
            )
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = factors
            else:
                body = f"{magnitude}*{factors}"
            if position == 0:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def to_sympy(self):
        """The same polynomial as a sympy expression over symbols named like ``names``."""
        import sympy

        symbols = tuple(sympy.Symbol(name) for name in self.names)
        return sympy.Add(*(
            sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*(s ** e for s, e in zip(symbols, mono)))
            for mono, c in self._terms.items()
        ))

    def __str__(self) -> str:
        return self.display()

    def __repr__(self) -> str:
        return f"MPoly({self.display()!r})"


@dataclass(frozen=True)
class LinForm:
    """
    A nonzero linear form, scaled so that its leading coefficient is 1.

    The leading coefficient is the first nonzero one when the x-coordinates
    are scanned before ``z``, so ``x2 - z`` keeps its sign.
    """

    names: tuple[str, ...]
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.coeffs):
            raise VariableMismatch(f"{len(self.coeffs)} coefficients for {self.names}")
        pivot = self.pivot
        if self.coeffs[pivot] != 1:
            raise ValueError(f"linear form {self.coeffs} is not normalized")

    @classmethod
    def of(cls, names: Sequence[str], coeffs: Sequence[Scalar]) -> LinForm:
        coeffs = tuple(Fraction(c) for c in coeffs)
        order = scan_order(names)
        lead = next((coeffs[i] for i in order if coeffs[i]), None)
        if lead is None:
            raise ValueError("the zero form defines no hyperplane")
        return cls(tuple(names), tuple(c / lead for c in coeffs))

    @property
    def pivot(self) -> int:
        for i in scan_order(self.names):
            if self.coeffs[i]:
                return i
        raise ValueError("the zero form defines no hyperplane")

    def as_poly(self) -> MPoly:
        return MPoly.linear(self.names, self.coeffs)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != len(self.coeffs):
            raise VariableMismatch(f"point of length {len(point)} for {self.names}")
        return sum((c * Fraction(p) for c, p in zip(self.coeffs, point)), Fraction(0))

    def display(self) -> str:
        return self.as_poly().display()

    def __str__(self) -> str:
        return self.display()


@dataclass(frozen=True)
class NotDivisible:
    """The remainder of p after substituting a parametrization of ker(f)."""

    remainder: MPoly


def poly_mul(a: MPoly, b: MPoly) -> MPoly:
    return a * b


def poly_eval(p: MPoly, point: Sequence[Scalar]) -> Fraction:
    return p.evaluate(point)


def divide_by_form(p: MPoly, f: LinForm) -> Union[MPoly, NotDivisible]:
    """
    Exact division of p by a linear form.

    The form is monic in its pivot coordinate t, so repeatedly cancelling
    the terms of highest t-degree leaves a t-free remainder equal to p
    restricted to the kernel of f.

    :complexity: O(d * |p| * n) where d is the degree of p in t.
    """
    if p.names != f.names:
        raise VariableMismatch(f"{p.names} vs {f.names}")
    t = f.pivot
    form = f.as_poly()
    quotient = MPoly.zero(p.names)
    remainder = p
    while True:
        top = max((mono[t] for mono in remainder.terms), default=0)
        if top == 0:
            break
        step_terms = {}
        for mono, coeff in remainder.terms.items():
            if mono[t] == top:
                lowered = list(mono)
                lowered[t] -= 1
                step_terms[tuple(lowered)] = coeff
        step = MPoly(p.names, step_terms)
        quotient = quotient + step
        remainder = remainder - step * form
    if remainder.is_zero():
        return quotient
    return NotDivisible(remainder)


def divides_power(p: MPoly, f: LinForm, m: int) -> bool:
    """True iff f ** m divides p."""
    for _ in range(m):
        if p.is_zero():
            return True
        p = divide_by_form(p, f)
        if isinstance(p, NotDivisible):
            return False
    return True


def det_triangular(matrix: Sequence[Sequence[MPoly]]) -> MPoly:
    """
    Determinant of a lower triangular matrix: the product of its diagonal.

    :raises NotTriangular: if an entry above the diagonal is nonzero.
    """
    size = len(matrix)
    if size == 0:
        raise NotTriangular("empty matrix")
    if any(len(row) != size for row in matrix):
        raise NotTriangular("matrix is not square")
    for r in range(size):
        for c in range(r + 1, size):
            if not matrix[r][c].is_zero():
                raise NotTriangular(f"nonzero entry at row {r + 1}, column {c + 1}")
    det = matrix[0][0]
    for k in range(1, size):
        det = det * matrix[k][k]
    return det


def product(names: Sequence[str], factors: Iterable[MPoly]) -> MPoly:
    result = MPoly.constant(names, 1)
    for factor in factors:
        result = result * factor
    return result
