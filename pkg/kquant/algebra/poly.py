"""Multivariate polynomials over the Gaussian rationals in canonical form."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from math import prod

from kquant.algebra.scalar import Scalar
from kquant.constants import MAX_DIMENSION
from kquant.exceptions import AxisOutOfRangeError, DimensionMismatchError

Exponent = tuple[int, ...]


def term_order(exponent: Exponent) -> tuple:
    """Graded lexicographic sort key, highest degree first."""
    return (-sum(exponent), tuple(-e for e in exponent))


def falling_factorial(n: int, k: int) -> int:
    return prod(range(n - k + 1, n + 1)) if k <= n else 0


class Poly:
    __slots__ = ("_hash", "_terms", "dimension")

    def __init__(self, dimension: int, terms: Mapping[Exponent, object] | Iterable[tuple[Exponent, object]] = ()):
        if not 1 <= dimension <= MAX_DIMENSION:
            msg = f"dimension must lie in 1..{MAX_DIMENSION}, got {dimension}"
            raise DimensionMismatchError(msg)
        self.dimension = dimension
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[Exponent, Scalar] = {}
        for exponent, coeff in items:
            exponent = tuple(exponent)
            if len(exponent) != dimension or any(e < 0 for e in exponent):
                msg = f"exponent {exponent} is not a multi-index of length {dimension}"
                raise DimensionMismatchError(msg)
            value = Scalar.of(coeff)
            if exponent in collected:
                value = collected[exponent] + value
            collected[exponent] = value
        self._terms = {e: collected[e] for e in sorted(collected, key=term_order) if collected[e]}
        self._hash = None

    @classmethod
    def _from_canonical(cls, dimension: int, terms: dict[Exponent, Scalar]) -> Poly:
        poly = object.__new__(cls)
        poly.dimension = dimension
        poly._terms = {e: terms[e] for e in sorted(terms, key=term_order) if terms[e]}
        poly._hash = None
        return poly

    @classmethod
    def zero(cls, dimension: int) -> Poly:
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value=1) -> Poly:
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def one(cls, dimension: int) -> Poly:
        return cls.constant(dimension, 1)

    @classmethod
    def monomial(cls, dimension: int, exponent: Sequence[int], coeff=1) -> Poly:
        return cls(dimension, {tuple(exponent): coeff})

    @classmethod
    def variable(cls, dimension: int, axis: int) -> Poly:
        """The coordinate function x_axis (axes are 1-based)."""
        _check_axis(dimension, axis)
        exponent = [0] * dimension
        exponent[axis - 1] = 1
        return cls(dimension, {tuple(exponent): 1})

    def items(self) -> Iterator[tuple[Exponent, Scalar]]:
        return iter(self._terms.items())

    def coefficient(self, exponent: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exponent), Scalar(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(e) for e in self._terms), default=-1)

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.dimension != self.dimension:
                msg = f"dimension mismatch: {self.dimension} vs {other.dimension}"
                raise DimensionMismatchError(msg)
            return other
        try:
            return Poly.constant(self.dimension, Scalar.of(other))
        except TypeError:
            return None

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exponent, coeff in other._terms.items():
            terms[exponent] = terms[exponent] + coeff if exponent in terms else coeff
        return Poly._from_canonical(self.dimension, terms)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._from_canonical(self.dimension, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def scale(self, factor) -> Poly:
        factor = Scalar.of(factor)
        if not factor:
            return Poly.zero(self.dimension)
        return Poly._from_canonical(self.dimension, {e: c * factor for e, c in self._terms.items()})

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        terms: dict[Exponent, Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                value = c1 * c2
                terms[exponent] = terms[exponent] + value if exponent in terms else value
        return Poly._from_canonical(self.dimension, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Poly:
        if exponent < 0:
            msg = "negative powers are not polynomials"
            raise ValueError(msg)
        result = Poly.one(self.dimension)
        for _ in range(exponent):
            result = result * self
        return result

    def partial(self, axis: int) -> Poly:
        """Formal partial derivative along a 1-based axis."""
        _check_axis(self.dimension, axis)
        alpha = [0] * self.dimension
        alpha[axis - 1] = 1
        return self.derivative(alpha)

    def derivative(self, alpha: Sequence[int]) -> Poly:
        """Apply the multi-index derivative d^alpha."""
        if len(alpha) != self.dimension:
            msg = f"derivative multi-index {tuple(alpha)} does not match dimension {self.dimension}"
            raise DimensionMismatchError(msg)
        if not any(alpha):
            return self
        terms: dict[Exponent, Scalar] = {}
        for exponent, coeff in self._terms.items():
            if any(e < a for e, a in zip(exponent, alpha)):
                continue
            factor = prod(falling_factorial(e, a) for e, a in zip(exponent, alpha))
            terms[tuple(e - a for e, a in zip(exponent, alpha))] = coeff * factor
        return Poly._from_canonical(self.dimension, terms)

    def evaluate(self, point: Sequence) -> Scalar:
        if len(point) != self.dimension:
            msg = f"point has {len(point)} coordinates, expected {self.dimension}"
            raise DimensionMismatchError(msg)
        values = [Scalar.of(v) for v in point]
        total = Scalar(0)
        for exponent, coeff in self._terms.items():
            term = coeff
            for value, power in zip(values, exponent):
                if power:
                    term = term * value**power
            total = total + term
        return total

    def map_coefficients(self, fn) -> Poly:
        return Poly._from_canonical(self.dimension, {e: Scalar.of(fn(c)) for e, c in self._terms.items()})

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.dimension == other.dimension and self._terms == other._terms
        if isinstance(other, (int, Scalar)):
            return self == Poly.constant(self.dimension, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dimension, tuple(self._terms.items())))
        return self._hash

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.dimension)]
        pieces = []
        for exponent, coeff in self._terms.items():
            factors = [
                name if power == 1 else f"{name}^{power}" for name, power in zip(names, exponent) if power
            ]
            if not factors:
                pieces.append(coeff.to_text())
            elif coeff == 1:
                pieces.append("*".join(factors))
            elif coeff == -1:
                pieces.append("-" + "*".join(factors))
            else:
                pieces.append("*".join([coeff.to_text(), *factors]))
        text = " + ".join(pieces)
        return text.replace("+ -", "- ")

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.dimension}, {self.to_text()!r})"


def _check_axis(dimension: int, axis: int):
    if not 1 <= axis <= dimension:
        msg = f"axis {axis} out of range 1..{dimension}"
        raise AxisOutOfRangeError(msg)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_scale(p: Poly, s) -> Poly:
    return p.scale(s)


def partial(p: Poly, axis: int) -> Poly:
    return p.partial(axis)


def poly_eval(p: Poly, point: Sequence) -> Scalar:
    return p.evaluate(point)


def coordinates(dimension: int) -> list[Poly]:
    return [Poly.variable(dimension, axis) for axis in range(1, dimension + 1)]


def monomials_up_to(dimension: int, max_degree: int) -> list[Poly]:
    """All monic monomials of total degree <= max_degree, in canonical order."""
    exponents = [(0,) * dimension]
    frontier = [(0,) * dimension]
    for _ in range(max_degree):
        grown = set()
        for exponent in frontier:
            for axis in range(dimension):
                bumped = list(exponent)
                bumped[axis] += 1
                grown.add(tuple(bumped))
        frontier = sorted(grown, key=term_order)
        exponents.extend(frontier)
    return [Poly.monomial(dimension, e) for e in sorted(exponents, key=term_order)]
