"""Polyvector fields with polynomial coefficients: wedge, diamond product, Schouten-Nijenhuis bracket and HKR.

A k-vector field is stored as sum_I c_I psi_I over strictly increasing 0-based index
tuples I, where psi_i stands for the odd symbol d/dx_i. The antisymmetric extension
gives the coefficient for any ordering of I.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from kquant.algebra.poly import Poly
from kquant.algebra.scalar import Scalar
from kquant.dgla.multidiff import MultiDiffOp
from kquant.dgla.signs import permutation_sign
from kquant.exceptions import DegreeError, DimensionMismatchError, NotAntisymmetricError, NotPoissonError

logger = logging.getLogger(__name__)

Indices = tuple[int, ...]


def sort_with_sign(indices: Sequence[int]) -> tuple[int, Indices]:
    """Sort indices and return the sign of the sorting permutation; 0 on repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(1 for a, b in combinations(indices, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


class PolyVectorField:
    __slots__ = ("_coeffs", "_hash", "degree", "dimension")

    def __init__(
        self,
        dimension: int,
        degree: int,
        coeffs: Mapping[Sequence[int], Poly] | Iterable[tuple[Sequence[int], Poly]] = (),
    ):
        if degree < 0:
            msg = f"polyvector degree must be non-negative, got {degree}"
            raise DegreeError(msg)
        self.dimension = dimension
        self.degree = degree
        collected: dict[Indices, Poly] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for indices, coeff in items:
            if len(indices) != degree:
                msg = f"index tuple {tuple(indices)} does not have {degree} entries"
                raise DegreeError(msg)
            if any(not 0 <= i < dimension for i in indices):
                msg = f"index tuple {tuple(indices)} out of range for dimension {dimension}"
                raise DimensionMismatchError(msg)
            if not isinstance(coeff, Poly):
                coeff = Poly.constant(dimension, coeff)
            elif coeff.dimension != dimension:
                msg = f"coefficient dimension {coeff.dimension} does not match {dimension}"
                raise DimensionMismatchError(msg)
            sign, key = sort_with_sign(indices)
            if not sign:
                continue
            value = coeff if sign > 0 else -coeff
            collected[key] = collected[key] + value if key in collected else value
        self._coeffs = {key: collected[key] for key in sorted(collected) if collected[key]}
        self._hash = None

    @classmethod
    def zero(cls, dimension: int, degree: int) -> PolyVectorField:
        return cls(dimension, degree)

    @classmethod
    def function(cls, poly: Poly) -> PolyVectorField:
        return cls(poly.dimension, 0, {(): poly})

    @classmethod
    def vector_field(cls, components: Sequence[Poly]) -> PolyVectorField:
        dimension = len(components)
        return cls(dimension, 1, {(i,): c for i, c in enumerate(components)})

    @classmethod
    def basis(cls, dimension: int, indices: Sequence[int], coeff: Poly | None = None) -> PolyVectorField:
        """coeff * d_{i1} ^ ... ^ d_{ik} for 1-based axes."""
        coeff = coeff if coeff is not None else Poly.one(dimension)
        return cls(dimension, len(indices), {tuple(i - 1 for i in indices): coeff})

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence]) -> PolyVectorField:
        """Bivector from a full antisymmetric matrix of polynomials or scalars."""
        dimension = len(matrix)
        if any(len(row) != dimension for row in matrix):
            msg = "bivector matrix must be square"
            raise DimensionMismatchError(msg)

        def as_poly(value) -> Poly:
            return value if isinstance(value, Poly) else Poly.constant(dimension, value)

        entries = [[as_poly(v) for v in row] for row in matrix]
        for i in range(dimension):
            for j in range(i, dimension):
                if entries[i][j] + entries[j][i]:
                    msg = f"matrix is not antisymmetric at ({i + 1}, {j + 1})"
                    raise NotAntisymmetricError(msg)
        return cls(dimension, 2, {(i, j): entries[i][j] for i, j in combinations(range(dimension), 2)})

    @classmethod
    def standard_symplectic(cls, pairs: int) -> PolyVectorField:
        """sum_i d_{q_i} ^ d_{p_i} on R^{2n} with coordinates (q_1..q_n, p_1..p_n)."""
        dimension = 2 * pairs
        return cls(dimension, 2, {(i, pairs + i): Poly.one(dimension) for i in range(pairs)})

    @classmethod
    def so3(cls) -> PolyVectorField:
        """The Lie-Poisson structure x3 d1^d2 + x1 d2^d3 + x2 d3^d1."""
        x1, x2, x3 = (Poly.variable(3, axis) for axis in (1, 2, 3))
        return cls(3, 2, [((0, 1), x3), ((1, 2), x1), ((2, 0), x2)])

    def items(self) -> Iterator[tuple[Indices, Poly]]:
        return iter(self._coeffs.items())

    def extended_items(self) -> Iterator[tuple[Indices, Poly]]:
        """Every ordering of every stored index tuple with its antisymmetric coefficient."""
        for indices, coeff in self._coeffs.items():
            for order in permutations(range(self.degree)):
                sign = permutation_sign(order)
                yield tuple(indices[k] for k in order), (coeff if sign > 0 else -coeff)

    def coefficient(self, indices: Sequence[int]) -> Poly:
        """Antisymmetric extension X^{i1...ik} for 0-based indices in any order."""
        sign, key = sort_with_sign(indices)
        coeff = self._coeffs.get(key) if sign else None
        if coeff is None:
            return Poly.zero(self.dimension)
        return coeff if sign > 0 else -coeff

    def as_poly(self) -> Poly:
        if self.degree != 0:
            msg = f"a {self.degree}-vector field is not a function"
            raise DegreeError(msg)
        return self.coefficient(())

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def _check_compatible(self, other: PolyVectorField):
        if other.dimension != self.dimension:
            msg = f"dimension mismatch: {self.dimension} vs {other.dimension}"
            raise DimensionMismatchError(msg)

    def __add__(self, other) -> PolyVectorField:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        self._check_compatible(other)
        if other.degree != self.degree:
            msg = f"cannot add a {self.degree}-vector field and a {other.degree}-vector field"
            raise DegreeError(msg)
        return PolyVectorField(self.dimension, self.degree, [*self.items(), *other.items()])

    def __neg__(self) -> PolyVectorField:
        return PolyVectorField(self.dimension, self.degree, {k: -c for k, c in self.items()})

    def __sub__(self, other) -> PolyVectorField:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> PolyVectorField:
        """Multiply every coefficient by a scalar or a function."""
        if not isinstance(other, Poly):
            try:
                other = Scalar.of(other)
            except TypeError:
                return NotImplemented
        return PolyVectorField(self.dimension, self.degree, {k: c * other for k, c in self.items()})

    __rmul__ = __mul__

    def partial(self, axis: int) -> PolyVectorField:
        """Differentiate every coefficient along a 0-based axis."""
        alpha = tuple(1 if a == axis else 0 for a in range(self.dimension))
        return PolyVectorField(self.dimension, self.degree, {k: c.derivative(alpha) for k, c in self.items()})

    def psi_derivative(self, axis: int) -> PolyVectorField:
        """Left derivative with respect to the odd symbol psi_axis (degree lowers by one)."""
        if self.degree == 0:
            msg = "functions have no odd derivative"
            raise DegreeError(msg)
        terms = []
        for indices, coeff in self.items():
            if axis in indices:
                position = indices.index(axis)
                rest = indices[:position] + indices[position + 1 :]
                terms.append((rest, coeff if position % 2 == 0 else -coeff))
        return PolyVectorField(self.dimension, self.degree - 1, terms)

    def max_abs_coefficient(self) -> float:
        return max((c.max_abs_coefficient() for c in self._coeffs.values()), default=0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return (self.dimension, self.degree, self._coeffs) == (other.dimension, other.degree, other._coeffs)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dimension, self.degree, tuple(self._coeffs.items())))
        return self._hash

    def to_text(self) -> str:
        if not self._coeffs:
            return "0"
        pieces = []
        for indices, coeff in self._coeffs.items():
            text = coeff.to_text()
            if not indices:
                pieces.append(text)
                continue
            if len(coeff) > 1:
                text = f"({text})"
            basis = "∧".join(f"∂{i + 1}" for i in indices)
            pieces.append(basis if text == "1" else f"{text}*{basis}")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"PolyVectorField(d={self.dimension}, k={self.degree}, {self.to_text()!r})"


def _check_same_dimension(x: PolyVectorField, y: PolyVectorField):
    if x.dimension != y.dimension:
        msg = f"dimension mismatch: {x.dimension} vs {y.dimension}"
        raise DimensionMismatchError(msg)


def wedge(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    _check_same_dimension(x, y)
    degree = x.degree + y.degree
    terms = []
    for i_x, c_x in x.items():
        for i_y, c_y in y.items():
            sign, key = sort_with_sign(i_x + i_y)
            if sign:
                value = c_x * c_y
                terms.append((key, value if sign > 0 else -value))
    return PolyVectorField(x.dimension, degree, terms)


def _diamond(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    degree = x.degree + y.degree - 1
    total = PolyVectorField.zero(x.dimension, max(degree, 0))
    if x.degree == 0 or degree < 0:
        return total
    for axis in range(x.dimension):
        odd = x.psi_derivative(axis)
        even = y.partial(axis)
        if odd and even:
            total = total + wedge(odd, even)
    return total


def diamond(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """sum_i (d/dpsi_i X) ^ (d/dx_i Y), of degree p + q - 1."""
    _check_same_dimension(x, y)
    if x.degree == 0:
        msg = "the diamond product needs a left factor of degree >= 1"
        raise DegreeError(msg)
    return _diamond(x, y)


def _parity(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def schouten_nijenhuis(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """[X, Y] = (-1)^(k-1) X<>Y - (-1)^((k-2)(l-1)) Y<>X for a k-field X and an l-field Y."""
    _check_same_dimension(x, y)
    k, l = x.degree, y.degree  # noqa: E741
    return _diamond(x, y) * _parity(k - 1) - _diamond(y, x) * _parity((k - 2) * (l - 1))


def is_poisson(pi: PolyVectorField) -> tuple[bool, PolyVectorField]:
    """Return whether [pi, pi]_SN vanishes, with the trivector itself."""
    if pi.degree != 2:
        msg = f"Poisson structures are bivectors, got degree {pi.degree}"
        raise DegreeError(msg)
    residual = schouten_nijenhuis(pi, pi)
    return not residual, residual


def require_poisson(pi: PolyVectorField) -> PolyVectorField:
    ok, residual = is_poisson(pi)
    if not ok:
        msg = f"[pi, pi]_SN = {residual.to_text()} is not zero"
        raise NotPoissonError(msg)
    return pi


def _unit(dimension: int, axis: int) -> tuple[int, ...]:
    return tuple(1 if a == axis else 0 for a in range(dimension))


def hkr(x: PolyVectorField) -> MultiDiffOp:
    """(f_1..f_k) -> 1/k! sum X^{i_1..i_k} d_{i_1} f_1 ... d_{i_k} f_k over the antisymmetric extension."""
    if x.degree == 0:
        return MultiDiffOp.from_poly(x.as_poly())
    scale = Fraction(1, factorial(x.degree))
    terms = []
    for indices, coeff in x.extended_items():
        derivs = tuple(_unit(x.dimension, i) for i in indices)
        terms.append((derivs, coeff.scale(scale)))
    return MultiDiffOp(x.dimension, x.degree, terms)


def bivector_bracket(pi: PolyVectorField, f: Poly, g: Poly) -> Poly:
    """pi(df, dg) = sum_{ij} pi^{ij} d_i f d_j g on the antisymmetric extension."""
    if pi.degree != 2:
        msg = f"expected a bivector, got degree {pi.degree}"
        raise DegreeError(msg)
    total = Poly.zero(pi.dimension)
    for (i, j), coeff in pi.items():
        fi, fj = f.partial(i + 1), f.partial(j + 1)
        gi, gj = g.partial(i + 1), g.partial(j + 1)
        total = total + coeff * (fi * gj - fj * gi)
    return total


def poisson_bracket(f: Poly, g: Poly) -> Poly:
    """Canonical bracket on R^{2n}: sum_i d_{q_i} f d_{p_i} g - d_{p_i} f d_{q_i} g."""
    if f.dimension % 2:
        msg = f"canonical Poisson bracket needs an even dimension, got {f.dimension}"
        raise DimensionMismatchError(msg)
    return bivector_bracket(PolyVectorField.standard_symplectic(f.dimension // 2), f, g)


def jacobi_defect(pi: PolyVectorField, f: Poly, g: Poly, h: Poly) -> Poly:
    def br(a: Poly, b: Poly) -> Poly:
        return bivector_bracket(pi, a, b)

    return br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))


def apply_vector_field(x: PolyVectorField, f: Poly) -> Poly:
    if x.degree != 1:
        msg = f"expected a vector field, got degree {x.degree}"
        raise DegreeError(msg)
    total = Poly.zero(x.dimension)
    for (i,), coeff in x.items():
        total = total + coeff * f.partial(i + 1)
    return total


def lie_bracket(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """[X, Y]^j = X(Y^j) - Y(X^j)."""
    _check_same_dimension(x, y)
    components = []
    for j in range(x.dimension):
        yj = y.coefficient((j,))
        xj = x.coefficient((j,))
        components.append(apply_vector_field(x, yj) - apply_vector_field(y, xj))
    return PolyVectorField.vector_field(components)


def wedge_all(fields: Sequence[PolyVectorField], dimension: int) -> PolyVectorField:
    result = PolyVectorField.function(Poly.one(dimension))
    for field in fields:
        result = wedge(result, field)
    return result


def schouten_by_definition(xs: Sequence[PolyVectorField], ys: Sequence[PolyVectorField]) -> PolyVectorField:
    """[X_1^..^X_k, Y_1^..^Y_l] = sum (-1)^(i+j) [X_i, Y_j] ^ X_1..^X_i..^X_k ^ Y_1..^Y_j..^Y_l."""
    dimension = (xs or ys)[0].dimension
    degree = len(xs) + len(ys) - 1
    total = PolyVectorField.zero(dimension, max(degree, 0))
    for i, xi in enumerate(xs):
        for j, yj in enumerate(ys):
            rest = [*xs[:i], *xs[i + 1 :], *ys[:j], *ys[j + 1 :]]
            term = wedge(lie_bracket(xi, yj), wedge_all(rest, dimension))
            total = total + term * _parity(i + j)
    return total
