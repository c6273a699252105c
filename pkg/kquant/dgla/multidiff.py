"""Polydifferential operators with polynomial coefficients."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from math import prod

from kquant.algebra.poly import Exponent, Poly, term_order
from kquant.algebra.scalar import Scalar
from kquant.exceptions import ArityMismatchError, AxisOutOfRangeError, DimensionMismatchError

Derivs = tuple[Exponent, ...]


def derivs_order(derivs: Derivs) -> tuple:
    return tuple(term_order(alpha) for alpha in derivs)


class MultiDiffOp:
    """sum_t coeff_t(x) * d^{a_t1} u_1 * ... * d^{a_tm} u_m, an element of D_poly^{m-1}.

    Arity-0 operators are functions: a single term with empty derivative list.
    """

    __slots__ = ("_hash", "_terms", "arity", "dimension")

    def __init__(self, dimension: int, arity: int, terms: Mapping[Derivs, Poly] | Iterable[tuple[Derivs, Poly]] = ()):
        if arity < 0:
            msg = f"arity must be non-negative, got {arity}"
            raise ArityMismatchError(msg)
        self.dimension = dimension
        self.arity = arity
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[Derivs, Poly] = {}
        for derivs, coeff in items:
            derivs = tuple(tuple(alpha) for alpha in derivs)
            if len(derivs) != arity:
                msg = f"term has {len(derivs)} derivative slots, expected {arity}"
                raise ArityMismatchError(msg)
            if any(len(alpha) != dimension or min(alpha, default=0) < 0 for alpha in derivs):
                msg = f"derivative multi-indices {derivs} do not match dimension {dimension}"
                raise DimensionMismatchError(msg)
            if not isinstance(coeff, Poly):
                coeff = Poly.constant(dimension, coeff)
            elif coeff.dimension != dimension:
                msg = f"coefficient dimension {coeff.dimension} does not match {dimension}"
                raise DimensionMismatchError(msg)
            collected[derivs] = collected[derivs] + coeff if derivs in collected else coeff
        self._set_terms(collected)

    def _set_terms(self, terms: dict[Derivs, Poly]):
        self._terms = {k: terms[k] for k in sorted(terms, key=derivs_order) if terms[k]}
        self._hash = None

    @classmethod
    def _from_raw(cls, dimension: int, arity: int, terms: dict[Derivs, Poly]) -> MultiDiffOp:
        op = object.__new__(cls)
        op.dimension = dimension
        op.arity = arity
        op._set_terms(terms)
        return op

    @classmethod
    def zero(cls, dimension: int, arity: int) -> MultiDiffOp:
        return cls._from_raw(dimension, arity, {})

    @classmethod
    def from_poly(cls, poly: Poly) -> MultiDiffOp:
        return cls._from_raw(poly.dimension, 0, {(): poly})

    @classmethod
    def identity(cls, dimension: int) -> MultiDiffOp:
        return cls._from_raw(dimension, 1, {((0,) * dimension,): Poly.one(dimension)})

    @classmethod
    def partial_op(cls, dimension: int, axis: int, coeff: Poly | None = None) -> MultiDiffOp:
        """The vector field coeff * d/dx_axis as an arity-1 operator (1-based axis)."""
        if not 1 <= axis <= dimension:
            msg = f"axis {axis} out of range 1..{dimension}"
            raise AxisOutOfRangeError(msg)
        alpha = [0] * dimension
        alpha[axis - 1] = 1
        return cls(dimension, 1, {(tuple(alpha),): coeff if coeff is not None else Poly.one(dimension)})

    @property
    def degree(self) -> int:
        """Degree in the shifted Hochschild complex."""
        return self.arity - 1

    def items(self) -> Iterator[tuple[Derivs, Poly]]:
        return iter(self._terms.items())

    def coefficient(self, derivs: Sequence[Sequence[int]]) -> Poly:
        return self._terms.get(tuple(tuple(a) for a in derivs), Poly.zero(self.dimension))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def max_order(self) -> int:
        return max((sum(sum(alpha) for alpha in derivs) for derivs in self._terms), default=0)

    def as_poly(self) -> Poly:
        if self.arity != 0:
            msg = "only arity-0 operators are functions"
            raise ArityMismatchError(msg)
        return self._terms.get((), Poly.zero(self.dimension))

    def _check_compatible(self, other: MultiDiffOp):
        if other.dimension != self.dimension:
            msg = f"dimension mismatch: {self.dimension} vs {other.dimension}"
            raise DimensionMismatchError(msg)
        if other.arity != self.arity:
            msg = f"arity mismatch: {self.arity} vs {other.arity}"
            raise ArityMismatchError(msg)

    def __add__(self, other) -> MultiDiffOp:
        if not isinstance(other, MultiDiffOp):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self._terms)
        for derivs, coeff in other._terms.items():
            terms[derivs] = terms[derivs] + coeff if derivs in terms else coeff
        return MultiDiffOp._from_raw(self.dimension, self.arity, terms)

    def __neg__(self) -> MultiDiffOp:
        return MultiDiffOp._from_raw(self.dimension, self.arity, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> MultiDiffOp:
        if not isinstance(other, MultiDiffOp):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> MultiDiffOp:
        """Scale by a scalar, or multiply every coefficient by a polynomial."""
        if isinstance(other, Poly):
            return MultiDiffOp._from_raw(self.dimension, self.arity, {k: c * other for k, c in self._terms.items()})
        try:
            factor = Scalar.of(other)
        except TypeError:
            return NotImplemented
        if not factor:
            return MultiDiffOp.zero(self.dimension, self.arity)
        return MultiDiffOp._from_raw(self.dimension, self.arity, {k: c.scale(factor) for k, c in self._terms.items()})

    __rmul__ = __mul__

    def apply(self, args: Sequence[Poly]) -> Poly:
        if len(args) != self.arity:
            msg = f"operator of arity {self.arity} applied to {len(args)} arguments"
            raise ArityMismatchError(msg)
        for arg in args:
            if arg.dimension != self.dimension:
                msg = f"argument dimension {arg.dimension} does not match {self.dimension}"
                raise DimensionMismatchError(msg)
        total = Poly.zero(self.dimension)
        for derivs, coeff in self._terms.items():
            factors = [arg.derivative(alpha) for arg, alpha in zip(args, derivs)]
            if not all(factors):
                continue
            total = total + prod(factors, start=coeff)
        return total

    def __call__(self, *args: Poly) -> Poly:
        return self.apply(args)

    def annihilates_constants(self) -> bool:
        """True when every term differentiates each argument at least once."""
        return all(all(any(alpha) for alpha in derivs) for derivs in self._terms)

    def max_abs_coefficient(self) -> float:
        return max((c.max_abs_coefficient() for c in self._terms.values()), default=0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiDiffOp):
            return NotImplemented
        return (self.dimension, self.arity, self._terms) == (other.dimension, other.arity, other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dimension, self.arity, tuple(self._terms.items())))
        return self._hash

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for derivs, coeff in self._terms.items():
            slots = " ⊗ ".join(_derivative_text(alpha) for alpha in derivs)
            coeff_text = coeff.to_text()
            if len(coeff) > 1:
                coeff_text = f"({coeff_text})"
            pieces.append(f"{coeff_text}*[{slots}]" if slots else coeff_text)
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"MultiDiffOp(d={self.dimension}, arity={self.arity}, {self.to_text()!r})"


def _derivative_text(alpha: Exponent) -> str:
    if not any(alpha):
        return "1"
    return "".join(
        f"∂{axis + 1}" if power == 1 else f"∂{axis + 1}^{power}" for axis, power in enumerate(alpha) if power
    )


def mu(dimension: int) -> MultiDiffOp:
    """The pointwise product (u, v) -> uv."""
    zero = (0,) * dimension
    return MultiDiffOp._from_raw(dimension, 2, {(zero, zero): Poly.one(dimension)})


def apply(op: MultiDiffOp, args: Sequence[Poly]) -> Poly:
    return op.apply(args)
