"""Weyl quantization into the normal-ordered Weyl algebra, the Moyal product and the Groenewold computation.

Phase space is R^{2n} with coordinates (q_1..q_n, p_1..p_n). Operators are kept in
normal order, every q-hat to the left of every p-hat, with [q_i, p_j] = i*hbar*delta_ij.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial, prod

from kquant.algebra.poly import Exponent, Poly, term_order
from kquant.algebra.scalar import I, Scalar
from kquant.algebra.series import HbarSeries
from kquant.config import get_settings
from kquant.constants import HBAR
from kquant.dgla.multidiff import MultiDiffOp
from kquant.exceptions import DegreeError, DimensionMismatchError, NotConstantError, TruncationError
from kquant.polyvector import PolyVectorField, poisson_bracket

logger = logging.getLogger(__name__)

WordKey = tuple[Exponent, Exponent]
# (q exponent, p exponent, hbar power) -> coefficient
Expansion = dict[tuple[Exponent, Exponent, int], Scalar]


def _strip(series: HbarSeries) -> tuple[Scalar, ...]:
    coeffs = list(series.coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class WeylOp:
    """sum c_IJ(hbar) q^I p^J in normal order, every coefficient a truncated hbar-series."""

    __slots__ = ("_terms", "n", "order")

    def __init__(self, n: int, terms: Mapping[WordKey, HbarSeries] = (), order: int | None = None):
        self.n = n
        self.order = get_settings().weyl_hbar_order if order is None else order
        collected: dict[WordKey, HbarSeries] = {}
        for (q_exp, p_exp), series in dict(terms).items():
            key = (tuple(q_exp), tuple(p_exp))
            if len(key[0]) != n or len(key[1]) != n:
                msg = f"word {key} does not match {n} canonical pairs"
                raise DimensionMismatchError(msg)
            if not isinstance(series, HbarSeries):
                series = HbarSeries.constant(Scalar.of(series), self.order)
            if series.order < self.order:
                msg = f"coefficient known to order {series.order}, operator needs {self.order}"
                raise TruncationError(msg)
            series = series.truncate(self.order)
            collected[key] = collected[key] + series if key in collected else series
        ordered = sorted(collected, key=lambda k: term_order(k[0] + k[1]))
        self._terms = {k: collected[k] for k in ordered if collected[k]}

    @classmethod
    def _from_expansion(cls, n: int, expansion: Expansion, order: int) -> WeylOp:
        grouped: dict[WordKey, list[Scalar]] = {}
        for (q_exp, p_exp, power), coeff in expansion.items():
            if power > order or not coeff:
                continue
            coeffs = grouped.setdefault((q_exp, p_exp), [Scalar(0)] * (order + 1))
            coeffs[power] = coeffs[power] + coeff
        return cls(n, {k: HbarSeries(v) for k, v in grouped.items()}, order)

    @classmethod
    def scalar(cls, n: int, value, order: int | None = None) -> WeylOp:
        """value * identity; value may be a scalar or an hbar-series of scalars."""
        zero = (0,) * n
        return cls(n, {(zero, zero): value}, order)

    @classmethod
    def identity(cls, n: int, order: int | None = None) -> WeylOp:
        return cls.scalar(n, 1, order)

    @classmethod
    def q(cls, n: int, i: int, order: int | None = None) -> WeylOp:
        """q-hat_i for 1-based i."""
        return cls(n, {(_unit(n, i - 1), (0,) * n): 1}, order)

    @classmethod
    def p(cls, n: int, i: int, order: int | None = None) -> WeylOp:
        return cls(n, {((0,) * n, _unit(n, i - 1)): 1}, order)

    def items(self) -> Iterator[tuple[WordKey, HbarSeries]]:
        return iter(self._terms.items())

    def expansion(self) -> Expansion:
        return {
            (q_exp, p_exp, power): c
            for (q_exp, p_exp), series in self._terms.items()
            for power, c in enumerate(series)
            if c
        }

    def coefficient(self, q_exp: Sequence[int], p_exp: Sequence[int]) -> tuple[Scalar, ...]:
        series = self._terms.get((tuple(q_exp), tuple(p_exp)))
        return _strip(series) if series is not None else ()

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _check(self, other: WeylOp):
        if other.n != self.n:
            msg = f"operators on {self.n} and {other.n} canonical pairs"
            raise DimensionMismatchError(msg)

    def __add__(self, other) -> WeylOp:
        if not isinstance(other, WeylOp):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        merged: dict[WordKey, HbarSeries] = {k: s.truncate(order) for k, s in self._terms.items()}
        for k, s in other._terms.items():
            s = s.truncate(order)
            merged[k] = merged[k] + s if k in merged else s
        return WeylOp(self.n, merged, order)

    def __neg__(self) -> WeylOp:
        return WeylOp(self.n, {k: -s for k, s in self._terms.items()}, self.order)

    def __sub__(self, other) -> WeylOp:
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> WeylOp:
        if isinstance(factor, HbarSeries):
            order = min(self.order, factor.order)
            terms = {k: s.truncate(order) * factor.truncate(order) for k, s in self._terms.items()}
            return WeylOp(self.n, terms, order)
        factor = Scalar.of(factor)
        return WeylOp(self.n, {k: s.scale(factor) for k, s in self._terms.items()}, self.order)

    def __mul__(self, other) -> WeylOp:
        if isinstance(other, WeylOp):
            return weyl_compose(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> WeylOp:
        return self.scale(other)

    def divide_by_ihbar(self) -> WeylOp:
        """Exact division by i*hbar; the result is known to one order less."""
        if self.order == 0:
            msg = "division by hbar needs truncation order >= 1"
            raise TruncationError(msg)
        terms = {k: s.divide_by_hbar().scale(-I) for k, s in self._terms.items()}
        return WeylOp(self.n, terms, self.order - 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylOp):
            return NotImplemented
        mine = {k: _strip(s) for k, s in self._terms.items()}
        theirs = {k: _strip(s) for k, s in other._terms.items()}
        return self.n == other.n and mine == theirs

    def __hash__(self) -> int:
        return hash((self.n, tuple((k, _strip(s)) for k, s in self._terms.items())))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for (q_exp, p_exp), series in self._terms.items():
            word = _word_text(q_exp, p_exp, self.n)
            for power, coeff in enumerate(series):
                if not coeff:
                    continue
                factors = [f"{HBAR}" if power == 1 else f"{HBAR}^{power}"] if power else []
                if word:
                    factors.append(word)
                if coeff != 1 or not factors:
                    factors.insert(0, coeff.to_text())
                pieces.append("*".join(factors))
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"WeylOp(n={self.n}, {self.to_text()!r})"


def _unit(n: int, axis: int) -> Exponent:
    return tuple(1 if a == axis else 0 for a in range(n))


def _word_text(q_exp: Exponent, p_exp: Exponent, n: int) -> str:
    factors = []
    for letter, exps in (("q̂", q_exp), ("p̂", p_exp)):
        for mode, power in enumerate(exps):
            if not power:
                continue
            name = letter if n == 1 else f"{letter}{mode + 1}"
            factors.append(name if power == 1 else f"{name}^{power}")
    return "*".join(factors)


@lru_cache(maxsize=1024)
def reorder_mode(j: int, k: int) -> tuple[tuple[int, Scalar], ...]:
    """p^j q^k = sum_r C(j,r) C(k,r) r! (-i hbar)^r q^(k-r) p^(j-r), as (r, coefficient) pairs."""
    return tuple((r, Scalar(comb(j, r) * comb(k, r) * factorial(r)) * (-I) ** r) for r in range(min(j, k) + 1))


def _compose_words(left: WordKey, right: WordKey) -> Iterator[tuple[WordKey, int, Scalar]]:
    (i_exp, j_exp), (k_exp, l_exp) = left, right
    per_mode = [reorder_mode(j, k) for j, k in zip(j_exp, k_exp)]
    for choice in product(*per_mode):
        rs = [r for r, _ in choice]
        coeff = prod((c for _, c in choice), start=Scalar(1))
        q_exp = tuple(i + k - r for i, k, r in zip(i_exp, k_exp, rs))
        p_exp = tuple(j - r + l for j, l, r in zip(j_exp, l_exp, rs))
        yield (q_exp, p_exp), sum(rs), coeff


def weyl_compose(a: WeylOp, b: WeylOp) -> WeylOp:
    a._check(b)  # noqa: SLF001
    order = min(a.order, b.order)
    expansion: Expansion = {}
    for left, s_a in a.items():
        for right, s_b in b.items():
            for (q_exp, p_exp), shift, coeff in _compose_words(left, right):
                if shift > order:
                    continue
                for power_a, c_a in enumerate(s_a.coeffs[: order + 1 - shift]):
                    if not c_a:
                        continue
                    for power_b, c_b in enumerate(s_b.coeffs[: order + 1 - shift - power_a]):
                        if not c_b:
                            continue
                        key = (q_exp, p_exp, power_a + power_b + shift)
                        value = c_a * c_b * coeff
                        expansion[key] = expansion[key] + value if key in expansion else value
    return WeylOp._from_expansion(a.n, expansion, order)  # noqa: SLF001


def commutator(a: WeylOp, b: WeylOp) -> WeylOp:
    return weyl_compose(a, b) - weyl_compose(b, a)


@lru_cache(maxsize=1024)
def _mccoy_mode(m: int, n: int) -> tuple[tuple[int, int, int, Scalar], ...]:
    """Normal-ordered Weyl symmetrization of q^m p^n for one mode: 2^-n sum_r C(n,r) p^r q^m p^(n-r)."""
    terms: dict[tuple[int, int, int], Scalar] = {}
    for r in range(n + 1):
        weight = Fraction(comb(n, r), 2**n)
        for s, coeff in reorder_mode(r, m):
            key = (m - s, n - s, s)
            value = coeff * weight
            terms[key] = terms[key] + value if key in terms else value
    return tuple((q, p, power, c) for (q, p, power), c in terms.items() if c)


def _check_phase_space(f: Poly) -> int:
    if f.dimension % 2:
        msg = f"phase-space polynomials live on R^(2n), got dimension {f.dimension}"
        raise DimensionMismatchError(msg)
    return f.dimension // 2


def weyl_quantize(f: Poly, order: int | None = None) -> WeylOp:
    """Total symmetrization of every monomial, normal-ordered."""
    n = _check_phase_space(f)
    order = get_settings().weyl_hbar_order if order is None else order
    expansion: Expansion = {}
    for exponent, coeff in f.items():
        modes = [_mccoy_mode(exponent[i], exponent[n + i]) for i in range(n)]
        for choice in product(*modes):
            q_exp = tuple(t[0] for t in choice)
            p_exp = tuple(t[1] for t in choice)
            power = sum(t[2] for t in choice)
            value = prod((t[3] for t in choice), start=coeff)
            key = (q_exp, p_exp, power)
            expansion[key] = expansion[key] + value if key in expansion else value
    return WeylOp._from_expansion(n, expansion, order)  # noqa: SLF001


def wigner_symbol(a: WeylOp) -> HbarSeries:
    """The hbar-series of phase-space polynomials whose Weyl quantization is a."""
    dimension = 2 * a.n
    symbol = [Poly.zero(dimension) for _ in range(a.order + 1)]
    remaining = a
    while remaining:
        (q_exp, p_exp), series = next(remaining.items())
        monomial = Poly.monomial(dimension, q_exp + p_exp)
        for power, coeff in enumerate(series):
            if coeff:
                symbol[power] = symbol[power] + monomial.scale(coeff)
        remaining = remaining - weyl_quantize(monomial, remaining.order).scale(series)
    return HbarSeries(symbol)


def _constant_matrix(pi: PolyVectorField | Sequence[Sequence]) -> list[list[Scalar]]:
    if not isinstance(pi, PolyVectorField):
        pi = PolyVectorField.from_matrix(pi)
    if pi.degree != 2:
        msg = f"the Moyal product needs a bivector, got degree {pi.degree}"
        raise DegreeError(msg)
    d = pi.dimension
    matrix = [[Scalar(0)] * d for _ in range(d)]
    for (i, j), coeff in pi.items():
        if not coeff.is_constant():
            msg = f"coefficient {coeff.to_text()} at ({i + 1}, {j + 1}) is not constant"
            raise NotConstantError(msg)
        value = coeff.coefficient((0,) * d)
        matrix[i][j] = value
        matrix[j][i] = -value
    return matrix


def moyal_operator(pi: PolyVectorField | Sequence[Sequence], order: int, *, imaginary: bool = True) -> HbarSeries:
    """Bidifferential operators of exp((i hbar/2) pi^{ij} d_i (x) d_j), one per hbar power.

    With imaginary=False the factor i is absorbed into hbar.
    """
    matrix = _constant_matrix(pi)
    d = len(matrix)
    pairs = [(i, j, matrix[i][j]) for i in range(d) for j in range(d) if matrix[i][j]]
    zero = (0,) * d
    power_terms: dict[tuple[Exponent, Exponent], Scalar] = {(zero, zero): Scalar(1)}
    coeffs = []
    for m in range(order + 1):
        if m:
            grown: dict[tuple[Exponent, Exponent], Scalar] = {}
            for (alpha, beta), c in power_terms.items():
                for i, j, value in pairs:
                    key = (_bump(alpha, i), _bump(beta, j))
                    grown[key] = grown[key] + c * value if key in grown else c * value
            power_terms = grown
        factor = Scalar(Fraction(1, 2**m * factorial(m)))
        if imaginary:
            factor = factor * I**m
        coeffs.append(MultiDiffOp(d, 2, {k: Poly.constant(d, c * factor) for k, c in power_terms.items() if c}))
    return HbarSeries(coeffs)


def _bump(alpha: Exponent, axis: int) -> Exponent:
    return tuple(a + 1 if k == axis else a for k, a in enumerate(alpha))


def moyal_product(
    f: Poly, g: Poly, pi: PolyVectorField | Sequence[Sequence], order: int, *, imaginary: bool = True
) -> HbarSeries:
    ops = moyal_operator(pi, order, imaginary=imaginary)
    return ops.map(lambda op: op.apply((f, g)))


def moyal_bracket(f: Poly, g: Poly, pi: PolyVectorField | Sequence[Sequence], order: int) -> HbarSeries:
    """(f*g - g*f)/(i hbar), known to one order less than the product."""
    difference = moyal_product(f, g, pi, order) - moyal_product(g, f, pi, order)
    return difference.divide_by_hbar().scale(-I)


def absorb_imaginary_unit(series: HbarSeries) -> HbarSeries:
    """Rewrite a series in powers of i*hbar as a series in powers of hbar with i absorbed."""
    return HbarSeries([c * (-I) ** k for k, c in enumerate(series)])


def restore_imaginary_unit(series: HbarSeries) -> HbarSeries:
    return HbarSeries([c * I**k for k, c in enumerate(series)])


def _quantized_bracket(a: WeylOp, b: WeylOp) -> WeylOp:
    return commutator(a, b).divide_by_ihbar()


def groenewold_poisson_side(exponents: tuple[int, int] = (3, 3)) -> Poly:
    """{q^a, p^b} - 1/12 {{q^a, p^2}, {q^2, p^b}} on R^2."""
    a, b = exponents
    q_a, p_b = Poly.monomial(2, (a, 0)), Poly.monomial(2, (0, b))
    q2, p2 = Poly.monomial(2, (2, 0)), Poly.monomial(2, (0, 2))
    nested = poisson_bracket(poisson_bracket(q_a, p2), poisson_bracket(q2, p_b))
    return poisson_bracket(q_a, p_b) - nested.scale(Fraction(1, 12))


def groenewold_operator_side(exponents: tuple[int, int] = (3, 3), order: int | None = None) -> WeylOp:
    """The same combination with every bracket replaced by (1/i hbar)[Q_W(-), Q_W(-)]."""
    a, b = exponents

    def quantize(q_power: int, p_power: int) -> WeylOp:
        return weyl_quantize(Poly.monomial(2, (q_power, p_power)), order)

    first = _quantized_bracket(quantize(a, 0), quantize(0, b))
    nested = _quantized_bracket(
        _quantized_bracket(quantize(a, 0), quantize(0, 2)),
        _quantized_bracket(quantize(2, 0), quantize(0, b)),
    )
    return first - nested.scale(Fraction(1, 12))


def groenewold_residual(exponents: tuple[int, int] = (3, 3), order: int | None = None) -> WeylOp:
    """Operator side minus the quantized Poisson side; -3 hbar^2 times the identity for (3, 3)."""
    operator_side = groenewold_operator_side(exponents, order)
    residual = operator_side - weyl_quantize(groenewold_poisson_side(exponents), order)
    logger.info("Groenewold residual for exponents %s: %s", exponents, residual.to_text())
    return residual
