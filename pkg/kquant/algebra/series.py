"""Formal power series in hbar, truncated at a fixed order."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from functools import reduce

from kquant.algebra.scalar import Scalar
from kquant.constants import HBAR
from kquant.exceptions import TruncationError


def zero_like(payload):
    return payload * 0


class HbarSeries:
    """c_0 + c_1*hbar + ... + c_N*hbar^N with payloads that support +, - and scaling.

    Every operation discards hbar powers above the truncation order; combining two
    series keeps the smaller order.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            msg = "a series needs at least the hbar^0 coefficient"
            raise TruncationError(msg)
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, payload, order: int) -> HbarSeries:
        zero = zero_like(payload)
        return cls([payload] + [zero] * order)

    @classmethod
    def monomial(cls, payload, power: int, order: int) -> HbarSeries:
        zero = zero_like(payload)
        return cls([payload if k == power else zero for k in range(order + 1)])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> HbarSeries:
        if order > self.order:
            msg = f"cannot raise truncation order from {self.order} to {order}"
            raise TruncationError(msg)
        return HbarSeries(self.coeffs[: order + 1])

    def map(self, fn: Callable) -> HbarSeries:
        return HbarSeries([fn(c) for c in self.coeffs])

    def __add__(self, other) -> HbarSeries:
        if not isinstance(other, HbarSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return HbarSeries([self.coeffs[k] + other.coeffs[k] for k in range(order + 1)])

    def __neg__(self) -> HbarSeries:
        return self.map(lambda c: -c)

    def __sub__(self, other) -> HbarSeries:
        if not isinstance(other, HbarSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> HbarSeries:
        return self.map(lambda c: c * factor)

    def __mul__(self, other) -> HbarSeries:
        if isinstance(other, HbarSeries):
            return convolve(self, other, lambda a, b: a * b)
        return self.scale(other)

    def __rmul__(self, other) -> HbarSeries:
        return self.map(lambda c: other * c)

    def shift(self, power: int = 1) -> HbarSeries:
        """Multiply by hbar^power, keeping the truncation order."""
        zero = zero_like(self.coeffs[0])
        return HbarSeries(([zero] * power + list(self.coeffs))[: self.order + 1])

    def divide_by_hbar(self) -> HbarSeries:
        """Exact division by hbar; the result is known to one order less."""
        if self.coeffs[0]:
            msg = "series has a nonzero hbar^0 part and is not divisible by hbar"
            raise TruncationError(msg)
        if self.order == 0:
            msg = "division by hbar needs truncation order >= 1"
            raise TruncationError(msg)
        return HbarSeries(self.coeffs[1:])

    def valuation(self) -> int | None:
        """Lowest hbar power with a nonzero coefficient."""
        return next((k for k, c in enumerate(self.coeffs) if c), None)

    def __bool__(self) -> bool:
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HbarSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def to_text(self) -> str:
        pieces = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            text = c.to_text() if hasattr(c, "to_text") else str(c)
            if k == 0:
                pieces.append(text)
            else:
                power = HBAR if k == 1 else f"{HBAR}^{k}"
                pieces.append(f"{power}" if text == "1" else f"({text})*{power}")
        return " + ".join(pieces) or "0"

    def __repr__(self) -> str:
        return f"HbarSeries(order={self.order}, {self.to_text()!r})"


def convolve(a: HbarSeries, b: HbarSeries, product: Callable) -> HbarSeries:
    """Cauchy product under an arbitrary bilinear payload product."""
    order = min(a.order, b.order)
    coeffs = []
    for k in range(order + 1):
        terms = [product(a.coeffs[i], b.coeffs[k - i]) for i in range(k + 1)]
        coeffs.append(reduce(lambda x, y: x + y, terms))
    return HbarSeries(coeffs)


def series_mul(a: HbarSeries, b: HbarSeries) -> HbarSeries:
    return a * b


def scalar_series(values: Sequence, order: int | None = None) -> HbarSeries:
    order = len(values) - 1 if order is None else order
    padded = [Scalar.of(v) for v in values] + [Scalar(0)] * (order + 1 - len(values))
    return HbarSeries(padded[: order + 1])
