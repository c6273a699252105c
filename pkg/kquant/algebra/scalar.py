"""Exact Gaussian rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    msg = f"cannot interpret {value!r} as a rational number"
    raise TypeError(msg)


@dataclass(frozen=True, slots=True, eq=False)
class Scalar:
    """A complex number re + i*im with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _to_fraction(self.re))
        object.__setattr__(self, "im", _to_fraction(self.im))

    @classmethod
    def of(cls, value) -> Scalar:
        if isinstance(value, Scalar):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(_to_fraction(value))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> Scalar:
        return Scalar(self.re, -self.im)

    def __add__(self, other) -> Scalar:
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar(-self.re, -self.im)

    def __sub__(self, other) -> Scalar:
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> Scalar:
        return -(self - other)

    def __mul__(self, other) -> Scalar:
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re * other, self.im * other)
        try:
            other = Scalar.of(other)
        except TypeError:
            return NotImplemented
        if other.im == 0:
            return Scalar(self.re * other.re, self.im * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> Scalar:
        other = Scalar.of(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            msg = "division by zero scalar"
            raise ZeroDivisionError(msg)
        inverse = Scalar(other.re / norm, -other.im / norm)
        return self * inverse

    def __rtruediv__(self, other) -> Scalar:
        return Scalar.of(other) / self

    def __pow__(self, exponent: int) -> Scalar:
        if exponent < 0:
            return Scalar(1) / self**-exponent
        result = Scalar(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return self == Scalar.of(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_text(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imaginary_text(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{_imaginary_text(abs(self.im))})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()})"


def _imaginary_text(value: Fraction) -> str:
    if value == 1:
        return "i"
    if value == -1:
        return "-i"
    return f"{value}i"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)  # noqa: E741
