"""JSON shapes of the values that cross the CLI boundary.

Rationals travel as strings ("3/4"); polyvector indices are 1-based on the wire.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Annotated

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator

from kquant.algebra.poly import Poly
from kquant.algebra.scalar import Scalar
from kquant.dgla.multidiff import MultiDiffOp
from kquant.exceptions import SchemaError
from kquant.graphs import AdmissibleGraph
from kquant.models import WeightEstimate
from kquant.polyvector import PolyVectorField


def _rational_text(value) -> str:
    try:
        return str(Fraction(str(value).strip()))
    except (ValueError, ZeroDivisionError) as e:
        msg = f"{value!r} is not a rational number"
        raise ValueError(msg) from e


Rational = Annotated[str, BeforeValidator(_rational_text)]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TermSchema(_Model):
    exp: list[Annotated[int, Field(ge=0)]]
    re: Rational = "0"
    im: Rational = "0"


class PolySchema(_Model):
    d: int | None = Field(default=None, ge=1)
    terms: list[TermSchema] = []

    @model_validator(mode="after")
    def check_lengths(self):
        lengths = {len(term.exp) for term in self.terms}
        if self.d is not None:
            lengths.add(self.d)
        if len(lengths) > 1:
            msg = f"exponents of mixed lengths {sorted(lengths)}"
            raise ValueError(msg)
        return self

    def to_poly(self, dimension: int | None = None) -> Poly:
        dimension = self.d or (len(self.terms[0].exp) if self.terms else dimension)
        if dimension is None:
            msg = "the zero polynomial needs an explicit dimension d"
            raise SchemaError(msg)
        return Poly(dimension, [(t.exp, Scalar(Fraction(t.re), Fraction(t.im))) for t in self.terms])

    @classmethod
    def from_poly(cls, poly: Poly) -> PolySchema:
        return cls(
            d=poly.dimension,
            terms=[TermSchema(exp=list(e), re=str(c.re), im=str(c.im)) for e, c in poly.items()],
        )


class PolyVectorEntry(_Model):
    idx: list[Annotated[int, Field(ge=1)]]
    poly: PolySchema


class PolyVectorSchema(_Model):
    d: int = Field(ge=1)
    k: int = Field(ge=0)
    coeffs: list[PolyVectorEntry] = []

    def to_field(self) -> PolyVectorField:
        terms = []
        for entry in self.coeffs:
            terms.append(([i - 1 for i in entry.idx], entry.poly.to_poly(self.d)))
        return PolyVectorField(self.d, self.k, terms)

    @classmethod
    def from_field(cls, field: PolyVectorField) -> PolyVectorSchema:
        return cls(
            d=field.dimension,
            k=field.degree,
            coeffs=[
                PolyVectorEntry(idx=[i + 1 for i in idx], poly=PolySchema.from_poly(c)) for idx, c in field.items()
            ],
        )


class GraphSchema(_Model):
    n: int = Field(ge=0)
    m: int = Field(ge=0)
    stars: list[list[int]]

    def to_graph(self) -> AdmissibleGraph:
        return AdmissibleGraph(self.n, self.m, tuple(tuple(star) for star in self.stars))

    @classmethod
    def from_graph(cls, graph: AdmissibleGraph) -> GraphSchema:
        return cls.model_validate(graph.to_dict())


class OperatorTerm(_Model):
    derivs: list[list[int]]
    poly: PolySchema


class MultiDiffOpSchema(_Model):
    d: int = Field(ge=1)
    arity: int = Field(ge=0)
    terms: list[OperatorTerm] = []

    def to_operator(self) -> MultiDiffOp:
        return MultiDiffOp(self.d, self.arity, [(t.derivs, t.poly.to_poly(self.d)) for t in self.terms])

    @classmethod
    def from_operator(cls, op: MultiDiffOp) -> MultiDiffOpSchema:
        return cls(
            d=op.dimension,
            arity=op.arity,
            terms=[
                OperatorTerm(derivs=[list(a) for a in derivs], poly=PolySchema.from_poly(c)) for derivs, c in op.items()
            ],
        )


class WeightTableRow(_Model):
    key: str
    n: int = Field(ge=0)
    m: int = Field(ge=0)
    stars: str
    mean: float
    std_error: float = Field(ge=0)
    samples: int = Field(ge=0)
    seed: int
    analytic: str = ""

    @model_validator(mode="after")
    def check_key(self):
        if self.key != f"{self.n}.{self.m}:{self.stars}":
            msg = f"key {self.key} does not match n={self.n}, m={self.m}, stars={self.stars}"
            raise ValueError(msg)
        if self.analytic:
            _rational_text(self.analytic)
        return self

    def to_estimate(self) -> WeightEstimate:
        analytic = Fraction(self.analytic) if self.analytic else None
        return WeightEstimate(self.mean, self.std_error, self.samples, self.seed, self.key, analytic)


def load_json(path: str | Path, schema: type[_Model]):
    """Parse a JSON file into a schema; syntax errors surface as json.JSONDecodeError."""
    return schema.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))
