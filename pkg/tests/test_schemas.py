import json

import pytest
from pydantic import ValidationError

from kquant.algebra.poly import Poly
from kquant.exceptions import InvalidGraphError, SchemaError
from kquant.graphs import AdmissibleGraph
from kquant.polyvector import PolyVectorField
from kquant.schemas import (
    GraphSchema,
    MultiDiffOpSchema,
    PolySchema,
    PolyVectorSchema,
    TermSchema,
    WeightTableRow,
    load_json,
)
from kquant.weyl import moyal_operator

SO3 = {
    "d": 3,
    "k": 2,
    "coeffs": [
        {"idx": [1, 2], "poly": {"terms": [{"exp": [0, 0, 1], "re": "1"}]}},
        {"idx": [2, 3], "poly": {"terms": [{"exp": [1, 0, 0], "re": "1"}]}},
        {"idx": [3, 1], "poly": {"terms": [{"exp": [0, 1, 0], "re": "1"}]}},
    ],
}


def test_polyvector_indices_are_one_based(so3):
    assert PolyVectorSchema.model_validate(SO3).to_field() == so3
    wire = PolyVectorSchema.from_field(PolyVectorField.basis(2, (1, 2))).model_dump()
    assert wire["coeffs"][0]["idx"] == [1, 2]


def test_rationals_travel_as_strings():
    assert TermSchema(exp=[1], re=0.5).re == "1/2"
    assert TermSchema(exp=[1], re="6/4", im=2).model_dump() == {"exp": [1], "re": "3/2", "im": "2"}
    with pytest.raises(ValidationError):
        TermSchema(exp=[1], re="half")


def test_poly_schema_checks_lengths():
    with pytest.raises(ValidationError):
        PolySchema.model_validate({"terms": [{"exp": [1, 0]}, {"exp": [1]}]})
    with pytest.raises(ValidationError):
        PolySchema.model_validate({"d": 3, "terms": [{"exp": [1, 0]}]})
    with pytest.raises(SchemaError):
        PolySchema().to_poly()
    assert PolySchema(d=2).to_poly() == Poly.zero(2)


def test_unknown_fields_are_rejected():
    with pytest.raises(ValidationError):
        PolyVectorSchema.model_validate({**SO3, "extra": 1})
    with pytest.raises(ValidationError):
        PolyVectorSchema.model_validate({"d": 2, "k": 1, "coeffs": [{"idx": [0], "poly": {"d": 2}}]})


def test_operator_schema_keeps_coefficients():
    op = moyal_operator(PolyVectorField.standard_symplectic(1), 2, imaginary=False)[2]
    assert MultiDiffOpSchema.from_operator(op).to_operator() == op


def test_graph_schema():
    assert GraphSchema(n=1, m=2, stars=[[-1, -2]]).to_graph() == AdmissibleGraph.wedge()
    with pytest.raises(InvalidGraphError):
        GraphSchema(n=1, m=2, stars=[[0, -1]]).to_graph()


def test_weight_row_key_must_match():
    row = {"key": "1.2:-2,-1", "n": 1, "m": 2, "stars": "-2,-1", "mean": -0.5, "std_error": 0.0}
    row.update(samples=0, seed=1, analytic="-1/2")
    assert WeightTableRow.model_validate(row).to_estimate().mean == -0.5
    with pytest.raises(ValidationError):
        WeightTableRow.model_validate({**row, "stars": "-1,-2"})
    with pytest.raises(ValidationError):
        WeightTableRow.model_validate({**row, "analytic": "x"})


def test_load_json(tmp_path):
    path = tmp_path / "so3.json"
    path.write_text(json.dumps(SO3), encoding="utf-8")
    assert load_json(path, PolyVectorSchema).to_field() == PolyVectorField.so3()
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(json.JSONDecodeError):
        load_json(path, PolyVectorSchema)
