from fractions import Fraction
from unittest import mock

import pandas as pd
import pytest

from kquant.exceptions import SchemaError
from kquant.graphs import canonical_key, key_text
from kquant.models import WeightEstimate
from kquant.tables import COLUMNS, estimate_table, read_table, to_frame, write_table


def fake_mc_weight(graph, samples, seed, settings=None):
    return WeightEstimate(0.125, 0.01, samples, seed, key_text(canonical_key(graph)))


def test_first_order_table_is_analytic(settings):
    table = estimate_table(1, settings=settings)
    assert list(table) == ["1.2:-2,-1"]
    estimate = table["1.2:-2,-1"]
    assert estimate.mean == -0.5
    assert estimate.analytic == Fraction(-1, 2)
    assert estimate.samples == 0


@mock.patch("kquant.tables.mc_weight", side_effect=fake_mc_weight)
def test_second_order_table_samples_only_open_classes(mc_weight, settings):
    table = estimate_table(2, 1000, 3, settings=settings)
    assert len(table) == 6
    sampled = [e for e in table.values() if e.analytic is None]
    assert len(sampled) == mc_weight.call_count
    assert all(e.mean == 0.125 and e.samples == 1000 for e in sampled)
    assert table["2.2:-2,-1|-2,-1"].analytic == Fraction(1, 4)


@mock.patch("kquant.tables.mc_weight", side_effect=fake_mc_weight)
def test_table_without_closed_forms(mc_weight, settings):
    table = estimate_table(1, 500, 3, use_analytic=False, settings=settings)
    mc_weight.assert_called_once()
    assert table["1.2:-2,-1"].mean == 0.125


def test_written_table_reads_back(tmp_path, settings):
    table = estimate_table(1, settings=settings)
    path = tmp_path / "weights.csv"
    write_table(table, path)
    assert list(pd.read_csv(path).columns) == COLUMNS
    assert read_table(path) == table


def test_missing_column(tmp_path):
    path = tmp_path / "weights.csv"
    frame = to_frame([WeightEstimate(0.5, 0.0, 0, 1, "1.2:-1,-2", Fraction(1, 2))])
    frame.drop(columns=["seed"]).to_csv(path, index=False)
    with pytest.raises(SchemaError, match="seed"):
        read_table(path)


def test_key_must_match_the_graph(tmp_path):
    path = tmp_path / "weights.csv"
    frame = to_frame([WeightEstimate(0.5, 0.0, 0, 1, "1.2:-1,-2", Fraction(1, 2))])
    frame.loc[0, "stars"] = "-2,-1"
    frame.to_csv(path, index=False)
    with pytest.raises(SchemaError):
        read_table(path)
