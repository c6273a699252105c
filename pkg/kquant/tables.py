"""CSV weight tables: one row per isomorphism class of G_(n,2), keyed by the canonical graph."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from kquant.config import Settings
from kquant.constants import DEFAULT_SAMPLES, DEFAULT_SEED
from kquant.exceptions import SchemaError
from kquant.graphs import AdmissibleGraph, enumerate_graphs, group_by_class, key_text
from kquant.models import WeightEstimate
from kquant.schemas import WeightTableRow
from kquant.weights import analytic_weight, mc_weight

logger = logging.getLogger(__name__)

COLUMNS = ["key", "n", "m", "stars", "mean", "std_error", "samples", "seed", "analytic"]

WeightTable = dict[str, WeightEstimate]


def estimate_table(
    n: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    *,
    use_analytic: bool = True,
    settings: Settings | None = None,
) -> WeightTable:
    """Weights of the canonical representative of every class of G_(n,2) with out-degrees 2."""
    graphs = enumerate_graphs(n, 2, [2] * n, connected_only=settings.connected_only if settings else None)
    table: WeightTable = {}
    for key in group_by_class(graphs):
        representative = AdmissibleGraph(*key)
        exact = analytic_weight(representative)
        if use_analytic and exact is not None:
            table[key_text(key)] = WeightEstimate(float(exact), 0.0, 0, seed, key_text(key), exact)
            continue
        table[key_text(key)] = mc_weight(representative, samples, seed, settings=settings)
    logger.info("estimated %d class weights for n=%d", len(table), n)
    return table


def to_frame(estimates: Iterable[WeightEstimate]) -> pd.DataFrame:
    rows = []
    for estimate in estimates:
        head, _, stars = estimate.graph_key.partition(":")
        n, m = (int(part) for part in head.split("."))
        rows.append(
            {
                "key": estimate.graph_key,
                "n": n,
                "m": m,
                "stars": stars,
                "mean": estimate.mean,
                "std_error": estimate.std_error,
                "samples": estimate.samples,
                "seed": estimate.seed,
                "analytic": "" if estimate.analytic is None else str(estimate.analytic),
            }
        )
    return pd.DataFrame(rows, columns=COLUMNS)


def write_table(table: WeightTable, path: str | Path) -> None:
    to_frame(table.values()).sort_values("key").to_csv(path, index=False)


def read_table(path: str | Path) -> WeightTable:
    df = pd.read_csv(path, dtype={"key": str, "stars": str, "analytic": str}, keep_default_na=False)
    missing = set(COLUMNS) - set(df.columns)
    if missing:
        msg = f"weight table {path} lacks columns {sorted(missing)}"
        raise SchemaError(msg)
    table: WeightTable = {}
    for record in df[COLUMNS].to_dict("records"):
        try:
            row = WeightTableRow.model_validate(record)
        except ValidationError as e:
            msg = f"bad row in weight table {path}: {record}"
            raise SchemaError(msg) from e
        table[row.key] = row.to_estimate()
    logger.debug("read %d weights from %s", len(table), path)
    return table
