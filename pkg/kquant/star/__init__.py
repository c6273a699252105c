"""Kontsevich star products: assembly from graphs and their verification."""

from kquant.star.assemble import (
    Contribution,
    StarProduct,
    WeightSource,
    assemble,
    first_order_bracket,
    gauge_transform,
    graph_contributions,
    swap_arguments,
    taylor_coefficient,
)
from kquant.star.formality import formality_operator, formality_residual
from kquant.star.verify import obstruction, propagated_sigma, verify_associativity

__all__ = [
    "Contribution",
    "StarProduct",
    "WeightSource",
    "assemble",
    "first_order_bracket",
    "formality_operator",
    "formality_residual",
    "gauge_transform",
    "graph_contributions",
    "obstruction",
    "propagated_sigma",
    "swap_arguments",
    "taylor_coefficient",
    "verify_associativity",
]
