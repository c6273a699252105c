"""The shifted Hochschild complex of polydifferential operators as a DGLA."""

from kquant.dgla.gauge import GaugeElement, bch, exp_operator, gauge_act
from kquant.dgla.hochschild import (
    alternation,
    associator,
    deformation_of,
    gerstenhaber_bracket,
    gerstenhaber_product,
    hochschild_delta,
    insert,
    mc_residual,
    modified_d,
    series_bracket,
    series_insert,
    star_of,
)
from kquant.dgla.multidiff import MultiDiffOp, apply, mu
from kquant.dgla.signs import decalage_sign, koszul_sign_ext, koszul_sign_sym, permutation_sign, shuffles

__all__ = [
    "GaugeElement",
    "MultiDiffOp",
    "alternation",
    "apply",
    "associator",
    "bch",
    "decalage_sign",
    "deformation_of",
    "exp_operator",
    "gauge_act",
    "gerstenhaber_bracket",
    "gerstenhaber_product",
    "hochschild_delta",
    "insert",
    "koszul_sign_ext",
    "koszul_sign_sym",
    "mc_residual",
    "modified_d",
    "mu",
    "permutation_sign",
    "series_bracket",
    "series_insert",
    "shuffles",
    "star_of",
]
