"""Brick quivers, DT dynamics and finite-type classification of positive braids."""

import logging

from .braid import (
    BraidError,
    BraidWord,
    Permutation,
    apply_move,
    components,
    connect_sum,
    format_braid,
    parse_braid,
    split_union,
)
from .bricks import extract_quiver, quiver_matrix
from .classify import classify, standard_link_word
from .cluster import dt_orbit, filling_seeds, verify_maximal_green
from .derivations import check as check_derivation
from .derivations import parse_derivation
from .normal_form import greedy_normal_form, monoid_equal
from .quiver import DynkinType, ExchangeMatrix, is_finite_type, mutate, recognize

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"

__all__ = [
    "BraidError",
    "BraidWord",
    "DynkinType",
    "ExchangeMatrix",
    "Permutation",
    "apply_move",
    "check_derivation",
    "classify",
    "components",
    "connect_sum",
    "dt_orbit",
    "extract_quiver",
    "filling_seeds",
    "format_braid",
    "greedy_normal_form",
    "is_finite_type",
    "monoid_equal",
    "mutate",
    "parse_braid",
    "parse_derivation",
    "quiver_matrix",
    "recognize",
    "split_union",
    "standard_link_word",
    "verify_maximal_green",
]
