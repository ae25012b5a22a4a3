"""Filtered graphs, upper triangular maps and their common Nielsen paths."""

from .calculus import (
    SearchBoundExhausted,
    basic_decomposition,
    find_pq,
    is_basic,
    is_G_reduced,
    is_splitting,
    make_G_reduced,
    stays_G_reduced_check,
)
from .graph import FilteredGraph, IncidenceError, Path, format_path, height, invert_path, reduce_path, rose
from .maps import NotUpperTriangular, UpperTriangularMap, apply_path, marked_automorphism
from .nielsen import (
    ConstructionDisagreement,
    NielsenData,
    Normalization,
    NormalizationError,
    common_INPs_at_height,
    common_nielsen_paths,
    find_common_conjugator,
    fixed_loop_subgroup,
    is_common_NP,
    normalize,
    slide,
)

__all__ = [
    "ConstructionDisagreement",
    "FilteredGraph",
    "IncidenceError",
    "NielsenData",
    "Normalization",
    "NormalizationError",
    "NotUpperTriangular",
    "Path",
    "SearchBoundExhausted",
    "UpperTriangularMap",
    "apply_path",
    "basic_decomposition",
    "common_INPs_at_height",
    "common_nielsen_paths",
    "find_common_conjugator",
    "find_pq",
    "fixed_loop_subgroup",
    "format_path",
    "height",
    "invert_path",
    "is_G_reduced",
    "is_basic",
    "is_common_NP",
    "is_splitting",
    "make_G_reduced",
    "marked_automorphism",
    "normalize",
    "reduce_path",
    "rose",
    "slide",
    "stays_G_reduced_check",
]
