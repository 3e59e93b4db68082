"""Exact affine extensions of H2, H3 and H4 induced from A4, D6 and E8 by folding."""
from .golden import SIGMA, TAU, GoldenRat, parse_golden
from .coxeter import GroupId, RootVector, cartan_matrix, generate_group, generate_root_system, highest_root
from .projection import lift, project, projection_map
from .affine import (
    BorderedCartan,
    classify,
    induce,
    named_extension,
    search_single_extensions,
    symmetrise,
)
from .double_ext import enumerate_double
from .quasicrystal import TranslationSpec, generate_fragment
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BorderedCartan",
    "GoldenRat",
    "GroupId",
    "RootVector",
    "SIGMA",
    "TAU",
    "TranslationSpec",
    "cartan_matrix",
    "classify",
    "enumerate_double",
    "generate_fragment",
    "generate_group",
    "generate_root_system",
    "highest_root",
    "induce",
    "lift",
    "named_extension",
    "parse_golden",
    "project",
    "projection_map",
    "search_single_extensions",
    "symmetrise",
]
