"""Exact rational arithmetic, sparse polynomials and exact linear algebra."""

from .linalg import (
    RationalMatrix,
    RowEchelon,
    det,
    in_row_space,
    independent_rows_mod_p,
    matmul,
    random_unimodular,
    rank,
    row_space_coordinates,
    rref,
    sparse_rref,
)
from .poly import MultiPoly, format_rational, parse_rational, poly_arith, to_rational, variables

__all__ = [
    "MultiPoly",
    "RationalMatrix",
    "RowEchelon",
    "det",
    "format_rational",
    "in_row_space",
    "independent_rows_mod_p",
    "matmul",
    "parse_rational",
    "poly_arith",
    "random_unimodular",
    "rank",
    "row_space_coordinates",
    "rref",
    "sparse_rref",
    "to_rational",
    "variables",
]
