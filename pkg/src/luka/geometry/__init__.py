"""Exact rational polyhedral geometry and linear programming."""
from .hull import Facet, Polytope, convex_hull, faces
from .lattice import (
    Simplex,
    dehomogenize,
    den,
    format_point,
    homogeneous_correspondent,
    is_regular_simplex,
    rational_point,
    simplex_volume,
)
from .lp import (
    Infeasible,
    LinearProgram,
    Optimal,
    Unbounded,
    check_outcome,
    lp_solve,
)

__all__ = [
    "Facet", "Polytope", "convex_hull", "faces",
    "Simplex", "dehomogenize", "den", "format_point", "homogeneous_correspondent",
    "is_regular_simplex", "rational_point", "simplex_volume",
    "Infeasible", "LinearProgram", "Optimal", "Unbounded", "check_outcome", "lp_solve",
]
