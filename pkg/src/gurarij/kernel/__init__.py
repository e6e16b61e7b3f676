"""Exact rational linear algebra, LP and polytope primitives."""
from .linalg import q, vec, mat
from .lp import LPResult, lp_solve, lp_max, lp_min, feasible
from .polytope import MAX_DIM, PolyBall, complete_reps, extreme_rays, facets_of, polar, vertices_of

__all__ = [
    "q", "vec", "mat", "LPResult", "lp_solve", "lp_max", "lp_min", "feasible",
    "MAX_DIM", "PolyBall", "complete_reps", "extreme_rays", "facets_of", "polar", "vertices_of",
]
