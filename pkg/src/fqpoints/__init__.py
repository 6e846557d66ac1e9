"""Point counts of projective varieties over finite fields, and the
projective Reed-Muller codes whose weights they determine."""

from .gf import GF, FieldElement, field_create, field_from_q
from .projgeom import ProjPoint, Hyperplane, p_count, enumerate_projective
from .poly import HomogPoly, AffinePoly, parse_poly, enumerate_lambda, gaussian_binomial
from .varieties import count_projective_zeros, search_max_points, CountReport
from .bounds import BoundResult, tb_bound, zanella_quadric_bound, serre_bound
from .codes import LinearCode, prm_code, higher_weight, weight_hierarchy

__version__ = "0.1.0"

__all__ = [
    "GF", "FieldElement", "field_create", "field_from_q",
    "ProjPoint", "Hyperplane", "p_count", "enumerate_projective",
    "HomogPoly", "AffinePoly", "parse_poly", "enumerate_lambda", "gaussian_binomial",
    "count_projective_zeros", "search_max_points", "CountReport",
    "BoundResult", "tb_bound", "zanella_quadric_bound", "serre_bound",
    "LinearCode", "prm_code", "higher_weight", "weight_hierarchy",
]
