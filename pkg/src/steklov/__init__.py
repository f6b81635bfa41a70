"""Steklov characteristic polynomials of convex polygons: forward map, inverse and searches."""
from .charpoly import TrigPoly, char_poly, char_poly_regular, poly_compare, poly_equal, term_count
from .errors import *  # noqa: F401,F403
from .inverse import ReconstructionResult, reconstruct, reconstruct_kite, reconstruct_parallelogram
from .inverse import reconstruct_regular, reconstruct_triangle
from .numerics import Angle, angle_class, c_of, s_of
from .polygon import (
    PolygonData,
    congruent,
    make_kite,
    make_parallelogram,
    make_rectangle,
    make_regular,
    normalize_perimeter,
    reduce,
    triangle_from_angles,
    triangle_from_lengths,
)
from .quasieig import QuasiSpectrum, compare_spectra, roots
from .search import (
    find_charpoly_collisions_triangles,
    quad_vs_equilateral,
    smooth_candidate_pentagons,
    smooth_check,
)

__version__ = "0.1.0"
