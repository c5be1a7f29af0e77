"""Exact arithmetic for the rank-5 family of curves y^2 = x^3 + Kx built from
integer solutions of A^4 + D^4 = 2(B^4 + C^4)."""

__version__ = "0.1.0"

from .curve import INFINITY, CurvePoint, WeierstrassCurve, point
from .errors import InvariantError, RankforgeError
from .family import FamilyInstance, build_instance, build_points, curve_coefficient, heron_factors, sixteen_s2
from .heights import (
    DEFAULT_NORMALIZATION,
    HeightValue,
    Normalization,
    RankCertificate,
    canonical_height,
    certify,
    certify_points,
    naive_height,
    pairing,
)
from .numtheory import Factorization, factor, fourth_power_free_part, gcd_reduce
from .quartic import (
    QuarticSolution,
    SurfacePoint,
    descend_chain,
    descend_step,
    parametrized_solution,
    solution_corpus,
    verify_solution,
)
from .torsion import TorsionClass, classify, diagnostics

__all__ = [name for name in dir() if not name.startswith("_")]
