"""Exact computational toric geometry: fans, Q-divisors, line-bundle cohomology,
Witt vectors of length two, lifting certificates and cyclic covers."""
from ._backend import BACKEND
from .errors import HypothesisError, ToricError, UnsupportedRankError, ValidationError
from .fan import Fan, blowup_p2, hirzebruch, product, projective_space, star_subdivision
from .divisor import QDivisor, class_group, h0, is_ample, section_polytope
from .cohomology import cohomology_table, h_numbers, verify_kv_vanishing
from .witt import WittScalar, strong_lifting_certificate
from .cover import CoverSpec, P1Curve, cover_invariants, lift_cover

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "HypothesisError", "ToricError", "UnsupportedRankError", "ValidationError",
    "Fan", "blowup_p2", "hirzebruch", "product", "projective_space", "star_subdivision",
    "QDivisor", "class_group", "h0", "is_ample", "section_polytope",
    "cohomology_table", "h_numbers", "verify_kv_vanishing",
    "WittScalar", "strong_lifting_certificate",
    "CoverSpec", "P1Curve", "cover_invariants", "lift_cover",
]
