"""Graded quadratic spaces, pencils of quadrics and stability of functionals."""

from src.quadform.datum import divisor_options, make_datum
from src.quadform.models import GroupDatum, Pencil, StabilityResult, StableFunctional
from src.quadform.pencil import pencil_degeneracy
from src.quadform.projective import nondegenerate_quadric_count, projective_points, quadric_point_count
from src.quadform.space import GradedQuadraticSpace, build_space
from src.quadform.stability import canonical_functional, expected_euler_characteristic, is_stable

__all__ = [
    "divisor_options",
    "make_datum",
    "GroupDatum",
    "Pencil",
    "StabilityResult",
    "StableFunctional",
    "pencil_degeneracy",
    "nondegenerate_quadric_count",
    "projective_points",
    "quadric_point_count",
    "GradedQuadraticSpace",
    "build_space",
    "canonical_functional",
    "expected_euler_characteristic",
    "is_stable",
]
