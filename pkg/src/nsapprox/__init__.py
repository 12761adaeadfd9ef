"""Novikov-Shubin numbers of Laurent and group-ring matrices, and alpha numbers of their finite quotients."""

__version__ = "0.1.0"

from .errors import HypothesisViolation, InvalidArgument, PrecisionError, ResourceError
from .exact import GaussianRational, LaurentPoly, Z, poly
from .groupring import GroupElement, GroupRingMatrix, VCGroupSpec, named_group, restrict_to_Z
from .ns_exact import INF_PLUS, NSValue, ns_number, ns_number_group, ns_number_matrix, unit_circle_roots
from .quotients import ExactData, Tolerances, sdf_step, spectral_sample
from .smith import LaurentMatrix, smith_normal_form

__all__ = [
    "ExactData", "GaussianRational", "GroupElement", "GroupRingMatrix", "HypothesisViolation", "INF_PLUS",
    "InvalidArgument", "LaurentMatrix", "LaurentPoly", "NSValue", "PrecisionError", "ResourceError",
    "Tolerances", "VCGroupSpec", "Z", "named_group", "ns_number", "ns_number_group", "ns_number_matrix",
    "poly", "restrict_to_Z", "sdf_step", "smith_normal_form", "spectral_sample", "unit_circle_roots",
]
