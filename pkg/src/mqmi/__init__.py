"""Multiparty quantum mutual information: the M_k family, GCMI and their checks."""

from .entropy import binary_entropy, relative_entropy, von_neumann
from .measures import (
    MeasureSpec,
    combined,
    common_information,
    dual_total_correlation,
    gcmi,
    mqmi,
    mqmi_profile,
    total_correlation,
    tripartite_regions,
)
from .qmatrix import MultipartiteState, partial_trace, permute_subsystems, tensor, validate
from .states import StateSpec, build

__version__ = "0.1.0"

__all__ = [
    "MeasureSpec",
    "MultipartiteState",
    "StateSpec",
    "binary_entropy",
    "build",
    "combined",
    "common_information",
    "dual_total_correlation",
    "gcmi",
    "mqmi",
    "mqmi_profile",
    "partial_trace",
    "permute_subsystems",
    "relative_entropy",
    "tensor",
    "total_correlation",
    "tripartite_regions",
    "validate",
    "von_neumann",
]
