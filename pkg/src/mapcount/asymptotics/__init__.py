"""Guessing algebraic equations, locating singularities and transfer to asymptotics."""

from .guess import AlgebraicCurve, guess_min_poly
from .puiseux import SingularExpansion, puiseux_branch
from .resultant import discriminant_z, resultant_T
from .roots import IsolatedRoot, count_roots, isolate_real_roots
from .singularity import analyse, branch_series, dominant_singularity
from .transfer import AsymptoticForm, growth_from_coefficients, transfer

__all__ = [
    "AlgebraicCurve", "AsymptoticForm", "IsolatedRoot", "SingularExpansion", "analyse",
    "branch_series", "count_roots", "discriminant_z", "dominant_singularity", "growth_from_coefficients",
    "guess_min_poly", "isolate_real_roots", "puiseux_branch", "resultant_T", "transfer",
]
