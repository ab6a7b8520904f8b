"""Exact coefficient rings and truncated power series."""

from .catalytic import CatalyticPoly
from .poly import Poly, PolyNu, RationalFunctionNu, format_rational, parse_rational, qnorm
from .series import (
    CAT,
    NU,
    QQ,
    TruncSeries,
    divided_difference,
    reversion_undetermined,
    series_add,
    series_compose,
    series_inverse,
    series_mul,
    series_reversion,
    series_scale,
    solve_fixed_point,
    solve_linear_series_system,
)

__all__ = [
    "CAT", "NU", "QQ", "CatalyticPoly", "Poly", "PolyNu", "RationalFunctionNu",
    "TruncSeries", "divided_difference", "format_rational", "parse_rational", "qnorm",
    "reversion_undetermined", "series_add", "series_compose", "series_inverse",
    "series_mul", "series_reversion", "series_scale", "solve_fixed_point",
    "solve_linear_series_system",
]
