"""JSON round-trip for truncated series and algebraic curves.

Series: ``{"var": "z", "order": N, "coeffs": [...]}`` where each coefficient is
a rational string ``"a/b"`` or ``{"nu": ["a0/b0", ...]}`` for a polynomial in ν.
"""

from __future__ import annotations

import json

from .poly import Poly, format_rational, parse_rational
from .series import NU, QQ, TruncSeries


def coeff_to_json(c):
    if isinstance(c, Poly):
        return {"nu": [format_rational(x) for x in c.coeffs]}
    return format_rational(c)


def coeff_from_json(obj):
    if isinstance(obj, dict):
        return Poly([parse_rational(x) for x in obj["nu"]])
    return parse_rational(obj)


def series_to_json(s: TruncSeries, var: str = "z") -> dict:
    if s.ring not in (QQ, NU):
        raise TypeError("only rational and Q[nu] series are serialisable")
    return {"var": var, "order": s.order, "coeffs": [coeff_to_json(c) for c in s.coeffs]}


def series_from_json(obj) -> TruncSeries:
    if isinstance(obj, str):
        obj = json.loads(obj)
    cs = [coeff_from_json(c) for c in obj["coeffs"]]
    if len(cs) != obj["order"]:
        raise ValueError("coefficient count does not match order")
    ring = NU if any(isinstance(c, Poly) for c in cs) else QQ
    if ring is NU:
        cs = [c if isinstance(c, Poly) else Poly((c,)) for c in cs]
    return TruncSeries(cs, ring)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, no trailing spaces."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)
