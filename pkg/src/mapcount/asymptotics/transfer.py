"""Transfer from singular expansions to coefficient asymptotics.

A term c (1 - z/r)^(-alpha) contributes [z^n] ~ c / Gamma(alpha) n^(alpha-1) r^(-n).
For integer and half-integer alpha, Gamma(alpha) is kept exact as q * sqrt(pi)^k
with q rational and k in {0, 1}, so constants like 2/sqrt(pi) stay symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath
import numpy as np

from ..errors import InsufficientData, UnsupportedExponent
from ..exact.poly import format_rational, qnorm
from ..exact.series import TruncSeries
from .puiseux import SingularExpansion, to_mp
from .roots import IsolatedRoot


def gamma_exact(alpha) -> tuple:
    """Gamma(alpha) = q * sqrt(pi)^k for integer or half-integer alpha, as (q, k)."""
    alpha = Fraction(alpha)
    if alpha.denominator == 1:
        if alpha <= 0:
            raise UnsupportedExponent(f"Gamma has a pole at {alpha}")
        return Fraction(factorial(int(alpha) - 1)), 0
    if alpha.denominator != 2:
        raise UnsupportedExponent(f"no exact form for Gamma({alpha})")
    # start from Gamma(1/2) = sqrt(pi), step with Gamma(x+1) = x Gamma(x)
    q, x = Fraction(1), Fraction(1, 2)
    while x < alpha:
        q *= x
        x += 1
    while x > alpha:
        x -= 1
        q /= x
    return q, 1


@dataclass
class AsymptoticForm:
    """[z^n] f ~ (c / Gamma(alpha)) n^(alpha - 1) r^(-n)."""

    c: object
    alpha: Fraction
    r: object  # rational or IsolatedRoot
    exact: bool = True

    def __post_init__(self):
        self.alpha = Fraction(self.alpha)
        if self.alpha.denominator == 1 and self.alpha <= 0:
            raise UnsupportedExponent(f"alpha = {self.alpha} is a non-positive integer")

    @property
    def n_exponent(self) -> Fraction:
        return self.alpha - 1

    @property
    def growth(self):
        """r^(-1): exact for rational r, an interval (lo, hi) for an isolated root."""
        if isinstance(self.r, IsolatedRoot):
            if self.r.is_exact():
                return qnorm(1 / self.r.lo)
            return (1 / self.r.hi, 1 / self.r.lo)
        return qnorm(1 / Fraction(self.r))

    def growth_float(self) -> float:
        g = self.growth
        return float((g[0] + g[1]) / 2) if isinstance(g, tuple) else float(g)

    def constant_exact(self):
        """(q, k) with c / Gamma(alpha) = q * pi^(-k/2), or None when c is not exact."""
        if not self.exact:
            return None
        try:
            g, k = gamma_exact(self.alpha)
        except UnsupportedExponent:
            return None
        return qnorm(Fraction(self.c) / g), k

    @property
    def constant(self) -> float:
        return float(self.constant_mp())

    def constant_mp(self):
        ce = self.constant_exact()
        if ce is not None:
            q, k = ce
            return to_mp(q) / mpmath.sqrt(mpmath.pi) ** k
        return to_mp(self.c) / mpmath.gamma(to_mp(self.alpha))

    def constant_str(self) -> str:
        ce = self.constant_exact()
        if ce is None:
            return mpmath.nstr(self.constant_mp(), 12)
        q, k = ce
        q = Fraction(q)
        if k == 0:
            return format_rational(q)
        num = "" if q.numerator == 1 else str(q.numerator)
        den = "√π" if q.denominator == 1 else f"({q.denominator}√π)"
        return f"{num or '1'}/{den}"

    def to_str(self) -> str:
        g = self.growth
        gs = str(qnorm(g)) if not isinstance(g, tuple) else f"{float(g[0]):.12g}"
        return f"({self.constant_str()}) n^({format_rational(self.n_exponent)}) ({gs})^n"

    def as_dict(self) -> dict:
        g = self.growth
        return {
            "c": format_rational(self.c) if self.exact else mpmath.nstr(to_mp(self.c), 20),
            "alpha": format_rational(self.alpha),
            "n_exponent": format_rational(self.n_exponent),
            "constant": self.constant_str(),
            "constant_float": self.constant,
            "growth": [format_rational(x) for x in g] if isinstance(g, tuple) else format_rational(g),
            "provenance": "exact" if self.exact and not isinstance(g, tuple) else "certified-interval"
            if self.exact else "heuristic",
        }


def transfer(expansion: SingularExpansion) -> AsymptoticForm:
    st = expansion.singular_term()
    if st is None:
        raise UnsupportedExponent("the expansion has no singular term")
    e, c = st
    return AsymptoticForm(c, -e, expansion.rho, exact=expansion.exact)


@dataclass
class GrowthEstimate:
    estimate: float
    lo: float
    hi: float
    n_used: int

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def as_dict(self) -> dict:
        return {"estimate": self.estimate, "interval": [self.lo, self.hi], "n_used": self.n_used,
                "provenance": "heuristic"}


def growth_from_coefficients(series, model_exponent=Fraction(-5, 2), min_terms: int = 40) -> GrowthEstimate:
    """Heuristic estimate of the growth constant gamma from a_n ~ C n^k gamma^n.

    Ratios r_n = a_n / a_(n-1) are corrected by (n / (n-1))^(-k), then the
    remaining O(1/n^2) error is removed by second-order Richardson steps.
    The interval is the spread of the last few extrapolants, widened by the
    last correction.  Zero coefficients (parity gaps) are skipped, with the
    ratio taken over the gap.
    """
    coeffs = list(series.coeffs) if isinstance(series, TruncSeries) else list(series)
    pts = [(n, c) for n, c in enumerate(coeffs) if c]
    if len(pts) < min_terms:
        raise InsufficientData(f"need {min_terms} nonzero coefficients, have {len(pts)}")
    k = float(model_exponent)
    est = []
    for (n0, a0), (n1, a1) in zip(pts, pts[1:]):
        if n0 == 0:
            continue
        ratio = float(Fraction(a1) / Fraction(a0))
        if ratio <= 0:
            continue
        step = n1 - n0
        g = (ratio * (n0 / n1) ** k) ** (1 / step)
        est.append((n1, g))
    ns = np.array([n for n, _ in est], dtype=float)
    gs = np.array([g for _, g in est])
    # Richardson on 1/n^2 error: g(n) = g + b / n^2
    rich = [(n1**2 * g1 - n0**2 * g0) / (n1**2 - n0**2)
            for n0, g0, n1, g1 in zip(ns, gs, ns[1:], gs[1:])]
    tail = np.array(rich[-6:])
    centre = float(tail[-1])
    spread = float(tail.max() - tail.min())
    drift = abs(float(gs[-1]) - centre)
    half = max(spread, drift / 4, 1e-12 * abs(centre))
    return GrowthEstimate(centre, centre - half, centre + half, len(pts))
