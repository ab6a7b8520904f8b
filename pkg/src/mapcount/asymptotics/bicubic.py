"""Radius of convergence of bicubic networks.

3-connected bicubic maps G satisfy M_b(z) = G(z (1 + M_b(z))^3), so
G = M_b o k^{-1} with k(z) = z (1 + M_b)^3.  Its radius tau = k(1/8) comes
from the square-root point of M_b, where M_b(1/8) = 1/4, hence G(tau) = 1/4.
Networks D(x) satisfy

    F(x, D) = D + (x^2/2)(1 + D) - G(x^2 (1 + D)^3) / 2 = 0,

and their radius sigma solves sigma^2 (1+D)^3 = tau together with F = 0.
With y = 1 + D the second equation is linear in y, and eliminating y leaves a
polynomial in sigma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..exact.poly import Poly, format_rational
from ..exact.series import TruncSeries, series_compose, series_reversion, solve_fixed_point
from .guess import AlgebraicCurve, guess_min_poly
from .puiseux import nearest_fibre_root
from .resultant import resultant_T
from .roots import IsolatedRoot, isolate_real_roots
from .transfer import GrowthEstimate, growth_from_coefficients

THEOREM_POLY = Poly([1000, 0, -4332, 0, 750, 0, 125])


def three_connected_bicubic(N: int) -> tuple[TruncSeries, TruncSeries]:
    """(M_b, G) to order N."""
    from ..ising import closed_form_bipartite

    Mb = closed_form_bipartite(N)
    one = Mb + 1
    k = (TruncSeries.z(N) * one * one * one).truncate(N)
    return Mb, series_compose(Mb, series_reversion(k)).truncate(N)


def networks(G: TruncSeries, order: int) -> TruncSeries:
    """D(x) from F(x, D) = 0 by fixed-point iteration to ``order``."""
    if 2 * G.order < order:  # G_k first reaches x^(2k)
        raise ValueError("G is too short for the requested order")

    def step(X):
        (D,) = X
        n = D.order
        x2 = TruncSeries.monomial(2, n)
        y = D + 1
        arg = (x2 * y * y * y).truncate(n)
        Gn = G.truncate(min(G.order, n))
        return [((series_compose(Gn, arg) - x2 * y) * Fraction(1, 2)).truncate(n)]

    return solve_fixed_point(step, 1, order)[0]


@dataclass
class BicubicState:
    tau: Fraction
    G_tau: Fraction
    elimination: Poly  # primitive polynomial in sigma from the singular system
    sigma: IsolatedRoot
    D_sigma: tuple  # rational interval for D(sigma)
    delta: tuple  # rational interval for 1/sigma
    checks: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {
            "tau": format_rational(self.tau),
            "G_tau": format_rational(self.G_tau),
            "elimination_poly": self.elimination.to_str("z"),
            "sigma": self.sigma.as_dict(),
            "D_sigma": [format_rational(x) for x in self.D_sigma],
            "delta": [format_rational(x) for x in self.delta],
            "delta_approx": float((self.delta[0] + self.delta[1]) / 2),
            "checks": self.checks,
            "diagnostics": self.diagnostics,
            "provenance": "certified-interval",
        }


def _system_curves(tau: Fraction, G_tau: Fraction):
    # in (sigma, y): sigma^2 y^3 - tau = 0 and y (1 + sigma^2/2) - (1 + G_tau/2) = 0
    e1 = AlgebraicCurve((Poly([-tau]), Poly([]), Poly([]), Poly([0, 0, 1])))
    e2 = AlgebraicCurve((Poly([-(1 + G_tau / 2)]), Poly([1, 0, Fraction(1, 2)])))
    return e1, e2


def bicubic_pipeline(order: int = 40, width=Fraction(1, 10**12), diagnostics: bool = True) -> BicubicState:
    Mb, G = three_connected_bicubic(order)
    # M_b at its singularity 1/8: the double root of the quadratic fibre
    curve = guess_min_poly(Mb, 2, 4)
    mb_rho = nearest_fibre_root(curve, Fraction(1, 8), 0.25)
    checks = {"Mb_double_root_at_1/8": curve.dT(Fraction(1, 8), Fraction(mb_rho)) == 0}
    mb_rho = Fraction(mb_rho)
    tau = Fraction(1, 8) * (1 + mb_rho) ** 3
    G_tau = mb_rho
    checks["tau_is_125/512"] = tau == Fraction(125, 512)
    checks["G_tau_is_1/4"] = G_tau == Fraction(1, 4)

    e1, e2 = _system_curves(tau, G_tau)
    elim = resultant_T(e1, e2).primitive()
    while elim[0] == 0:
        elim = elim.div_by_var()
    checks["elimination_matches_theorem_poly"] = elim == THEOREM_POLY.primitive()

    roots = isolate_real_roots(elim, 0, 1)
    sigma = roots[0]
    sigma.refine(width)
    lo, hi = sigma.lo, sigma.hi
    vlo, vhi = THEOREM_POLY(lo), THEOREM_POLY(hi)
    checks["theorem_poly_straddles_zero"] = vlo * vhi < 0
    checks["sigma_width_ok"] = hi - lo <= width

    # interval evaluation of the singular system on [lo, hi]
    s2 = (lo * lo, hi * hi)
    y = ((1 + G_tau / 2) / (1 + s2[1] / 2), (1 + G_tau / 2) / (1 + s2[0] / 2))
    r_lo = s2[0] * y[0] ** 3 - tau
    r_hi = s2[1] * y[1] ** 3 - tau
    checks["singular_system_straddles_zero"] = r_lo <= 0 <= r_hi
    state = BicubicState(
        tau=tau,
        G_tau=G_tau,
        elimination=elim,
        sigma=sigma,
        D_sigma=(y[0] - 1, y[1] - 1),
        delta=(1 / hi, 1 / lo),
        checks=checks,
    )
    if diagnostics:
        state.diagnostics["G_growth_heuristic"] = _safe_growth(G, Fraction(-5, 2))
        D = networks(G, 2 * order)
        state.diagnostics["D_first_coefficients"] = [format_rational(c) for c in D.coeffs[:12]]
        checks["D_nonnegative"] = all(c >= 0 for c in D.coeffs)
        state.diagnostics["D_growth_heuristic"] = _safe_growth(D, Fraction(-5, 2))
    return state


def _safe_growth(series, exponent):
    try:
        g: GrowthEstimate = growth_from_coefficients(series, exponent, min_terms=30)
        return g.as_dict()
    except Exception as exc:  # diagnostic only
        return {"error": str(exc)}
