"""Locate the dominant singularity of the branch of a curve through a series.

Candidates are the positive real roots of disc(z) * p_degT(z), visited in
increasing order.  The branch is followed numerically from a point well
inside the disc of convergence (where the truncated series pins it down) up
to rho (1 - 2^-10) just below each candidate.  A candidate is the singularity
when the branch meets a multiple root of P(rho, T) there and its local
expansion has a non-integer exponent; otherwise the branch is analytic at the
candidate and the walk continues past it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from ..errors import BranchSelectionAmbiguous, NotFound
from ..exact.poly import format_rational
from ..exact.series import TruncSeries
from .guess import AlgebraicCurve
from .puiseux import DPS, SingularExpansion, to_mp, nearest_fibre_root, puiseux_branch
from .resultant import discriminant_z
from .roots import IsolatedRoot, isolate_real_roots

PROBE = Fraction(1, 1024)


def evaluate_series(series: TruncSeries, z) -> mpmath.mpf:
    z = to_mp(z)
    acc = mpmath.mpf(0)
    for c in reversed(series.coeffs):
        acc = acc * z + to_mp(c)
    return acc


def _roots_at(curve: AlgebraicCurve, z):
    cs = curve.float_coeffs_at(z)
    while cs and cs[0] == 0:
        cs.pop(0)
    if len(cs) < 2:
        return []
    return mpmath.polyroots(cs, maxsteps=200, extraprec=2 * DPS)


def _step(curve, z, t, zn):
    """Root at zn nearest the tangent prediction from (z, t), or None if not clearly separated."""
    pt = curve.dT(z, t)
    pred = t - curve.dZ(z, t) / pt * (zn - z) if pt != 0 else t
    rts = sorted(_roots_at(curve, zn), key=lambda r: abs(r - pred))
    if not rts:
        raise BranchSelectionAmbiguous("curve has no roots on the path")
    if len(rts) > 1 and abs(rts[0] - pred) * 8 >= abs(rts[1] - pred):
        return None
    return rts[0]


def track_branch(curve: AlgebraicCurve, z_from, t_from, z_to, max_steps: int = 100000):
    """Continue the root t(z) of P(z, t) = 0 along the real segment [z_from, z_to].

    A step is accepted when the root nearest the tangent prediction is eight
    times closer than any other root, and two half steps land on the same
    root; otherwise the step is shortened.  This is a numerical
    continuation, not a certified one.
    """
    z, t = to_mp(z_from), mpmath.mpc(t_from)
    z_to = to_mp(z_to)
    h = (z_to - z) / 64
    tol = mpmath.mpf(10) ** (-(DPS // 3))
    steps = 0
    while z != z_to:
        steps += 1
        if steps > max_steps:
            raise BranchSelectionAmbiguous("branch tracking did not converge")
        zn = z_to if abs(z_to - z) <= abs(h) else z + h
        zm = (z + zn) / 2
        full = _step(curve, z, t, zn)
        mid = _step(curve, z, t, zm) if full is not None else None
        half = _step(curve, zm, mid, zn) if mid is not None else None
        if half is not None and abs(full - half) <= tol * max(1, abs(full)):
            z, t = zn, full
            h *= 1.5
        else:
            h /= 4
            if abs(h) < tol:
                raise BranchSelectionAmbiguous("branches too close to separate")
    return t


@dataclass
class DominantSingularity:
    rho: object  # Fraction or IsolatedRoot
    t0: object
    expansion: SingularExpansion
    tracked_value: object
    candidates: list = field(default_factory=list)  # (rho, verdict) visited in order

    @property
    def exact(self) -> bool:
        return not isinstance(self.rho, IsolatedRoot)

    def growth(self):
        if self.exact:
            return 1 / Fraction(self.rho)
        return (1 / self.rho.hi, 1 / self.rho.lo)

    def as_dict(self) -> dict:
        rho = format_rational(self.rho) if self.exact else self.rho.as_dict()
        g = self.growth()
        return {
            "rho": rho,
            "rho_float": float(self.rho) if self.exact else float(self.rho.midpoint()),
            "growth": format_rational(g) if self.exact else [format_rational(x) for x in g],
            "provenance": "exact" if self.exact else "certified-interval",
            "t0": format_rational(self.t0) if isinstance(self.t0, (int, Fraction)) else mpmath.nstr(self.t0, 20),
            "expansion": self.expansion.as_dict(),
            "candidates": [[c, v] for c, v in self.candidates],
        }


def singularity_candidates(curve: AlgebraicCurve, lo=0, hi=1) -> list:
    """Positive roots of disc * lc in (lo, hi], rational ones made exact."""
    d = discriminant_z(curve) * curve.p[-1]
    out = []
    for r in isolate_real_roots(d, lo, hi):
        if r.is_exact() and r.lo == lo:
            continue
        v = r.rational_value()
        out.append(v if v is not None else r)
    return out


def _is_multiple(curve: AlgebraicCurve, rho, t0) -> bool:
    if not isinstance(rho, IsolatedRoot) and isinstance(t0, (int, Fraction)):
        return curve.dT(Fraction(rho), Fraction(t0)) == 0
    with mpmath.workdps(DPS):
        r = to_mp(rho)
        scale = max(abs(c) for c in curve.float_coeffs_at(r)) * max(1, abs(to_mp(t0))) ** curve.degT
        return abs(curve.dT(r, to_mp(t0))) <= scale * mpmath.mpf(10) ** (-(DPS // 4))


def dominant_singularity(curve: AlgebraicCurve, series: TruncSeries, hi=1, n_terms: int = 6,
                         width=Fraction(1, 10**15)) -> DominantSingularity:
    cands = singularity_candidates(curve, 0, hi)
    if not cands:
        raise NotFound("no candidate singularity in the interval")
    for c in cands:
        if isinstance(c, IsolatedRoot):
            c.refine(width)
    with mpmath.workdps(DPS):
        first = to_mp(cands[0])
        z = first / 2
        t = mpmath.mpc(evaluate_series(series, z))
        roots = sorted(_roots_at(curve, z), key=lambda r: abs(r - t))
        t = roots[0]
        visited = []
        for c in cands:
            rf = to_mp(c)
            zp = rf * (1 - to_mp(PROBE))
            tp = track_branch(curve, z, t, zp)
            label = format_rational(c) if not isinstance(c, IsolatedRoot) else mpmath.nstr(rf, 15)
            if abs(mpmath.im(tp)) > mpmath.mpf(10) ** (-(DPS // 3)):
                raise BranchSelectionAmbiguous("the tracked branch left the real axis")
            tp = mpmath.re(tp)
            t0 = nearest_fibre_root(curve, c, tp)
            if not _is_multiple(curve, c, t0):
                visited.append((label, "analytic: simple root"))
                z, t = zp, tp
                continue
            exp = puiseux_branch(curve, c, tp, n_terms=n_terms, t0=t0, probe=PROBE)
            if exp.singular_term() is not None:
                visited.append((label, "singular"))
                return DominantSingularity(c, t0, exp, tp, visited)
            # analytic crossing of two branches: step over using the expansion
            visited.append((label, "analytic: branches cross"))
            z = rf * (1 + to_mp(PROBE))
            t = mpmath.mpc(exp.evaluate(-PROBE))
    raise NotFound("the branch is analytic at every candidate in the interval")


def branch_series(curve: AlgebraicCurve, order: int, t00=None) -> TruncSeries:
    """Power-series branch through (0, t00) by Newton iteration.

    ``t00`` defaults to the unique simple rational root of P(0, T); the root
    must be simple so the branch is determined by it.
    """
    from ..exact.series import QQ, series_inverse

    fibre = curve.at_z(0)
    if t00 is None:
        sq = fibre.squarefree()
        bound = 1 + max(abs(Fraction(c) / sq.lc()) for c in sq.coeffs)
        simple = []
        for r in isolate_real_roots(sq, -bound, bound):
            v = r.rational_value()
            if v is not None and fibre.derivative()(v) != 0:
                simple.append(v)
        if len(simple) != 1:
            raise NotFound("P(0, T) has no unique simple rational root; pass t00 or a series")
        t00 = simple[0]
    if fibre.derivative()(t00) == 0 or fibre(t00) != 0:
        raise NotFound("t00 must be a simple root of P(0, T)")

    def evaluate(polys, T, n):
        acc = TruncSeries.zero(n)
        for q in reversed(polys):
            acc = acc * T + TruncSeries(q.coeffs, QQ, order=n)
        return acc

    dps = [q * i for i, q in enumerate(curve.p)][1:]
    T = TruncSeries([t00], QQ, order=1)
    n = 1
    while n < order:
        n = min(2 * n, order)
        T = TruncSeries(T.coeffs, QQ, order=n)
        T = T - evaluate(curve.p, T, n) * series_inverse(evaluate(dps, T, n))
    return T


def analyse(series: TruncSeries | None = None, curve: AlgebraicCurve | None = None, degT_max: int = 6,
            degZ_max: int = 10, hi=1, verify: int = 10) -> dict:
    """Guess (if needed), locate the dominant singularity and transfer."""
    from .guess import guess_min_poly
    from .transfer import transfer

    if curve is None:
        curve = guess_min_poly(series, degT_max, degZ_max, verify=verify)
    if series is None:
        series = branch_series(curve, 60)
    ds = dominant_singularity(curve, series, hi=hi)
    form = transfer(ds.expansion)
    return {"curve": curve, "singularity": ds, "asymptotic": form}
