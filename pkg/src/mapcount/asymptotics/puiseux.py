"""Newton-Puiseux expansion of curve branches at a point (rho, t0).

With u = 1 - z/rho and S = T - t0 the curve becomes Q(u, S) = 0, and each
branch is S = sum c_k u^(e_k) with rational exponents found one term at a time
from the Newton polygon of Q.  When rho, t0 and every characteristic root are
rational the whole computation is exact.  Otherwise it falls back to mpmath at
high precision, and the result is marked uncertified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

from ..errors import BranchSelectionAmbiguous
from ..exact.poly import Poly, format_rational, qnorm
from .guess import AlgebraicCurve
from .roots import IsolatedRoot, isolate_real_roots

DPS = 60


class _NeedNumeric(Exception):
    pass


@dataclass
class SingularExpansion:
    """Branch T = sum coeff * (1 - z/rho)^exponent near z = rho."""

    rho: object  # Fraction/int or IsolatedRoot
    terms: list  # [(Fraction exponent, coefficient)], increasing exponents
    exact: bool = True
    note: str = ""

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly increasing")

    @property
    def t0(self):
        return self.coefficient(0)

    def coefficient(self, exponent):
        exponent = Fraction(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        return 0

    def singular_term(self):
        """First term whose exponent is not a non-negative integer."""
        for e, c in self.terms:
            if e.denominator != 1 or e < 0:
                return e, c
        return None

    def evaluate(self, u):
        """Sum of the terms at u = 1 - z/rho (negative u allowed for integer exponents)."""
        u = to_mp(u)
        acc = mpmath.mpf(0)
        for e, c in self.terms:
            if e.denominator == 1:
                acc += to_mp(c) * u ** int(e)
            else:
                acc += to_mp(c) * u ** to_mp(e)
        return acc

    def rho_float(self) -> float:
        return float(self.rho)

    def matches_map_shape(self) -> bool:
        """t0 > 0, a negative linear term and a positive (1 - z/rho)^(3/2) term."""
        t0, t1, t3 = self.coefficient(0), self.coefficient(1), self.coefficient(Fraction(3, 2))
        return t0 > 0 and t1 < 0 and t3 > 0

    def as_dict(self) -> dict:
        rho = self.rho.as_dict() if isinstance(self.rho, IsolatedRoot) else format_rational(self.rho)
        return {
            "rho": rho,
            "exact": self.exact,
            "terms": [
                [format_rational(e), format_rational(c) if self.exact else mpmath.nstr(c, 20)]
                for e, c in self.terms
            ],
            "note": self.note,
        }


# -- bivariate polynomial helpers ---------------------------------------------


def _shift_curve(curve: AlgebraicCurve, rho, t0, exact: bool) -> dict:
    """Q(u, S) = P(rho (1 - u), t0 + S) as {(a, b): coeff}."""
    Q: dict = {}
    for i, p in enumerate(curve.p):
        if p.is_zero():
            continue
        if exact:
            pu = p.compose_linear(rho, -rho).coeffs
        else:
            pu = _compose_linear_mp(p.coeffs, rho)
        # (t0 + S)^i
        for b in range(i + 1):
            w = comb(i, b) * t0 ** (i - b)
            for a, c in enumerate(pu):
                if c:
                    Q[(a, b)] = Q.get((a, b), 0) + c * w
    return Q


def _compose_linear_mp(cs, rho):
    out = [mpmath.mpf(0)]
    lin = (mpmath.mpf(rho), -mpmath.mpf(rho))
    for c in reversed(cs):
        new = [mpmath.mpf(0)] * (len(out) + 1)
        for k, v in enumerate(out):
            new[k] += v * lin[0]
            new[k + 1] += v * lin[1]
        new[0] += c
        out = new
    return out


def _clean(Q: dict, exact: bool) -> dict:
    if exact:
        return {k: qnorm(v) for k, v in Q.items() if v != 0}
    scale = max((abs(v) for v in Q.values()), default=mpmath.mpf(0))
    tol = scale * mpmath.mpf(10) ** (-(DPS // 2))
    return {k: v for k, v in Q.items() if abs(v) > tol}


def _slopes(Q: dict) -> list[Fraction]:
    """Positive gamma for which min(a + gamma b) is attained twice, one with b smaller."""
    pts = list(Q)
    out = set()
    for (a1, b1) in pts:
        for (a2, b2) in pts:
            if b1 > b2 and a2 > a1:
                g = Fraction(a2 - a1, b1 - b2)
                m = min(a + g * b for a, b in pts)
                if a1 + g * b1 == m and a2 + g * b2 == m:
                    out.add(g)
    return sorted(out)


def _char_poly(Q: dict, g: Fraction) -> list:
    m = min(a + g * b for a, b in Q)
    bs = {b: v for (a, b), v in Q.items() if a + g * b == m}
    deg = max(bs)
    return [bs.get(b, 0) for b in range(deg + 1)]


def _real_roots(cs: list, exact: bool) -> list:
    """Distinct nonzero real roots (with multiplicity) of sum cs[b] c^b."""
    if exact:
        p = Poly(cs)
        while p[0] == 0:
            p = p.div_by_var()
        if p.degree <= 0:
            return []
        bound = 1 + max(abs(Fraction(c) / p.lc()) for c in p.coeffs)
        out = []
        for r in isolate_real_roots(p, -bound, bound):
            v = r.rational_value()
            if v is None:
                raise _NeedNumeric
            mult = 0
            q = p
            lin = Poly([-v, 1])
            while True:
                qq, rem = q.divmod(lin)
                if not rem.is_zero():
                    break
                q, mult = qq, mult + 1
            out.append((v, mult))
        return out
    # numeric: drop trailing/leading zeros, cluster close roots
    cs = list(cs)
    while cs and abs(cs[0]) == 0:
        cs.pop(0)
    if len(cs) < 2:
        return []
    roots = mpmath.polyroots(list(reversed(cs)), maxsteps=200, extraprec=4 * DPS)
    tol = mpmath.mpf(10) ** (-(DPS // 4))
    reals = sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) <= tol)
    out = []
    for r in reals:
        if out and abs(out[-1][0] - r) <= tol * max(1, abs(r)):
            v, m = out[-1]
            out[-1] = ((v * m + r) / (m + 1), m + 1)
        else:
            out.append((r, 1))
    return out


def _substitute(Q: dict, p: int, q: int, c, exact: bool) -> dict:
    """Q(v^q, v^p (c + S)) / v^min, after dropping the cancelled terms."""
    out: dict = {}
    for (a, b), v in Q.items():
        base = q * a + p * b
        for k in range(b + 1):
            w = comb(b, k) * c ** (b - k)
            key = (base, k)
            out[key] = out.get(key, 0) + v * w
    out = _clean(out, exact)
    m = min(a for a, _ in out) if out else 0
    return {(a - m, b): v for (a, b), v in out.items()}


def _branches(Q: dict, exact: bool, n_terms: int, scale: int = 1, prefix=()):
    """All real branches S = sum c u^e as lists of (exponent, coeff)."""
    Q = _clean(Q, exact)
    if len(prefix) >= n_terms:
        return [list(prefix)]
    if not any(b == 0 for _, b in Q):
        # S = 0 solves Q exactly: the expansion terminates
        return [list(prefix)]
    out = []
    for g in _slopes(Q):
        roots = _real_roots(_char_poly(Q, g), exact)
        num, den = g.numerator, g.denominator
        for c, _mult in roots:
            # exponents of later terms are relative to this one
            e = (prefix[-1][0] if prefix else 0) + Fraction(num, scale * den)
            Q1 = _substitute(Q, num, den, c, exact)
            out.extend(_branches(Q1, exact, n_terms, scale * den, prefix + ((e, c),)))
    return out


def to_mp(x):
    """mpmath number from an int, Fraction, mpmath value or IsolatedRoot (midpoint)."""
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    if isinstance(x, IsolatedRoot):
        x.refine(Fraction(1, 10 ** (DPS + 5)))
        x = x.midpoint()
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def local_branches(curve: AlgebraicCurve, rho, t0, n_terms: int = 4):
    """Every real branch of the curve through (rho, t0), as SingularExpansions."""
    exact_inputs = not isinstance(rho, IsolatedRoot) and not isinstance(t0, mpmath.mpf)
    if exact_inputs:
        try:
            Q = _shift_curve(curve, Fraction(rho), Fraction(t0), True)
            raw = _branches(Q, True, n_terms - 1)
            return [
                SingularExpansion(rho, [(Fraction(0), qnorm(Fraction(t0)))] + [(e, qnorm(c)) for e, c in br])
                for br in raw
            ]
        except _NeedNumeric:
            pass
    with mpmath.workdps(DPS):
        r, t = to_mp(rho), to_mp(t0)
        Q = _shift_curve(curve, r, t, False)
        raw = _branches(Q, False, n_terms - 1)
        return [
            SingularExpansion(rho, [(Fraction(0), t)] + list(br), exact=False,
                              note="numeric Newton polygon (uncertified)")
            for br in raw
        ]


def puiseux_branch(curve: AlgebraicCurve, rho, branch_selector, n_terms: int = 4,
                   t0=None, probe=Fraction(1, 1024)) -> SingularExpansion:
    """Expansion of the branch picked by ``branch_selector``.

    ``branch_selector`` is the value of the wanted branch at z = rho (1 - probe)
    (as obtained by analytic continuation of the series), or a callable that
    receives the candidate expansions and returns one.  ``t0`` defaults to the
    root of P(rho, T) nearest that value.
    """
    if t0 is None:
        if callable(branch_selector):
            raise ValueError("t0 is required with a callable selector")
        t0 = nearest_fibre_root(curve, rho, branch_selector)
    cands = local_branches(curve, rho, t0, n_terms)
    if callable(branch_selector):
        return branch_selector(cands)
    target = to_mp(branch_selector)
    with mpmath.workdps(DPS):
        dist = sorted((abs(b.evaluate(probe) - target), i) for i, b in enumerate(cands))
    if not dist:
        raise BranchSelectionAmbiguous("no real branch through the point")
    # truncation error of a few terms at u = probe is about probe^(last exponent)
    if len(dist) > 1 and dist[1][0] <= 4 * dist[0][0] + mpmath.mpf(10) ** -(DPS // 2):
        raise BranchSelectionAmbiguous(
            f"two branches within {mpmath.nstr(dist[1][0], 5)} of the tracked value"
        )
    return cands[dist[0][1]]


def nearest_fibre_root(curve: AlgebraicCurve, rho, value):
    """Real root of P(rho, T) closest to ``value``: exact when rho is rational and the root is."""
    if not isinstance(rho, IsolatedRoot):
        sq = curve.at_z(Fraction(rho)).squarefree()
        bound = 1 + max(abs(Fraction(c) / sq.lc()) for c in sq.coeffs)
        best, best_d = None, None
        with mpmath.workdps(DPS):
            target = to_mp(value)
            for r in isolate_real_roots(sq, -bound, bound):
                v = r.rational_value()
                if v is None:
                    r.refine(Fraction(1, 10 ** (DPS + 5)))
                    v = to_mp(r.midpoint())
                d = abs(to_mp(v) - target)
                if best_d is None or d < best_d:
                    best, best_d = v, d
        if best is None:
            raise BranchSelectionAmbiguous("P(rho, T) has no real root")
        return best
    with mpmath.workdps(DPS):
        coeffs = curve.float_coeffs_at(to_mp(rho))
        rts = mpmath.polyroots(coeffs, maxsteps=200, extraprec=2 * DPS)
        return mpmath.re(min(rts, key=lambda r: abs(r - to_mp(value))))
