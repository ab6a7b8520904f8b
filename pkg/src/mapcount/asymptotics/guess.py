"""Algebraic curves P(z, T) = sum p_i(z) T^i and guessing them from series.

A curve is stored content-reduced: integer coefficients with gcd 1 and the
leading coefficient of p_degT positive, so two curves that agree up to a
rational factor compare equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from ..errors import AmbiguousKernel, InsufficientData, NotFound
from ..exact.poly import Poly, format_rational, parse_rational, qnorm
from ..exact.series import QQ, TruncSeries


@dataclass(frozen=True)
class AlgebraicCurve:
    p: tuple  # p[i] is the Poly in z multiplying T^i

    def __post_init__(self):
        ps = [q if isinstance(q, Poly) else Poly(q) for q in self.p]
        while ps and ps[-1].is_zero():
            ps.pop()
        if len(ps) < 2:
            raise ValueError("a curve needs degree at least 1 in T")
        object.__setattr__(self, "p", tuple(_content_reduce(ps)))

    @property
    def degT(self) -> int:
        return len(self.p) - 1

    @property
    def degZ(self) -> int:
        return max(q.degree for q in self.p)

    def coeff(self, i: int, j: int):
        return self.p[i][j] if i < len(self.p) else 0

    def __call__(self, z, t):
        acc = 0
        for q in reversed(self.p):
            acc = acc * t + _horner(q.coeffs, z)
        return acc

    def dT(self, z, t):
        acc = 0
        for i in range(self.degT, 0, -1):
            acc = acc * t + i * _horner(self.p[i].coeffs, z)
        return acc

    def dZ(self, z, t):
        acc = 0
        for q in reversed(self.p):
            acc = acc * t + _horner(q.derivative().coeffs, z)
        return acc

    def at_z(self, z0) -> Poly:
        """P(z0, T) as a polynomial in T (z0 rational)."""
        return Poly([q(z0) for q in self.p])

    def derivative_T(self) -> "AlgebraicCurve | None":
        if self.degT < 2:
            return None
        return AlgebraicCurve(tuple(self.p[i] * i for i in range(1, len(self.p))))

    def float_coeffs_at(self, z0) -> list:
        """Coefficients of P(z0, T), highest power first (for numeric root finders)."""
        return [_horner(q.coeffs, z0) for q in reversed(self.p)]

    def residual(self, series: TruncSeries) -> TruncSeries:
        """P(z, series) as a truncated series."""
        n = series.order
        acc = TruncSeries.zero(n)
        for q in reversed(self.p):
            acc = acc * series + TruncSeries(q.coeffs, QQ, order=n)
        return acc

    def vanishes_on(self, series: TruncSeries) -> bool:
        return all(c == 0 for c in self.residual(series).coeffs)

    # -- serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        return {"degT": self.degT, "p": [[format_rational(c) for c in q.coeffs] for q in self.p]}

    @classmethod
    def from_json(cls, obj) -> "AlgebraicCurve":
        if isinstance(obj, str):
            obj = json.loads(obj)
        p = [Poly([parse_rational(c) for c in row]) for row in obj["p"]]
        curve = cls(tuple(p))
        if "degT" in obj and obj["degT"] != curve.degT:
            raise ValueError(f"degT field {obj['degT']} disagrees with the coefficient list")
        return curve

    def to_str(self) -> str:
        parts = []
        for i, q in enumerate(self.p):
            if q.is_zero():
                continue
            body = f"({q.to_str('z')})"
            parts.append(body if i == 0 else f"{body}*T" + (f"^{i}" if i > 1 else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"AlgebraicCurve(degT={self.degT}, degZ={self.degZ})"


def _horner(cs, x):
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _content_reduce(ps: list[Poly]) -> list[Poly]:
    den = 1
    for q in ps:
        for c in q.coeffs:
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
    ints = [[int(c * den) for c in q.coeffs] for q in ps]
    g = 0
    for row in ints:
        for c in row:
            g = gcd(g, c)
    if ints[-1][-1] < 0:
        g = -g
    return [Poly([c // g for c in row]) for row in ints]


# -- exact linear algebra ------------------------------------------------------


def _row_reduce(rows: list[list[int]], ncols: int):
    """Integer row echelon form (each row kept primitive); returns pivot rows."""
    pivots: list[tuple[int, list[int]]] = []
    for row in rows:
        r = list(row)
        for col, prow in pivots:
            a = r[col]
            if a:
                b = prow[col]
                g = gcd(a, b)
                fa, fb = b // g, a // g
                r = [fa * x - fb * y for x, y in zip(r, prow)]
        lead = next((i for i, x in enumerate(r) if x), None)
        if lead is None:
            continue
        g = 0
        for x in r:
            g = gcd(g, x)
        r = [x // g for x in r]
        pivots.append((lead, r))
        if len(pivots) == ncols:
            break
    return pivots


def nullspace(rows: list[list[int]], ncols: int) -> list[list]:
    """Basis of the rational nullspace of an integer matrix."""
    piv = _row_reduce(rows, ncols)
    # back-substitute to reduced form with Fractions (pivot count is small)
    piv.sort()
    red: list[tuple[int, list]] = []
    for col, r in reversed(piv):
        r = [Fraction(x, r[col]) for x in r]
        for c2, r2 in red:
            if r[c2]:
                f = r[c2]
                r = [x - f * y for x, y in zip(r, r2)]
        red.append((col, r))
    pivot_cols = {c for c, _ in red}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for col, r in red:
            v[col] = -r[free]
        basis.append([qnorm(x) for x in v])
    return basis


# -- guessing ------------------------------------------------------------------


def _power_table(series: TruncSeries, K: int) -> list[list[Fraction]]:
    n = series.order
    out = [TruncSeries.one(n)]
    for _ in range(K):
        out.append(out[-1] * series)
    return [list(s.coeffs) for s in out]


def _system(powers, K: int, D: int, n_eq: int) -> list[list[int]]:
    rows = []
    for n in range(n_eq):
        row = []
        for i in range(K + 1):
            ci = powers[i]
            for j in range(D + 1):
                row.append(ci[n - j] if n >= j else 0)
        den = 1
        for c in row:
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        rows.append([int(c * den) for c in row])
    return rows


def _curve_from_vector(v, K: int, D: int) -> AlgebraicCurve:
    p = [Poly(v[i * (D + 1) : (i + 1) * (D + 1)]) for i in range(K + 1)]
    return AlgebraicCurve(tuple(p))


@dataclass
class GuessResult:
    curve: AlgebraicCurve
    equations_used: int
    verified_orders: int  # orders beyond the solving window checked to vanish

    def as_dict(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "degT": self.curve.degT,
            "degZ": self.curve.degZ,
            "equations_used": self.equations_used,
            "verified_extra_orders": self.verified_orders,
        }


def guess_min_poly(series: TruncSeries, degT_max: int, degZ_max: int, verify: int = 10,
                   return_report: bool = False):
    """Smallest (degT first, then degZ) curve annihilating ``series``.

    The last ``verify`` known coefficients are kept out of the linear system
    and checked afterwards, together with the full residual P(z, series).
    """
    if series.ring is not QQ:
        raise TypeError("guessing works on rational series")
    N = series.order
    powers = _power_table(series, degT_max)
    for K in range(1, degT_max + 1):
        unknowns = (K + 1) * (degZ_max + 1)
        n_eq = N - verify
        if n_eq < unknowns:
            raise InsufficientData(
                f"need {unknowns + verify} coefficients for degT={K}, degZ={degZ_max}; have {N}"
            )
        ker = nullspace(_system(powers, K, degZ_max, n_eq), unknowns)
        if not ker:
            continue
        # multiples z^k P of the minimal P fill a kernel of dimension degZ_max - d + 1
        d = degZ_max - len(ker) + 1
        ker_d = nullspace(_system(powers, K, d, N - verify), (K + 1) * (d + 1))
        if len(ker_d) != 1:
            raise AmbiguousKernel(
                f"kernel of dimension {len(ker_d)} at degT={K}, degZ={d}; use more coefficients"
            )
        curve = _curve_from_vector(ker_d[0], K, d)
        if curve.degT != K or not curve.vanishes_on(series):
            raise AmbiguousKernel("candidate curve fails on the held-out coefficients")
        result = GuessResult(curve, N - verify, verify)
        return result if return_report else curve
    raise NotFound(f"no curve with degT <= {degT_max}, degZ <= {degZ_max}")
