"""Resultants and discriminants of curves with respect to T.

The Sylvester determinant is a polynomial in z of known degree bound, so it is
computed by evaluating at integer points (fraction-free Bareiss elimination on
integer matrices) and interpolating exactly.

Sign convention: ``discriminant_z(curve, normalize=False)`` is the classical
discriminant (-1)^(n(n-1)/2) Res_T(P, P_T) / p_n(z); with ``normalize=True``
(the default) it is reduced to its primitive integer part with positive
leading coefficient.  T^2 - z gives 4z raw and z normalised.
"""

from __future__ import annotations

from fractions import Fraction

from ..exact.poly import Poly
from .guess import AlgebraicCurve


def bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sylvester(f: list, g: list) -> list[list]:
    """Sylvester matrix of f, g given as coefficient lists, highest degree first."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return rows


def interpolate(xs: list[int], ys: list) -> Poly:
    """Exact Newton interpolation through (xs[i], ys[i])."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * Poly([-xs[i], 1]) + coef[i]
    return out


def resultant_T(curve: AlgebraicCurve, other: AlgebraicCurve | None = None) -> Poly:
    """Res_T(P, Q) with formal degrees; Q defaults to dP/dT."""
    f = list(curve.p)
    if other is None:
        g = [q * i for i, q in enumerate(f)][1:]
    else:
        g = list(other.p)
    m, n = len(f) - 1, len(g) - 1
    bound = n * max(q.degree for q in f) + m * max((q.degree for q in g), default=0)
    xs = list(range(bound + 1))
    ys = []
    for x in xs:
        fx = [q(x) for q in reversed(f)]
        gx = [q(x) for q in reversed(g)]
        ys.append(bareiss_det(sylvester(fx, gx)))
    return interpolate(xs, ys)


def discriminant_z(curve: AlgebraicCurve, normalize: bool = True) -> Poly:
    n = curve.degT
    res = resultant_T(curve)
    disc = res.exact_div(curve.p[-1])
    if (n * (n - 1) // 2) % 2:
        disc = -disc
    return disc.primitive() if normalize else disc
