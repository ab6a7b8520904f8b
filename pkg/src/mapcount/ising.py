"""Bicoloured maps from the functional equation with two catalytic variables.

With x marking the root-vertex degree, y the root-face degree and ν the
monochromatic edges, the series M(x,y) = M(x,y; z,ν) satisfies

    M(x,y) = 1 + xyz (2y + (ν-1)(y-1)) M(x,y) M(1,y) + xyz (xν-1) M(x,y) M(x,1)
               + xyz (ν-1) Δx M + xyz Δy M,

where Δx f = (x f(x,y) - f(1,y)) / (x-1) and Δy f = (y f(x,y) - f(x,1)) / (y-1).
Every term but the constant carries a factor z, so coefficient n of M is
determined by coefficients below n.

Two solvers are provided.  :func:`solve_catalytic_reference` keeps full sparse
polynomials in x, y, ν and applies the finite differences by synthetic
division; it is exact but slow.  :func:`solve_catalytic_bicoloured` works in
the shifted variables X = x-1, Y = y-1, where Δx and Δy become index shifts
(coefficient (i,j) of Δx f is f[i+1,j] + f[i,j]).  Only the final values
M(1,1), ∂x M(x,1) and ∂y M(1,y) at 1 are wanted, and each finite difference
lowers the degree by one per power of z, so coefficient n is only kept up to
degree N-n in X and Y.  The bilinear terms are sums of convolutions done in a
single Kronecker product per order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConsistencyFailure, MismatchAt
from .exact import kronecker
from .exact.catalytic import CatalyticPoly
from .exact.poly import Poly, qnorm
from .exact.series import CAT, NU, QQ, TruncSeries, series_inverse, solve_fixed_point


@dataclass
class CatalyticSolution:
    """Solution of the bicoloured equation to ``order``.

    ``total``, ``dx`` and ``dy`` are series over Q[ν] (or over Q when ν was
    fixed): M(1,1), ∂x M(x,1)|_{x=1} and ∂y M(1,y)|_{y=1}.  ``jets[n]`` holds
    coefficient n of M(1+X, 1+Y) as an integer array indexed [X, Y, ν]
    (truncated in X and Y).  ``M_xy`` is the full series over x, y, ν and is
    only present for the reference solver.
    """

    order: int
    total: TruncSeries
    dx: TruncSeries
    dy: TruncSeries
    jets: list = field(default_factory=list, repr=False)
    M_xy: TruncSeries | None = field(default=None, repr=False)
    nu_value: object = None

    def slice_x1(self) -> TruncSeries:
        """M(1,y) as a series over catalytic polynomials."""
        return self._need_full().map(lambda c: c.substitute_one("x"))

    def slice_y1(self) -> TruncSeries:
        """M(x,1) as a series over catalytic polynomials."""
        return self._need_full().map(lambda c: c.substitute_one("y"))

    def _need_full(self):
        if self.M_xy is None:
            raise ValueError("full catalytic series only kept by the reference solver")
        return self.M_xy


@dataclass
class IsingSplit:
    """Series split by the colour of the root edge and by deletion/contraction."""

    total: TruncSeries
    mono: TruncSeries
    bi: TruncSeries
    deletion: TruncSeries
    contraction: TruncSeries

    def slice(self, name: str) -> TruncSeries:
        return {
            "total": self.total, "mono": self.mono, "bi": self.bi,
            "del": self.deletion, "con": self.contraction,
        }[name]


# ---------------------------------------------------------------------------
# reference solver over sparse catalytic polynomials
# ---------------------------------------------------------------------------

def _rhs_reference(ms: list, n: int, nu) -> CatalyticPoly:
    """Coefficient n of the right-hand side from coefficients < n."""
    x, y = CatalyticPoly.X, CatalyticPoly.Y
    one = CatalyticPoly.monomial()
    p1 = CatalyticPoly()
    p2 = CatalyticPoly()
    for k in range(n):
        p1 = p1 + ms[k] * ms[n - 1 - k].substitute_one("x")
        p2 = p2 + ms[k] * ms[n - 1 - k].substitute_one("y")
    prev = ms[n - 1]
    dx = (x * prev).divided_difference("x", 1)
    dy = (y * prev).divided_difference("y", 1)
    c1 = 2 * y + (nu - one) * (y - one)
    c2 = x * nu - one
    return x * y * (c1 * p1 + c2 * p2 + (nu - one) * dx + dy)


def solve_catalytic_reference(N: int, nu_value=None) -> CatalyticSolution:
    """Exact order-by-order solution with full x, y, ν dependence (small N)."""
    if N < 1:
        raise ValueError("order must be at least 1")
    nu = CatalyticPoly.NU if nu_value is None else CatalyticPoly.monomial(c=nu_value)
    ms = [CatalyticPoly.monomial()]
    for n in range(1, N):
        ms.append(_rhs_reference(ms, n, nu))
    M = TruncSeries(ms, CAT)
    ring = NU if nu_value is None else QQ

    def proj(c):
        p = c.to_poly_nu()
        return p if nu_value is None else p[0]

    total = M.map(lambda c: proj(c.substitute_one("x").substitute_one("y")), ring)
    dx = M.map(lambda c: proj(c.substitute_one("y").derivative_at_one("x")), ring)
    dy = M.map(lambda c: proj(c.substitute_one("x").derivative_at_one("y")), ring)
    return CatalyticSolution(N, total, dx, dy, M_xy=M, nu_value=nu_value)


def residual_reference(sol: CatalyticSolution) -> TruncSeries:
    """RHS(M) - M for a reference solution; identically zero when solved."""
    M = sol.M_xy
    nu = CatalyticPoly.NU if sol.nu_value is None else CatalyticPoly.monomial(c=sol.nu_value)
    out = [M[0] - CatalyticPoly.monomial()]
    for n in range(1, sol.order):
        out.append(_rhs_reference(list(M.coeffs), n, nu) - M[n])
    return TruncSeries(out, CAT)


# ---------------------------------------------------------------------------
# jet solver in shifted variables
# ---------------------------------------------------------------------------

def _fit(a: np.ndarray, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=object)
    sl = tuple(slice(0, min(a.shape[d], shape[d])) for d in range(3))
    out[sl] = a[sl]
    return out


def _times(a: np.ndarray, axis: int) -> np.ndarray:
    """Multiply by the variable of ``axis`` keeping the shape (top slice dropped)."""
    out = np.zeros(a.shape, dtype=object)
    src = [slice(None)] * 3
    dst = [slice(None)] * 3
    src[axis] = slice(0, a.shape[axis] - 1)
    dst[axis] = slice(1, a.shape[axis])
    out[tuple(dst)] = a[tuple(src)]
    return out


def _jet_orders(N: int, n: int) -> int:
    # root degrees are at most 2n, and only degree N-n is needed downstream
    return min(2 * n, N - n)


def solve_catalytic_bicoloured(N: int, nu_value: int | None = None, progress=None) -> CatalyticSolution:
    """Solve the bicoloured equation to order N (coefficients z^0 .. z^(N-1)).

    With ``nu_value`` an integer, ν is fixed from the start, which is much
    cheaper; the result series are then over Q.
    """
    if N < 1:
        raise ValueError("order must be at least 1")
    if nu_value is not None and not isinstance(nu_value, int):
        raise TypeError("fixed ν must be an integer for the jet solver; evaluate afterwards instead")
    fixed = nu_value is not None

    def times_nu(a):
        return a * nu_value if fixed else _times(a, 2)

    jets = [np.ones((1, 1, 1), dtype=object)]
    for n in range(1, N):
        D = _jet_orders(N, n)
        shape = (D + 1, D + 1, 1 if fixed else n + 1)
        p1 = kronecker.sum_of_products(
            [(jets[k], jets[n - 1 - k][:1]) for k in range(n)], shape
        )
        p2 = kronecker.sum_of_products(
            [(jets[k], jets[n - 1 - k][:, :1]) for k in range(n)], shape
        )
        prev = _fit(jets[n - 1], (D + 2, D + 2, shape[2]))
        dX = prev[1:, :-1] + prev[:-1, :-1]
        dY = prev[:-1, 1:] + prev[:-1, :-1]
        # xy [ (2 + (ν+1)Y) P1 + ((ν-1) + νX) P2 + (ν-1) ΔX + ΔY ]
        yp1 = _times(p1, 1)
        q = 2 * p1 + yp1 + times_nu(yp1)
        q = q - p2 + times_nu(p2 + _times(p2, 0))
        q = q - dX + times_nu(dX) + dY
        q = q + _times(q, 0)
        q = q + _times(q, 1)
        jets.append(q)
        if progress:
            progress(n)
    ring = QQ if fixed else NU

    def coeff(a, i, j):
        if a.shape[0] <= i or a.shape[1] <= j:
            return ring.zero
        v = a[i, j]
        return int(v[0]) if fixed else Poly([int(c) for c in v])

    total = TruncSeries([coeff(a, 0, 0) for a in jets], ring)
    dx = TruncSeries([coeff(a, 1, 0) for a in jets], ring)
    dy = TruncSeries([coeff(a, 0, 1) for a in jets], ring)
    return CatalyticSolution(N, total, dx, dy, jets=jets, nu_value=nu_value)


# ---------------------------------------------------------------------------
# root-edge split
# ---------------------------------------------------------------------------

def split_by_root_edge(sol: CatalyticSolution, check: bool = True) -> IsingSplit:
    """Split M(1,1) by what happens to the root edge.

    Deleting the root edge and letting y -> 1 gives
    M_del = 2zM^2 + zM + z ∂y M(1,y)|_1; contracting it and letting x -> 1 gives
    M_con = zM^2 + zM + z ∂x M(x,1)|_1.  A colouring with a bichromatic root edge
    is counted by the deleted map but not by the contracted one, and a
    monochromatic root edge contributes ν times the contracted weight, so
    M_bi = M_del - M_con and M_mono = ν M_con.
    """
    M, N = sol.total, sol.order
    z = TruncSeries.z(N, M.ring)
    M2 = M * M
    deletion = z * (2 * M2 + M + sol.dy)
    contraction = z * (M2 + M + sol.dx)
    deletion, contraction = deletion.truncate(N), contraction.truncate(N)
    bi = deletion - contraction
    if sol.nu_value is None:
        mono = contraction * Poly.var()
    else:
        mono = contraction.scale(sol.nu_value)
    split = IsingSplit(M, mono, bi, deletion, contraction)
    if check:
        lhs = TruncSeries.one(N, M.ring) + mono + bi
        if lhs != M:
            bad = next(i for i in range(N) if lhs[i] != M[i])
            raise ConsistencyFailure(f"1 + M_mono + M_bi differs from M at z^{bad}")
        if sol.nu_value is None:
            mono.div_nu()
    return split


def deletion_identity_residual(sol: CatalyticSolution) -> TruncSeries:
    """M = 1 + M_del + (ν-1) M_con must hold; returns the difference."""
    s = split_by_root_edge(sol, check=False)
    nu = Poly.var() if sol.nu_value is None else sol.nu_value
    return s.total - (TruncSeries.one(sol.order, s.total.ring) + s.deletion + s.contraction * (nu - 1))


# ---------------------------------------------------------------------------
# rational parametrisation
# ---------------------------------------------------------------------------

def _param_parts(S, nu, one):
    num = one + S * (3 * nu) - S * S * (3 * nu) - S**3 * (nu * nu)
    den = one - 2 * S + S**3 * (2 * nu * nu) - S**4 * (nu * nu)
    return num, den


def parametrised_series(N: int, nu_value=None) -> tuple[TruncSeries, TruncSeries]:
    """Return (M, S) from the rational parametrisation of M(z,ν).

    S is the unique series with S(0) = 0 solving
    S = z (1 + 3νS - 3νS^2 - ν^2S^3)^2 / (1 - 2S + 2ν^2S^3 - ν^2S^4).
    """
    ring = NU if nu_value is None else QQ
    nu = Poly.var() if nu_value is None else qnorm(Fraction(nu_value))
    one = TruncSeries.one(N, ring)
    z = TruncSeries.z(N, ring)

    def step(X):
        num, den = _param_parts(X[0], nu, one)
        return [z * num * num * series_inverse(den)]

    S = solve_fixed_point(step, 1, N, ring)[0]
    one = TruncSeries.one(N, ring)
    num, den = _param_parts(S, nu, one)
    poly = (
        one - S * (3 + nu) + S * S * (1 + 2 * nu) - S**3 * (nu * (1 - 5 * nu))
        + S**4 * (nu * (1 - 6 * nu)) + S**5 * (2 * nu * nu * (1 - nu)) + S**6 * (nu**3)
    )
    M = num * poly * series_inverse(den * den)
    return M.truncate(N), S


@dataclass
class ParamReport:
    order: int
    passed: bool
    first_mismatch: int | None
    S: TruncSeries

    def as_dict(self):
        return {"order": self.order, "passed": self.passed, "first_mismatch": self.first_mismatch}


def check_parametrisation(N: int, sol: CatalyticSolution | None = None, raise_on_fail=True) -> ParamReport:
    """Compare M(1,1) from the catalytic solver with the rational parametrisation."""
    if N < 2:
        raise ValueError("order must be at least 2")
    if sol is None:
        sol = solve_catalytic_bicoloured(N)
    M, S = parametrised_series(N, sol.nu_value)
    cat = sol.total.truncate(N)
    bad = next((i for i in range(N) if M[i] != cat[i]), None)
    if bad is not None and raise_on_fail:
        raise MismatchAt(bad)
    return ParamReport(N, bad is None, bad, S)


# ---------------------------------------------------------------------------
# uncoloured maps
# ---------------------------------------------------------------------------

def solve_catalytic_uncoloured(N: int) -> TruncSeries:
    """M(z) = M(z,1) where M(z,y) = 1 + y^2 z M(z,y)^2 + yz (y M(z,y) - M(z,1)) / (y-1).

    Coefficient n is a polynomial in y of degree at most 2n, kept as a dense
    list; the divided difference is a synthetic division at y = 1.
    """
    if N < 1:
        raise ValueError("order must be at least 1")
    ms = [[1]]
    for n in range(1, N):
        size = 2 * n + 1
        acc = [0] * size
        for k in range(n):
            prod = kronecker.mul_1d(ms[k], ms[n - 1 - k])
            for i, c in enumerate(prod):
                acc[i + 2] += c
        prev = ms[n - 1]
        # (y f(y) - f(1)) / (y - 1): synthetic division of y*f
        yf = [0] + prev
        q = 0
        dd = [0] * (len(yf) - 1)
        for e in range(len(yf) - 1, 0, -1):
            q += yf[e]
            dd[e - 1] = q
        for i, c in enumerate(dd):
            acc[i + 1] += c
        ms.append(acc)
    return TruncSeries([sum(m) for m in ms], QQ)


def binomial_power(a, exponent: Fraction, N: int) -> TruncSeries:
    """(1 - a z)^exponent to order N by the generalised binomial theorem."""
    cs = [1]
    c = Fraction(1)
    for k in range(1, N):
        c = c * (exponent - k + 1) / k * (-a)
        cs.append(qnorm(c))
    return TruncSeries(cs, QQ)


def _closed_form(a: int, lin: list, den: int, N: int) -> TruncSeries:
    # (lin(z) + (1 - a z)^{3/2}) / (den z^2)
    num = binomial_power(a, Fraction(3, 2), N + 2)
    num = num + TruncSeries(lin + [0] * (N + 2 - len(lin)), QQ)
    return num.div_z(2).scale(Fraction(1, den))


def closed_form_maps(N: int) -> TruncSeries:
    """Expansion of (18z - 1 + (1-12z)^{3/2}) / (54 z^2)."""
    return _closed_form(12, [-1, 18], 54, N)


def closed_form_bipartite(N: int) -> TruncSeries:
    """Expansion of (-1 + 12z - 24z^2 + (1-8z)^{3/2}) / (32 z^2), non-empty bipartite maps."""
    return _closed_form(8, [-1, 12, -24], 32, N)
