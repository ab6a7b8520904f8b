"""2-connected and 3-connected maps from the series of all maps.

Uncoloured.  A map is its core (the block holding the root edge) with a rooted
map hung in each of the 2k corners of a k-edge core.  A one-edge core (bridge
or loop) has two corners too, so

    M = 1 + 2 z M^2 + B(z M^2),

and B = (M - 1 - 2zM^2) o h^{-1} with h = z M^2.  With D = B/z (root edge not
counted) the network decomposition reads D = z + S + P + T(D)/D where
S = P = D^2/(1+D), so T(w) = w (w - 2w^2/(1+w) - f(w)) with f the reversion of
D.  T counts all edges and starts at z^6.

Bicoloured.  The same core argument, split by the colour of the root edge:

    M1 = 2νzM^2 + B1(zM^2),     M2 = zM^2 + B2(zM^2).

With D1 = B1/(zν), D2 = B2/z and W = D1/D2 the networks satisfy
D1 = zν + S1 + P1 + (T1 term), D2 = z + S2 + P2 + (T2 term), where the T terms
substitute D1 for monochromatic and D2 for bichromatic edges of a 3-connected
map, i.e. T_i(D2, W), and then drop the root edge.  The way the root edge is
dropped is a switch (see :data:`NORMALIZATIONS`), selected against the
brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DivisibilityError, NormalizationFailure, ValuationError
from .exact.poly import Poly
from .exact.series import (
    NU,
    QQ,
    TruncSeries,
    series_compose,
    series_inverse,
    series_reversion,
    solve_linear_series_system,
)
from .ising import IsingSplit, solve_catalytic_uncoloured

# how R_i = D_i - base_i - S_i - P_i relates to T_i(D2, W):
#   bare        R_i = T_i(D2, W)
#   first_arg   R_i = T_i(D2, W) / D2
#   root_class  R_1 = T_1(D2, W) / D1 and R_2 = T_2(D2, W) / D2
NORMALIZATIONS = ("bare", "first_arg", "root_class")

# rooted K4 has weight ν^6 + 2ν^3 + ν^2 with a monochromatic root edge and
# 2ν^3 + 2ν^2 with a bichromatic one (brute-force sum over colourings)
_K4_MONO = Poly((0, 0, 1, 2, 0, 0, 1))
_K4_BI = Poly((0, 0, 2, 2))


def _hinv(M: TruncSeries) -> TruncSeries:
    h = (TruncSeries.z(M.order, M.ring) * M * M).truncate(M.order)
    if h.valuation() != 1:
        raise ValuationError("z M^2 must have valuation exactly 1")
    return series_reversion(h)


@dataclass
class TowerUncoloured:
    M: TruncSeries
    B: TruncSeries
    D: TruncSeries
    S: TruncSeries
    P: TruncSeries
    T: TruncSeries
    f: TruncSeries
    one_edge_term: str = "corner_maps"

    def series(self) -> dict:
        return {k: getattr(self, k) for k in ("M", "B", "D", "S", "P", "T", "f")}


def build_uncoloured_tower(N: int, M: TruncSeries | None = None, one_edge_term: str = "corner_maps") -> TowerUncoloured:
    """All tower series to order N.

    ``one_edge_term`` selects the contribution of one-edge cores: ``corner_maps``
    (2zM^2, a map in each of the two corners) or ``bare`` (2z).  Only the first
    reproduces the brute-force counts of 2-connected maps; the second is kept to
    make that check executable.
    """
    if M is None:
        M = solve_catalytic_uncoloured(N)
    M = M.truncate(N)
    z = TruncSeries.z(N, QQ)
    one = TruncSeries.one(N, QQ)
    if one_edge_term == "corner_maps":
        core = M - one - 2 * z * M * M
    elif one_edge_term == "bare":
        core = M - one - 2 * z
    else:
        raise ValueError(one_edge_term)
    B = series_compose(core.truncate(N), _hinv(M)).truncate(N)
    D = B.div_z(1)
    S = D * D * series_inverse(D + 1)
    P = S
    f = series_reversion(D)
    w = TruncSeries.z(f.order, QQ)
    inner = w - 2 * w * w * series_inverse(w + 1) - f
    T = w * inner
    return TowerUncoloured(M, B, D, S, P, T, f, one_edge_term)


def core_residual(t: TowerUncoloured) -> TruncSeries:
    """M - (1 + 2zM^2 + B(zM^2)); zero when the core substitution is consistent."""
    N = t.B.order
    M = t.M.truncate(N)
    z = TruncSeries.z(N, QQ)
    h = (z * M * M).truncate(N)
    return _diff(M, TruncSeries.one(N, QQ) + 2 * z * M * M + series_compose(t.B, h))


def network_residual(t: TowerUncoloured) -> TruncSeries:
    """D - (z + S + P + T(D)/D); zero when T is consistent with D."""
    D = t.D
    TD = series_compose(t.T, D).div_z(1) * series_inverse(D.div_z(1))
    rhs = TruncSeries.z(D.order, QQ) + t.S + t.P + TD
    return _diff(D, rhs)


def _diff(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    n = min(a.order, b.order)
    return a.truncate(n) - b.truncate(n)


# ---------------------------------------------------------------------------
# bicoloured tower
# ---------------------------------------------------------------------------

@dataclass
class TowerBicoloured:
    B1: TruncSeries
    B2: TruncSeries
    D1: TruncSeries
    D2: TruncSeries
    S1: TruncSeries
    S2: TruncSeries
    P1: TruncSeries
    P2: TruncSeries
    T1: TruncSeries
    T2: TruncSeries
    W: TruncSeries
    normalization: str
    checks: dict = field(default_factory=dict)

    @property
    def Tb(self) -> TruncSeries:
        """3-connected bipartite maps: T2 at ν = 0."""
        return self.T2.eval_nu(0)

    def series(self) -> dict:
        out = {k: getattr(self, k) for k in ("B1", "B2", "D1", "D2", "S1", "S2", "P1", "P2", "T1", "T2")}
        out["Tb"] = self.Tb
        return out


def build_bicoloured_two_connected(split: IsingSplit, N: int | None = None):
    """Return (B1, B2) over Q[ν]; checks that B1 is divisible by ν."""
    M = split.total
    N = M.order if N is None else N
    M = M.truncate(N)
    z = TruncSeries.z(N, NU)
    nu = Poly.var()
    zM2 = (z * M * M).truncate(N)
    g = _hinv(M)
    B1 = series_compose((split.mono.truncate(N) - zM2 * (2 * nu)).truncate(N), g).truncate(N)
    B2 = series_compose((split.bi.truncate(N) - zM2).truncate(N), g).truncate(N)
    try:
        B1.div_nu()
    except DivisibilityError as exc:
        raise DivisibilityError("B1 is not divisible by ν") from exc
    return B1, B2


def bipartite_two_connected(N: int) -> TruncSeries:
    """B_b = B2 at ν = 0, straight from the closed form for bipartite maps.

    At ν = 0 only proper colourings survive, so M = 1 + M_b and M2 = M_b, and
    the core relation gives B_b = (M_b - zM^2) o h^{-1} with h = z M^2.
    """
    from .ising import closed_form_bipartite

    Mb = closed_form_bipartite(N)
    M = Mb + 1
    zM2 = (TruncSeries.z(N) * M * M).truncate(N)
    return series_compose((Mb - zM2).truncate(N), _hinv(M)).truncate(N)


def series_parallel(D1: TruncSeries, D2: TruncSeries):
    """(S1, S2, P1, P2) from the series/parallel relations.

    S1 = (D1-S1)D1 + (D2-S2)D2 and S2 = (D2-S2)D1 + (D1-S1)D2 form a linear
    system X = A X + b with A of valuation 1; P_i = D_i^2 / (1 + D_i).
    """
    A = [[-D1, -D2], [-D2, -D1]]
    b = [D1 * D1 + D2 * D2, 2 * D1 * D2]
    S1, S2 = solve_linear_series_system(A, b)
    P1 = D1 * D1 * series_inverse(D1 + 1)
    P2 = D2 * D2 * series_inverse(D2 + 1)
    return S1, S2, P1, P2


def substitute_T(T: TruncSeries, D2: TruncSeries, W: TruncSeries) -> TruncSeries:
    """sum_{m,k} t_{m,k} D2^m W^k for T = sum_m (sum_k t_{m,k} ν^k) z^m."""
    n = min(T.order, D2.order)
    acc = TruncSeries.zero(n, NU)
    powers = _powers(W, max((c.degree for c in T.coeffs if not c.is_zero()), default=0), n)
    D2p = TruncSeries.one(n, NU)
    for m in range(n):
        c = T.coeffs[m]
        if not c.is_zero():
            acc = acc + (D2p * _combine(c, powers, n)).truncate(n)
        D2p = (D2p * D2).truncate(n)
    return acc


def _powers(W: TruncSeries, kmax: int, n: int) -> list:
    out = [TruncSeries.one(n, NU)]
    for _ in range(kmax):
        out.append(_trunc(out[-1] * W, n))
    return out


def _trunc(s: TruncSeries, n: int) -> TruncSeries:
    return s.truncate(min(n, s.order))


def _combine(poly: Poly, powers: list, n: int) -> TruncSeries:
    """sum_k poly[k] W^k as a series."""
    m = min(p.order for p in powers[: len(poly.coeffs)])
    cs = [Poly(()) for _ in range(min(n, m))]
    for k, c in enumerate(poly.coeffs):
        if c:
            pk = powers[k]
            for i in range(len(cs)):
                cs[i] = cs[i] + pk.coeffs[i] * c
    return TruncSeries(cs, NU)


def recover_T(U: TruncSeries, D2: TruncSeries, W: TruncSeries) -> TruncSeries:
    """Solve U = T(D2, W) for the coefficients t_{m,k}.

    D2 = z + O(z^2) and W = ν + O(z), so D2^m W^k = ν^k z^m + O(z^(m+1)):
    coefficient m of what is left of U, read as a polynomial in ν, is exactly
    sum_k t_{m,k} ν^k.  Subtract that term's full contribution and continue.
    """
    n = min(U.order, D2.order, W.order + 1)
    if D2.valuation() != 1 or D2[1] != Poly((1,)):
        raise ValuationError("D2 must be z + O(z^2)")
    if W.order and W[0] != Poly.var():
        raise ValuationError("W must be ν + O(z)")
    rest = U.truncate(n)
    kmax = 0
    ts = []
    powers = [TruncSeries.one(n, NU)]
    D2p = TruncSeries.one(n, NU)
    for m in range(n):
        c = rest.coeffs[m]
        ts.append(c)
        if not c.is_zero():
            while kmax < c.degree:
                powers.append(_trunc(powers[-1] * W, n))
                kmax += 1
            term = (D2p * _combine(c, powers, n)).truncate(n)
            rest = rest - _pad_to(term, rest.order)
        D2p = _trunc(D2p * D2, n)
    return TruncSeries(ts, NU)


def _pad_to(s: TruncSeries, n: int) -> TruncSeries:
    if s.order >= n:
        return s.truncate(n)
    # terms beyond s.order are already cut from rest by recover_T's order
    return TruncSeries(list(s.coeffs) + [Poly(())] * (n - s.order), NU)


def _targets(R1, R2, D1, D2, normalization):
    if normalization == "bare":
        return R1, R2
    if normalization == "first_arg":
        return R1 * D2, R2 * D2
    if normalization == "root_class":
        return R1 * D1, R2 * D2
    raise ValueError(normalization)


def _variant(B1, B2, normalization):
    D1 = B1.div_z(1).div_nu()
    D2 = B2.div_z(1)
    n = min(D1.order, D2.order)
    D1, D2 = D1.truncate(n), D2.truncate(n)
    W = (D1.div_z(1) * series_inverse(D2.div_z(1)))
    S1, S2, P1, P2 = series_parallel(D1, D2)
    z = TruncSeries.z(n, NU)
    R1 = D1 - z * Poly.var() - S1 - P1
    R2 = D2 - z - S2 - P2
    U1, U2 = _targets(R1, R2, D1, D2, normalization)
    T1 = recover_T(U1, D2, W)
    T2 = recover_T(U2, D2, W)
    return TowerBicoloured(B1, B2, D1, D2, S1, S2, P1, P2, T1, T2, W, normalization)


def _plausible(tower: TowerBicoloured) -> dict:
    """Checks used to pick the normalisation."""
    ok_low = all(c.is_zero() for c in tower.T1.coeffs[:6]) and all(c.is_zero() for c in tower.T2.coeffs[:6])
    nonneg = all(
        isinstance(x, int) and x >= 0
        for T in (tower.T1, tower.T2)
        for c in T.coeffs
        for x in c.coeffs
    )
    k4 = tower.T1.order > 6 and tower.T1[6] == _K4_MONO and tower.T2[6] == _K4_BI
    return {"vanish_below_6": ok_low, "nonnegative_integers": nonneg, "k4_matches_oracle": k4}


def build_bicoloured_three_connected(B1: TruncSeries, B2: TruncSeries, N: int | None = None, normalization: str = "auto") -> TowerBicoloured:
    """Networks, series/parallel parts and 3-connected series T1, T2.

    With ``normalization="auto"`` every variant is tried and the one whose T1,
    T2 vanish below z^6, have non-negative integer coefficients and match the
    rooted K4 weights at z^6 is kept; :class:`NormalizationFailure` if none or
    several qualify.
    """
    if N is not None:
        B1, B2 = B1.truncate(N), B2.truncate(N)
    if normalization != "auto":
        t = _variant(B1, B2, normalization)
        t.checks = _plausible(t)
        return t
    good = []
    report = {}
    for name in NORMALIZATIONS:
        t = _variant(B1, B2, name)
        t.checks = _plausible(t)
        report[name] = t.checks
        if all(t.checks.values()):
            good.append(t)
    if len(good) != 1:
        raise NormalizationFailure(f"cannot select a normalisation: {report}")
    good[0].checks = dict(good[0].checks, candidates=report)
    return good[0]


def bicoloured_residuals(t: TowerBicoloured) -> dict:
    """Back-substitute T1, T2 into the network equations.

    The equations are compared with the root-edge factor multiplied out
    (D1 is ν z + ..., so dividing by it would leave Q[ν]):
    returns U_i - T_i(D2, W) where U_i is the normalised remainder of D_i.
    """
    D1, D2 = t.D1, t.D2
    z = TruncSeries.z(D1.order, NU)
    R1 = D1 - z * Poly.var() - t.S1 - t.P1
    R2 = D2 - z - t.S2 - t.P2
    U1, U2 = _targets(R1, R2, D1, D2, t.normalization)
    return {
        "D1": _diff(U1, substitute_T(t.T1, D2, t.W)),
        "D2": _diff(U2, substitute_T(t.T2, D2, t.W)),
    }


def two_connected_residuals(split: IsingSplit, B1: TruncSeries, B2: TruncSeries) -> dict:
    """M1 - (2νzM^2 + B1(zM^2)) and M2 - (zM^2 + B2(zM^2))."""
    n = B1.order
    M = split.total.truncate(n)
    z = TruncSeries.z(n, NU)
    zM2 = (z * M * M).truncate(n)
    r1 = _diff(split.mono, zM2 * (2 * Poly.var()) + series_compose(B1, zM2))
    r2 = _diff(split.bi, zM2 + series_compose(B2, zM2))
    return {"M1": r1, "M2": r2}


def is_zero_series(s: TruncSeries) -> bool:
    return all(s.ring.is_zero(c) for c in s.coeffs)


def tb_series(N: int, normalization: str = "auto", progress=None) -> TowerBicoloured:
    """Full pipeline from the catalytic equation to T_b, coefficients below N."""
    from .ising import solve_catalytic_bicoloured, split_by_root_edge

    sol = solve_catalytic_bicoloured(N + 1, progress=progress)
    split = split_by_root_edge(sol)
    B1, B2 = build_bicoloured_two_connected(split)
    return build_bicoloured_three_connected(B1, B2, normalization=normalization)
