from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mapcount.asymptotics import (
    AlgebraicCurve, AsymptoticForm, analyse, branch_series, count_roots, discriminant_z, dominant_singularity,
    growth_from_coefficients, guess_min_poly, isolate_real_roots, puiseux_branch, resultant_T, transfer,
)
from mapcount.asymptotics.bicubic import THEOREM_POLY, bicubic_pipeline, networks, three_connected_bicubic
from mapcount.asymptotics.puiseux import local_branches
from mapcount.asymptotics.singularity import singularity_candidates
from mapcount.asymptotics.transfer import gamma_exact
from mapcount.errors import BranchSelectionAmbiguous, InsufficientData, NotFound, UnsupportedExponent
from mapcount.exact.poly import Poly
from mapcount.exact.series import TruncSeries, reversion_undetermined, series_compose
from mapcount.ising import closed_form_bipartite, closed_form_maps
from mapcount.tower import bipartite_two_connected, build_uncoloured_tower

THEOREM1 = Poly([1113912729, -51532664454, 78314553945, 253489557672, -253658186064, -519574865472,
                 381960569664, 430685329920, -278408523776, -125942890496, 82796609536])

M_CURVE = AlgebraicCurve((Poly([-1, 16]), Poly([1, -18]), Poly([0, 0, 27])))
MB_CURVE = AlgebraicCurve((Poly([0, -1, 9]), Poly([1, -12, 24]), Poly([0, 0, 16])))
B_CURVE = AlgebraicCurve((Poly([0, 0, -1, 8]), Poly([1, -10, 12]), Poly([2, 6]), Poly([1])))


# -- guessing -----------------------------------------------------------------

def test_guess_closed_forms():
    M = closed_form_maps(40)
    Mb = closed_form_bipartite(40)
    assert guess_min_poly(M, 3, 6) == M_CURVE
    assert guess_min_poly(Mb, 3, 6) == MB_CURVE
    # a larger degree budget still returns the minimal curve
    assert guess_min_poly(M, 4, 8, verify=4) == M_CURVE


def test_guess_b_bipartite_degree_5():
    Bb = bipartite_two_connected(80)
    g = guess_min_poly(Bb, 5, 6, verify=20, return_report=True)
    assert g.curve.degT == 5 and g.verified_orders == 20
    extra = bipartite_two_connected(110)
    assert g.curve.vanishes_on(extra)


def test_guess_errors():
    with pytest.raises(InsufficientData):
        guess_min_poly(closed_form_maps(10), 2, 4)
    with pytest.raises(NotFound):
        guess_min_poly(closed_form_maps(40), 1, 4)


curve_rows = st.lists(st.integers(-3, 3), min_size=1, max_size=3)


@given(st.lists(curve_rows, min_size=2, max_size=3))
@settings(max_examples=25)
def test_guess_round_trip_random_curves(rows):
    # P = T - z Q(z, T) has the unique branch through (0, 0)
    Q = [Poly(r) for r in rows]
    assume(not Q[-1].is_zero() and len(Q) >= 2)
    p = [Poly([0, 1]) * q for q in Q]
    p = [Poly([0]) - p[0], Poly([1]) - p[1]] + [Poly([0]) - x for x in p[2:]]
    curve = AlgebraicCurve(tuple(p))
    s = branch_series(curve, 50, t00=0)
    assert curve.vanishes_on(s)
    g = guess_min_poly(s, curve.degT, curve.degZ, verify=8)
    assert g.vanishes_on(s)
    # the minimal polynomial is unique up to a scalar
    if (g.degT, g.degZ) == (curve.degT, curve.degZ):
        assert g == curve


def test_curve_normalisation_and_json():
    c = AlgebraicCurve((Poly([Fraction(-1, 2), 8]), Poly([Fraction(1, 2), -9]), Poly([0, 0, Fraction(27, 2)])))
    assert c == M_CURVE
    assert AlgebraicCurve.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        AlgebraicCurve((Poly([1]),))


def test_branch_series_reproduces_closed_forms():
    assert branch_series(M_CURVE, 30) == closed_form_maps(30)
    assert branch_series(MB_CURVE, 30, t00=0) == closed_form_bipartite(30)


# -- resultants and discriminants --------------------------------------------

def test_discriminant_examples():
    assert discriminant_z(AlgebraicCurve((Poly([0, -1]), Poly([]), Poly([1]))), normalize=False) == Poly([0, 4])
    assert discriminant_z(AlgebraicCurve((Poly([0, -1]), Poly([]), Poly([1])))) == Poly([0, 1])
    assert discriminant_z(M_CURVE)(Fraction(1, 12)) == 0
    assert discriminant_z(MB_CURVE)(Fraction(1, 8)) == 0


@given(st.lists(st.lists(st.integers(-4, 4), min_size=1, max_size=3), min_size=3, max_size=3))
def test_quadratic_discriminant_formula(rows):
    c, b, a = (Poly(r) for r in rows)
    assume(not a.is_zero())
    curve = AlgebraicCurve((c, b, a))
    c, b, a = curve.p
    assert discriminant_z(curve, normalize=False) == b * b - a * c * 4


def test_resultant_of_linear_system():
    # T - z and T - z^2 meet where z = z^2
    r = resultant_T(AlgebraicCurve((Poly([0, -1]), Poly([1]))), AlgebraicCurve((Poly([0, 0, -1]), Poly([1]))))
    assert r.primitive() in (Poly([0, 1, -1]), Poly([0, -1, 1]))


@pytest.mark.parametrize("curve,series_fn", [
    (M_CURVE, lambda: closed_form_maps(60)),
    (MB_CURVE, lambda: closed_form_bipartite(60)),
    (B_CURVE, lambda: build_uncoloured_tower(60).B),
])
def test_discriminant_vanishes_at_ramified_points(curve, series_fn):
    ds = dominant_singularity(curve, series_fn())
    assert ds.expansion.singular_term() is not None
    assert discriminant_z(curve)(Fraction(ds.rho)) == 0


# -- real roots ---------------------------------------------------------------

def test_isolation_examples():
    (r,) = [x for x in isolate_real_roots(THEOREM1, 0, 1) if x.lo < Fraction(41502, 100000) and x.hi > Fraction(415, 1000)]
    r.refine(Fraction(1, 10**12))
    assert abs(float(r.midpoint()) - 0.41501) < 1e-5
    s = isolate_real_roots(THEOREM_POLY, 0, 1)[0]
    s.refine(Fraction(1, 10**12))
    assert abs(float(s.midpoint()) - 0.49125) < 1e-5
    (q,) = isolate_real_roots(Poly([-2, 0, 1]), 0, 2)
    q.refine(Fraction(1, 10**9))
    assert q.lo < Fraction(1414213563, 10**9) and q.hi > Fraction(1414213562, 10**9)
    assert q.certify_sign_change()


def test_rational_roots_are_made_exact():
    roots = isolate_real_roots(Poly([1, -12]) * Poly([-1, 3]), 0, 1)
    assert sorted(r.rational_value() for r in roots) == [Fraction(1, 12), Fraction(1, 3)]


polys = st.lists(st.integers(-20, 20), min_size=2, max_size=8).map(Poly).filter(lambda p: p.degree >= 1)


@given(polys, st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=16), min_size=1, max_size=4))
def test_sturm_additivity(p, cuts):
    lo, hi = Fraction(-3), Fraction(3)
    pts = sorted({lo, hi, *cuts})
    total = count_roots(p, lo, hi)
    assert total == sum(count_roots(p, a, b) for a, b in zip(pts, pts[1:]))
    assert total == len(isolate_real_roots(p, lo, hi)) - (1 if p(lo) == 0 else 0)


@given(polys)
def test_isolated_roots_are_disjoint_and_bracketing(p):
    roots = isolate_real_roots(p, -4, 4)
    for a, b in zip(roots, roots[1:]):
        assert a.hi <= b.lo
    for r in roots:
        r.refine(Fraction(1, 2**30))
        assert r.width <= Fraction(1, 2**30)
        assert r.is_exact() or r.squarefree(r.lo) * r.squarefree(r.hi) <= 0


# -- singular expansions and transfer ----------------------------------------

def test_gamma_exact():
    assert gamma_exact(Fraction(1, 2)) == (1, 1)
    assert gamma_exact(Fraction(-3, 2)) == (Fraction(4, 3), 1)
    assert gamma_exact(5) == (24, 0)
    with pytest.raises(UnsupportedExponent):
        gamma_exact(0)
    with pytest.raises(UnsupportedExponent):
        gamma_exact(Fraction(1, 3))


def test_transfer_maps():
    ds = dominant_singularity(M_CURVE, closed_form_maps(60))
    assert ds.rho == Fraction(1, 12) and ds.t0 == Fraction(4, 3)
    assert ds.expansion.matches_map_shape()
    assert ds.expansion.coefficient(Fraction(3, 2)) == Fraction(8, 3)
    form = transfer(ds.expansion)
    assert (form.constant_exact(), form.n_exponent, form.growth) == ((2, 1), Fraction(-5, 2), 12)
    assert form.constant_str() == "2/√π"


def test_transfer_bipartite_maps():
    ds = dominant_singularity(MB_CURVE, closed_form_bipartite(60))
    assert ds.rho == Fraction(1, 8) and ds.t0 == Fraction(1, 4)
    form = transfer(ds.expansion)
    q, k = gamma_exact(Fraction(-3, 2))
    # 2 / Gamma(-3/2)
    assert form.constant_exact() == (2 / q, k)
    assert form.constant_str() == "3/(2√π)"
    assert (form.n_exponent, form.growth) == (Fraction(-5, 2), 8)


def test_asymptotic_form_matches_coefficients():
    form = transfer(dominant_singularity(M_CURVE, closed_form_maps(60)).expansion)
    M = closed_form_maps(401)
    n = 400
    approx = form.constant_mp() * mpmath.mpf(n) ** float(form.n_exponent) * mpmath.mpf(12) ** n
    assert abs(M[n] / approx - 1) < 0.01


def test_puiseux_branch_selection():
    u = Fraction(1, 1024)
    z = mpmath.mpf(1) / 12 * (1 - mpmath.mpf(1) / 1024)
    value = (18 * z - 1 + (1 - 12 * z) ** 1.5) / (54 * z * z)  # closed form of the map series
    exp = puiseux_branch(M_CURVE, Fraction(1, 12), value, n_terms=4)
    assert exp.coefficient(Fraction(3, 2)) == Fraction(8, 3)
    # a value halfway between the two branches cannot pick one
    with pytest.raises(BranchSelectionAmbiguous):
        puiseux_branch(M_CURVE, Fraction(1, 12), 1.33, n_terms=4)
    branches = local_branches(M_CURVE, Fraction(1, 12), Fraction(4, 3))
    assert len(branches) == 2
    assert sorted(b.coefficient(Fraction(3, 2)) for b in branches) == [Fraction(-8, 3), Fraction(8, 3)]


def test_unsupported_alpha():
    with pytest.raises(UnsupportedExponent):
        AsymptoticForm(1, 0, Fraction(1, 2))


@pytest.fixture(scope="module")
def growths():
    tw = build_uncoloured_tower(130)
    out = {}
    for name, s, K, D in [("M", closed_form_maps(40), 2, 4), ("B", tw.B.truncate(60), 3, 4), ("T", tw.T, 2, 10)]:
        out[name] = analyse(s, degT_max=K, degZ_max=D)["singularity"]
    return out


def test_growth_constants(growths):
    assert {k: v.growth() for k, v in growths.items()} == {"M": 12, "B": Fraction(27, 4), "T": 4}
    t_form = transfer(growths["T"].expansion)
    assert t_form.constant_exact() == (Fraction(2, 243), 1)


def test_growth_ordering_chain(growths):
    (rho,) = [r for r in isolate_real_roots(THEOREM1, Fraction(415, 1000), Fraction(41502, 100000))]
    rho.refine(Fraction(1, 10**12))
    gamma_lo, gamma_hi = 1 / rho.hi, 1 / rho.lo
    assert Fraction(8, 5) < gamma_lo and gamma_hi < growths["T"].growth() < growths["B"].growth() < growths["M"].growth()


def test_b_bipartite_growth():
    res = analyse(bipartite_two_connected(80), degT_max=5, degZ_max=6)
    assert res["singularity"].growth() == Fraction(128, 25)
    assert not res["singularity"].expansion.exact  # irrational characteristic root


def test_candidates_are_exact_where_rational():
    cands = singularity_candidates(M_CURVE, 0, 1)
    assert Fraction(1, 12) in cands


def test_growth_heuristic_on_closed_form():
    est = growth_from_coefficients(closed_form_maps(80))
    assert est.contains(12.0) and est.hi - est.lo < 0.05
    with pytest.raises(InsufficientData):
        growth_from_coefficients(closed_form_maps(10))


# -- bicubic ------------------------------------------------------------------

def test_bicubic_pipeline():
    st_ = bicubic_pipeline(30)
    assert st_.passed, st_.checks
    assert st_.tau == Fraction(125, 512) and st_.G_tau == Fraction(1, 4)
    assert Fraction(49124, 10**5) < st_.sigma.lo and st_.sigma.hi < Fraction(49126, 10**5)
    assert Fraction(2035604, 10**6) < st_.delta[0] and st_.delta[1] < Fraction(2035624, 10**6)


def test_bicubic_series_second_method():
    Mb, G = three_connected_bicubic(20)
    one = Mb + 1
    k = (TruncSeries.z(20) * one * one * one).truncate(20)
    assert series_compose(Mb, reversion_undetermined(k)).truncate(20) == G
    assert series_compose(G, k).truncate(20) == Mb
    D = networks(G, 30)
    assert all(c >= 0 for c in D.coeffs)


def test_numeric_constants_with_mpmath():
    # independent evaluation of the M constant
    form = transfer(dominant_singularity(M_CURVE, closed_form_maps(60)).expansion)
    assert mpmath.almosteq(form.constant_mp(), 2 / mpmath.sqrt(mpmath.pi), 1e-40)
