from __future__ import annotations


import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mapcount.errors import BadValuation, NonUnitConstantTerm, NonzeroConstantTerm, NotTriangular
from mapcount.exact import kronecker
from mapcount.exact.catalytic import CatalyticPoly
from mapcount.exact.poly import Poly
from mapcount.exact.serialize import series_from_json, series_to_json
from mapcount.exact.series import (
    CAT, NU, QQ, TruncSeries, divided_difference, reversion_undetermined, series_compose, series_inverse,
    series_reversion, solve_fixed_point, solve_linear_series_system,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small_ints = st.integers(-6, 6)
nu_polys = st.lists(small_ints, min_size=0, max_size=4).map(Poly)


def qq_series(order=8, coeff=rationals):
    return st.lists(coeff, min_size=order, max_size=order).map(lambda cs: TruncSeries(cs, QQ))


def nu_series(order=6):
    return st.lists(nu_polys, min_size=order, max_size=order).map(lambda cs: TruncSeries(cs, NU))


def S(*cs, order=None, ring=QQ):
    return TruncSeries(list(cs), ring, order=order)


nu = Poly.var()


# -- worked examples ----------------------------------------------------------

def test_mul_examples():
    assert (S(1, 1, order=4) * S(1, -1, order=4)) == S(1, 0, -1, 0)
    a = TruncSeries([Poly([1]), nu], NU, order=3)
    assert (a * a) == TruncSeries([Poly([1]), 2 * nu, nu * nu], NU)
    f = S(0, 1, 3, 12)
    assert f * TruncSeries.one(4) == f


def test_inverse_examples():
    assert series_inverse(S(1, -1, order=6)) == S(1, 1, 1, 1, 1, 1)
    assert series_inverse(S(1)) == S(1)
    # denominator of the Ising parametrisation, as a series in S
    den = TruncSeries([Poly([1]), Poly([-2]), Poly(()), 2 * nu * nu], NU, order=4)
    den = den + TruncSeries([Poly(())] * 4 + [-(nu * nu)], NU).truncate(4)
    assert series_inverse(den) == TruncSeries([Poly([1]), Poly([2]), Poly([4]), Poly([8, 0, -2])], NU)


def test_inverse_needs_unit():
    with pytest.raises(NonUnitConstantTerm):
        series_inverse(S(0, 1, order=4))
    with pytest.raises(NonUnitConstantTerm):
        series_inverse(TruncSeries([nu, Poly([1])], NU))


def test_compose_examples():
    assert series_compose(S(0, 0, 1, order=5), S(0, 1, 1, order=5)) == S(0, 0, 1, 2, 1)
    f = S(3, 1, 4, 1, 5)
    assert series_compose(f, TruncSeries.z(5)) == f
    with pytest.raises(NonzeroConstantTerm):
        series_compose(f, S(1, 1, order=5))


def test_reversion_examples():
    assert series_reversion(TruncSeries.z(6)) == TruncSeries.z(6)
    assert series_reversion(S(0, 1, -1, order=6)) == S(0, 1, 1, 2, 5, 14)
    f = series_compose(series_inverse(S(1, 1, order=7) * S(1, 1, order=7)), TruncSeries.z(7)).shift(1).truncate(7)
    assert series_reversion(f) == S(0, 1, 2, 5, 14, 42, 132)
    with pytest.raises(BadValuation):
        series_reversion(S(1, 1, order=4))
    with pytest.raises(BadValuation):
        series_reversion(S(0, 0, 1, order=4))


def test_divided_difference_examples():
    y = lambda k, c=1: CatalyticPoly.monomial(0, k, 0, c)  # noqa: E731
    f = TruncSeries([y(2)], CAT)
    assert divided_difference(f, "y") == TruncSeries([y(1) + y(0)], CAT)
    assert divided_difference(TruncSeries([y(1)], CAT), "y") == TruncSeries([y(0)], CAT)
    g = TruncSeries([y(0), y(3)], CAT)
    assert divided_difference(g, "y") == TruncSeries([CatalyticPoly(), y(2) + y(1) + y(0)], CAT)


def test_linear_system_examples():
    D = S(0, 1, 1, order=8)
    (sol,) = solve_linear_series_system([[-D]], [D * D])
    # S = D (D - S), checked by substitution and against a fixed-point iteration
    assert sol == (D * (D - sol)).truncate(8)
    (fp,) = solve_fixed_point(lambda X: [(D * (D - X[0])).truncate(X[0].order)], 1, 8)
    assert sol == fp
    assert sol.coeffs[:4] == (0, 0, 1, 1)
    (cat,) = solve_fixed_point(lambda X: [(TruncSeries.z(X[0].order) + X[0] * X[0]).truncate(X[0].order)], 1, 6)
    assert cat == S(0, 1, 1, 2, 5, 14)
    zero = TruncSeries.zero(5)
    (s0,) = solve_linear_series_system([[zero]], [zero])
    assert s0 == zero
    with pytest.raises(NotTriangular):
        solve_linear_series_system([[S(1, order=3)]], [S(0, 1, order=3)])


# -- properties ---------------------------------------------------------------

@given(qq_series(), qq_series(), qq_series())
def test_ring_axioms_qq(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a


@given(nu_series(), nu_series(), nu_series())
def test_ring_axioms_nu(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(st.lists(small_ints, min_size=59, max_size=59))
@settings(max_examples=8)
def test_reversion_round_trip_order_60(tail):
    f = TruncSeries([0, 1] + tail[:58], QQ)
    g = series_reversion(f)
    z = TruncSeries.z(60)
    assert series_compose(f, g) == z
    assert series_compose(g, f) == z


@given(st.lists(rationals, min_size=10, max_size=10), st.fractions(min_value=1, max_value=4))
def test_reversion_matches_undetermined_coefficients(tail, lin):
    f = TruncSeries([0, lin] + tail, QQ)
    assert series_reversion(f) == reversion_undetermined(f)


@given(nu_series(8))
def test_reversion_over_nu(s):
    f = TruncSeries([Poly(()), Poly([1])] + list(s.coeffs[2:]), NU)
    assert series_reversion(f) == reversion_undetermined(f)


@given(qq_series(12), st.fractions(min_value=1, max_value=3, max_denominator=3))
def test_inverse_property(a, c0):
    a = TruncSeries([c0] + list(a.coeffs[1:]), QQ)
    assert a * series_inverse(a) == TruncSeries.one(12)


@given(nu_series(10))
def test_inverse_property_nu(a):
    a = TruncSeries([Poly([1])] + list(a.coeffs[1:]), NU)
    assert a * series_inverse(a) == TruncSeries.one(10, NU)


@given(st.lists(st.lists(st.tuples(st.integers(0, 4), small_ints), max_size=4), min_size=1, max_size=4))
def test_divided_difference_identity(raw):
    # f(y) = (y - 1) * DD(f) + f(1), coefficientwise in z
    cs = [CatalyticPoly({(0, j, 0): c for j, c in row}) for row in raw]
    f = TruncSeries(cs, CAT)
    dd = divided_difference(f, "y")
    y_minus_1 = CatalyticPoly.monomial(0, 1) - CatalyticPoly.monomial()
    for c, d in zip(f.coeffs, dd.coeffs):
        assert d * y_minus_1 + c.substitute_one("y") == c


@given(nu_series(5), st.integers(-3, 3))
def test_divided_difference_in_nu(f, point):
    dd = divided_difference(f, "nu", point)
    for c, d in zip(f.coeffs, dd.coeffs):
        assert d * Poly([-point, 1]) + Poly([c(point)]) == c


@given(qq_series(12), qq_series(12), st.integers(2, 11))
def test_truncation_soundness(a, b, m):
    # results may carry extra precision (valuation), so compare at order m
    t = lambda s: s.truncate(m)  # noqa: E731
    assert t(a * b) == t(t(a) * t(b))
    assert t(a + b) == t(t(a) + t(b))
    unit = TruncSeries([1] + list(a.coeffs[1:]), QQ)
    assert t(series_inverse(unit)) == t(series_inverse(t(unit)))
    g = TruncSeries([0] + list(b.coeffs[1:]), QQ)
    assert t(series_compose(a, g)) == t(series_compose(t(a), t(g)))
    f = TruncSeries([0, 1] + list(b.coeffs[2:]), QQ)
    assert t(series_reversion(f)) == t(series_reversion(t(f)))


@given(qq_series(9))
def test_serialization_round_trip_qq(s):
    assert series_from_json(series_to_json(s)) == s


@given(nu_series(6))
def test_serialization_round_trip_nu(s):
    s = TruncSeries([Poly([1])] + list(s.coeffs[1:]), NU)
    assert series_from_json(series_to_json(s)) == s


@given(st.lists(st.integers(-10**30, 10**30), max_size=12), st.lists(st.integers(-10**30, 10**30), max_size=12))
def test_kronecker_matches_schoolbook(a, b):
    n = len(a) + len(b)
    want = [0] * n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            want[i + j] += x * y
    assert kronecker.mul_1d(a, b, n) == want


def test_kronecker_zero_operand():
    assert kronecker.mul_1d([0, 0, 0], [5, 7], 4) == [0, 0, 0, 0]
