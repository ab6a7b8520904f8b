from __future__ import annotations

import pytest

from mapcount.errors import NormalizationFailure
from mapcount.exact.poly import Poly
from mapcount.exact.series import NU, TruncSeries, series_inverse
from mapcount.ising import solve_catalytic_bicoloured, split_by_root_edge
from mapcount.oracle import classify, enumerate_rooted_maps, oracle_series
from mapcount.tower import (
    NORMALIZATIONS, bicoloured_residuals, bipartite_two_connected, build_bicoloured_three_connected,
    build_bicoloured_two_connected, build_uncoloured_tower, core_residual, is_zero_series, network_residual,
    tb_series, two_connected_residuals,
)

ORDER = 16


@pytest.fixture(scope="module")
def unc():
    return build_uncoloured_tower(40)


@pytest.fixture(scope="module")
def split():
    return split_by_root_edge(solve_catalytic_bicoloured(ORDER + 1))


@pytest.fixture(scope="module")
def B12(split):
    return build_bicoloured_two_connected(split)


@pytest.fixture(scope="module")
def tower(B12):
    return build_bicoloured_three_connected(*B12)


def _counts(n, flag):
    return sum(getattr(classify(m), flag) for m in enumerate_rooted_maps(n))


# -- uncoloured ---------------------------------------------------------------

def test_uncoloured_residuals(unc):
    assert is_zero_series(core_residual(unc))
    assert is_zero_series(network_residual(unc))
    assert unc.S == unc.P


def test_uncoloured_against_oracle(unc):
    assert [unc.B[n] for n in range(7)] == [0, 0] + [_counts(n, "two_connected") for n in range(2, 7)]
    assert all(unc.T[n] == 0 for n in range(6))
    assert unc.T[6] == _counts(6, "three_connected")


def test_uncoloured_nonnegative_integers(unc):
    for s in (unc.B, unc.D, unc.S, unc.T):
        assert all(isinstance(c, int) and c >= 0 for c in s.coeffs)


def test_bare_one_edge_term_fails_oracle():
    bad = build_uncoloured_tower(8, one_edge_term="bare")
    assert bad.B[3] != _counts(3, "two_connected")


def test_uncoloured_order_independence(unc):
    small = build_uncoloured_tower(20)
    assert small.T == unc.T.truncate(20)
    assert small.B == unc.B.truncate(20)


# -- bicoloured ---------------------------------------------------------------

def test_two_connected_against_oracle(B12):
    B1, B2 = B12
    mono = oracle_series(4, "two_conn+mono_root")
    bi = oracle_series(4, "two_conn+bi_root")
    for n in range(2, 5):
        assert B1[n] == mono[n] and B2[n] == bi[n]
    assert all(c(0) == 0 for c in B1.coeffs)


def test_two_connected_residuals(split, B12):
    for r in two_connected_residuals(split, *B12).values():
        assert is_zero_series(r)


def test_three_connected_residuals(tower):
    for r in bicoloured_residuals(tower).values():
        assert is_zero_series(r)


def test_series_parallel_closed_forms(tower):
    D1, D2 = tower.D1, tower.D2
    n = D1.order
    one = TruncSeries.one(n, NU)
    s, d = D1 + D2, D1 - D2
    t = lambda x: x.truncate(n)  # noqa: E731
    assert t(tower.S1 + tower.S2) == t(s * s * series_inverse(one + s))
    assert t(tower.S1 - tower.S2) == t(d * d * series_inverse(one + d))
    assert t(tower.P1) == t(D1 * D1 * series_inverse(one + D1))
    assert t(tower.P2) == t(D2 * D2 * series_inverse(one + D2))


def test_three_connected_base_case(tower):
    assert all(tower.T1[n].is_zero() and tower.T2[n].is_zero() for n in range(6))
    assert tower.T1[6] == oracle_series(6, "three_conn+mono_root")[6]
    assert tower.T2[6] == oracle_series(6, "three_conn+bi_root")[6]


def test_selected_normalisation(tower):
    assert tower.normalization == "root_class"
    cands = tower.checks["candidates"]
    assert set(cands) == set(NORMALIZATIONS)
    assert [k for k, v in cands.items() if all(v.values())] == ["root_class"]


def test_explicit_normalisation_is_reported(B12):
    t = build_bicoloured_three_connected(*B12, normalization="bare")
    assert not all(t.checks.values())


def test_nu_degree_bound(B12, tower):
    for s in list(B12) + [tower.D1, tower.D2, tower.S1, tower.S2, tower.P1, tower.P2, tower.T1, tower.T2]:
        assert all(c.degree <= n for n, c in enumerate(s.coeffs))


@pytest.mark.parametrize("value", [0, 1])
def test_nonnegative_integer_specialisations(B12, tower, value):
    for s in list(B12) + [tower.D1, tower.D2, tower.T1, tower.T2]:
        assert all(isinstance(c, int) and c >= 0 for c in s.eval_nu(value).coeffs)


def test_bipartite_two_connected_fast_path(B12):
    assert bipartite_two_connected(ORDER + 1) == B12[1].eval_nu(0)


def test_tb_order_independence(tower):
    small = tb_series(14)
    assert small.Tb == tower.Tb.truncate(small.Tb.order)
    assert tower.Tb.coeffs[12:16] == (1, 0, 0, 0)


def test_normalisation_failure_when_nothing_qualifies():
    # below z^7 the K4 check cannot run, so no variant qualifies
    split = split_by_root_edge(solve_catalytic_bicoloured(6))
    with pytest.raises(NormalizationFailure):
        build_bicoloured_three_connected(*build_bicoloured_two_connected(split))


def test_b1_nu_zero_coefficient(B12):
    B1, _ = B12
    assert all(c(0) == 0 for c in B1.coeffs)
    assert B1[2] == Poly([0, 0, 1])  # the double edge with both edges monochromatic
