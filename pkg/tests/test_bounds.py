import itertools
import math

import pytest
from hypothesis import given, strategies as st

from fqpoints import bounds
from fqpoints.bounds import (
    census_csv,
    census_failing,
    ci_compare,
    couvreur_bound,
    couvreur_equidim_bound,
    delta,
    schwarz_zippel_bound,
    serre_bound,
    tb_bound,
    tb_lower_bound_ci,
    tb_zanella_census,
    zanella_k,
    zanella_quadric_bound,
)
from fqpoints.errors import DimensionTooLarge, OutOfRange
from fqpoints.gf import field_from_q
from fqpoints.projgeom import p_count
from fqpoints.varieties import search_max_points

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def test_schwarz_zippel():
    assert schwarz_zippel_bound(2, 2, 3).value == 6
    assert schwarz_zippel_bound(1, 4, 5).value == 125
    r = schwarz_zippel_bound(4, 1, 3)
    assert r.value == 4 and not r.hypothesis_ok and r.note


def test_serre():
    assert serre_bound(2, 2, 2).value == 5
    assert serre_bound(1, 4, 3).value == p_count(3, 3)
    assert serre_bound(3, 2, 2).value == 7 == p_count(2, 2)
    assert not serre_bound(4, 2, 2).hypothesis_ok


def test_delta():
    assert [delta(-1), delta(1), delta(3)] == [0, 3, 10]
    with pytest.raises(OutOfRange):
        delta(-2)


def test_tb_examples():
    for q in (2, 3, 4, 5):
        assert tb_bound(2, 3, 5, q).value == 2 * (1 + q)
        for m in (2, 3, 4):
            for r in range(1, m + 1):
                assert tb_bound(2, m, r, q).value == p_count(m - 1, q) + q ** (m - r)
    with pytest.raises(OutOfRange):
        tb_bound(2, 3, 11, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_tb_at_r1_is_serre(q):
    for d in range(1, 6):
        for m in range(1, 6):
            assert tb_bound(d, m, 1, q).value == serre_bound(d, m, q).value


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_tb_linear_forms(q):
    for m in range(1, 6):
        for r in range(1, m + 2):
            assert tb_bound(1, m, r, q).value == p_count(m - r, q)


@pytest.mark.parametrize("m,q", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_tb_linear_forms_against_search(m, q):
    F = field_from_q(q)
    for r in range(1, m + 2):
        assert search_max_points(1, m, r, F).count == tb_bound(1, m, r, q).value


def test_zanella_examples():
    for q in (2, 3, 4, 5):
        z = zanella_quadric_bound(3, 5, q)
        assert z.value == 1 + 2 * q
        assert z.params["k"] == 1 and z.params["epsilon"] == 2
        for m in (2, 3, 4, 5):
            for r in range(1, m + 2):
                assert zanella_quadric_bound(m, r, q).value == p_count(m - 1, q) + (
                    q ** (m - r) if r <= m else 0)
            last = zanella_quadric_bound(m, delta(m), q)
            assert last.value == 0 and last.params["k"] == -1 and last.params["epsilon"] == 0


def test_zanella_k_partition():
    for m in range(1, 8):
        ks = [zanella_k(m, r) for r in range(1, delta(m) + 1)]
        assert ks == sorted(ks, reverse=True)
        assert ks[0] == m - 1 and ks[-1] == -1


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_zanella_equals_tb_where_attained(m, q):
    for r in list(range(1, m + 2)) + list(range(delta(m) - 4, delta(m) + 1)):
        assert zanella_quadric_bound(m, r, q).value == tb_bound(2, m, r, q).value


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
def test_census_structure(m, q):
    rows = tb_zanella_census(m, q)
    assert [row.r for row in rows] == list(range(1, delta(m) + 1))
    failing = census_failing(rows)
    assert len(failing) == math.comb(m - 1, 2)
    for row in rows:
        assert row.gap >= 0
        if 0 <= row.k < m - 1 and 1 <= row.i <= row.k:
            assert row.gap == p_count(row.k - row.i, q) - p_count(2 * row.k - m - row.i + 1, q)
            assert row.gap > 0
        if row.i in (row.k + 1, row.k + 2):
            assert row.gap == 0
    assert all(row.label == "attainment disproved" for row in failing)


def test_census_small_cases():
    assert census_failing(tb_zanella_census(2, 5)) == []
    (row,) = census_failing(tb_zanella_census(3, 2))
    assert (row.r, row.T_r, row.Z_r, row.gap) == (5, 6, 5, 1)
    assert len(census_failing(tb_zanella_census(4, 7))) >= 3
    assert census_csv(tb_zanella_census(2, 2)).splitlines()[0] == "r,k,i,T_r,Z_r,gap"


def test_couvreur_examples():
    assert couvreur_bound(3, 2, [(2, 1), (1, 1)]).value == 10
    for m in range(2, 6):
        for n in range(m):
            for deg in (1, 2, 5):
                for q in (2, 3):
                    assert couvreur_bound(m, q, [(n, deg)]).value == \
                        couvreur_equidim_bound(m, q, n, deg).value
    assert couvreur_equidim_bound(3, 2, 1, 4).value == 12
    with pytest.raises(DimensionTooLarge):
        couvreur_bound(3, 2, [(3, 1)])
    with pytest.raises(DimensionTooLarge):
        couvreur_equidim_bound(3, 2, 3, 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_couvreur_specializations(q):
    for m in range(1, 6):
        assert couvreur_equidim_bound(m, q, m - 1, 1).value == p_count(m - 1, q)
        for d in range(1, 5):
            assert couvreur_equidim_bound(m, q, m - 1, d).value == serre_bound(d, m, q).value


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_couvreur_on_quadric_family_components(m):
    for r in range(2, m + 1):
        for q in (2, 3, 4):
            got = couvreur_bound(m, q, [(m - 1, 1), (m - r, 1)]).value
            assert got == p_count(m - 1, q) + sum(q**j for j in range(max(0, m - 2 * r + 1), m - r + 1))
            exact = p_count(m - 1, q) + q ** (m - r)
            # strictly weaker than the true count except at r = m, where both agree
            assert got > exact if r < m else got == exact


def test_ci_compare_examples():
    for d, m, q in [(2, 3, 3), (3, 4, 2), (2, 2, 5)]:
        c = ci_compare(d, m, 1, q)
        assert c.T.value == c.C.value == serre_bound(d, m, q).value
        assert c.relation == "C=T"
    assert ci_compare(2, 4, 2, 7).C.value <= ci_compare(2, 4, 2, 7).T.value
    c = ci_compare(2, 3, 2, 3)
    assert (c.T.value, c.C.value, c.relation) == (16, 16, "C=T")
    assert c.T.hypothesis_ok
    assert not ci_compare(3, 3, 2, 3).T.hypothesis_ok


def test_ci_never_above_tb_on_grid():
    for m in range(2, 7):
        for r in range(2, m + 1):
            for q in PRIME_POWERS:
                for d in itertools.count(2):
                    if d**r > q + 1:
                        break
                    assert ci_compare(d, m, r, q).relation != "C>T"


def test_tb_lower_bound_examples():
    assert tb_lower_bound_ci(2, 3, 2, 2) == 9
    assert tb_lower_bound_ci(2, 2, 1, 3) == 7


@given(st.integers(2, 5), st.integers(1, 6), st.sampled_from(PRIME_POWERS), st.data())
def test_tb_lower_bound_below_tb(d, m, q, data):
    r = data.draw(st.integers(1, m))
    assert tb_lower_bound_ci(d, m, r, q) <= ci_compare(d, m, r, q).T.value


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_monotone_in_q(d, m, data):
    i = data.draw(st.integers(0, len(PRIME_POWERS) - 2))
    q1, q2 = PRIME_POWERS[i], PRIME_POWERS[i + 1]
    r = data.draw(st.integers(1, math.comb(m + d, d)))
    assert tb_bound(d, m, r, q1).value <= tb_bound(d, m, r, q2).value
    assert serre_bound(d, m, q1).value <= serre_bound(d, m, q2).value
    assert schwarz_zippel_bound(d, m, q1).value <= schwarz_zippel_bound(d, m, q2).value


def test_bound_result_contract():
    r = bounds.homma_bound(3, 2, 2)
    assert r.to_dict()["name"] == "homma" and r.value == 7
    assert bounds.zanella_set(3, 2).value == 7
    with pytest.raises(ValueError):
        bounds.BoundResult("nope", 1, {})
