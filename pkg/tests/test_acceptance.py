"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Each test asserts the exact values and its wall-clock limit.
"""

import itertools
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from fqpoints import bounds, codes, poly, projgeom, varieties
from fqpoints.gf import field_create, field_from_q
from fqpoints.projgeom import p_count
from fqpoints.varieties import DEFAULT_SEED


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(label, limit_s):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - t0
            assert elapsed < limit_s, f"took {elapsed:.2f} s, limit {limit_s} s"
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            with capsys.disabled():
                print(f"\n[{'PASS' if ok else 'FAIL'}] {label} ({elapsed:.2f} s, limit {limit_s} s)")
    return run


def _prime_powers(limit):
    out = []
    for q in range(2, limit):
        try:
            field_from_q(q)
            out.append(q)
        except ValueError:
            pass
    return out


def test_c01_serre_maximum_exhaustive(criterion):
    with criterion("C1 exhaustive maximum of |V(F)| equals d q^(m-1) + p_(m-2)", 10):
        for q, m, d in [(2, 2, 2), (2, 2, 3), (2, 3, 2), (3, 2, 2), (3, 2, 3), (3, 2, 4)]:
            rep = varieties.search_max_points(d, m, 1, field_from_q(q), mode="exhaustive")
            assert rep.count == d * q ** (m - 1) + p_count(m - 2, q), (q, m, d, rep.count)


def test_c02_extremal_constructions(criterion):
    with criterion("C2 G_d and g_d reach the Serre and Schwarz-Zippel values", 5):
        for q in (2, 3, 4):
            F = field_from_q(q)
            for m in (1, 2, 3):
                for d in range(1, q + 2):
                    G = varieties.construct_G_projective(d, m, F)
                    assert varieties.count_projective_zeros([G], m, F) == d * q ** (m - 1) + p_count(m - 2, q)
                for d in range(1, q + 1):
                    g = varieties.construct_g_affine(d, m, F)
                    assert varieties.count_affine_zeros(g, m, F) == d * q ** (m - 1)


def test_c03_quadric_family_attainment(criterion):
    with criterion("C3 |V(Q_1..Q_r)| = p_(m-1) + floor(q^(m-r)) = T_r = Z_r", 5):
        for q in (2, 3, 4):
            F = field_from_q(q)
            for m in (2, 3, 4):
                for r in range(1, m + 2):
                    want = p_count(m - 1, q) + (q ** (m - r) if r <= m else 0)
                    fam = varieties.construct_quadric_family(m, r, F)
                    assert varieties.count_projective_zeros(fam, m, F) == want
                    assert bounds.tb_bound(2, m, r, q).value == want
                    assert bounds.zanella_quadric_bound(m, r, q).value == want


def test_c04_last_five_weights(criterion):
    with criterion("C4 dropped-monomial families give 0, 1, 2, q+1, q+2", 5):
        for q in (2, 3):
            F = field_from_q(q)
            for m in (2, 3):
                for s, want in enumerate([0, 1, 2, q + 1, q + 2]):
                    fam = varieties.construct_dropped_monomial_family(m, s, F)
                    r = bounds.delta(m) - s
                    assert varieties.count_projective_zeros(fam, m, F) == want
                    assert bounds.tb_bound(2, m, r, q).value == want
                    assert bounds.zanella_quadric_bound(m, r, q).value == want


def test_c05_counterexample_census(criterion):
    with criterion("C5 T_5 - Z_5 = 1 in P^3 and census gaps match the closed form", 2):
        for q in (2, 3, 4, 5):
            T = bounds.tb_bound(2, 3, 5, q).value
            Z = bounds.zanella_quadric_bound(3, 5, q).value
            assert (T, Z, T - Z) == (2 * (1 + q), 1 + 2 * q, 1)
        for m in range(3, 9):
            for q in (2, 3, 4):
                failing = bounds.census_failing(bounds.tb_zanella_census(m, q))
                assert len(failing) >= math.comb(m - 1, 2)
                for row in failing:
                    assert row.gap == p_count(row.k - row.i, q) - p_count(2 * row.k - m - row.i + 1, q)


def test_c06_randomized_search_at_r5(criterion):
    with criterion("C6 randomized search over 5 quadrics in P^3(F_2) stays in [4, 5]", 30):
        rep = varieties.search_max_points(2, 3, 5, field_create(2), mode="randomized",
                                          budget=10_000, seed=DEFAULT_SEED)
        assert rep.trials == 10_000
        assert 4 <= rep.count <= 5, rep.count


@pytest.mark.slow
def test_c06_full_exhaustive_search_at_r5(criterion):
    with criterion("C6-full exhaustive search over all [10,5]_2 subspaces gives max <= 5", 6 * 3600):
        rep = varieties.search_max_points(2, 3, 5, field_create(2), mode="exhaustive")
        assert rep.trials == poly.gaussian_binomial(10, 5, 2)
        assert rep.count <= 5, rep.count


def test_c07_prm_hierarchy_three_ways(criterion):
    with criterion("C7 PRM_3(2,2) hierarchy is 6 8 9 11 12 13 by three routes", 60):
        want = [6, 8, 9, 11, 12, 13]
        F = field_create(3)
        C = codes.prm_code(2, 2, F)
        assert [codes.higher_weight(C, r) for r in range(1, 7)] == want
        assert codes.prm_quadric_closed_forms(2, 3).as_list() == want
        assert [codes.higher_weight_geometric(2, 2, r, F) for r in range(1, 7)] == want


def test_c08_set_bound_and_incidence(criterion):
    with criterion("C8 |X| <= a q + 1 and incidence double count on random subsets", 10):
        rng = np.random.Generator(np.random.PCG64(DEFAULT_SEED))
        for m, q in [(2, 2), (2, 3), (3, 2)]:
            F = field_from_q(q)
            pts = projgeom.enumerate_projective(m, F)
            for _ in range(1000):
                X = [p for p, keep in zip(pts, rng.random(len(pts)) < 0.5) if keep]
                a, _H = projgeom.max_hyperplane_section(X, m, F)
                assert len(X) <= a * q + 1
                assert int(projgeom.incidence_counts(X, m, F).sum()) == len(X) * p_count(m - 1, q)


def test_c09_couvreur_comparison(criterion):
    with criterion("C9 C_r <= T_r on the grid; Couvreur on the Q-family exceeds the count", 2):
        for m in range(2, 7):
            for r in range(2, m + 1):
                for q in _prime_powers(130):
                    for d in itertools.count(2):
                        if d**r > q + 1:
                            break
                        c = bounds.ci_compare(d, m, r, q)
                        assert c.C.value <= c.T.value, (d, m, r, q)
        not_exceeding = []
        for m in range(2, 7):
            for r in range(2, m + 1):
                for q in (2, 3, 4, 5, 7):
                    cb = bounds.couvreur_bound(m, q, [(m - 1, 1), (m - r, 1)]).value
                    shown = p_count(m - 1, q) + sum(q**j for j in range(max(0, m - 2 * r + 1), m - r + 1))
                    assert cb == shown, (m, r, q)
                    if not cb > p_count(m - 1, q) + q ** (m - r):
                        not_exceeding.append((m, r, q))
        assert not not_exceeding, f"Couvreur value equals the exact count at (m, r, q) = {not_exceeding}"


def test_c10_substrate(criterion):
    with criterion("C10 field axioms, subspace counts and Plotkin inequality", 10):
        for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16):
            F = field_from_q(q)
            add = np.array([[F.cadd(a, b) for b in range(q)] for a in range(q)])
            mul = np.array([[F.cmul(a, b) for b in range(q)] for a in range(q)])
            a, b, c = np.meshgrid(range(q), range(q), range(q), indexing="ij")
            assert np.array_equal(add[add[a, b], c], add[a, add[b, c]])
            assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
            assert np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])
            assert np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
            assert all(F.cmul(x, F.cinv(x)) == F.one_code for x in range(1, q))
        for q in (2, 3):
            F = field_create(q)
            for k in range(1, 7):
                for r in range(1, k + 1):
                    got = sum(len(batch) for batch in poly.iter_subspace_codes(k, r, F))
                    assert got == poly.gaussian_binomial(k, r, q), (k, r, q)
        for d, m, q in [(1, 1, 2), (1, 2, 2), (2, 1, 2), (2, 2, 2), (1, 3, 2), (1, 2, 3), (2, 2, 3),
                        (2, 1, 4), (1, 2, 4)]:
            rep = codes.plotkin_check(codes.prm_code(d, m, field_from_q(q)))
            assert rep.plotkin_ok and rep.set_bound_ok, (d, m, q)
