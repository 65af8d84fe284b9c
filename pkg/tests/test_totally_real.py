import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from salemcensus.algebra import RealQuadElem
from salemcensus.errors import DomainError
from salemcensus.totally_real import (
    SYSTEM_CSV_HEADER,
    SystemSolution,
    c2_upper_bound,
    count_system,
    enumerate_system,
    lattice_geometry,
    ring_square_root,
    system_csv_row,
    verify_salem_over_L,
    volume_leading,
    volume_monte_carlo,
)

# Frozen by the independent float-with-exact-zero-guard enumeration oracle.
ORACLE_COUNTS = {
    (2, 10): 447, (2, 50): 3934, (2, 200): 30226,
    (5, 10): 741, (5, 50): 6378,
    (13, 10): 274, (13, 50): 2407,
}


def _mk(d, au, av, ku, kv):
    a = RealQuadElem(d, au, av)
    k = RealQuadElem(d, ku, kv)
    return SystemSolution(a, k, k * k + 2 * a - 2, "both")


class TestEnumerateSystem:
    @pytest.mark.parametrize("d,Q", sorted(ORACLE_COUNTS))
    def test_counts_match_oracle(self, d, Q):
        assert count_system(d, Q) == ORACLE_COUNTS[(d, Q)]

    @pytest.mark.parametrize("d", [2, 5, 13])
    def test_enumerate_matches_fast_count(self, d):
        for Q in (10, 50, 150):
            assert sum(1 for _ in enumerate_system(d, Q)) == count_system(d, Q)

    def test_rational_section(self):
        # rational solutions must be exactly the (a, k) of the square-rootable
        # scan with the conjugate bound |a| < 4, i.e. a in {-1, -2, -3}
        sols = [(s.a.u, s.k.u, s.branch) for s in enumerate_system(2, 10)
                if s.a.v == 0 and s.k.v == 0]
        assert sorted(sols) == [(-3, 1, "both"), (-3, 2, "both"), (-3, 3, "both"),
                                (-2, 1, "both"), (-2, 2, "both"), (-1, 1, "both")]

    def test_rational_a_outside_conjugate_window_rejected(self):
        # a = -5 satisfies 0 < -a < Q+3 but sigma2(a) = -5 violates |sigma(a)| < 4
        assert not any(s.a.u == -5 and s.a.v == 0 for s in enumerate_system(2, 10))

    def test_identity_positive_a_rejected(self):
        # a = -5 + 4w has sigma1(a) = 0.657 > 0
        assert not any((s.a.u, s.a.v) == (-5, 4) for s in enumerate_system(2, 60))

    def test_exact_boundary_excluded(self):
        # sigma1(k)^2 = -4 sigma1(a) exactly for a = -11 - 6 sqrt2, k = 6 + 2 sqrt2;
        # the strict inequality must drop it (floats alone would keep it)
        assert not any((s.a.u, s.a.v, s.k.u, s.k.v) == (-11, -6, 6, 2)
                       for s in enumerate_system(2, 50))

    @pytest.mark.parametrize("d", [2, 5])
    def test_solution_invariants_exact(self, d):
        Q = 30
        for s in enumerate_system(d, Q):
            assert s.b == s.k * s.k + 2 * s.a - 2
            # every window inequality, decided by exact element signs
            assert s.a.sign_sigma1() < 0
            assert (s.a + (Q + 3)).sign_sigma1() > 0
            assert (s.a + 4).sign_sigma2() > 0 and (s.a - 4).sign_sigma2() < 0
            assert s.k.sign_sigma1() > 0
            assert (s.k * s.k + 4 * s.a).sign_sigma1() < 0
            assert (s.k + 4).sign_sigma2() > 0 and (s.k - 4).sign_sigma2() < 0
            plus = (2 * s.k - s.a + 4).sign_sigma2() > 0
            minus = (2 * s.k + s.a - 4).sign_sigma2() < 0
            assert {"plus": plus and not minus, "minus": minus and not plus,
                    "both": plus and minus}[s.branch]

    def test_validation(self):
        with pytest.raises(DomainError):
            count_system(12, 10)
        with pytest.raises(DomainError):
            count_system(2, 1)

    def test_workers_do_not_change_output(self):
        seq = [(s.a.u, s.a.v, s.k.u, s.k.v) for s in enumerate_system(2, 40, workers=1)]
        par = [(s.a.u, s.a.v, s.k.u, s.k.v) for s in enumerate_system(2, 40, workers=3)]
        assert seq == par
        assert count_system(5, 300, workers=1) == count_system(5, 300, workers=3)

    def test_growth_exponent_window(self):
        from salemcensus.asymptotics import power_fit
        pts = [(q, count_system(2, q)) for q in (100, 200, 400, 800)]
        fit = power_fit(pts)
        assert 1.3 < fit.exponent < 1.7


class TestVerifySalemOverL:
    def test_frozen_true_example(self):
        # found by the independent numeric verification oracle
        s = _mk(2, -10, -9, 1, 1)
        assert (s.b.u, s.b.v) == (-19, -16)
        assert verify_salem_over_L(2, s)

    def test_rational_solution_fails_conjugate_condition(self):
        # identity quartic x^4 - 5x^3 - 11x^2 - 5x + 1 is Salem, but the
        # conjugate embedding is the same quartic: roots off the unit circle
        s = _mk(2, -5, 0, 1, 0)
        assert (s.b.u, s.b.v) == (-11, 0)
        assert not verify_salem_over_L(2, s)

    def test_reducible_over_ring_fails(self):
        # a = -1, k = 2: disc = (a-4)^2 - 4k^2 = 9 is a square in o_L
        s = _mk(2, -1, 0, 2, 0)
        assert not verify_salem_over_L(2, s)

    def test_verified_count_subset(self):
        total = count_system(2, 20)
        verified = count_system(2, 20, verified=True)
        assert verified == 156  # frozen by the independent oracle
        assert 0 < verified < total

    def test_verified_members_have_salem_identity_root(self):
        import numpy as np
        for s in enumerate_system(2, 15):
            if not verify_salem_over_L(2, s):
                continue
            s1a, _ = s.a.embeddings()
            s1b, _ = s.b.embeddings()
            roots = np.roots([1.0, s1a, s1b, s1a, 1.0])
            lam = max(z.real for z in roots if abs(z.imag) < 1e-9)
            assert lam > 1 + 1e-9
            _, s2a = s.a.embeddings()
            _, s2b = s.b.embeddings()
            conj = np.roots([1.0, s2a, s2b, s2a, 1.0])
            assert np.all(np.abs(np.abs(conj) - 1) < 1e-9)


class TestRingSquareRoot:
    def test_rational_squares(self):
        nine = RealQuadElem.from_int(2, 9)
        root = ring_square_root(nine)
        assert root is not None and root * root == nine
        assert ring_square_root(RealQuadElem.from_int(2, 21)) is None

    def test_irrational_square(self):
        x = RealQuadElem(2, 1, 1)
        sq = x * x  # 3 + 2 sqrt2
        root = ring_square_root(sq)
        assert root is not None and root * root == sq
        assert ring_square_root(sq + 1) is None

    def test_negative_embedding_has_no_root(self):
        assert ring_square_root(RealQuadElem(2, 0, 1)) is None  # sigma2 < 0

    @settings(max_examples=200)
    @given(st.sampled_from([2, 5, 13]), st.integers(-50, 50), st.integers(-50, 50))
    def test_roundtrip(self, d, u, v):
        x = RealQuadElem(d, u, v)
        root = ring_square_root(x * x)
        assert root is not None and root * root == x * x


class TestGeometry:
    def test_delta_values(self):
        assert lattice_geometry(5).delta == pytest.approx(2 * math.sqrt(7), rel=1e-12)
        assert lattice_geometry(2).delta == pytest.approx(2 * math.sqrt(6), rel=1e-12)

    def test_discriminants(self):
        assert lattice_geometry(5).disc == 5
        assert lattice_geometry(2).disc == 8
        assert lattice_geometry(13).disc == 13
        assert lattice_geometry(3).disc == 12

    def test_c2_bounds_frozen(self):
        assert c2_upper_bound(5) == pytest.approx(328.7062116475916, rel=1e-9)
        assert c2_upper_bound(2) == pytest.approx(187.4476170639053, rel=1e-9)

    def test_c2_decreasing_in_disc_at_fixed_delta(self):
        # formula shape: 2^6 (12 + 7d + d^2) / (3 |D_L|)
        geo5, geo13 = lattice_geometry(5), lattice_geometry(13)
        assert geo13.disc > geo5.disc
        val_at_5_delta = 2**6 * (12 + 7 * geo5.delta + geo5.delta**2) / (3 * geo13.disc)
        assert val_at_5_delta < c2_upper_bound(5)


class TestVolume:
    def test_leading_examples(self):
        assert volume_leading(1, 0.0, 100) == pytest.approx(8 / 3 * 1000, rel=1e-12)
        assert volume_leading(2, 0.0, 1) == 128.0

    def test_half_of_h1_is_the_sr_constant(self):
        for Q in (10, 100, 10**4):
            assert volume_leading(1, 0.0, Q) / 2 == (4 / 3) * Q**1.5

    def test_validation(self):
        with pytest.raises(DomainError):
            volume_leading(0, 0.0, 10)
        with pytest.raises(DomainError):
            volume_leading(1, -1.0, 10)

    def test_monte_carlo_matches_exact_volume(self):
        # exact volume of the fattened region: the x1-integral in closed form
        # times (48 + 28 delta + 4 delta^2)^(h-1)
        h, delta, Q = 2, 1.0, 100
        M = Q + 3 + delta
        x1_factor = (8 / 3) * M**1.5 + 2 * delta * M + 2 * delta * delta
        exact = x1_factor * (48 + 28 * delta + 4 * delta**2) ** (h - 1)
        est = volume_monte_carlo(h, delta, Q, samples=400_000, seed=11)
        assert est == pytest.approx(exact, rel=0.02)

    def test_monte_carlo_deterministic(self):
        a = volume_monte_carlo(2, 1.0, 50, samples=10_000, seed=3)
        b = volume_monte_carlo(2, 1.0, 50, samples=10_000, seed=3)
        assert a == b


def test_csv_row_format():
    assert SYSTEM_CSV_HEADER == "a_u,a_v,k_u,k_v,b_u,b_v,branch,verified"
    s = _mk(2, -3, 0, 1, 0)
    assert system_csv_row(s, True) == "-3,0,1,0,-7,0,both,1"
    assert system_csv_row(s) == "-3,0,1,0,-7,0,both,"
