import math

import numpy as np
import pytest

from kforms import (
    IntervalSet,
    NotAUnitError,
    build_ring,
    centered_dist,
    centered_rep,
    cyclic_dft,
    eq_eval,
    interval_phase_sum,
    mod_inverse,
    phase_sum_table,
)


def brute_phi(q):
    return sum(1 for x in range(q) if math.gcd(x, q) == 1)


class TestBuildRing:
    def test_prime_modulus(self):
        ring = build_ring(7)
        assert ring.phi == 6
        assert ring.units.tolist() == [1, 2, 3, 4, 5, 6]
        assert ring.tau == 2

    def test_composite_modulus(self):
        ring = build_ring(12)
        assert ring.phi == 4
        assert ring.units.tolist() == [1, 5, 7, 11]
        assert ring.tau == 6

    def test_totient_against_gcd_count(self):
        # independent totient oracle: direct gcd count
        ring = build_ring(360)
        assert ring.phi == 96
        assert brute_phi(360) == 96
        for q in (2, 9, 97, 128, 210):
            assert build_ring(q).phi == brute_phi(q)

    def test_small_moduli_rejected(self):
        for q in (1, 0, -5):
            with pytest.raises(ValueError, match="modulus too small"):
                build_ring(q)

    def test_unit_mask_consistency(self):
        ring = build_ring(90)
        for x in range(90):
            assert bool(ring.unit_mask[x]) == (math.gcd(x, 90) == 1)
        assert int(ring.unit_mask.sum()) == ring.phi


class TestModInverse:
    def test_examples(self):
        assert mod_inverse(build_ring(7), 3) == 5
        assert mod_inverse(build_ring(5), 2) == 3

    def test_not_a_unit(self):
        with pytest.raises(NotAUnitError):
            mod_inverse(build_ring(10), 4)

    def test_involution(self):
        ring = build_ring(462)
        for x in ring.units:
            assert ring.inv_table[ring.inv_table[x]] == x
            assert (int(x) * int(ring.inv_table[x])) % 462 == 1

    def test_against_single_shot_inversion(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            q = int(rng.integers(2, 3000))
            ring = build_ring(q)
            x = int(ring.units[rng.integers(0, ring.phi)])
            assert mod_inverse(ring, x) == pow(x, -1, q)


class TestEqEval:
    def test_examples(self):
        assert eq_eval(build_ring(4), 1) == pytest.approx(1j)
        assert eq_eval(build_ring(2), 1) == pytest.approx(-1)
        assert eq_eval(build_ring(5), 15) == pytest.approx(1)

    def test_reduction_before_evaluation(self):
        ring = build_ring(97)
        for z in (5, -5, 17):
            assert eq_eval(ring, z + 97 * 10**12) == eq_eval(ring, z)

    def test_array_form(self):
        ring = build_ring(8)
        vals = eq_eval(ring, np.arange(16))
        assert np.allclose(vals[:8], vals[8:])


class TestCentered:
    def test_examples(self):
        ring = build_ring(10)
        assert centered_dist(ring, 7) == 3
        assert centered_dist(ring, 15) == 5
        assert centered_dist(ring, 20) == 0

    def test_symmetries(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            q = int(rng.integers(2, 1000))
            u = int(rng.integers(-10 * q, 10 * q))
            ring = build_ring(q)
            d = centered_dist(ring, u)
            assert d == centered_dist(ring, u % q) == centered_dist(ring, -u)
            assert 0 <= d <= q / 2

    def test_centered_rep_window(self):
        ring = build_ring(12)
        reps = centered_rep(ring, np.arange(12))
        assert reps.min() > -6 and reps.max() <= 6


class TestCyclicDft:
    def test_delta_to_ones(self):
        ring = build_ring(11)
        f = np.zeros(11, dtype=complex)
        f[0] = 1
        assert np.allclose(cyclic_dft(ring, f, "forward"), np.ones(11))

    def test_ones_to_scaled_delta(self):
        ring = build_ring(30)
        out = cyclic_dft(ring, np.ones(30), "forward")
        expected = np.zeros(30, dtype=complex)
        expected[0] = 30
        assert np.allclose(out, expected, atol=1e-9 * 30)

    def test_parseval(self):
        rng = np.random.default_rng(11)
        for q in (17, 96, 255):
            ring = build_ring(q)
            f = rng.standard_normal(q) + 1j * rng.standard_normal(q)
            F = cyclic_dft(ring, f, "forward")
            assert np.sum(np.abs(F) ** 2) == pytest.approx(q * np.sum(np.abs(f) ** 2))

    def test_round_trip(self):
        rng = np.random.default_rng(12)
        for q in (2, 3, 47, 128, 1009):
            ring = build_ring(q)
            f = rng.standard_normal(q) + 1j * rng.standard_normal(q)
            back = cyclic_dft(ring, cyclic_dft(ring, f, "forward"), "inverse")
            assert np.max(np.abs(back - f)) <= 1e-9 * q * np.max(np.abs(f))

    def test_exponential_orthogonality(self):
        # sum_lam e_q(lam*t) = q when q | t else 0; the all-ones forward DFT
        # evaluates every t at once
        for q in range(2, 501):
            ring = build_ring(q)
            out = cyclic_dft(ring, np.ones(q), "forward")
            assert abs(out[0] - q) <= 1e-9 * q
            assert np.max(np.abs(out[1:])) <= 1e-9 * q

    def test_bluestein_matches_naive_reference(self):
        rng = np.random.default_rng(13)
        for q in (2, 3, 5, 31, 64, 65, 100, 243, 641, 1000, 2048, 4093, 4096):
            ring = build_ring(q)
            f = rng.standard_normal(q) + 1j * rng.standard_normal(q)
            fast = cyclic_dft(ring, f, "forward", method="bluestein")
            ref = cyclic_dft(ring, f, "forward", method="naive")
            assert np.max(np.abs(fast - ref)) <= 1e-9 * q * np.max(np.abs(f))

    def test_length_mismatch(self):
        ring = build_ring(9)
        with pytest.raises(ValueError, match="length mismatch"):
            cyclic_dft(ring, np.ones(8), "forward")

    def test_bad_direction(self):
        ring = build_ring(9)
        with pytest.raises(ValueError, match="direction"):
            cyclic_dft(ring, np.ones(9), "sideways")


class TestIntervalPhaseSum:
    def test_zero_frequency_gives_length(self):
        ring = build_ring(11)
        assert interval_phase_sum(ring, IntervalSet(4, 7), 0) == pytest.approx(7)
        assert interval_phase_sum(ring, IntervalSet(4, 7), 22) == pytest.approx(7)

    def test_small_example(self):
        ring = build_ring(4)
        # interval {1, 2}: e_4(1) + e_4(2) = i - 1
        assert interval_phase_sum(ring, IntervalSet(0, 2), 1) == pytest.approx(-1 + 1j)

    def test_matches_direct_summation(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            q = int(rng.integers(2, 500))
            ring = build_ring(q)
            interval = IntervalSet(int(rng.integers(-q, q)), int(rng.integers(1, q + 1)))
            x = int(rng.integers(0, q))
            direct = complex(np.sum(eq_eval(ring, interval.members() * x)))
            closed = interval_phase_sum(ring, interval, x)
            assert abs(closed - direct) <= 1e-10 * interval.length

    def test_magnitude_bound(self):
        rng = np.random.default_rng(22)
        checked = 0
        while checked < 10_000:
            q = int(rng.integers(2, 2000))
            ring = build_ring(q)
            interval = IntervalSet(int(rng.integers(-q, q)), int(rng.integers(1, q + 1)))
            table = phase_sum_table(ring, interval)
            xs = rng.integers(0, q, size=min(64, q))
            for x in xs:
                dist = centered_dist(ring, int(x))
                cap = interval.length if dist == 0 else min(interval.length, q / dist)
                assert abs(table[int(x)]) <= cap + 1e-9
                checked += 1

    def test_table_matches_scalar(self):
        ring = build_ring(37)
        interval = IntervalSet(-5, 12)
        table = phase_sum_table(ring, interval)
        for x in range(37):
            assert table[x] == pytest.approx(interval_phase_sum(ring, interval, x))


class TestIntervalSet:
    def test_members(self):
        iv = IntervalSet(3, 4)
        assert iv.members().tolist() == [4, 5, 6, 7]
        assert 4 in iv and 7 in iv and 3 not in iv

    def test_length_validated(self):
        with pytest.raises(ValueError, match="length"):
            IntervalSet(0, 0)
