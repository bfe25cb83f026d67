import cmath
import math

import numpy as np
import pytest

from kforms import (
    build_ring,
    double_fast,
    double_naive,
    single_sum,
    single_table,
    weil_reference,
)


def brute_double(q, l, m, n):
    # dictionary-free pure-python oracle, independent of the numpy paths
    total = 0j
    for x in range(1, q):
        if math.gcd(x, q) != 1:
            continue
        xb = pow(x, -1, q)
        for y in range(1, q):
            if math.gcd(y, q) != 1:
                continue
            yb = pow(y, -1, q)
            total += cmath.exp(2j * cmath.pi * ((l * x * y + m * xb + n * yb) % q) / q)
    return total


class TestSingleSum:
    def test_degenerate_arguments(self):
        assert single_sum(build_ring(12), 0, 0) == pytest.approx(4)

    def test_ramanujan_case(self):
        assert single_sum(build_ring(7), 1, 0) == pytest.approx(-1, abs=1e-12)

    def test_small_prime_value(self):
        assert single_sum(build_ring(5), 1, 1) == pytest.approx(0.3819660, abs=1e-6)

    def test_realness(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            q = int(rng.integers(2, 800))
            ring = build_ring(q)
            m, n = int(rng.integers(0, q)), int(rng.integers(0, q))
            assert abs(single_sum(ring, m, n).imag) <= 1e-9 * ring.phi

    def test_weil_bound_small_prime(self):
        p = 101
        ring = build_ring(p)
        cap = 2 * math.sqrt(p)
        for n in range(1, p):
            values = single_table(ring, n).values
            assert np.max(np.abs(values[1:p])) <= cap


class TestSingleTable:
    def test_matches_single_sum(self):
        ring = build_ring(45)
        table = single_table(ring, 7)
        for a in (0, 1, 13, 44):
            assert table.values[a] == pytest.approx(single_sum(ring, a, 7), abs=1e-9)
        ring5 = build_ring(5)
        assert single_table(ring5, 1).values[1] == pytest.approx(0.3819660, abs=1e-6)

    def test_parseval(self):
        for q in (5, 12, 97, 360):
            ring = build_ring(q)
            table = single_table(ring, 1)
            total = float(np.sum(np.abs(table.values) ** 2))
            assert total == pytest.approx(q * ring.phi, rel=1e-6)

    def test_degenerate_row(self):
        assert single_table(build_ring(12), 0).values[0] == pytest.approx(4)


class TestDoubleSums:
    def test_all_zero_arguments(self):
        assert double_naive(build_ring(12), 0, 0, 0) == pytest.approx(16)
        assert double_fast(build_ring(12), 0, 0, 0) == pytest.approx(16)

    def test_inner_ramanujan(self):
        assert double_naive(build_ring(7), 1, 0, 0) == pytest.approx(-6, abs=1e-9)

    def test_value_against_python_oracle(self):
        expected = brute_double(5, 1, 1, 1)
        assert expected == pytest.approx(2.5450850 + 0.5020285j, abs=1e-6)
        assert double_naive(build_ring(5), 1, 1, 1) == pytest.approx(expected, abs=1e-10)
        assert double_fast(build_ring(5), 1, 1, 1) == pytest.approx(expected, abs=1e-8)
        assert double_naive(build_ring(21), 2, 5, 8) == pytest.approx(
            brute_double(21, 2, 5, 8), abs=1e-9
        )

    def test_fast_matches_naive(self):
        rng = np.random.default_rng(42)
        for _ in range(40):
            q = int(rng.integers(2, 500))
            ring = build_ring(q)
            l, m, n = (int(v) for v in rng.integers(-q, 2 * q, 3))
            gap = abs(double_fast(ring, l, m, n) - double_naive(ring, l, m, n))
            assert gap <= 1e-8 * ring.phi**2

    def test_table_reuse(self):
        ring = build_ring(101)
        table = single_table(ring, 3)
        via_reuse = double_fast(ring, 2, 5, 3, table=table)
        assert via_reuse == pytest.approx(double_naive(ring, 2, 5, 3), abs=1e-8)

    def test_conjugation_symmetry(self):
        rng = np.random.default_rng(43)
        for _ in range(500):
            q = int(rng.integers(2, 500))
            ring = build_ring(q)
            l, m, n = (int(v) for v in rng.integers(0, q, 3))
            lhs = np.conj(double_fast(ring, l, m, n))
            rhs = double_fast(ring, q - l, m, n)
            assert abs(lhs - rhs) <= 1e-8 * ring.phi**2

    def test_argument_symmetry(self):
        rng = np.random.default_rng(44)
        for _ in range(100):
            q = int(rng.integers(2, 500))
            ring = build_ring(q)
            l, m, n = (int(v) for v in rng.integers(0, q, 3))
            gap = abs(double_fast(ring, l, m, n) - double_fast(ring, l, n, m))
            assert gap <= 1e-8 * ring.phi**2


class TestWeilReference:
    def test_prime_nondegenerate(self):
        assert weil_reference(build_ring(101), 1, 1) == pytest.approx(2 * math.sqrt(101))

    def test_degenerate_case(self):
        assert weil_reference(build_ring(12), 0, 0) == pytest.approx(72)
        assert abs(single_sum(build_ring(12), 0, 0)) == pytest.approx(4)

    def test_reference_dominates_small_case(self):
        ring = build_ring(5)
        assert abs(single_sum(ring, 1, 1)) <= weil_reference(ring, 1, 1)
