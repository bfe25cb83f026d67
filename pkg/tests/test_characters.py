import itertools

import numpy as np
import pytest

from kforms import (
    IntervalSet,
    build_characters,
    build_ring,
    character_values,
    eval_character,
    fourth_moment,
    interval_character_sums,
    moment_identity_check,
)


def table_for(q):
    return build_ring(q), build_characters(build_ring(q))


class TestBuildCharacters:
    def test_prime_group_is_cyclic(self):
        _, table = table_for(5)
        assert table.char_count == 4
        assert table.orders == (4,)

    def test_mod_eight_group_structure(self):
        # (Z/8)* is C2 x C2: every character is real and squares to the
        # principal one (enumeration oracle over all values)
        ring, table = table_for(8)
        assert table.char_count == 4
        for idx in range(4):
            vals = character_values(table, idx)[ring.units]
            assert np.allclose(vals.imag, 0)
            assert np.allclose(np.abs(vals), 1)
            assert np.allclose(vals**2, 1)

    def test_two_has_principal_only(self):
        _, table = table_for(2)
        assert table.char_count == 1
        assert eval_character(table, 0, 1) == pytest.approx(1)

    def test_char_count_equals_phi(self):
        for q in (3, 4, 8, 12, 16, 24, 45, 90, 97, 360):
            ring, table = table_for(q)
            assert table.char_count == ring.phi


class TestEvalCharacter:
    def test_principal_is_one_on_units(self):
        ring, table = table_for(36)
        for x in ring.units:
            assert eval_character(table, 0, int(x)) == pytest.approx(1)

    def test_zero_off_units(self):
        ring, table = table_for(12)
        for idx in range(table.char_count):
            for x in (0, 2, 3, 4, 6, 8):
                assert eval_character(table, idx, x) == 0

    def test_power_relation(self):
        # the character with chi(2) = i mod 5 has chi(4) = chi(2)^2 = -1
        _, table = table_for(5)
        idx = next(
            i for i in range(4) if abs(eval_character(table, i, 2) - 1j) < 1e-12
        )
        assert eval_character(table, idx, 4) == pytest.approx(-1)

    def test_index_out_of_range(self):
        _, table = table_for(7)
        with pytest.raises(IndexError):
            eval_character(table, 6, 1)
        with pytest.raises(IndexError):
            eval_character(table, -1, 1)

    def test_orthogonality(self):
        for q in (5, 8, 12, 45, 97, 120):
            ring, table = table_for(q)
            for idx in range(table.char_count):
                total = character_values(table, idx).sum()
                if idx == 0:
                    assert total == pytest.approx(ring.phi)
                else:
                    assert abs(total) <= 1e-9 * q

    def test_multiplicativity(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            q = int(rng.integers(2, 400))
            ring, table = table_for(q)
            idx = int(rng.integers(0, table.char_count))
            x = int(ring.units[rng.integers(0, ring.phi)])
            y = int(ring.units[rng.integers(0, ring.phi)])
            lhs = eval_character(table, idx, x * y % q)
            rhs = eval_character(table, idx, x) * eval_character(table, idx, y)
            assert abs(lhs - rhs) <= 1e-12

    def test_values_vector_matches_scalar(self):
        _, table = table_for(40)
        for idx in (0, 1, table.char_count - 1):
            vec = character_values(table, idx)
            for x in range(40):
                assert vec[x] == pytest.approx(eval_character(table, idx, x))


class TestFourthMoment:
    def test_example_h2(self):
        _, table = table_for(5)
        assert fourth_moment(table, IntervalSet(0, 2)) == pytest.approx(24, abs=1e-6)

    def test_single_point_interval(self):
        _, table = table_for(5)
        assert fourth_moment(table, IntervalSet(0, 1)) == pytest.approx(4, abs=1e-9)
        _, table2 = table_for(2)
        assert fourth_moment(table2, IntervalSet(0, 1)) == pytest.approx(1, abs=1e-12)

    def test_sums_match_direct_evaluation(self):
        ring, table = table_for(24)
        interval = IntervalSet(3, 10)
        sums = interval_character_sums(table, interval)
        for idx in range(table.char_count):
            direct = sum(eval_character(table, idx, int(z)) for z in interval.members())
            assert sums[idx] == pytest.approx(direct, abs=1e-9)


class TestMomentIdentity:
    def test_example_q5(self):
        _, table = table_for(5)
        moment, twin = moment_identity_check(table, IntervalSet(0, 2))
        assert moment == pytest.approx(24, abs=1e-6)
        assert twin == 24

    def test_full_interval_against_enumeration(self):
        # brute-force the quadruple count over the whole unit group mod 7
        ring, table = table_for(7)
        moment, twin = moment_identity_check(table, IntervalSet(0, 7))
        units = [int(u) for u in ring.units]
        count = sum(
            1
            for x1, x2, x3, x4 in itertools.product(units, repeat=4)
            if (x1 * x2 - x3 * x4) % 7 == 0
        )
        assert twin == ring.phi * count
        assert moment == pytest.approx(twin, rel=1e-6)

    def test_unit_singleton(self):
        ring, table = table_for(9)
        moment, twin = moment_identity_check(table, IntervalSet(0, 1))
        assert moment == pytest.approx(ring.phi, rel=1e-9)
        assert twin == ring.phi

    def test_random_inputs_agree(self):
        rng = np.random.default_rng(33)
        for _ in range(20):
            q = int(rng.integers(2, 300))
            _, table = table_for(q)
            interval = IntervalSet(int(rng.integers(-q, q)), int(rng.integers(1, q + 1)))
            moment, twin = moment_identity_check(table, interval)
            if twin == 0:
                assert moment <= 1e-6
            else:
                assert moment == pytest.approx(twin, rel=1e-6)
