from fractions import Fraction

import pytest

from carlevel import (
    ROOT,
    AdmissibilityError,
    BellmanPoint,
    CandidateParams,
    DPKey,
    DyadicRational,
    LevelSetDP,
    PrecisionError,
    ResourceLimitError,
    candidate_eval,
    carleson_constant,
    convergence_report,
    dp_max_levelset,
    dp_table,
    reconstruct_witness,
)
from oracles import brute_force_extremal


def check_witness(witness, C, average, level, value):
    """Re-validate a witness through the sequence machinery only."""
    assert witness.carleson_average(ROOT) == average
    assert carleson_constant(witness, C).is_c_carleson is True
    assert witness.level_set_measure(level) == value


class TestBaseCases:
    def test_depth_zero_selected_leaf(self):
        value, witness = dp_max_levelset(1, 0, 1, 1)
        assert value == 1
        assert witness.selected == {ROOT}

    def test_depth_zero_empty(self):
        value, witness = dp_max_levelset(1, 0, 0, 1)
        assert value == 0
        assert witness.selected == frozenset()

    def test_obstacle_rows_are_one(self):
        for a in (0, Fraction(1, 2), 1, Fraction(3, 2)):
            for m in (0, -2):
                value, witness = dp_max_levelset(2, 3, a, m)
                assert value == 1
                check_witness(witness, Fraction(2), Fraction(a), m, value)

    def test_two_levels_of_nesting_with_c2(self):
        value, witness = dp_max_levelset(2, 2, 2, 2)
        assert value == 1
        check_witness(witness, Fraction(2), Fraction(2), 2, value)


class TestAgainstExhaustiveEnumeration:
    @pytest.mark.parametrize("c", [Fraction(1), Fraction(2)])
    @pytest.mark.parametrize("depth", [0, 1, 2])
    def test_small_depth_sweep(self, c, depth):
        oracle = brute_force_extremal(c, depth, range(0, 5))
        engine = LevelSetDP(c)
        seen = set()
        cap = engine._cap_num(depth)
        for n in range(cap + 1):
            a = Fraction(n, 1 << depth)
            for m in range(0, 5):
                value, witness = engine.max_levelset(depth, a, m)
                assert value.as_fraction() == oracle[(a, m)], (c, depth, a, m)
                check_witness(witness, c, a, m, value)
                seen.add((a, m))
        assert seen == set(oracle)

    def test_depth_three_spot_checks(self):
        oracle = brute_force_extremal(Fraction(2), 3, [2, 3])
        engine = LevelSetDP(2)
        for a in (Fraction(2), Fraction(15, 8), Fraction(1, 2)):
            for m in (2, 3):
                assert engine.value(3, a, m).as_fraction() == oracle[(a, m)]

    def test_non_dyadic_bound_sweep(self):
        # the cap min(C, d + 1) crosses the dyadic grid obliquely here
        c = Fraction(16, 5)
        oracle = brute_force_extremal(c, 2, range(0, 4))
        engine = LevelSetDP(c)
        for n in range(engine._cap_num(2) + 1):
            a = Fraction(n, 4)
            for m in range(0, 4):
                value, witness = engine.max_levelset(2, a, m)
                assert value.as_fraction() == oracle[(a, m)], (a, m)
                check_witness(witness, c, a, m, value)


class TestUpperBoundAndMonotonicity:
    def test_bounded_by_closed_form(self):
        params = CandidateParams.from_constant(Fraction(16, 5))
        engine = LevelSetDP(Fraction(16, 5))
        for n in range(engine._cap_num(3) + 1):
            a = Fraction(n, 8)
            for m in range(0, 5):
                val = engine.value(3, a, m).as_fraction()
                assert val <= candidate_eval(params, BellmanPoint(a, Fraction(m)))

    def test_nondecreasing_in_depth(self):
        engine = LevelSetDP(2)
        for a in (Fraction(1), Fraction(3, 2), Fraction(2)):
            vals = [engine.value(d, a, 3).as_fraction() for d in range(2, 7)]
            assert all(x <= y for x, y in zip(vals, vals[1:]))


class TestTable:
    def test_c1_row_two_is_zero(self):
        table = dp_table(1, 3, 2)
        for key, cell in table.cells.items():
            if key.level == 2:
                assert cell.value == 0

    def test_c2_depth1_select_root(self):
        table = dp_table(2, 1, 1)
        cell = table.cells[DPKey(1, DyadicRational(1), 1)]
        assert cell.value == 1

    def test_rows_sorted_and_complete(self):
        table = dp_table(2, 2, 1)
        rows = table.rows()
        assert len(rows) == 9 * 2
        assert rows == sorted(rows)

    def test_every_cell_witness_round_trips(self):
        for depth in range(0, 5):
            table = dp_table(2, depth, 3)
            for key, cell in table.cells.items():
                witness = reconstruct_witness(table, key)
                check_witness(witness, Fraction(2), key.average.as_fraction(),
                              key.level, cell.value)

    def test_missing_key_is_lookup_error(self):
        table = dp_table(2, 2, 1)
        with pytest.raises(KeyError):
            reconstruct_witness(table, DPKey(2, DyadicRational(1), 9))

    def test_depth_limit_enforced(self):
        with pytest.raises(ValueError):
            dp_table(2, 13, 1)


class TestConvergence:
    def test_gap_closes_at_depth_two(self):
        rows = convergence_report(2, 2, 2, 4)
        by_depth = {r.depth: r for r in rows}
        assert by_depth[2].value == 1 and by_depth[2].gap == 0

    def test_gaps_nonnegative_nonincreasing(self):
        rows = convergence_report(2, 2, 3, 7)
        gaps = [r.gap for r in rows]
        assert all(g >= 0 for g in gaps)
        assert all(x >= y for x, y in zip(gaps, gaps[1:]))

    def test_trivial_zero_gap_when_both_sides_vanish(self):
        rows = convergence_report(1, 1, 2, 4)
        assert all(r.value == 0 and r.gap == 0 for r in rows)

    def test_starts_at_representable_depth(self):
        rows = convergence_report(2, Fraction(3, 4), 1, 4)
        assert rows[0].depth == 2


class TestValidation:
    def test_unrepresentable_average(self):
        with pytest.raises(PrecisionError):
            dp_max_levelset(2, 2, Fraction(1, 8), 1)
        with pytest.raises(PrecisionError):
            dp_max_levelset(2, 2, Fraction(1, 3), 1)

    def test_average_above_bound(self):
        with pytest.raises(AdmissibilityError):
            dp_max_levelset(2, 3, Fraction(5, 2), 1)

    def test_average_above_depth_capacity(self):
        with pytest.raises(ValueError):
            dp_max_levelset(7, 1, 3, 1)

    def test_resource_cap(self):
        with pytest.raises(ResourceLimitError):
            dp_max_levelset(2, 8, 2, 4, cell_cap=10)

    def test_results_reproducible_across_engines(self):
        a = LevelSetDP(Fraction(16, 5)).max_levelset(4, Fraction(5, 2), 3)
        b = LevelSetDP(Fraction(16, 5)).max_levelset(4, Fraction(5, 2), 3)
        assert a[0] == b[0] and a[1] == b[1]
