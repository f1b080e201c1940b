from collections import Counter
from fractions import Fraction

from carlevel import (
    ROOT,
    CandidateParams,
    CarlesonSeq,
    CheckGrid,
    NodeAddress,
    candidate_fn,
    check_jump,
    check_main_inequality,
    check_midpoint_concavity,
    check_obstacle,
    induction_trace,
    obstacle_indicator,
    random_carleson,
    run_all_checks,
)
from oracles import brute_jump_ok, brute_main_inequality_ok, brute_pair_concavity_ok


def small_grid(c, exp=3, lo=-2, hi=None, extras=(Fraction(1, 2), Fraction(7, 2))):
    import math
    C = Fraction(c)
    hi = math.ceil(C) + 4 if hi is None else hi
    return CheckGrid.build(C, exp, lo, hi, extra_lambdas=extras)


def cand(c):
    return candidate_fn(CandidateParams.from_constant(Fraction(c)))


def constant_zero(avg, lam):
    return Fraction(0)


def constant_one(avg, lam):
    return Fraction(1)


def square_stub(avg, lam):
    # convex in the average, so midpoint concavity must fail
    return avg * avg if lam > 0 else Fraction(1)


def affine_stub(avg, lam):
    return Fraction(1, 4) + avg / 8 if lam > 0 else Fraction(1)


def spike_stub(avg, lam):
    # concave except for a dip at one interior point; trips the probes
    if lam <= 0:
        return Fraction(1)
    return Fraction(0) if avg == Fraction(1, 2) else Fraction(1, 2)


class TestObstacle:
    def test_candidate_passes(self):
        assert check_obstacle(cand(2), small_grid(2)) == []

    def test_counterexample_passes(self):
        assert check_obstacle(obstacle_indicator, small_grid(2)) == []

    def test_constant_zero_fails_everywhere_nonpositive(self):
        grid = small_grid(1, exp=2, lo=-2, hi=2, extras=())
        violations = check_obstacle(constant_zero, grid)
        nonpos = [l for l in grid.lambda_values if l <= 0]
        assert len(violations) == len(nonpos) * (grid.coarse_count + 1)
        assert all(v.lhs == 0 and v.rhs == 1 for v in violations)


class TestMidpointConcavity:
    def test_candidates_pass(self):
        for c in (1, 2, Fraction(16, 5)):
            assert check_midpoint_concavity(cand(c), small_grid(c)) == []

    def test_square_stub_fails(self):
        violations = check_midpoint_concavity(square_stub, small_grid(1, exp=2))
        assert violations
        v = violations[0]
        assert v.lhs < v.rhs  # strict rational violation

    def test_affine_passes_with_equality(self):
        assert check_midpoint_concavity(affine_stub, small_grid(1, exp=2)) == []

    def test_probe_path_agrees_with_all_pairs_oracle(self):
        cases = [(cand(2), Fraction(2)),
                 (cand(Fraction(16, 5)), Fraction(16, 5)),
                 (obstacle_indicator, Fraction(2)),
                 (square_stub, Fraction(1)),
                 (affine_stub, Fraction(2)),
                 (spike_stub, Fraction(2)),
                 (constant_one, Fraction(16, 5))]
        for fn, c in cases:
            grid = small_grid(c, exp=2, hi=4, extras=(Fraction(1, 2),))
            fast_empty = not check_midpoint_concavity(fn, grid)
            assert fast_empty == brute_pair_concavity_ok(fn, grid)


class TestJump:
    def test_candidates_pass(self):
        for c in (1, 2, Fraction(16, 5), 7):
            assert check_jump(cand(c), small_grid(c)) == []

    def test_counterexample_exact_witness(self):
        violations = check_jump(obstacle_indicator, small_grid(2, exp=2))
        assert violations
        first = violations[0]
        assert [(p.avg, p.lam) for p in first.points] == [(0, 0), (1, 1)]
        assert first.lhs == 0 and first.rhs == 1

    def test_constant_one_passes(self):
        assert check_jump(constant_one, small_grid(2, exp=2)) == []

    def test_agrees_with_direct_scan(self):
        for fn in (cand(2), obstacle_indicator, affine_stub):
            grid = small_grid(2, exp=2)
            assert (not check_jump(fn, grid)) == brute_jump_ok(fn, grid)

    def test_respects_domain_cap(self):
        # with C = 1 only the left edge can jump
        grid = small_grid(1, exp=2)
        coverage = Counter()
        check_jump(cand(1), grid, coverage)
        jumps = sum(v for k, v in coverage.items() if k.startswith("jump"))
        assert jumps == len(grid.lambda_values)


class TestMainInequality:
    def test_candidate_passes(self):
        assert check_main_inequality(cand(2), small_grid(2)) == []

    def test_counterexample_fails_via_shift(self):
        violations = check_main_inequality(obstacle_indicator, small_grid(2, exp=2))
        assert violations
        assert any(len(v.points) == 3 and v.points[2].lam == v.points[0].lam + 1
                   for v in violations)

    def test_probe_path_agrees_with_all_pairs_oracle(self):
        for fn in (cand(2), cand(Fraction(16, 5)), obstacle_indicator,
                   affine_stub, constant_one, square_stub):
            grid = small_grid(2, exp=2, hi=4, extras=())
            fast_empty = not check_main_inequality(fn, grid, verify_reduction=False)
            assert fast_empty == brute_main_inequality_ok(fn, grid)

    def test_reduction_consistency_enforced(self):
        # emptiness of the main check must match concavity-and-jump emptiness
        for fn in (cand(2), obstacle_indicator, square_stub):
            grid = small_grid(2, exp=2)
            main = check_main_inequality(fn, grid)  # raises on mismatch
            both = (not check_midpoint_concavity(fn, grid)) and (not check_jump(fn, grid))
            assert (not main) == both


class TestCoverage:
    def test_all_proof_branches_exercised_across_bounds(self):
        total = Counter()
        for c in (1, Fraction(3, 2), 2, Fraction(16, 5), 7):
            summary = run_all_checks(cand(c), small_grid(c))
            assert summary.ok
            total.update(summary.coverage)
        for key in [f"concavity_case_{i}" for i in (1, 2, 3)] + \
                   [f"jump_case_{i}" for i in (1, 2, 3, 4, 5)]:
            assert total[key] > 0, key


class TestInductionTrace:
    def test_single_selection_trace_holds(self):
        seq = CarlesonSeq(0, [ROOT])
        trace = induction_trace(cand(2), seq, 1)
        assert trace.holds
        assert trace.level_sums[0] == 1
        assert trace.level_sums[-1] >= trace.level_set == 1

    def test_counterexample_violates_first_step(self):
        seq = CarlesonSeq(0, [ROOT])
        trace = induction_trace(obstacle_indicator, seq, 1)
        assert not trace.holds
        assert trace.first_violation_level() == 0
        assert trace.level_sums[0] == 0 and trace.level_sums[1] == 1

    def test_empty_sequence(self):
        trace = induction_trace(cand(2), CarlesonSeq(2), 1)
        assert trace.holds
        assert trace.level_set == 0

    def test_leaf_level_selections_are_counted(self):
        # a selection at the truncation depth still shifts the residual once
        seq = CarlesonSeq(1, [ROOT, NodeAddress(1, 0), NodeAddress(1, 1)])
        trace = induction_trace(cand(2), seq, 2)
        assert trace.holds
        assert trace.level_set == 1  # every point sits under two selections

    def test_random_corpus_traces_hold(self):
        for seed in range(20):
            c = (Fraction(2), Fraction(16, 5), Fraction(7))[seed % 3]
            seq = random_carleson(2 + seed % 5, c, 3000 + seed)
            lam = (1, 2, 3)[seed % 3]
            trace = induction_trace(cand(c), seq, lam)
            assert trace.holds, (seed, trace.first_violation_level())
