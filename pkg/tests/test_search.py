from itertools import combinations, product

import pytest

from fpsystems import (
    AvoidanceProblem,
    CapExceededError,
    ClassFilter,
    PointSet,
    SystemSpec,
    enumerate_solutions,
    exhaustive_max,
    gamma,
    greedy_lower_bound,
    verify_theorem_bound,
)
from fpsystems.seeds import spawn


def subset_avoids(sys_spec, flt, subset, n):
    ps = PointSet.make(subset, sys_spec.p, n)
    return next(iter(enumerate_solutions(sys_spec, ps, flt)), None) is None


def brute_max_avoiding(sys_spec, flt, n, exclude_zero=False):
    pts = [v for v in product(range(sys_spec.p), repeat=n)
           if not (exclude_zero and not any(v))]
    for size in range(len(pts), 0, -1):
        for subset in combinations(pts, size):
            if subset_avoids(sys_spec, flt, subset, n):
                return size
    return 0


class TestExhaustive:
    def test_known_values(self, sys_ap3):
        for n, expected in ((1, 2), (2, 4)):
            problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), n)
            result = exhaustive_max(problem)
            assert result.best_size == expected
            assert result.optimal
            assert len(result.witness) == expected

    @pytest.mark.parametrize("coeffs,p,n,flt", [
        ([(1, 1, 1)], 2, 2, ClassFilter.not_all_equal()),
        ([(1, 1, 1)], 2, 2, ClassFilter.distinct()),
        ([(1, 1, 1)], 3, 1, ClassFilter.not_all_equal()),
        ([(1, 1, 1)], 3, 1, ClassFilter.distinct()),
        ([(1, 1, 1)], 3, 2, ClassFilter.not_all_equal()),
        ([(1, 1, 1)], 3, 2, ClassFilter.span_at_least(2)),
        ([(1, 1, 2, 2)], 3, 1, ClassFilter.distinct_at_least(3)),
    ])
    def test_matches_subset_oracle(self, coeffs, p, n, flt):
        spec = SystemSpec.make(coeffs, p)
        problem = AvoidanceProblem(spec, flt, n)
        result = exhaustive_max(problem)
        assert result.best_size == brute_max_avoiding(spec, flt, n)

    def test_witness_avoids(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 2)
        result = exhaustive_max(problem)
        assert subset_avoids(sys_ap3, problem.mode, result.witness.points, 2)

    def test_order_independent(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 2)
        base = exhaustive_max(problem)
        reversed_order = tuple(reversed(problem.point_order()))
        other = exhaustive_max(problem, point_order=reversed_order)
        assert other.best_size == base.best_size

    def test_bad_point_order_rejected(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 1)
        with pytest.raises(ValueError):
            exhaustive_max(problem, point_order=[(0,), (1,)])

    def test_symmetry_off_agrees(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 2)
        on = exhaustive_max(problem, symmetry=True)
        off = exhaustive_max(problem, symmetry=False)
        assert on.best_size == off.best_size

    def test_threads_agree(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 2)
        single = exhaustive_max(problem, threads=1)
        multi = exhaustive_max(problem, threads=4)
        assert multi.best_size == single.best_size
        assert subset_avoids(sys_ap3, problem.mode, multi.witness.points, 2)

    def test_distinct_impossible_when_space_too_small(self):
        # three pairwise distinct entries cannot fit in F_2, so the
        # whole space avoids and the maximum is p^n
        spec = SystemSpec.make([(1, 1, 1)], 2)
        problem = AvoidanceProblem(spec, ClassFilter.distinct(), 1)
        result = exhaustive_max(problem)
        assert result.best_size == 2

    def test_exclude_zero_order(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.distinct(), 2,
                                   exclude_zero=True)
        order = problem.point_order()
        assert len(order) == 8
        assert (0, 0) not in order
        result = exhaustive_max(problem)
        assert result.best_size == brute_max_avoiding(
            sys_ap3, problem.mode, 2, exclude_zero=True)

    def test_point_cap(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 5)
        with pytest.raises(CapExceededError):
            exhaustive_max(problem)

    def test_symmetry_needs_homogeneous(self):
        spec = SystemSpec.make([(1, 1, 1)], 3, constants=[(1,)])
        problem = AvoidanceProblem(spec, ClassFilter.not_all_equal(), 1)
        with pytest.raises(ValueError):
            exhaustive_max(problem, symmetry=True)
        result = exhaustive_max(problem)
        assert result.best_size == brute_max_avoiding(spec, problem.mode, 1)

    def test_problem_validation(self, sys_ap3):
        with pytest.raises(ValueError):
            AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 0)
        with pytest.raises(ValueError):
            AvoidanceProblem(sys_ap3, ClassFilter.span_at_least(4), 1)
        with pytest.raises(ValueError):
            AvoidanceProblem(sys_ap3, ClassFilter.distinct_at_least(1), 1)


class TestGreedy:
    def test_never_beats_exhaustive(self, sys_ap3):
        for n in (1, 2):
            problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), n)
            greedy = greedy_lower_bound(problem)
            exact = exhaustive_max(problem)
            assert greedy.best_size <= exact.best_size
            assert not greedy.optimal
            assert subset_avoids(sys_ap3, problem.mode,
                                 greedy.witness.points, n)

    def test_restarts_deterministic(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 2)
        a = greedy_lower_bound(problem, restarts=3, rng=spawn(7, "greedy"))
        b = greedy_lower_bound(problem, restarts=3, rng=spawn(7, "greedy"))
        assert a.best_size == b.best_size
        assert a.witness.points == b.witness.points

    def test_restarts_need_rng(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 1)
        with pytest.raises(ValueError):
            greedy_lower_bound(problem, restarts=2)

    def test_point_cap(self, sys_ap3):
        problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 2)
        with pytest.raises(CapExceededError):
            greedy_lower_bound(problem, cap_points=3)


class TestTheoremBounds:
    def test_not_all_equal_bound(self, sys_ap3):
        for n in (1, 2):
            problem = AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), n)
            report = verify_theorem_bound(problem, "tao")
            assert report.holds
            assert report.bound == pytest.approx(3 * gamma(3, 1, 3).gamma**n)
            assert report.margin == pytest.approx(report.bound
                                                  - report.best_size)

    def test_distinct_statement(self, sys_531):
        problem = AvoidanceProblem(sys_531, ClassFilter.distinct(), 1,
                                   exclude_zero=True)
        report = verify_theorem_bound(problem, "distinct")
        assert report.best_size == 2
        assert report.witness_found
        assert report.margin == 2
        assert report.holds is None
        assert report.bound is None

    def test_rank_statement(self, sys_k4):
        problem = AvoidanceProblem(sys_k4, ClassFilter.span_at_least(2), 1,
                                   exclude_zero=True)
        report = verify_theorem_bound(problem, "rank")
        assert report.witness_found is False
        assert report.best_size == 2
        assert report.margin == 0

    def test_hypothesis_checks(self, sys_ap3, sys_531):
        short = SystemSpec.make([(1, 1)], 3)
        with pytest.raises(ValueError):
            verify_theorem_bound(
                AvoidanceProblem(short, ClassFilter.not_all_equal(), 1), "tao")
        umbalanced = SystemSpec.make([(1, 1, 2)], 3)
        with pytest.raises(ValueError):
            verify_theorem_bound(
                AvoidanceProblem(umbalanced, ClassFilter.not_all_equal(), 1),
                "tao")
        with pytest.raises(ValueError):
            verify_theorem_bound(
                AvoidanceProblem(sys_ap3, ClassFilter.distinct(), 1), "tao")
        with pytest.raises(ValueError):
            verify_theorem_bound(
                AvoidanceProblem(short, ClassFilter.distinct(), 1), "distinct")
        degenerate = SystemSpec.make([(1, 2, 0)], 3)
        with pytest.raises(ValueError):
            verify_theorem_bound(
                AvoidanceProblem(degenerate, ClassFilter.distinct(), 1),
                "distinct")
        with pytest.raises(ValueError):
            verify_theorem_bound(
                AvoidanceProblem(sys_ap3, ClassFilter.span_at_least(3), 1),
                "rank")
        with pytest.raises(ValueError):
            verify_theorem_bound(
                AvoidanceProblem(sys_ap3, ClassFilter.not_all_equal(), 1),
                "nonsense")
