import numpy as np
import pytest

from conftest import bec_joint, dependent_joint, random_joint
from ratepriv import (
    InstanceTooLargeError,
    JointDistribution,
    ValidationError,
    binary_entropy,
    entropy,
    evaluate_filter,
    g0,
    g_eps_curve,
    g_eps_deterministic,
    g_eps_oracle,
    g_eps_solve,
    mutual_information,
)


class TestDeterministic:
    def test_bec_at_zero_is_erasure_entropy(self):
        pt = g_eps_deterministic(bec_joint(p=0.5, delta=0.3), 0.0)
        assert pt.utility == pytest.approx(binary_entropy(0.3), abs=1e-9)
        assert pt.achieved_leakage <= 1e-9

    def test_identity_feasible_above_mi(self, rng):
        j = dependent_joint(rng, 2, 3)
        pt = g_eps_deterministic(j, mutual_information(j) + 1e-9)
        assert pt.utility == pytest.approx(entropy(j.p_y), abs=1e-12)

    def test_frozen_enumeration_golden(self):
        # value from the exhaustive enumeration itself, frozen once:
        # merging columns 0 and 2 leaves the image independent of X
        j = JointDistribution([[0.4, 0.1, 0.0], [0.1, 0.1, 0.3]])
        pt = g_eps_deterministic(j, 0.05)
        assert pt.utility == pytest.approx(0.7219280948873623, abs=1e-12)
        assert pt.achieved_leakage <= 0.05 + 1e-12
        assert np.array_equal(pt.filter.matrix, [[1, 0], [0, 1], [1, 0]])

    def test_negative_eps_rejected(self, rng):
        with pytest.raises(ValidationError):
            g_eps_deterministic(dependent_joint(rng, 2, 2), -0.1)

    def test_relaxation_note_attached(self, rng):
        pt = g_eps_deterministic(dependent_joint(rng, 2, 2), 0.1)
        assert any("relaxed" in n for n in pt.notes)


class TestOracle:
    def test_saturation(self, rng):
        j = dependent_joint(rng, 2, 2)
        pt = g_eps_oracle(j, mutual_information(j) + 0.01, resolution=10)
        assert pt.utility == pytest.approx(entropy(j.p_y), abs=1e-9)

    def test_zero_eps_binary_dependent(self, rng):
        j = dependent_joint(rng, 2, 2)
        pt = g_eps_oracle(j, 0.0, resolution=10)
        assert pt.utility <= 1e-9

    def test_frozen_grid_golden(self):
        j = JointDistribution([[0.4, 0.1], [0.2, 0.3]])
        pt = g_eps_oracle(j, 0.1, resolution=20)
        assert pt.utility == pytest.approx(0.7813304265189315, abs=1e-12)
        assert pt.achieved_leakage <= 0.1

    def test_guard_refuses_large_instances(self, rng):
        j = dependent_joint(rng, 2, 3)
        with pytest.raises(InstanceTooLargeError):
            g_eps_oracle(j, 0.05, resolution=25)  # default z_card=4: 25^9 grid


class TestSolve:
    def test_matches_g0_at_zero(self, rng):
        for _ in range(5):
            j = random_joint(rng, 2, 3)
            sol = g_eps_solve(j, 0.0, restarts=4, seed=3)
            assert sol.utility == pytest.approx(g0(j).utility, abs=1e-6)

    def test_saturation_exact(self, rng):
        j = dependent_joint(rng, 2, 3)
        sol = g_eps_solve(j, mutual_information(j), restarts=4, seed=3)
        assert sol.utility == pytest.approx(entropy(j.p_y), abs=1e-9)

    def test_seed_required(self, rng):
        with pytest.raises(ValidationError):
            g_eps_solve(dependent_joint(rng, 2, 2), 0.1, restarts=4)

    def test_determinism_same_seed(self, rng):
        j = dependent_joint(rng, 2, 3)
        a = g_eps_solve(j, 0.05, restarts=8, seed=11)
        b = g_eps_solve(j, 0.05, restarts=8, seed=11)
        assert a.utility == b.utility
        assert np.array_equal(a.filter.matrix, b.filter.matrix)

    def test_oracle_comparison_2x3(self):
        # derived check: solver within 0.01 bits of a resolution-25 grid at
        # matching z_card on these frozen instances, and never below it
        for s in (5, 100, 101, 103):
            g = np.random.default_rng(s)
            j = JointDistribution(g.dirichlet(np.ones(6)).reshape(2, 3))
            for eps in (0.01, 0.05, 0.1):
                orc = g_eps_oracle(j, eps, resolution=25, z_card=2)
                sol = g_eps_solve(j, eps, restarts=16, seed=3, z_card=2)
                assert sol.utility >= orc.utility - 1e-6
                assert sol.utility <= orc.utility + 0.01
                assert sol.achieved_leakage <= eps + 1e-6

    def test_dominates_deterministic(self, rng):
        for _ in range(5):
            j = random_joint(rng, 2, 3)
            eps = float(rng.uniform(0.01, 0.2))
            det = g_eps_deterministic(j, eps)
            sol = g_eps_solve(j, eps, restarts=8, seed=5)
            assert det.utility <= sol.utility + 1e-6

    def test_boundary_attainment(self, rng):
        # between 0 and I(X;Y) the optimum rides the leakage boundary
        for s in (1, 2, 3):
            g = np.random.default_rng(s)
            j = JointDistribution(g.dirichlet(np.ones(4)).reshape(2, 2))
            ixy = mutual_information(j)
            eps = 0.5 * ixy
            sol = g_eps_solve(j, eps, restarts=16, seed=9)
            assert abs(sol.achieved_leakage - eps) <= 1e-4

    def test_utility_below_hy(self, rng):
        j = dependent_joint(rng, 2, 3)
        sol = g_eps_solve(j, 0.07, restarts=8, seed=2)
        assert sol.utility <= entropy(j.p_y) + 1e-9


class TestCurve:
    def test_bec_endpoints(self):
        j = bec_joint(p=0.5, delta=0.3)
        curve = g_eps_curve(j, [0.0, mutual_information(j)], restarts=8, seed=4)
        assert curve.points[0].utility == pytest.approx(binary_entropy(0.3), abs=1e-6)
        assert curve.points[-1].utility == pytest.approx(entropy(j.p_y), abs=1e-9)

    def test_starts_at_zero_for_binary_dependent(self, rng):
        j = dependent_joint(rng, 2, 2)
        curve = g_eps_curve(j, [0.0, 0.05], restarts=8, seed=4)
        assert curve.points[0].utility <= 1e-9

    def test_monotone(self, rng):
        j = dependent_joint(rng, 2, 3)
        grid = [0.0, 0.02, 0.05, 0.1, 0.2]
        curve = g_eps_curve(j, grid, restarts=8, seed=4)
        utils = curve.utilities
        assert np.all(np.diff(utils) >= -1e-12)

    def test_unsorted_grid_rejected(self, rng):
        with pytest.raises(ValidationError):
            g_eps_curve(dependent_joint(rng, 2, 2), [0.1, 0.05], restarts=2, seed=1)

    def test_returned_filters_feasible(self, rng):
        j = dependent_joint(rng, 2, 3)
        curve = g_eps_curve(j, [0.0, 0.03, 0.08], restarts=8, seed=4)
        for pt in curve.points:
            ev = evaluate_filter(j, pt.filter)
            assert ev.leakage <= pt.epsilon + 1e-6
