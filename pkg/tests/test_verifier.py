import math

import numpy as np
import pytest

import mixmle as mx
from mixmle.errors import (CapacityError, ConfigurationError,
                           ConvergenceError, InvalidInputError)


class TestTvDistance:
    def test_identical(self):
        p = np.full(8, 1 / 8)
        assert mx.tv_distance(p, p) == 0.0

    def test_disjoint_point_masses(self):
        assert mx.tv_distance([1, 0], [0, 1]) == 1.0

    def test_uniform_vs_point(self):
        assert np.isclose(mx.tv_distance(np.full(4, 0.25), [1, 0, 0, 0]), 0.75)

    def test_support_mismatch(self):
        with pytest.raises(InvalidInputError):
            mx.tv_distance([0.5, 0.5], [0.25, 0.25, 0.5])

    def test_not_normalized(self):
        with pytest.raises(InvalidInputError):
            mx.tv_distance([0.5, 0.4], [0.5, 0.5])


class TestExactOptimum:
    def test_single_edge_moment_match(self):
        # unconstrained, lam = 0, target mean tanh(0.3): theta* = 0.3
        g = mx.GraphTopology(2, ((0, 1),))
        model = mx.IsingModel(g)
        tbar = np.array([math.tanh(0.3)])
        star = mx.exact_optimum(model, tbar, mx.BoxConstraint(1.0), 0.0,
                                tol=1e-10)
        assert abs(star.couplings[0] - 0.3) < 1e-6

    def test_huge_ridge_pulls_to_zero(self):
        g = mx.grid_topology(2, 2)
        model = mx.IsingModel(g)
        rng = np.random.default_rng(0)
        data = mx.Dataset(rng.choice([-1, 1], size=(5, 4)))
        star = mx.exact_optimum(model, data, mx.BoxConstraint(1.0), 1e6,
                                tol=1e-12)
        assert np.max(np.abs(star.couplings)) < 1e-5

    def test_binding_box_constraint(self):
        g = mx.GraphTopology(2, ((0, 1),))
        model = mx.IsingModel(g)
        data = mx.Dataset(np.array([[1, 1], [-1, -1]], dtype=np.int8))
        star = mx.exact_optimum(model, data, mx.BoxConstraint(0.2), 0.0,
                                tol=1e-10)
        assert np.isclose(star.couplings[0], 0.2, atol=1e-9)

    def test_fixed_point_consistency(self):
        g = mx.grid_topology(2, 3)
        model = mx.IsingModel(g)
        rng = np.random.default_rng(1)
        data = mx.Dataset(rng.choice([-1, 1], size=(6, 6)))
        tol = 1e-9
        star = mx.exact_optimum(model, data, mx.BoxConstraint(0.2), 1.0,
                                tol=tol, lipschitz=10.0)
        res = mx.fixed_point_residual(model, data, mx.BoxConstraint(0.2), 1.0,
                                      star, 10.0)
        assert res <= 10 * tol

    def test_convergence_error_carries_residual(self):
        g = mx.grid_topology(2, 2)
        model = mx.IsingModel(g)
        data = mx.Dataset(np.ones((2, 4), dtype=np.int8))
        with pytest.raises(ConvergenceError) as err:
            mx.exact_optimum(model, data, mx.BoxConstraint(0.5), 0.0,
                             tol=1e-14, max_iterations=3)
        assert err.value.residual is not None

    def test_distance_bound_covers_optimum(self):
        # D = sqrt(E * (2 beta)^2) dominates ||theta_0 - theta*||
        g = mx.grid_topology(2, 3)
        model = mx.IsingModel(g)
        rng = np.random.default_rng(2)
        data = mx.Dataset(rng.choice([-1, 1], size=(5, 6)))
        star = mx.exact_optimum(model, data, mx.BoxConstraint(0.2), 1.0,
                                tol=1e-10, lipschitz=10.0)
        big_d = math.sqrt(g.num_edges * 0.4 ** 2)
        assert np.linalg.norm(star.as_vector()) <= big_d


class TestHoeffdingRadius:
    def test_delta_one(self):
        assert np.isclose(mx.hoeffding_radius(4.0, 100, 1.0), 0.1)

    def test_m_scaling(self):
        r1 = mx.hoeffding_radius(2.0, 50, 0.1)
        r4 = mx.hoeffding_radius(2.0, 200, 0.1)
        assert np.isclose(r1, 2 * r4)

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            mx.hoeffding_radius(0.0, 10, 0.1)
        with pytest.raises(InvalidInputError):
            mx.hoeffding_radius(1.0, 10, 0.0)

    def test_coverage_on_2x2(self):
        g = mx.grid_topology(2, 2)
        theta = mx.Parameters(np.full(4, 0.2))
        rep = mx.hoeffding_coverage(theta, g, 100, 0.1, 300, seed=11)
        assert rep.ok
        assert rep.violations <= rep.allowed_violations


class TestAnalyticBounds:
    def test_radius_zero_gives_equalities(self):
        g = mx.grid_topology(2, 2)
        rep = mx.check_analytic_bounds(g, 5, 0.0, lam=1.0, seed=0)
        assert rep.violations == 0
        for child in rep.children:
            assert abs(child.max_slack) < 1e-12

    def test_random_pairs_no_violations(self):
        g = mx.grid_topology(3, 3)
        rep = mx.check_analytic_bounds(g, 30, 0.5, lam=1.0, seed=1)
        assert rep.violations == 0
        assert rep.ok
        assert {c.bound_name for c in rep.children} == {
            "mean-vs-tv", "log-partition", "tv-vs-parameter",
            "lipschitz-gradient"}

    def test_adversarial_radius_still_holds(self):
        g = mx.grid_topology(2, 2)
        rep = mx.check_analytic_bounds(g, 10, 5.0, lam=0.0, seed=2)
        assert rep.violations == 0

    def test_fields_enabled_path(self):
        g = mx.chain_topology(3)
        rep = mx.check_analytic_bounds(g, 10, 0.5, lam=1.0, seed=3,
                                       fields_enabled=True)
        assert rep.violations == 0


class TestMixingCheck:
    def test_d0_below_c(self):
        g = mx.grid_topology(2, 2)
        theta = mx.Parameters(np.full(4, 0.2))
        cert = mx.gibbs_mixing_certificate(4, 2, 0.2)
        rep = mx.check_mixing_certificate(theta, g, cert, 10)
        assert rep.details["d_curve"][0] <= 1.0 <= cert.big_c

    def test_d_curve_nonincreasing(self):
        g = mx.grid_topology(2, 2)
        theta = mx.Parameters(np.full(4, 0.2))
        cert = mx.gibbs_mixing_certificate(4, 2, 0.2)
        rep = mx.check_mixing_certificate(theta, g, cert, 300)
        d = rep.details["d_curve"]
        assert all(d[i + 1] <= d[i] + 1e-12 for i in range(len(d) - 1))

    def test_capacity_guard(self):
        g = mx.chain_topology(11)
        theta = mx.Parameters.zeros(g)
        cert = mx.gibbs_mixing_certificate(11, 2, 0.2)
        with pytest.raises(CapacityError):
            mx.check_mixing_certificate(theta, g, cert, 10)


class TestEstimationMoments:
    def test_bounds_hold(self):
        g = mx.grid_topology(2, 2)
        theta = mx.Parameters(np.full(4, 0.2))
        rep = mx.check_estimation_moments(theta, g, 100, 500, seed=4)
        assert rep.ok and rep.violations == 0

    def test_trivial_m1(self):
        g = mx.grid_topology(2, 2)
        theta = mx.Parameters(np.full(4, 0.2))
        rep = mx.check_estimation_moments(theta, g, 1, 500, seed=5)
        assert rep.ok

    def test_mean_halves_when_m_quadruples(self):
        g = mx.grid_topology(2, 2)
        theta = mx.Parameters(np.full(4, 0.2))
        small = mx.check_estimation_moments(theta, g, 50, 1500, seed=6)
        large = mx.check_estimation_moments(theta, g, 200, 1500, seed=7)
        est_small = small.children[0].details["estimate"]
        est_large = large.children[0].details["estimate"]
        assert 0.4 < est_large / est_small < 0.6


@pytest.fixture(scope="module")
def rig():
    g = mx.grid_topology(2, 2)
    model = mx.IsingModel(g)
    rng = np.random.default_rng(8)
    data = mx.Dataset(rng.choice([-1, 1], size=(5, 4)))
    box = mx.BoxConstraint(0.2)
    traces = [mx.train(model, data, box, (10, 200, 25), 1.0,
                       seed=300 + i, lipschitz=10.0, instrument=False)
              for i in range(60)]
    return model, traces


class TestSumErrorBound:
    def test_violation_fraction_within_allowance(self, rig):
        model, traces = rig
        rep = mx.check_sum_error_bound(traces, model, 0.2)
        assert rep.ok

    def test_single_run_k1_reduces_to_single_step(self, rig):
        model, traces = rig
        g = model.graph
        rng = np.random.default_rng(9)
        data = mx.Dataset(rng.choice([-1, 1], size=(5, 4)))
        one = mx.train(model, data, mx.BoxConstraint(0.2), (1, 64, 10), 1.0,
                       seed=17, lipschitz=10.0, instrument=False)
        rep = mx.check_sum_error_bound([one], model, 0.2)
        r2 = mx.stat_norm_bound(g).r2
        want_bound = 2 * r2 * (1 / math.sqrt(64) + math.log(5))
        assert np.isclose(rep.details["bound"], want_bound)

    def test_mean_sum_respects_expectation_bound(self, rig):
        # delta -> 1 limit of the bound is 2 R2 K / sqrt(M), which dominates
        # the mean of the measured sums (expectation form)
        model, traces = rig
        rep = mx.check_sum_error_bound(traces, model, 0.2)
        sums = np.asarray(rep.details["sums"])
        r2 = mx.stat_norm_bound(model.graph).r2
        limit_bound = 2 * r2 * 10 / math.sqrt(200)
        se = sums.std(ddof=1) / math.sqrt(len(sums))
        assert sums.mean() <= limit_bound + 3 * se

    def test_precondition_enforced(self, rig):
        model, _ = rig
        rng = np.random.default_rng(10)
        data = mx.Dataset(rng.choice([-1, 1], size=(5, 4)))
        small_m = mx.train(model, data, mx.BoxConstraint(0.2), (10, 5, 5),
                           1.0, seed=1, lipschitz=10.0, instrument=False)
        with pytest.raises(ConfigurationError):
            mx.check_sum_error_bound([small_m], model, 0.2)


class TestEnvelopeCoverage:
    def test_smoke_strongly_convex(self):
        g = mx.grid_topology(2, 2)
        model = mx.IsingModel(g)
        rng = np.random.default_rng(11)
        data = mx.Dataset(rng.choice([-1, 1], size=(5, 4)))
        box = mx.BoxConstraint(0.2)
        lam = 1.0
        r2 = mx.stat_norm_bound(g).r2
        lip = mx.lipschitz_constant(r2, lam)
        cert = mx.gibbs_mixing_certificate(4, 2, 0.2)
        consts = mx.derive_constants("strongly_convex", lip, lam, r2,
                                     cert.big_c, cert.alpha,
                                     math.sqrt(4 * 0.16), 0.2)
        rep = mx.envelope_coverage(model, data, box, lam, "strongly_convex",
                                   consts, (10, 200, 100), 0.2, 20, 400, lip)
        assert rep.ok
