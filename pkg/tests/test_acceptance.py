"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete. Every tolerance is pinned here, not configured.
"""

import math
import time

import numpy as np
import pytest

import mixmle as mx
from mixmle.cli import REPRODUCE, discrepancy_report, synthetic_dataset

from oracles import (finite_difference_gradient, qp_box_projection,
                     subgradient_spectral_projection)

R2_GRID = math.sqrt(24)
D_GRID = math.sqrt(24 * 0.4 ** 2)


def report(num, name, ok, detail):
    print(f"\nACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} ({name}): {detail}"


@pytest.fixture(scope="module")
def worked_example():
    g = mx.grid_topology(REPRODUCE["rows"], REPRODUCE["cols"])
    model = mx.IsingModel(g)
    data = synthetic_dataset(g.num_nodes, REPRODUCE["data_count"],
                             REPRODUCE["data_seed"])
    box = mx.BoxConstraint(REPRODUCE["beta"])
    return model, data, box


def test_criterion_1_planner_reproduction(capsys):
    t0 = time.perf_counter()
    plans = {}
    for label, conv in (("C=N", "exp"), ("C=log N", "log")):
        cert = mx.gibbs_mixing_certificate(16, 4, 0.2, convention=conv)
        consts = mx.derive_constants("strongly_convex", 10.0, 1.0, R2_GRID,
                                     cert.big_c, cert.alpha, D_GRID, 0.1)
        sch = mx.plan_strongly_convex(consts, 2.0, 0.1, (0.01, 0.9, 0.1))
        plans[label] = (cert, sch, 0.0)
    elapsed = time.perf_counter() - t0

    ks = {label: sch.big_k for label, (_, sch, _) in plans.items()}
    ms = {label: sch.big_m for label, (_, sch, _) in plans.items()}
    vs = {label: sch.v for label, (_, sch, _) in plans.items()}
    text = discrepancy_report(plans)
    ok = (all(k == 46 for k in ks.values())
          and all(m == 1533 for m in ms.values())
          and all(540 <= v <= 700 for v in vs.values())
          and "discrepancy" in text and len(set(vs.values())) == 2
          and elapsed < 1.0)
    report(1, "planner-reproduction", ok,
           f"K={ks}, M={ms}, v={vs}, {elapsed:.3f}s; report emitted")


def test_criterion_2_training_reproduction(worked_example):
    model, data, box = worked_example
    t0 = time.perf_counter()
    star = mx.exact_optimum(model, data, box, REPRODUCE["lam"], tol=1e-8,
                            lipschitz=REPRODUCE["lipschitz"])
    star_vec = star.as_vector()
    kmv = (REPRODUCE["big_k"], REPRODUCE["big_m"], REPRODUCE["v"])
    distances = []
    for j in range(5):
        trace = mx.train(model, data, box, kmv, REPRODUCE["lam"],
                         seed=1000 + j, lipschitz=REPRODUCE["lipschitz"],
                         instrument=False)
        distances.append(float(np.linalg.norm(trace.theta_final - star_vec)))
    elapsed = time.perf_counter() - t0

    cert = mx.gibbs_mixing_certificate(16, 4, 0.2)
    consts = mx.derive_constants("strongly_convex", REPRODUCE["lipschitz"],
                                 REPRODUCE["lam"], R2_GRID, cert.big_c,
                                 cert.alpha, D_GRID, REPRODUCE["delta"])
    envelope = mx.convergence_envelope("strongly_convex", consts, *kmv,
                                       REPRODUCE["delta"])
    ok = (all(d <= 2.0 for d in distances)
          and all(d <= envelope for d in distances)
          and elapsed < 120.0)
    report(2, "training-reproduction", ok,
           f"distances={[round(d, 4) for d in distances]}, "
           f"envelope={envelope:.3f}, {elapsed:.1f}s")


def test_criterion_3_analytic_bound_suite():
    t0 = time.perf_counter()
    rep = mx.check_analytic_bounds(mx.grid_topology(3, 3), 200, 0.5,
                                   lam=1.0, seed=0, tolerance=1e-10)
    elapsed = time.perf_counter() - t0
    names = {c.bound_name: c.violations for c in rep.children}
    ok = (rep.violations == 0 and rep.instances_checked == 200
          and set(names) == {"lipschitz-gradient", "mean-vs-tv",
                             "log-partition", "tv-vs-parameter"}
          and elapsed < 30.0)
    report(3, "analytic-bounds", ok,
           f"violations={names}, min_slack={rep.max_slack:.3g}, {elapsed:.1f}s")


def test_criterion_4_mixing_certificate():
    t0 = time.perf_counter()
    g = mx.grid_topology(2, 2)
    theta = mx.Parameters(np.full(g.num_edges, 0.2))
    cert = mx.gibbs_mixing_certificate(g.num_nodes, g.max_degree, 0.2,
                                       convention="exp")
    rep = mx.check_mixing_certificate(theta, g, cert, 5000)
    elapsed = time.perf_counter() - t0
    alpha_want = math.exp(-(1 - 2 * math.tanh(0.2)) / 4)
    ok = (rep.violations == 0 and rep.instances_checked == 5001
          and np.isclose(cert.big_c, 4.0) and np.isclose(cert.alpha, alpha_want)
          and elapsed < 30.0)
    report(4, "mixing-certificate", ok,
           f"violations={rep.violations}/5001, C={cert.big_c:.3g}, "
           f"alpha={cert.alpha:.6f}, {elapsed:.1f}s")


def test_criterion_5_concentration_suite():
    t0 = time.perf_counter()
    g = mx.grid_topology(2, 2)
    theta = mx.Parameters(np.full(g.num_edges, 0.2))
    cover = mx.hoeffding_coverage(theta, g, 100, 0.1, 300, seed=11)
    moments = mx.check_estimation_moments(theta, g, 100, 2000, seed=12)
    elapsed = time.perf_counter() - t0
    ok = (cover.violations <= cover.allowed_violations
          and moments.violations == 0
          and elapsed < 120.0)
    report(5, "concentration-suite", ok,
           f"hoeffding {cover.violations}/{cover.instances_checked} "
           f"(allowed {cover.allowed_violations}); moment violations "
           f"{moments.violations}; {elapsed:.1f}s")


def test_criterion_6_envelope_coverage():
    t0 = time.perf_counter()
    g = mx.grid_topology(3, 3)
    model = mx.IsingModel(g)
    data = synthetic_dataset(g.num_nodes, 5, 2024)
    box = mx.BoxConstraint(0.2)
    r2 = mx.stat_norm_bound(g).r2
    cert = mx.gibbs_mixing_certificate(g.num_nodes, g.max_degree, 0.2)
    big_d = math.sqrt(g.num_edges * 0.4 ** 2)
    delta = 0.2

    lam = 1.0
    lip = mx.lipschitz_constant(r2, lam)
    consts = mx.derive_constants("strongly_convex", lip, lam, r2, cert.big_c,
                                 cert.alpha, big_d, delta)
    planned = mx.plan_strongly_convex(consts, 1.0, delta, (0.15, 0.7, 0.15))
    kmv = (min(planned.big_k, 20), min(planned.big_m, 2000),
           min(planned.v, 400))
    sc = mx.envelope_coverage(model, data, box, lam, "strongly_convex",
                              consts, kmv, delta, 100, 9000, lip)

    lip0 = mx.lipschitz_constant(r2, 0.0)
    consts0 = mx.derive_constants("convex", lip0, 0.0, r2, cert.big_c,
                                  cert.alpha, big_d, delta)
    eps_budget = 6.0 * lip0 / (8.0 * r2 * r2)
    planned0 = mx.plan_convex(consts0, eps_budget, (0.5, 0.4, 0.1),
                              delta=delta)
    k0 = min(planned0.big_k, 20)
    m0 = max(min(planned0.big_m, 300),
             math.ceil(3 * k0 / math.log(1 / delta)))
    kmv0 = (k0, m0, min(planned0.v, 400))
    cv = mx.envelope_coverage(model, data, box, 0.0, "convex", consts0,
                              kmv0, delta, 100, 9100, lip0)
    elapsed = time.perf_counter() - t0

    ok = (sc.violations <= sc.allowed_violations
          and cv.violations <= cv.allowed_violations
          and elapsed < 600.0)
    report(6, "envelope-coverage", ok,
           f"strongly-convex {100 - sc.violations}/100 within "
           f"{sc.details['envelope']:.2f} at {kmv} "
           f"(planned {planned.big_k},{planned.big_m},{planned.v}); "
           f"convex {100 - cv.violations}/100 within "
           f"{cv.details['envelope']:.2f} at {kmv0}; {elapsed:.0f}s")


def test_criterion_7_gradient_correctness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(31)
    grids = [(2, 2), (1, 3), (2, 3), (3, 3)]
    worst_fd = 0.0
    for i in range(50):
        rows, cols = grids[i % len(grids)]
        g = mx.grid_topology(rows, cols)
        data = mx.Dataset(rng.choice([-1, 1], size=(4, g.num_nodes)))
        theta = mx.Parameters(rng.uniform(-0.5, 0.5, g.num_edges))
        lam = float(rng.uniform(0, 1))
        grad = mx.exact_gradient(theta, data, g, lam)
        fd = finite_difference_gradient(theta, data, g, lam)
        worst_fd = max(worst_fd, float(np.max(np.abs(grad - fd))))

    g = mx.grid_topology(2, 2)
    model = mx.IsingModel(g)
    data = mx.Dataset(np.array([[1, 1, 1, 1], [1, -1, 1, -1], [-1, -1, 1, 1],
                                [1, 1, -1, -1], [-1, 1, 1, -1]],
                               dtype=np.int8))
    theta = mx.Parameters(np.full(4, 0.2))
    cfg = mx.ChainConfig(num_steps=5000, master_seed=31415)
    batch = mx.draw_batch(theta, g, 100_000, cfg, stream_index=1)
    approx = mx.approximate_gradient(batch, model, data.empirical_mean(g),
                                     1.0, theta)
    exact = mx.exact_gradient(theta, data, g, 1.0)
    mc_err = float(np.linalg.norm(approx - exact))
    elapsed = time.perf_counter() - t0

    ok = worst_fd <= 1e-5 and mc_err <= 1e-2 and elapsed < 120.0
    report(7, "gradient-correctness", ok,
           f"max FD deviation {worst_fd:.2e} over 50 instances; "
           f"MC error {mc_err:.4f} at M=1e5, v=5000; {elapsed:.0f}s")


def test_criterion_8_projection_correctness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)

    box_worst = 0.0
    for _ in range(20):
        vec = rng.uniform(-1, 1, 5)
        ours = mx.project_box(mx.Parameters(vec), 0.3).couplings
        box_worst = max(box_worst, float(np.max(np.abs(
            ours - qp_box_projection(vec, 0.3)))))

    grids = [(2, 3), (3, 3), (2, 4)]
    feasible = idempotent = within_oracle = True
    worst_rel = 0.0
    for i in range(20):
        g = mx.grid_topology(*grids[i % len(grids)])
        c = float(rng.uniform(0.3, 0.6))
        con = mx.SpectralConstraint(c=c)
        theta = mx.Parameters(rng.uniform(-0.9, 0.9, g.num_edges))
        out = mx.project_spectral(theta, g, con)
        norm = mx.spectral_norm(mx.coupling_matrix(out, g))
        feasible &= norm <= c + 1e-6
        again = mx.project_spectral(out, g, con)
        idempotent &= float(np.linalg.norm(
            again.as_vector() - out.as_vector())) <= 1e-6
        d_obj = float(np.linalg.norm(out.as_vector() - theta.as_vector()))
        _, o_obj = subgradient_spectral_projection(theta.as_vector(), g, c,
                                                   iters=20000)
        within_oracle &= d_obj <= o_obj * (1 + 1e-3) + 1e-9
        if o_obj > 1e-9:
            worst_rel = max(worst_rel, abs(d_obj - o_obj) / o_obj)
    elapsed = time.perf_counter() - t0

    ok = (box_worst <= 1e-8 and feasible and idempotent and within_oracle
          and elapsed < 60.0)
    report(8, "projection-correctness", ok,
           f"box-vs-QP {box_worst:.1e}; spectral feasible={feasible}, "
           f"idempotent={idempotent}, oracle gap {worst_rel:.1e}; "
           f"{elapsed:.0f}s")
