"""Brute-force oracles and statistical harnesses for every proved bound.

Deterministic inequalities (Lipschitz gradient, mean-vs-TV, log-partition,
TV-vs-parameter, geometric mixing decay) are checked exactly against
enumeration with zero tolerance for violations. Probabilistic claims
("with probability >= 1-delta") are checked as frequency statements over
seeded repetitions, with an explicit three-sigma binomial allowance --
a single run proves nothing either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (CapacityError, ConfigurationError, ConvergenceError,
                     InvalidInputError)
from .model import (Parameters, _cached_stat_matrix, _resolve_mean,
                    exact_distribution, exact_gradient, exact_log_partition,
                    exact_mean_stats, lipschitz_constant,
                    negative_log_likelihood, num_stats, stat_norm_bound)
from .learner import pgd_step, train
from .sampler import exact_transition_matrix


@dataclass
class BoundReport:
    """Outcome of checking one bound over many instances.

    max_slack is the tightest observed margin, min over instances of
    (bound - observed); a negative value on a zero-tolerance check means a
    violation. allowed_violations is nonzero only for probabilistic bounds
    (delta plus three-sigma binomial slack, converted to a count).
    """

    bound_name: str
    instances_checked: int
    violations: int
    max_slack: float
    allowed_violations: int = 0
    details: object = None
    children: tuple = ()

    @property
    def ok(self):
        return (self.violations <= self.allowed_violations
                and all(c.ok for c in self.children))

    def summary_line(self):
        status = "ok" if self.ok else "FAIL"
        return (f"{self.bound_name} {self.instances_checked} "
                f"{self.violations} {self.max_slack:.6g} {status}")


def tv_distance(p, q):
    """Total variation distance (1/2) sum |p - q| between two distributions
    on the same enumerated support."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise InvalidInputError("distributions live on different supports")
    for name, vec in (("p", p), ("q", q)):
        if abs(float(vec.sum()) - 1.0) > 1e-9 or np.any(vec < -1e-12):
            raise InvalidInputError(f"{name} is not a probability vector")
    return 0.5 * float(np.abs(p - q).sum())


def hoeffding_radius(c, big_m, delta):
    """Deviation radius sqrt(c/(4M)) * (1 + sqrt(2 log(1/delta))) for the
    norm of an M-sample mean of vectors with ||X_i - mu|| <= c."""
    if c <= 0:
        raise InvalidInputError("c must be positive")
    if big_m < 1:
        raise InvalidInputError("M must be >= 1")
    if not (0 < delta <= 1):
        raise InvalidInputError("delta must lie in (0, 1]")
    return math.sqrt(c / (4.0 * big_m)) * (1.0 + math.sqrt(2.0 * math.log(1.0 / delta)))


def binomial_slack_count(delta, trials, sigmas=3.0):
    """Allowed violation count: trials * (delta + sigmas * binomial sigma)."""
    sigma = math.sqrt(delta * (1.0 - delta) / trials)
    return int(math.floor(trials * (delta + sigmas * sigma)))


# ---------------------------------------------------------------------------
# exact optimum oracle


def exact_optimum(model, data, constraint, lam, tol=1e-8,
                  lipschitz=None, max_iterations=200_000):
    """theta* via projected gradient descent with exact gradients, run until
    successive iterates move less than tol."""
    if lam < 0:
        raise InvalidInputError("lambda must be nonnegative")
    graph = model.graph
    tbar = _resolve_mean(data, graph, model.fields_enabled)
    if lipschitz is None:
        lipschitz = lipschitz_constant(stat_norm_bound(graph, model.fields_enabled), lam)
    theta = model.zero_parameters()
    for _ in range(max_iterations):
        grad = exact_gradient(theta, tbar, graph, lam)
        new = pgd_step(theta, grad, lipschitz, constraint, graph)
        step = float(np.linalg.norm(new.as_vector() - theta.as_vector()))
        theta = new
        if step < tol:
            return theta
    raise ConvergenceError(
        f"exact optimizer did not reach tol={tol:g} in {max_iterations} steps",
        residual=step)


def fixed_point_residual(model, data, constraint, lam, params, lipschitz):
    """||theta - Pi[theta - f'(theta)/L]||, zero exactly at the optimum."""
    grad = exact_gradient(params, _resolve_mean(data, model.graph, model.fields_enabled),
                          model.graph, lam)
    stepped = pgd_step(params, grad, lipschitz, constraint, model.graph)
    return float(np.linalg.norm(stepped.as_vector() - params.as_vector()))


# ---------------------------------------------------------------------------
# analytic inequalities (checked by enumeration)


def check_analytic_bounds(graph, sample_count, radius, lam=1.0,
                          seed=0, tolerance=1e-10, fields_enabled=False):
    """Check four exact inequalities on random parameter pairs:

      mean-vs-tv:      ||E_p t - E_q t||_2       <= 2 R2 TV(p, q)
      log-partition:   |A(theta) - A(phi)|       <= R2 ||theta - phi||_2
      tv-vs-parameter: TV(p_theta, p_phi)        <= 2 R2 ||theta - phi||_2
      lipschitz:       ||f'(theta) - f'(phi)||_2 <= (4 R2^2 + lam) ||theta - phi||_2
    """
    rng = np.random.default_rng(seed)
    s = num_stats(graph, fields_enabled)
    r2 = stat_norm_bound(graph, fields_enabled).r2
    lip = lipschitz_constant(r2, lam)
    names = ("mean-vs-tv", "log-partition", "tv-vs-parameter", "lipschitz-gradient")
    slacks = {n: math.inf for n in names}
    violations = {n: 0 for n in names}

    def split(vec):
        if fields_enabled:
            e = graph.num_edges
            return Parameters(vec[:e], vec[e:])
        return Parameters(vec)

    for _ in range(sample_count):
        tv_vec = rng.uniform(-radius, radius, size=s)
        ph_vec = rng.uniform(-radius, radius, size=s)
        theta, phi = split(tv_vec), split(ph_vec)
        diff = float(np.linalg.norm(tv_vec - ph_vec))
        a_t = exact_log_partition(theta, graph)
        a_p = exact_log_partition(phi, graph)
        mean_t = exact_mean_stats(theta, graph)
        mean_p = exact_mean_stats(phi, graph)
        tv = tv_distance(exact_distribution(theta, graph),
                         exact_distribution(phi, graph))
        checks = {
            "mean-vs-tv": (float(np.linalg.norm(mean_t - mean_p)), 2.0 * r2 * tv),
            "log-partition": (abs(a_t - a_p), r2 * diff),
            "tv-vs-parameter": (tv, 2.0 * r2 * diff),
            "lipschitz-gradient": (
                float(np.linalg.norm(mean_t - mean_p + lam * (tv_vec - ph_vec))),
                lip * diff),
        }
        for name, (observed, bound) in checks.items():
            slack = bound - observed
            slacks[name] = min(slacks[name], slack)
            if observed > bound + tolerance:
                violations[name] += 1

    children = tuple(
        BoundReport(name, sample_count, violations[name], slacks[name])
        for name in names)
    return BoundReport("analytic-bounds", sample_count,
                       sum(violations.values()), min(slacks.values()),
                       children=children)


def check_mixing_certificate(params, graph, cert, v_max, tolerance=1e-10):
    """Exact worst-case TV decay versus the certificate C alpha^v.

    d(v) = max over point-mass starting states of TV(M^v delta_x, p), which
    suffices because TV to stationarity is maximized at simplex extremes.
    """
    if graph.num_nodes > 10:
        raise CapacityError("mixing check needs N <= 10 for exact TV")
    kernel = exact_transition_matrix(params, graph)
    target = exact_distribution(params, graph)
    dist = np.eye(kernel.shape[0])
    violations = 0
    min_slack = math.inf
    d_curve = []
    for v in range(v_max + 1):
        d_v = 0.5 * float(np.abs(dist - target[None, :]).sum(axis=1).max())
        d_curve.append(d_v)
        bound = cert.tv_bound(v)
        min_slack = min(min_slack, bound - d_v)
        if d_v > bound + tolerance:
            violations += 1
        if v < v_max:
            dist = dist @ kernel
    return BoundReport("mixing-certificate", v_max + 1, violations, min_slack,
                       details={"d_curve": d_curve,
                                "certificate": cert})


# ---------------------------------------------------------------------------
# concentration harnesses (iid draws from the exact distribution)


def _iid_stat_means(params, graph, big_m, trials, seed):
    probs = exact_distribution(params, graph)
    stats = _cached_stat_matrix(graph, params.fields_enabled)
    rng = np.random.default_rng(seed)
    draws = rng.choice(probs.size, size=(trials, big_m), p=probs)
    mu = exact_mean_stats(params, graph)
    deviations = np.empty(trials)
    for t in range(trials):
        deviations[t] = np.linalg.norm(stats[draws[t]].mean(axis=0) - mu)
    return deviations


def hoeffding_coverage(params, graph, big_m, delta, trials, seed=0):
    """Empirical coverage of the Hoeffding-type radius with c = 2 R2."""
    r2 = stat_norm_bound(graph, params.fields_enabled).r2
    radius = hoeffding_radius(2.0 * r2, big_m, delta)
    deviations = _iid_stat_means(params, graph, big_m, trials, seed)
    violations = int((deviations > radius).sum())
    return BoundReport("hoeffding-coverage", trials, violations,
                       float((radius - deviations).min()),
                       allowed_violations=binomial_slack_count(delta, trials),
                       details={"radius": radius, "delta": delta})


def check_estimation_moments(params, graph, big_m, trials, seed=0):
    """Monte-Carlo check of E||mean - mu|| <= 2 R2 / sqrt(M) and
    V[||mean - mu||] <= 2 R2^2 / M, with three-sigma estimator slack."""
    r2 = stat_norm_bound(graph, params.fields_enabled).r2
    deviations = _iid_stat_means(params, graph, big_m, trials, seed)

    mean_bound = 2.0 * r2 / math.sqrt(big_m)
    est_mean = float(deviations.mean())
    se_mean = float(deviations.std(ddof=1)) / math.sqrt(trials)
    mean_violation = int(est_mean - 3.0 * se_mean > mean_bound)
    mean_report = BoundReport("estimation-mean", trials, mean_violation,
                              mean_bound - est_mean,
                              details={"estimate": est_mean, "slack_se": se_mean})

    var_bound = 2.0 * r2 * r2 / big_m
    est_var = float(deviations.var(ddof=1))
    centered = deviations - deviations.mean()
    m4 = float((centered ** 4).mean())
    se_var = math.sqrt(max(m4 - est_var ** 2, 0.0) / trials)
    var_violation = int(est_var - 3.0 * se_var > var_bound)
    var_report = BoundReport("estimation-variance", trials, var_violation,
                             var_bound - est_var,
                             details={"estimate": est_var, "slack_se": se_var})

    return BoundReport("estimation-moments", trials,
                       mean_violation + var_violation,
                       min(mean_report.max_slack, var_report.max_slack),
                       children=(mean_report, var_report))


# ---------------------------------------------------------------------------
# summed gradient-error bound (needs exact chain laws)


def _chain_law_mean(theta, model, v):
    """E_q[t(X)] for q = (uniform) M_theta^v, via exact matrix powers."""
    graph = model.graph
    kernel = exact_transition_matrix(theta, graph)
    q = np.full(kernel.shape[0], 1.0 / kernel.shape[0])
    for _ in range(v):
        q = q @ kernel
    stats = _cached_stat_matrix(graph, model.fields_enabled)
    return q @ stats


def check_sum_error_bound(traces, model, delta, tolerance=1e-12):
    """Check sum_k ||d_k|| <= 2 R2 (K/sqrt(M) + log(1/delta)) across runs,
    where d_k is the batch mean minus the exact chain-law mean at step k.

    Requires uniform chain init, N <= 8, and M >= 3K/log(1/delta).
    """
    if model.graph.num_nodes > 8:
        raise CapacityError("sum-error check needs N <= 8 for exact chain laws")
    if not (0 < delta < 1):
        raise InvalidInputError("delta must lie in (0, 1)")
    r2 = stat_norm_bound(model.graph, model.fields_enabled).r2
    violations = 0
    min_slack = math.inf
    sums = []
    for trace in traces:
        if trace.chain_init != "uniform":
            raise ConfigurationError("sum-error check assumes uniform chain init")
        k_tot, m_tot = trace.big_k, trace.big_m
        if m_tot < 3.0 * k_tot / math.log(1.0 / delta):
            raise ConfigurationError(
                "precondition M >= 3K/log(1/delta) unmet: "
                f"M={m_tot}, K={k_tot}, delta={delta}")
        bound = 2.0 * r2 * (k_tot / math.sqrt(m_tot) + math.log(1.0 / delta))
        total = 0.0
        theta_prev = model.zero_parameters()
        for rec in trace.records:
            q_mean = _chain_law_mean(theta_prev, model, trace.v)
            total += float(np.linalg.norm(rec.mean_stats - q_mean))
            theta_prev = model.parameters_from_vector(rec.theta)
        sums.append(total)
        min_slack = min(min_slack, bound - total)
        if total > bound + tolerance:
            violations += 1
    return BoundReport("sum-error-bound", len(sums), violations, min_slack,
                       allowed_violations=binomial_slack_count(delta, len(sums)),
                       details={"sums": sums, "bound": bound})


# ---------------------------------------------------------------------------
# convergence envelopes


def convergence_envelope(mode, consts, big_k, big_m, v, delta, dist0=None):
    """Right-hand side of the convergence guarantee for the given mode.

    dist0 defaults to the constants' distance bound D; pass the measured
    ||theta_0 - theta*|| when an oracle provides it.
    """
    d0 = consts.big_d if dist0 is None else dist0
    r2, lip, lam = consts.r2, consts.lipschitz, consts.lam
    big_c, alpha = consts.big_c, consts.alpha
    if mode == "convex":
        inner = (lip * d0 / (4.0 * r2) + math.log(1.0 / delta)
                 + big_k / math.sqrt(big_m) + big_k * big_c * alpha ** v)
        return 8.0 * r2 * r2 / (big_k * lip) * inner ** 2
    if mode == "strongly_convex":
        if lam <= 0:
            raise InvalidInputError("strongly convex envelope needs lambda > 0")
        noise = (math.sqrt(r2 / (2.0 * big_m))
                 * (1.0 + math.sqrt(2.0 * math.log(big_k / delta)))
                 + 2.0 * r2 * big_c * alpha ** v)
        return (1.0 - lam / lip) ** big_k * d0 + (lip / lam) * noise
    raise InvalidInputError(f"unknown mode {mode!r}")


def envelope_coverage(model, data, constraint, lam, mode, consts, kmv, delta,
                      runs, base_seed, lipschitz, theta_star=None, backend=None):
    """Fraction of seeded runs whose outcome respects the envelope.

    Strongly convex mode compares ||theta_K - theta*|| to the envelope;
    convex mode compares f(theta_bar) - f(theta*). The envelope is evaluated
    with the measured ||theta_0 - theta*||.
    """
    big_k, big_m, v = kmv
    graph = model.graph
    if theta_star is None:
        theta_star = exact_optimum(model, data, constraint, lam,
                                   tol=1e-10, lipschitz=lipschitz)
    star_vec = theta_star.as_vector()
    dist0 = float(np.linalg.norm(star_vec))  # theta_0 = 0
    envelope = convergence_envelope(mode, consts, big_k, big_m, v, delta,
                                    dist0=dist0)
    f_star = negative_log_likelihood(theta_star, data, graph, lam)
    violations = 0
    min_slack = math.inf
    outcomes = []
    for i in range(runs):
        trace = train(model, data, constraint, (big_k, big_m, v), lam,
                      seed=base_seed + i, lipschitz=lipschitz,
                      instrument=False, backend=backend)
        if mode == "strongly_convex":
            value = float(np.linalg.norm(trace.theta_final - star_vec))
        else:
            avg = model.parameters_from_vector(trace.theta_average)
            value = negative_log_likelihood(avg, data, graph, lam) - f_star
        outcomes.append(value)
        min_slack = min(min_slack, envelope - value)
        if value > envelope:
            violations += 1
    return BoundReport(f"envelope-{mode}", runs, violations, min_slack,
                       allowed_violations=binomial_slack_count(delta, runs),
                       details={"envelope": envelope, "outcomes": outcomes,
                                "dist0": dist0})
