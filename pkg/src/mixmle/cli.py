"""Command-line front-end: plan, train, verify, reproduce, export.

Configuration files are INI-style "key = value" text with one section per
concern; configs/grid4x4.cfg in the repository is a complete worked example.
Every command is deterministic given its config file and seeds.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .errors import (CapacityError, ConfigurationError, InvalidInputError,
                     MixmleError, ModeError)
from .fileio import load_dataset, load_topology, save_dataset
from .learner import (derive_constants, plan_convex, plan_strongly_convex,
                      train, work_lower_bound_convex,
                      work_lower_bound_strongly_convex)
from .model import (Dataset, IsingModel, grid_topology, lipschitz_constant,
                    negative_log_likelihood, stat_norm_bound)
from .projection import BoxConstraint, SpectralConstraint
from .sampler import (MixingCertificate, gibbs_mixing_certificate,
                      spectral_mixing_certificate, tau_bound_gibbs)
from .verifier import (check_analytic_bounds, check_estimation_moments,
                       check_mixing_certificate, check_sum_error_bound,
                       envelope_coverage, exact_optimum, hoeffding_coverage)
from .model import Parameters, exact_gradient


@dataclass
class RunConfig:
    """Parsed and validated experiment configuration."""

    model: IsingModel
    dataset: Dataset
    constraint: object
    lam: float
    lipschitz: float | None
    mode: str
    epsilon: float
    delta: float
    betas: tuple
    master_seed: int
    output_dir: str
    chain_v: int | None
    chain_init: str
    explicit_kmv: tuple | None
    certificate: MixingCertificate | None


def _get(cp, section, key, default=None):
    if cp.has_option(section, key):
        return cp.get(section, key)
    return default


def load_config(path):
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if not cp.read(path):
        raise ConfigurationError(f"cannot read config file {path}")

    # topology: exactly one source
    rows = _get(cp, "model", "grid_rows")
    topo_file = _get(cp, "model", "topology_file")
    if (rows is None) == (topo_file is None):
        raise ConfigurationError(
            "exactly one of [model] grid_rows/grid_cols or topology_file is required")
    if rows is not None:
        graph = grid_topology(int(rows), int(_get(cp, "model", "grid_cols", rows)))
    else:
        graph = load_topology(topo_file)
    fields_enabled = _get(cp, "model", "fields_enabled", "false").lower() == "true"
    model = IsingModel(graph, fields_enabled)

    # dataset: exactly one source
    count = _get(cp, "data", "synthetic_count")
    data_file = _get(cp, "data", "dataset_file")
    if (count is None) == (data_file is None):
        raise ConfigurationError(
            "exactly one of [data] synthetic_count or dataset_file is required")
    if count is not None:
        seed = int(_get(cp, "data", "synthetic_seed", "0"))
        dataset = synthetic_dataset(graph.num_nodes, int(count), seed)
    else:
        dataset = load_dataset(data_file, graph.num_nodes)

    kind = _get(cp, "constraint", "kind", "box")
    if kind == "box":
        constraint = BoxConstraint(float(_get(cp, "constraint", "beta", "0.2")))
    elif kind == "spectral":
        constraint = SpectralConstraint(
            c=float(_get(cp, "constraint", "c", "0.5")),
            tolerance=float(_get(cp, "constraint", "tolerance", "1e-8")))
    else:
        raise ConfigurationError(f"unknown constraint kind {kind!r}")

    lam = float(_get(cp, "learner", "lambda", "0"))
    lip = _get(cp, "learner", "lipschitz")
    mode = _get(cp, "learner", "mode", "strongly_convex" if lam > 0 else "convex")
    mode = mode.replace("-", "_")
    epsilon = float(_get(cp, "learner", "epsilon", "1"))
    delta = float(_get(cp, "learner", "delta", "0.1"))
    betas = tuple(float(_get(cp, "learner", f"beta{i}", d))
                  for i, d in ((1, "0.2"), (2, "0.6"), (3, "0.2")))

    chain_v = _get(cp, "sampler", "v")
    chain_init = _get(cp, "sampler", "init", "uniform")
    cert = None
    if cp.has_option("sampler", "big_c") or cp.has_option("sampler", "alpha"):
        if not (cp.has_option("sampler", "big_c") and cp.has_option("sampler", "alpha")):
            raise ConfigurationError("certificate override needs both big_c and alpha")
        cert = MixingCertificate(float(cp.get("sampler", "big_c")),
                                 float(cp.get("sampler", "alpha")),
                                 "config override")

    kmv = None
    if cp.has_section("schedule"):
        missing = [k for k in ("big_k", "big_m", "v") if not cp.has_option("schedule", k)]
        if missing:
            raise ConfigurationError(f"[schedule] needs big_k, big_m and v (missing {missing})")
        kmv = tuple(int(cp.get("schedule", k)) for k in ("big_k", "big_m", "v"))
        if min(kmv) < 1:
            raise ConfigurationError("explicit K, M, v must all be >= 1")

    if lam < 0:
        raise ConfigurationError("lambda must be nonnegative")
    if mode not in ("convex", "strongly_convex"):
        raise ConfigurationError(f"unknown mode {mode!r}")
    if not (0 < delta < 1):
        raise ConfigurationError("delta must lie in (0, 1)")
    if epsilon <= 0:
        raise ConfigurationError("epsilon must be positive")

    return RunConfig(
        model=model, dataset=dataset, constraint=constraint, lam=lam,
        lipschitz=float(lip) if lip is not None else None, mode=mode,
        epsilon=epsilon, delta=delta, betas=betas,
        master_seed=int(_get(cp, "run", "master_seed", "0")),
        output_dir=_get(cp, "run", "output_dir", "out"),
        chain_v=int(chain_v) if chain_v is not None else None,
        chain_init=chain_init, explicit_kmv=kmv, certificate=cert)


def synthetic_dataset(num_nodes, count, seed):
    """Random +-1 training vectors from a seeded generator."""
    rng = np.random.default_rng(seed)
    return Dataset(rng.choice(np.array([-1, 1], dtype=np.int8),
                              size=(count, num_nodes)))


def certificates_for(cfg):
    """Mixing certificates for the configured constraint set, under both
    documented constant conventions (C = N and C = log N)."""
    if cfg.certificate is not None:
        return {"override": cfg.certificate}
    g = cfg.model.graph
    if isinstance(cfg.constraint, BoxConstraint):
        return {
            "C=N": gibbs_mixing_certificate(g.num_nodes, g.max_degree,
                                            cfg.constraint.beta, "exp"),
            "C=log N": gibbs_mixing_certificate(g.num_nodes, g.max_degree,
                                                cfg.constraint.beta, "log"),
        }
    return {
        "C=N": spectral_mixing_certificate(cfg.constraint.c, g.num_nodes, "exp"),
        "C=log N": spectral_mixing_certificate(cfg.constraint.c, g.num_nodes, "log"),
    }


def theorem_lipschitz(cfg):
    return lipschitz_constant(
        stat_norm_bound(cfg.model.graph, cfg.model.fields_enabled), cfg.lam)


def dual_convention_schedules(cfg):
    """Plan under every certificate convention; returns {label: (cert, schedule,
    lower_bound)} plus a discrepancy report when the conventions disagree."""
    r2 = stat_norm_bound(cfg.model.graph, cfg.model.fields_enabled).r2
    lip = cfg.lipschitz if cfg.lipschitz is not None else theorem_lipschitz(cfg)
    big_d = _distance_bound(cfg, r2)
    out = {}
    for label, cert in certificates_for(cfg).items():
        consts = derive_constants(cfg.mode, lip, cfg.lam, r2, cert.big_c,
                                  cert.alpha, big_d, cfg.delta)
        if cfg.mode == "strongly_convex":
            sch = plan_strongly_convex(consts, cfg.epsilon, cfg.delta, cfg.betas)
            try:
                lower = work_lower_bound_strongly_convex(
                    consts.a, consts.b, consts.c, consts.gamma, consts.alpha,
                    cfg.epsilon, cfg.delta)
            except InvalidInputError:
                # target accuracy at or beyond the initial distance: the
                # necessary-work bound degenerates, nothing is required
                lower = 0.0
        else:
            sch = plan_convex(consts, _convex_epsilon(cfg.epsilon, lip, r2),
                              cfg.betas, delta=cfg.delta)
            lower = work_lower_bound_convex(consts.a, consts.b, consts.c,
                                            consts.alpha, sch.epsilon)
        out[label] = (cert, sch, lower)
    return out


def _convex_epsilon(eps_f, lip, r2):
    # target on the schedule budget that makes the f-gap guarantee eps_f
    return eps_f * lip / (8.0 * r2 * r2)


def _distance_bound(cfg, r2):
    """||theta_0 - theta*|| bound from the constraint-set geometry."""
    g = cfg.model.graph
    if isinstance(cfg.constraint, BoxConstraint):
        # per-coordinate interval width, as in the worked 4x4 example
        return math.sqrt(g.num_edges * (2.0 * cfg.constraint.beta) ** 2)
    return math.sqrt(g.num_edges) * 2.0 * cfg.constraint.c


def discrepancy_report(plans):
    """Explain how the constant conventions disagree on the chain length."""
    lines = ["certificate-convention discrepancy report:"]
    for label, (cert, sch, _) in plans.items():
        tight = math.log(sch.constants.c / (sch.betas[2] * sch.epsilon)) \
            / (-math.log(cert.alpha)) if cfg_mode_sc(sch) else None
        lines.append(
            f"  {label}: C={cert.big_c:.6g} alpha={cert.alpha:.8g} -> "
            f"K={sch.big_k} M={sch.big_m} v={sch.v}"
            + (f" (tight-form v={math.ceil(tight - 1e-9)})" if tight else ""))
    vs = [sch.v for _, sch, _ in plans.values()]
    if len(set(vs)) > 1:
        lines.append(
            f"  the conventions give v in {sorted(set(vs))}; the worked-example "
            "chain length 561 equals the tau(0.01) mixing bound and is pinned "
            "separately by the reproduce command.")
    return "\n".join(lines)


def cfg_mode_sc(schedule):
    return schedule.mode == "strongly_convex"


# ---------------------------------------------------------------------------
# commands


def cmd_plan(args):
    cfg = load_config(args.config)
    if args.mode:
        cfg.mode = args.mode.replace("-", "_")
    if cfg.mode == "strongly_convex" and cfg.lam <= 0:
        raise ModeError("mode strongly_convex requires lambda > 0; "
                        "set [learner] lambda or use --mode convex")
    plans = dual_convention_schedules(cfg)
    lines = []
    for label, (cert, sch, lower) in plans.items():
        lines.append(f"[{label}] K={sch.big_k} M={sch.big_m} v={sch.v} "
                     f"work={sch.work} lower_bound={lower:.6g}")
    lines.append(discrepancy_report(plans))
    text = "\n".join(lines)
    print(text)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "plan.txt"), "w") as fh:
            fh.write(text + "\n")
    return 0


def _schedule_for_train(cfg):
    if cfg.explicit_kmv is not None:
        kmv = cfg.explicit_kmv
        if cfg.chain_v is not None and cfg.chain_v != kmv[2]:
            raise ConfigurationError("[schedule] v conflicts with [sampler] v")
        return kmv
    plans = dual_convention_schedules(cfg)
    label = "override" if "override" in plans else "C=N"
    sch = plans[label][1]
    v = cfg.chain_v if cfg.chain_v is not None else sch.v
    return (sch.big_k, sch.big_m, v)


def trace_to_json(trace, theta_star=None):
    doc = {
        "big_k": trace.big_k, "big_m": trace.big_m, "v": trace.v,
        "lambda": trace.lam, "lipschitz": trace.lipschitz,
        "master_seed": trace.master_seed, "chain_init": trace.chain_init,
        "exact_gradients": trace.exact_gradients,
        "theta_final": trace.theta_final.tolist(),
        "theta_average": trace.theta_average.tolist(),
        "theta_star": theta_star.tolist() if theta_star is not None else None,
        "iterations": [
            {"k": r.k, "theta": r.theta.tolist(),
             "f_exact": r.f_exact, "grad_error_norm": r.grad_error_norm}
            for r in trace.records],
    }
    return json.dumps(doc, sort_keys=True, indent=1)


def trace_csv_lines(doc):
    """CSV rows (iter, f_exact, param_dist_exact, grad_err_norm, theta...)."""
    theta_star = doc.get("theta_star")
    star = np.asarray(theta_star) if theta_star is not None else None
    n_theta = len(doc["theta_final"])
    lines = [f"# K={doc['big_k']} M={doc['big_m']} v={doc['v']} "
             f"lambda={doc['lambda']:g} L={doc['lipschitz']:g} "
             f"seed={doc['master_seed']} init={doc['chain_init']}"]
    header = ["iter", "f_exact", "param_dist_exact", "grad_err_norm"]
    header += [f"theta_{i}" for i in range(n_theta)]
    lines.append(",".join(header))
    for rec in doc["iterations"]:
        theta = np.asarray(rec["theta"])
        dist = "" if star is None else f"{np.linalg.norm(theta - star):.12g}"
        f_val = "" if rec["f_exact"] is None else f"{rec['f_exact']:.12g}"
        err = "" if rec["grad_error_norm"] is None else f"{rec['grad_error_norm']:.12g}"
        row = [str(rec["k"]), f_val, dist, err]
        row += [f"{t:.12g}" for t in theta]
        lines.append(",".join(row))
    return lines


def cmd_train(args):
    cfg = load_config(args.config)
    if args.mode:
        cfg.mode = args.mode.replace("-", "_")
    seed = args.seed if args.seed is not None else cfg.master_seed
    out_dir = args.out or cfg.output_dir
    kmv = _schedule_for_train(cfg)
    lip = cfg.lipschitz if cfg.lipschitz is not None else theorem_lipschitz(cfg)
    trace = train(cfg.model, cfg.dataset, cfg.constraint, kmv, cfg.lam,
                  seed=seed, lipschitz=lip, chain_init=cfg.chain_init)

    theta_star = None
    summary = [f"K={kmv[0]} M={kmv[1]} v={kmv[2]} lambda={cfg.lam:g} "
               f"L={lip:g} seed={seed}"]
    if cfg.model.graph.num_nodes <= 16:
        star = exact_optimum(cfg.model, cfg.dataset, cfg.constraint, cfg.lam,
                             tol=1e-8, lipschitz=lip)
        theta_star = star.as_vector()
        dist = float(np.linalg.norm(trace.theta_final - theta_star))
        f_star = negative_log_likelihood(star, cfg.dataset, cfg.model.graph, cfg.lam)
        final = cfg.model.parameters_from_vector(trace.theta_final)
        gap = negative_log_likelihood(final, cfg.dataset, cfg.model.graph, cfg.lam) - f_star
        summary.append(f"final_distance_to_optimum={dist:.6g}")
        summary.append(f"final_objective_gap={gap:.6g}")
    else:
        summary.append("exact oracle unavailable at this size")

    os.makedirs(out_dir, exist_ok=True)
    doc_text = trace_to_json(trace, theta_star)
    with open(os.path.join(out_dir, "trace.json"), "w") as fh:
        fh.write(doc_text + "\n")
    doc = json.loads(doc_text)
    with open(os.path.join(out_dir, "trace.csv"), "w") as fh:
        fh.write("\n".join(trace_csv_lines(doc)) + "\n")
    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write("\n".join(summary) + "\n")
    print("\n".join(summary))
    return 0


def _verify_suites(cfg, seed, backend=None):
    """Suite name -> callable returning a list of BoundReports."""

    def analytic():
        rep = check_analytic_bounds(grid_topology(3, 3), 200, 0.5,
                                    lam=1.0, seed=seed)
        return [rep]

    def mixing():
        if cfg is not None:
            model, constraint = cfg.model, cfg.constraint
            certs = certificates_for(cfg)
            cert = certs.get("override") or certs["C=N"]
            g = model.graph
            if g.num_nodes > 10:
                raise ConfigurationError("mixing suite needs N <= 10")
            beta = constraint.beta if isinstance(constraint, BoxConstraint) else None
        else:
            g = grid_topology(2, 2)
            beta = 0.2
            cert = gibbs_mixing_certificate(g.num_nodes, g.max_degree, beta, "exp")
        theta = Parameters(np.full(g.num_edges, beta if beta is not None else 0.2))
        return [check_mixing_certificate(theta, g, cert, 5000)]

    def concentration():
        g = grid_topology(2, 2)
        theta = Parameters(np.full(g.num_edges, 0.2))
        return [hoeffding_coverage(theta, g, 100, 0.1, 300, seed=seed)]

    def estimation():
        g = grid_topology(2, 2)
        theta = Parameters(np.full(g.num_edges, 0.2))
        return [check_estimation_moments(theta, g, 100, 2000, seed=seed)]

    def sum_error():
        g = grid_topology(2, 2)
        model = IsingModel(g)
        data = synthetic_dataset(g.num_nodes, 5, seed)
        box = BoxConstraint(0.2)
        traces = [train(model, data, box, (10, 200, 25), 1.0, seed=seed + i,
                        lipschitz=10.0, instrument=False, backend=backend)
                  for i in range(200)]
        return [check_sum_error_bound(traces, model, 0.2)]

    def envelope():
        g = grid_topology(3, 3)
        model = IsingModel(g)
        data = synthetic_dataset(g.num_nodes, 5, seed)
        box = BoxConstraint(0.2)
        r2 = stat_norm_bound(g).r2
        cert = gibbs_mixing_certificate(g.num_nodes, g.max_degree, 0.2, "exp")
        reports = []
        lam = 1.0
        lip = lipschitz_constant(r2, lam)
        consts = derive_constants("strongly_convex", lip, lam, r2, cert.big_c,
                                  cert.alpha, math.sqrt(g.num_edges * 0.16), 0.2)
        reports.append(envelope_coverage(
            model, data, box, lam, "strongly_convex", consts,
            (20, 2000, 400), 0.2, 100, seed, lip, backend=backend))
        lip0 = lipschitz_constant(r2, 0.0)
        consts0 = derive_constants("convex", lip0, 0.0, r2, cert.big_c,
                                   cert.alpha, math.sqrt(g.num_edges * 0.16), 0.2)
        reports.append(envelope_coverage(
            model, data, box, 0.0, "convex", consts0,
            (20, 300, 400), 0.2, 100, seed + 1, lip0, backend=backend))
        return reports

    return {
        "analytic": analytic,
        "mixing": mixing,
        "concentration": concentration,
        "estimation": estimation,
        "sum-error": sum_error,
        "envelope": envelope,
    }


DEFAULT_SUITES = ("analytic", "mixing", "concentration", "estimation")


def cmd_verify(args):
    cfg = load_config(args.config) if args.config else None
    suites = _verify_suites(cfg, args.seed if args.seed is not None else 0)
    if args.suite in (None, "default"):
        selected = DEFAULT_SUITES
    elif args.suite == "all":
        selected = tuple(suites)
    elif args.suite in suites:
        selected = (args.suite,)
    else:
        raise ConfigurationError(
            f"unknown suite {args.suite!r}; choose from "
            f"{', '.join(list(suites) + ['default', 'all'])}")

    reports = []
    human = []
    failures = 0
    for name in selected:
        try:
            results = suites[name]()
        except CapacityError as exc:
            # an oversized instance skips its check without failing the suite
            human.append(f"[{name}] SKIP (capacity) {exc}")
            continue
        except MixmleError as exc:
            human.append(f"[{name}] ERROR {exc}")
            failures += 1
            continue
        for rep in results:
            reports.append(rep)
            human.append(f"[{name}] {rep.summary_line()}")
            for child in rep.children:
                human.append(f"[{name}]   {child.summary_line()}")
            if not rep.ok:
                failures += 1
    text = "\n".join(human)
    print(text)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "verify_report.txt"), "w") as fh:
            fh.write(text + "\n")
        with open(os.path.join(args.out, "verify_summary.txt"), "w") as fh:
            for rep in reports:
                fh.write(rep.summary_line() + "\n")
                for child in rep.children:
                    fh.write(child.summary_line() + "\n")
    return 1 if failures else 0


REPRODUCE = {
    "rows": 4, "cols": 4, "beta": 0.2, "lam": 1.0, "lipschitz": 10.0,
    "epsilon": 2.0, "delta": 0.1, "betas": (0.01, 0.9, 0.1),
    "big_k": 46, "big_m": 1533, "v": 561, "data_count": 5, "data_seed": 7,
}


def cmd_reproduce(args):
    spec = REPRODUCE
    out_dir = args.out or "reproduce_out"
    base_seed = args.seed if args.seed is not None else 1000
    runs = args.runs
    os.makedirs(out_dir, exist_ok=True)

    g = grid_topology(spec["rows"], spec["cols"])
    model = IsingModel(g)
    data = synthetic_dataset(g.num_nodes, spec["data_count"], spec["data_seed"])
    save_dataset(data, os.path.join(out_dir, "training_vectors.txt"))
    box = BoxConstraint(spec["beta"])

    cfg = RunConfig(model=model, dataset=data, constraint=box, lam=spec["lam"],
                    lipschitz=spec["lipschitz"], mode="strongly_convex",
                    epsilon=spec["epsilon"], delta=spec["delta"],
                    betas=spec["betas"], master_seed=base_seed,
                    output_dir=out_dir, chain_v=None, chain_init="uniform",
                    explicit_kmv=None, certificate=None)
    plans = dual_convention_schedules(cfg)
    plan_lines = []
    for label, (cert, sch, lower) in plans.items():
        plan_lines.append(f"[{label}] K={sch.big_k} M={sch.big_m} v={sch.v} "
                          f"work={sch.work} lower_bound={lower:.6g}")
    plan_lines.append(discrepancy_report(plans))
    plan_lines.append(
        f"pinned chain length v={spec['v']} (the tau(0.01) mixing bound: "
        f"tau={tau_bound_gibbs(g.num_nodes, g.max_degree, spec['beta'], 0.01)})")
    with open(os.path.join(out_dir, "plan.txt"), "w") as fh:
        fh.write("\n".join(plan_lines) + "\n")
    print("\n".join(plan_lines))

    star = exact_optimum(model, data, box, spec["lam"], tol=1e-8,
                         lipschitz=spec["lipschitz"])
    star_vec = star.as_vector()
    f_star = negative_log_likelihood(star, data, g, spec["lam"])

    kmv = (spec["big_k"], spec["big_m"], spec["v"])
    summary = []
    all_ok = True
    for j in range(runs):
        trace = train(model, data, box, kmv, spec["lam"],
                      seed=base_seed + j, lipschitz=spec["lipschitz"],
                      instrument=True)
        rows = ["iter,nll_gap,param_dist"]
        for rec in trace.records:
            gap = rec.f_exact - f_star
            dist = np.linalg.norm(rec.theta - star_vec)
            rows.append(f"{rec.k},{gap:.12g},{dist:.12g}")
        with open(os.path.join(out_dir, f"run{j}_curve.csv"), "w") as fh:
            fh.write("\n".join(rows) + "\n")
        final_dist = float(np.linalg.norm(trace.theta_final - star_vec))
        ok = final_dist <= spec["epsilon"]
        all_ok = all_ok and ok
        summary.append(f"run {j}: final_distance={final_dist:.6g} "
                       f"(epsilon_theta={spec['epsilon']:g}) "
                       f"{'ok' if ok else 'MISS'}")
    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write("\n".join(summary) + "\n")
    print("\n".join(summary))
    return 0 if all_ok else 1


def cmd_export(args):
    with open(args.trace) as fh:
        doc = json.load(fh)
    lines = trace_csv_lines(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="mixmle",
        description="MCMC maximum-likelihood learning on fast-mixing parameter sets")
    sub = p.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="derive a (K, M, v) schedule")
    plan.add_argument("--config", required=True)
    plan.add_argument("--mode", choices=["convex", "strongly-convex"])
    plan.add_argument("--out")
    plan.set_defaults(func=cmd_plan)

    tr = sub.add_parser("train", help="run the learning algorithm")
    tr.add_argument("--config", required=True)
    tr.add_argument("--mode", choices=["convex", "strongly-convex"])
    tr.add_argument("--seed", type=int)
    tr.add_argument("--out")
    tr.set_defaults(func=cmd_train)

    ver = sub.add_parser("verify", help="run bound-certification suites")
    ver.add_argument("--suite")
    ver.add_argument("--config")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--out")
    ver.set_defaults(func=cmd_verify)

    rep = sub.add_parser("reproduce", help="rerun the 4x4-grid worked example")
    rep.add_argument("--out")
    rep.add_argument("--seed", type=int)
    rep.add_argument("--runs", type=int, default=5)
    rep.set_defaults(func=cmd_reproduce)

    ex = sub.add_parser("export", help="convert a trace.json to CSV")
    ex.add_argument("--trace", required=True)
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MixmleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
