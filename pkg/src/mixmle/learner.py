"""Projected gradient descent with MCMC gradient estimates, plus planners.

The training loop (theta_0 = 0, step size 1/L):

  for k = 1..K:
    draw M chains of length v from the current parameters,
    g_hat = batch mean of t(x) - tbar + lambda * theta_{k-1},
    theta_k = Pi_Theta[theta_{k-1} - g_hat / L]

and both outputs (the last iterate and the running average) are recorded.

Planners turn accuracy targets into (K, M, v) schedules:

* convex mode, from the parameterized schedule
    K = a^2/(b1^2 e),  M = (a b/(b1 b2 e))^2,  v = log(a c/(b1 b3 e))/(-log alpha)
  with constants a = L*D/(4 R2) + log(1/delta), b = 1, c = C, which makes
  (1/K)(a + b K/sqrt(M) + K c alpha^v)^2 <= e exactly when b1+b2+b3 = 1.
* strongly convex mode, from the explicit construction
    K >= (L/lam) log(D/(b1 e))
    M >= (L^2 R2/(2 e^2 b2^2 lam^2)) (1 + sqrt(2 log(K/delta)))^2
    v >= (1/(1-alpha)) log(2 L R2 C/(b3 e lam))
  with the ceiled K used inside log(K/delta); this reproduces the worked
  4x4-grid schedule K=46, M=1533.

Fractional outputs are ceiled (with a 1e-9 guard against float roundoff on
exactly-integer reals) and floored at 1. The error-budget fractions are
accepted when they sum to 1 within 5e-2: the worked example itself uses
(.01, .9, .1), which sums to 1.01 and merely rescales the guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (InvalidInputError, ModeError, NumericError)
from .model import (IsingModel, Parameters, batch_stats, exact_gradient,
                    exact_mean_stats, lipschitz_constant,
                    negative_log_likelihood, stat_norm_bound, _resolve_mean)
from .projection import project
from .sampler import ChainConfig, draw_batch

_BETA_SUM_SLACK = 5e-2


@dataclass(frozen=True)
class ProblemConstants:
    """Constants feeding the planners and convergence envelopes."""

    mode: str                 # "convex" or "strongly_convex"
    a: float
    b: float
    c: float
    gamma: float | None       # contraction factor 1 - lam/L (strongly convex)
    big_d: float              # bound on ||theta_0 - theta*||
    r2: float
    lam: float
    lipschitz: float
    big_c: float
    alpha: float


def derive_constants(mode, lipschitz, lam, r2, big_c, alpha, big_d, delta):
    """Map model quantities to the (a, b, c, gamma) of the chosen mode."""
    if not (0 < alpha < 1):
        raise InvalidInputError("alpha must lie in (0, 1)")
    if min(lipschitz, r2, big_c, big_d) <= 0:
        raise InvalidInputError("L, R2, C and D must be positive")
    if not (0 < delta <= 1):
        raise InvalidInputError("delta must lie in (0, 1]")
    if mode == "convex":
        a = lipschitz * big_d / (4.0 * r2) + math.log(1.0 / delta)
        return ProblemConstants(mode, a, 1.0, big_c, None, big_d, r2, lam,
                                lipschitz, big_c, alpha)
    if mode == "strongly_convex":
        if lam <= 0:
            raise ModeError("strongly convex constants need lambda > 0; "
                            "use mode='convex' for the unregularized problem")
        gamma = 1.0 - lam / lipschitz
        if not (0 < gamma < 1):
            raise InvalidInputError("lambda must be smaller than L")
        a = big_d
        b = (lipschitz / lam) * math.sqrt(r2 / 2.0)
        c = 2.0 * lipschitz * r2 * big_c / lam
        return ProblemConstants(mode, a, b, c, gamma, big_d, r2, lam,
                                lipschitz, big_c, alpha)
    raise ModeError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class Schedule:
    """A runnable (K, M, v) plus everything that produced it."""

    big_k: int
    big_m: int
    v: int
    mode: str
    betas: tuple
    epsilon: float
    delta: float
    constants: ProblemConstants
    k_real: float
    m_real: float
    v_real: float

    def __post_init__(self):
        if min(self.big_k, self.big_m, self.v) < 1:
            raise InvalidInputError("K, M and v must all be >= 1")

    @property
    def work(self):
        return self.big_k * self.big_m * self.v


def _ceil_at_least_one(x):
    return max(1, int(math.ceil(x - 1e-9)))


def _check_betas(betas):
    b1, b2, b3 = (float(b) for b in betas)
    if min(b1, b2, b3) <= 0:
        raise InvalidInputError("error-budget fractions must be positive")
    if abs(b1 + b2 + b3 - 1.0) > _BETA_SUM_SLACK:
        raise InvalidInputError(
            f"error-budget fractions sum to {b1 + b2 + b3:g}, expected ~1")
    return b1, b2, b3


def plan_convex(consts, epsilon, betas, delta=None):
    """Schedule for the merely-convex guarantee; when delta is supplied the
    theorem's precondition M >= 3K/log(1/delta) is enforced as a floor."""
    if consts.mode != "convex":
        raise ModeError("plan_convex needs convex-mode constants")
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    b1, b2, b3 = _check_betas(betas)
    a, b, c, alpha = consts.a, consts.b, consts.c, consts.alpha
    k_real = a * a / (b1 * b1 * epsilon)
    m_real = (a * b / (b1 * b2 * epsilon)) ** 2
    v_real = math.log(a * c / (b1 * b3 * epsilon)) / (-math.log(alpha))
    big_k = _ceil_at_least_one(k_real)
    big_m = _ceil_at_least_one(m_real)
    if delta is not None:
        if not (0 < delta < 1):
            raise InvalidInputError("delta must lie in (0, 1)")
        big_m = max(big_m, _ceil_at_least_one(3.0 * big_k / math.log(1.0 / delta)))
    return Schedule(big_k, big_m, _ceil_at_least_one(v_real),
                    "convex", (b1, b2, b3), epsilon,
                    delta if delta is not None else math.nan,
                    consts, k_real, m_real, v_real)


def plan_strongly_convex(consts, epsilon, delta, betas):
    """Schedule for the strongly-convex guarantee (parameter distance)."""
    if consts.mode != "strongly_convex":
        raise ModeError("plan_strongly_convex needs strongly-convex constants; "
                        "lambda = 0 calls for plan_convex")
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    if not (0 < delta < 1):
        raise InvalidInputError("delta must lie in (0, 1)")
    b1, b2, b3 = _check_betas(betas)
    lip, lam, r2 = consts.lipschitz, consts.lam, consts.r2
    k_real = (lip / lam) * math.log(consts.big_d / (b1 * epsilon))
    big_k = _ceil_at_least_one(k_real)
    # the ceiled K feeds log(K/delta); this is what reproduces M = 1533
    hoeff = (1.0 + math.sqrt(2.0 * math.log(big_k / delta))) ** 2
    m_real = lip * lip * r2 / (2.0 * epsilon ** 2 * b2 * b2 * lam * lam) * hoeff
    v_real = (1.0 / (1.0 - consts.alpha)) * math.log(
        2.0 * lip * r2 * consts.big_c / (b3 * epsilon * lam))
    return Schedule(big_k, _ceil_at_least_one(m_real), _ceil_at_least_one(v_real),
                    "strongly_convex", (b1, b2, b3), epsilon, delta,
                    consts, k_real, m_real, v_real)


def convex_budget_value(consts, k, m, v):
    """(1/K)(a + b K/sqrt(M) + K c alpha^v)^2, the quantity Theorem-style
    schedules drive below epsilon."""
    a, b, c, alpha = consts.a, consts.b, consts.c, consts.alpha
    return (a + b * k / math.sqrt(m) + k * c * alpha ** v) ** 2 / k


def work_lower_bound_convex(a, b, c, alpha, epsilon):
    """Necessary work: KMv >= (a^4 b^2 / e^3) log(ac/e) / (-log alpha)."""
    if min(a, b, c) <= 0 or not (0 < alpha < 1) or epsilon <= 0:
        raise InvalidInputError("positive a, b, c, epsilon and alpha in (0,1)")
    return (a ** 4 * b ** 2 / epsilon ** 3) * math.log(a * c / epsilon) / (-math.log(alpha))


def work_lower_bound_strongly_convex(a, b, c, gamma, alpha, epsilon, delta):
    """Necessary work for gamma^K a + (b/sqrt(M)) sqrt(log(K/delta)) +
    c alpha^v <= epsilon."""
    if min(a, b, c) <= 0 or epsilon <= 0:
        raise InvalidInputError("a, b, c and epsilon must be positive")
    if not (0 < gamma < 1) or not (0 < alpha < 1):
        raise InvalidInputError("gamma and alpha must lie in (0, 1)")
    if not (0 < delta < 1):
        raise InvalidInputError("delta must lie in (0, 1)")
    log_a = math.log(a / epsilon)
    if log_a <= 0:
        raise InvalidInputError("epsilon >= a puts the bound outside its domain")
    inner = log_a / (delta * (-math.log(gamma)))
    if inner <= 0:
        raise InvalidInputError("inner logarithm is nonpositive")
    return (b * b / epsilon ** 2) * (log_a * math.log(c / epsilon)
            / ((-math.log(gamma)) * (-math.log(alpha)))) * math.log(inner)


# ---------------------------------------------------------------------------
# the algorithm


def approximate_gradient(samples, model, tbar, lam, params):
    """(1/M) sum_i t(x_i) - tbar + lambda * theta."""
    samples = np.asarray(samples)
    if samples.ndim != 2 or samples.shape[0] < 1:
        raise InvalidInputError("gradient estimation needs a nonempty batch")
    stats = batch_stats(samples, model.graph, model.fields_enabled)
    return stats.mean(axis=0) - np.asarray(tbar) + lam * params.as_vector()


def pgd_step(params, grad, lipschitz, constraint, graph):
    """theta <- Pi_Theta[theta - grad / L]."""
    if lipschitz <= 0:
        raise InvalidInputError("L must be positive")
    vec = params.as_vector() - np.asarray(grad) / lipschitz
    candidate = Parameters.from_vector(vec, graph, params.fields_enabled)
    return project(candidate, constraint, graph)


@dataclass
class IterationRecord:
    k: int
    theta: np.ndarray            # theta_k (post-update), flat layout
    mean_stats: np.ndarray       # batch mean of t(x) at theta_{k-1}
    grad_estimate: np.ndarray
    f_exact: float | None = None            # f(theta_k) when the oracle ran
    grad_error_norm: float | None = None    # ||e_k|| at theta_{k-1}


@dataclass
class TrainingTrace:
    model: IsingModel
    schedule: Schedule | None
    big_k: int
    big_m: int
    v: int
    lam: float
    lipschitz: float
    master_seed: int
    chain_init: str
    constraint: object
    records: list[IterationRecord] = field(default_factory=list)
    theta_final: np.ndarray | None = None
    theta_average: np.ndarray | None = None
    exact_gradients: bool = False

    def iterates(self):
        return [r.theta for r in self.records]

    def recompute_average(self):
        return np.mean(np.stack(self.iterates()), axis=0)

    def final_parameters(self):
        return self.model.parameters_from_vector(self.theta_final)

    def average_parameters(self):
        return self.model.parameters_from_vector(self.theta_average)


def train(model, data, constraint, schedule_or_kmv, lam, seed,
          lipschitz=None, chain_init="uniform", exact_gradients=False,
          instrument=None, backend=None):
    """Run the full algorithm and record a per-iteration trace.

    `schedule_or_kmv` is either a Schedule or a plain (K, M, v) triple.
    `lipschitz` defaults to the theorem value 4*R2^2 + lambda.
    `instrument` adds exact-oracle diagnostics (f values, gradient-error
    norms); None means "when enumeration is affordable" (N <= 16).
    """
    if lam < 0:
        raise InvalidInputError("lambda must be nonnegative")
    graph = model.graph
    if isinstance(schedule_or_kmv, Schedule):
        schedule = schedule_or_kmv
        big_k, big_m, v = schedule.big_k, schedule.big_m, schedule.v
    else:
        schedule = None
        big_k, big_m, v = (int(x) for x in schedule_or_kmv)
    if min(big_k, big_m, v if not exact_gradients else 1) < 1:
        raise InvalidInputError("K and M must be >= 1 and v >= 1")

    tbar = _resolve_mean(data, graph, model.fields_enabled)
    if lipschitz is None:
        lipschitz = lipschitz_constant(stat_norm_bound(graph, model.fields_enabled), lam)
    if instrument is None:
        instrument = graph.num_nodes <= 16

    if chain_init == "empirical":
        from .model import Dataset
        if not isinstance(data, Dataset):
            raise InvalidInputError("empirical chain init needs a Dataset")
        init_data = data.examples
    else:
        init_data = None

    trace = TrainingTrace(model, schedule, big_k, big_m, v, lam, lipschitz,
                          seed, chain_init, constraint,
                          exact_gradients=exact_gradients)
    theta = model.zero_parameters()
    total = np.zeros_like(theta.as_vector())

    for k in range(1, big_k + 1):
        if exact_gradients:
            mean_stats = exact_mean_stats(theta, graph)
        else:
            cfg = ChainConfig(num_steps=v, master_seed=seed,
                              init=chain_init,
                              init_data=init_data)
            samples = draw_batch(theta, graph, big_m, cfg,
                                 stream_index=k, backend=backend)
            mean_stats = batch_stats(samples, graph,
                                     model.fields_enabled).mean(axis=0)
        grad = mean_stats - tbar + lam * theta.as_vector()
        if not np.all(np.isfinite(grad)):
            raise NumericError(f"non-finite gradient at iteration {k}")

        err_norm = None
        if instrument and not exact_gradients:
            true_grad = exact_gradient(theta, tbar, graph, lam)
            err_norm = float(np.linalg.norm(grad - true_grad))

        theta = pgd_step(theta, grad, lipschitz, constraint, graph)
        vec = theta.as_vector()
        if not np.all(np.isfinite(vec)):
            raise NumericError(f"non-finite iterate at iteration {k}")
        total += vec

        f_val = None
        if instrument:
            f_val = negative_log_likelihood(theta, tbar, graph, lam)
        trace.records.append(IterationRecord(k, vec.copy(), mean_stats,
                                             grad, f_val, err_norm))

    trace.theta_final = trace.records[-1].theta.copy()
    trace.theta_average = total / big_k
    return trace
