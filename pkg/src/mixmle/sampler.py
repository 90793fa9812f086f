"""Random-scan Gibbs sampling, reproducible batches, mixing certificates.

One "Markov transition" throughout the package is one random-scan
single-site update: pick a site uniformly, resample it from its conditional
p(x_site = +1 | rest) = sigma(2 * (theta_site + sum_j theta_sj x_j)). The
mixing-time bounds below are stated in these units, which is what makes
chain lengths like v = 561 on a 4x4 grid meaningful.

Two interchangeable kernels execute chains: a compiled Cython extension and
a numpy fallback, selected at import (override with MIXMLE_BACKEND=compiled
or MIXMLE_BACKEND=python).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _gibbs_numpy
from ._gibbs_numpy import INIT_EMPIRICAL, INIT_FIXED, INIT_UNIFORM
from .errors import CapacityError, InvalidInputError, NoCertificateError
from .model import check_params, enumerate_configs, validate_spins

try:
    from . import _gibbs_cy
except ImportError:  # extension not built; numpy fallback still works
    _gibbs_cy = None

_BACKEND_ENV = "MIXMLE_BACKEND"


def available_backends():
    """Names of usable kernels, preferred first."""
    names = []
    if _gibbs_cy is not None:
        names.append("compiled")
    names.append("python")
    return tuple(names)


def active_backend():
    """Kernel chosen at import time, honoring the MIXMLE_BACKEND override."""
    forced = os.environ.get(_BACKEND_ENV)
    if forced:
        if forced not in ("compiled", "python"):
            raise InvalidInputError(f"unknown backend {forced!r}")
        if forced == "compiled" and _gibbs_cy is None:
            raise InvalidInputError("compiled backend requested but not built")
        return forced
    return available_backends()[0]


def _kernel(backend=None):
    name = backend or active_backend()
    if name == "compiled":
        if _gibbs_cy is None:
            raise InvalidInputError("compiled backend requested but not built")
        return _gibbs_cy.run_batch
    if name == "python":
        return _gibbs_numpy.run_batch
    raise InvalidInputError(f"unknown backend {name!r}")


# ---------------------------------------------------------------------------
# chain configuration


@dataclass(frozen=True, eq=False)
class ChainConfig:
    """How each chain is run: length, initial distribution, master seed."""

    num_steps: int
    master_seed: int
    init: str = "uniform"
    init_state: np.ndarray | None = None   # for init="fixed"
    init_data: np.ndarray | None = None    # for init="empirical", shape (D, N)

    def __post_init__(self):
        if self.num_steps < 0:
            raise InvalidInputError("num_steps must be >= 0")
        if self.init not in ("uniform", "fixed", "empirical"):
            raise InvalidInputError(f"unknown init {self.init!r}")
        if self.init == "fixed" and self.init_state is None:
            raise InvalidInputError("fixed init requires init_state")
        if self.init == "empirical":
            if self.init_data is None or len(self.init_data) == 0:
                raise InvalidInputError("empirical init requires a nonempty dataset")


@lru_cache(maxsize=32)
def _neighbor_tables(graph):
    """Padded per-site neighbor indices and edge ids (pad: idx 0, edge -1)."""
    n = graph.num_nodes
    lists = [[] for _ in range(n)]
    for eid, (i, j) in enumerate(graph.edges):
        lists[i].append((j, eid))
        lists[j].append((i, eid))
    dmax = max((len(l) for l in lists), default=0)
    dmax = max(dmax, 1)
    nbr_idx = np.zeros((n, dmax), dtype=np.int32)
    nbr_eid = np.full((n, dmax), -1, dtype=np.int64)
    for s, l in enumerate(lists):
        for d, (j, eid) in enumerate(l):
            nbr_idx[s, d] = j
            nbr_eid[s, d] = eid
    return nbr_idx, nbr_eid


def _kernel_inputs(params, graph):
    check_params(params, graph)
    nbr_idx, nbr_eid = _neighbor_tables(graph)
    wt = np.where(nbr_eid >= 0,
                  params.couplings[np.clip(nbr_eid, 0, None)], 0.0)
    field = params.fields if params.fields_enabled else np.zeros(graph.num_nodes)
    return nbr_idx, np.ascontiguousarray(wt), np.ascontiguousarray(field)


def _init_arrays(cfg, graph):
    if cfg.init == "uniform":
        return INIT_UNIFORM, np.zeros((1, graph.num_nodes), dtype=np.int8)
    if cfg.init == "fixed":
        row = validate_spins(cfg.init_state, graph)
        return INIT_FIXED, np.ascontiguousarray(row[None, :])
    rows = np.asarray(cfg.init_data, dtype=np.int8)
    if rows.ndim != 2 or rows.shape[1] != graph.num_nodes:
        raise InvalidInputError("empirical init data must have shape (D, N)")
    return INIT_EMPIRICAL, np.ascontiguousarray(rows)


def draw_batch(params, graph, num_chains, cfg, stream_index=0, backend=None):
    """M independent chains; chain i's randomness is a pure function of
    (master_seed, stream_index, i), so batches are reproducible and
    order-independent regardless of batch size or backend."""
    if num_chains <= 0:
        raise InvalidInputError("number of chains must be >= 1")
    init_mode, init_rows = _init_arrays(cfg, graph)
    nbr_idx, nbr_wt, field = _kernel_inputs(params, graph)
    kern = _kernel(backend)
    return kern(nbr_idx, nbr_wt, field, int(cfg.num_steps), int(num_chains),
                init_mode, init_rows, cfg.master_seed & ((1 << 64) - 1),
                int(stream_index), 0)


def run_chain(params, graph, cfg, chain_index=0, stream_index=0, backend=None):
    """Final state of one chain (the chain_index-th substream)."""
    init_mode, init_rows = _init_arrays(cfg, graph)
    nbr_idx, nbr_wt, field = _kernel_inputs(params, graph)
    kern = _kernel(backend)
    out = kern(nbr_idx, nbr_wt, field, int(cfg.num_steps), 1,
               init_mode, init_rows, cfg.master_seed & ((1 << 64) - 1),
               int(stream_index), int(chain_index))
    return out[0]


def gibbs_site_update(x, site, params, graph, u):
    """One conditional resample of `site` driven by the uniform draw u.

    Reference implementation of the kernel update rule: the new spin is +1
    iff u < (1 + tanh(local field)) / 2, which equals sigma(2 * field).
    """
    x = validate_spins(x, graph)
    check_params(params, graph)
    if not (0 <= site < graph.num_nodes):
        raise InvalidInputError(f"site {site} out of range")
    if not (0.0 <= u < 1.0):
        raise InvalidInputError("u must lie in [0, 1)")
    f = params.fields[site] if params.fields_enabled else 0.0
    for eid, (i, j) in enumerate(graph.edges):
        if i == site:
            f += params.couplings[eid] * x[j]
        elif j == site:
            f += params.couplings[eid] * x[i]
    p_plus = 0.5 + 0.5 * math.tanh(f)
    out = x.copy()
    out[site] = 1 if u < p_plus else -1
    return out


def site_flip_probability(x, site, params, graph):
    """P(site resamples to +1 | rest) under the Gibbs conditional."""
    x = validate_spins(x, graph)
    f = params.fields[site] if params.fields_enabled else 0.0
    for eid, (i, j) in enumerate(graph.edges):
        if i == site:
            f += params.couplings[eid] * x[j]
        elif j == site:
            f += params.couplings[eid] * x[i]
    return 0.5 + 0.5 * math.tanh(f)


# ---------------------------------------------------------------------------
# mixing-time bounds and certificates


def _ceil(x):
    # absorb float roundoff on exactly-integer reals
    return int(math.ceil(x - 1e-9))


def tau_bound_gibbs(num_nodes, max_degree, beta, epsilon):
    """Mixing-time bound ceil(N log(N/eps) / (1 - Delta tanh(beta))) for
    random-scan Gibbs on an Ising model with |theta_ij| <= beta."""
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    slack = 1.0 - max_degree * math.tanh(beta)
    if slack <= 0:
        raise NoCertificateError(
            f"Delta*tanh(beta) = {max_degree * math.tanh(beta):.6g} >= 1: "
            "the Gibbs mixing bound is vacuous for this box radius")
    return max(0, _ceil(num_nodes * math.log(num_nodes / epsilon) / slack))


def tau_bound_spectral(norm_of_r, num_nodes, epsilon):
    """Mixing-time bound ceil(N log(N/eps) / (1 - ||R||)) for coupling
    matrices with spectral norm below 1."""
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    if norm_of_r >= 1:
        raise NoCertificateError(
            f"||R|| = {norm_of_r:.6g} >= 1: the spectral mixing bound is vacuous")
    if norm_of_r < 0:
        raise InvalidInputError("||R|| must be nonnegative")
    return max(0, _ceil(num_nodes * math.log(num_nodes / epsilon) / (1.0 - norm_of_r)))


@dataclass(frozen=True)
class MixingCertificate:
    """Geometric-decay constants: worst-case TV after v transitions <= C a^v."""

    big_c: float
    alpha: float
    constraint: str = ""

    def __post_init__(self):
        if not (self.big_c > 0):
            raise InvalidInputError("C must be positive")
        if not (0.0 < self.alpha < 1.0):
            raise InvalidInputError("alpha must lie in (0, 1)")

    def tv_bound(self, v):
        return self.big_c * self.alpha ** v


def certificate_from_tau(a, b, constraint=""):
    """Convert a mixing-time bound tau(eps) <= ceil(a + b log(1/eps)) into
    geometric-decay constants C = exp(a/b), alpha = exp(-1/b)."""
    if b <= 0:
        raise InvalidInputError("b must be positive")
    return MixingCertificate(math.exp(a / b), math.exp(-1.0 / b), constraint)


def gibbs_mixing_certificate(num_nodes, max_degree, beta, convention="exp"):
    """Certificate for the box set |theta_ij| <= beta under random-scan Gibbs.

    The tau bound has a = N log(N) / (1 - Delta tanh(beta)) and
    b = N / (1 - Delta tanh(beta)), so the generic conversion yields C = N
    and alpha = exp(-(1 - Delta tanh(beta)) / N). A second documented
    reading ("log") uses C = log(N) instead; both are exposed because the
    worked 4x4 example quotes the log form while the conversion gives N.
    """
    slack = 1.0 - max_degree * math.tanh(beta)
    if slack <= 0:
        raise NoCertificateError(
            f"Delta*tanh(beta) = {max_degree * math.tanh(beta):.6g} >= 1: "
            "no certificate for this box radius")
    label = f"box(beta={beta:g}) on N={num_nodes}, Delta={max_degree}"
    a = num_nodes * math.log(num_nodes) / slack
    b = num_nodes / slack
    if convention == "exp":
        return certificate_from_tau(a, b, label)
    if convention == "log":
        return MixingCertificate(math.log(num_nodes), math.exp(-1.0 / b),
                                 label + " [C=log N convention]")
    raise InvalidInputError(f"unknown convention {convention!r}")


def spectral_mixing_certificate(norm_bound, num_nodes, convention="exp"):
    """Certificate for the spectral set ||R(theta)||_2 <= c < 1."""
    if not (0 <= norm_bound < 1):
        raise NoCertificateError(
            f"spectral bound {norm_bound:g} must lie in [0, 1)")
    label = f"spectral(c={norm_bound:g}) on N={num_nodes}"
    slack = 1.0 - norm_bound
    a = num_nodes * math.log(num_nodes) / slack
    b = num_nodes / slack
    if convention == "exp":
        return certificate_from_tau(a, b, label)
    if convention == "log":
        return MixingCertificate(math.log(num_nodes), math.exp(-1.0 / b),
                                 label + " [C=log N convention]")
    raise InvalidInputError(f"unknown convention {convention!r}")


# ---------------------------------------------------------------------------
# exact kernel oracle


def exact_transition_matrix(params, graph):
    """Dense row-stochastic matrix of the random-scan single-update kernel
    over the 2**N state space (bit j of the state index = spin j)."""
    check_params(params, graph)
    n = graph.num_nodes
    if n > 12:
        raise CapacityError(f"transition matrix refused for N={n} (> 12)")
    size = 1 << n
    configs = enumerate_configs(n).astype(np.float64)
    w = np.zeros((n, n))
    for eid, (i, j) in enumerate(graph.edges):
        w[i, j] = params.couplings[eid]
        w[j, i] = params.couplings[eid]
    h = params.fields if params.fields_enabled else np.zeros(n)
    mat = np.zeros((size, size))
    states = np.arange(size)
    for site in range(n):
        f = configs @ w[:, site] + h[site]
        p_plus = 0.5 + 0.5 * np.tanh(f)
        up = states | (1 << site)
        down = states & ~(1 << site)
        np.add.at(mat, (states, up), p_plus / n)
        np.add.at(mat, (states, down), (1.0 - p_plus) / n)
    return mat
