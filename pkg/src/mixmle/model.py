"""Ising exponential family: graphs, parameters, statistics, exact oracles.

The family is p(x) = exp(theta . t(x) - A(theta)) over spins x in {-1,+1}^N,
with sufficient statistics t(x) = (x_i x_j for each edge, then x_i for each
node when node fields are enabled). All vectors in the package (parameters,
statistics, gradients) share this edge-first layout.

Exact quantities (log-partition, mean statistics, gradients) are computed by
exhaustive enumeration, guarded at 2**25 states and streamed in fixed-order
blocks so results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityError, InvalidInputError

ENUMERATION_GUARD = 25
_BLOCK_BITS = 18
_STAT_CACHE_MAX_NODES = 16


@dataclass(frozen=True)
class GraphTopology:
    """Undirected graph on nodes 0..num_nodes-1 with edges (i, j), i < j."""

    num_nodes: int
    edges: tuple

    def __post_init__(self):
        n = self.num_nodes
        if not isinstance(n, int) or n < 1:
            raise InvalidInputError("num_nodes must be a positive integer")
        norm = tuple((int(i), int(j)) for i, j in self.edges)
        for i, j in norm:
            if not (0 <= i < j < n):
                raise InvalidInputError(
                    f"edge ({i}, {j}) must satisfy 0 <= i < j < {n}")
        if len(set(norm)) != len(norm):
            raise InvalidInputError("duplicate edges are not allowed")
        object.__setattr__(self, "edges", norm)

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def max_degree(self):
        deg = [0] * self.num_nodes
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return max(deg) if deg else 0

    def edge_array(self):
        """Edges as an (E, 2) int array (empty-safe)."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64)


def grid_topology(rows, cols):
    """Rectangular grid graph; grid_topology(1, n) is the n-node chain."""
    if rows < 1 or cols < 1:
        raise InvalidInputError("grid dimensions must be positive")
    def node(r, c):
        return r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((node(r, c), node(r, c + 1)))
            if r + 1 < rows:
                edges.append((node(r, c), node(r + 1, c)))
    edges.sort()
    return GraphTopology(rows * cols, tuple(edges))


def chain_topology(n):
    return grid_topology(1, n)


@dataclass
class Parameters:
    """Coupling (per edge) and optional field (per node) parameters."""

    couplings: np.ndarray
    fields: np.ndarray | None = None

    def __post_init__(self):
        self.couplings = np.asarray(self.couplings, dtype=np.float64)
        if self.couplings.ndim != 1:
            raise InvalidInputError("couplings must be a 1-d vector")
        if not np.all(np.isfinite(self.couplings)):
            raise InvalidInputError("couplings must be finite")
        if self.fields is not None:
            self.fields = np.asarray(self.fields, dtype=np.float64)
            if self.fields.ndim != 1:
                raise InvalidInputError("fields must be a 1-d vector")
            if not np.all(np.isfinite(self.fields)):
                raise InvalidInputError("fields must be finite")

    @property
    def fields_enabled(self):
        return self.fields is not None

    def as_vector(self):
        """Flat vector in the shared edge-first layout."""
        if self.fields is None:
            return self.couplings.copy()
        return np.concatenate([self.couplings, self.fields])

    @classmethod
    def from_vector(cls, vec, graph, fields_enabled=False):
        vec = np.asarray(vec, dtype=np.float64)
        e = graph.num_edges
        want = e + graph.num_nodes if fields_enabled else e
        if vec.shape != (want,):
            raise InvalidInputError(
                f"expected a vector of length {want}, got {vec.shape}")
        if fields_enabled:
            return cls(vec[:e].copy(), vec[e:].copy())
        return cls(vec.copy())

    @classmethod
    def zeros(cls, graph, fields_enabled=False):
        f = np.zeros(graph.num_nodes) if fields_enabled else None
        return cls(np.zeros(graph.num_edges), f)

    def copy(self):
        f = None if self.fields is None else self.fields.copy()
        return Parameters(self.couplings.copy(), f)


def check_params(params, graph):
    """Validate that a parameter vector matches the topology."""
    if params.couplings.shape != (graph.num_edges,):
        raise InvalidInputError(
            f"expected {graph.num_edges} couplings, got {params.couplings.shape}")
    if params.fields is not None and params.fields.shape != (graph.num_nodes,):
        raise InvalidInputError(
            f"expected {graph.num_nodes} fields, got {params.fields.shape}")


@dataclass(frozen=True)
class IsingModel:
    """A model family: a topology plus whether node fields are present."""

    graph: GraphTopology
    fields_enabled: bool = False

    @property
    def num_stats(self):
        return num_stats(self.graph, self.fields_enabled)

    def zero_parameters(self):
        return Parameters.zeros(self.graph, self.fields_enabled)

    def parameters_from_vector(self, vec):
        return Parameters.from_vector(vec, self.graph, self.fields_enabled)


@dataclass(frozen=True)
class StatBounds:
    """Norm bounds on the sufficient-statistics vector."""

    r2: float
    ra_general: float | None = None

    def __post_init__(self):
        if self.r2 < 0:
            raise InvalidInputError("r2 must be nonnegative")


def num_stats(graph, fields_enabled=False):
    return graph.num_edges + (graph.num_nodes if fields_enabled else 0)


def validate_spins(x, graph):
    x = np.asarray(x)
    if x.shape != (graph.num_nodes,):
        raise InvalidInputError(
            f"configuration length {x.shape} does not match N={graph.num_nodes}")
    if not np.all(np.abs(x) == 1):
        raise InvalidInputError("spins must be exactly +1 or -1")
    return x.astype(np.int8)


def sufficient_stats(x, graph, fields_enabled=False):
    """t(x): edge products x_i*x_j, then the spins themselves if enabled."""
    x = validate_spins(x, graph)
    e = graph.edge_array()
    pair = (x[e[:, 0]] * x[e[:, 1]]).astype(np.float64) if len(e) else np.zeros(0)
    if not fields_enabled:
        return pair
    return np.concatenate([pair, x.astype(np.float64)])


def batch_stats(xs, graph, fields_enabled=False):
    """Statistics for a (M, N) batch of configurations, as (M, S) float64."""
    xs = np.asarray(xs)
    if xs.ndim != 2 or xs.shape[1] != graph.num_nodes:
        raise InvalidInputError("batch must have shape (M, num_nodes)")
    e = graph.edge_array()
    pair = (xs[:, e[:, 0]] * xs[:, e[:, 1]]).astype(np.float64)
    if not fields_enabled:
        return pair
    return np.concatenate([pair, xs.astype(np.float64)], axis=1)


def stat_norm_bound(graph, fields_enabled=False):
    """For +-1 statistics every entry has magnitude 1, so R2 = sqrt(S)."""
    return StatBounds(r2=math.sqrt(num_stats(graph, fields_enabled)))


def lipschitz_constant(bounds, lam):
    """Gradient Lipschitz constant 4*R2**2 + lambda of the ridge objective."""
    r2 = bounds.r2 if isinstance(bounds, StatBounds) else float(bounds)
    if r2 < 0 or lam < 0:
        raise InvalidInputError("r2 and lambda must be nonnegative")
    return 4.0 * r2 * r2 + lam


@dataclass
class Dataset:
    """Training configurations z_1..z_D, each a +-1 vector of length N."""

    examples: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.examples)
        if xs.ndim != 2 or xs.shape[0] < 1:
            raise InvalidInputError("dataset must be a nonempty (D, N) array")
        if not np.all(np.abs(xs) == 1):
            raise InvalidInputError("dataset entries must be exactly +1 or -1")
        self.examples = xs.astype(np.int8)
        self._mean_cache = {}

    @property
    def size(self):
        return self.examples.shape[0]

    def empirical_mean(self, graph, fields_enabled=False):
        """tbar = (1/D) sum_i t(z_i), cached per (topology, layout)."""
        key = (graph, fields_enabled)
        if key not in self._mean_cache:
            stats = batch_stats(self.examples, graph, fields_enabled)
            self._mean_cache[key] = stats.mean(axis=0)
        return self._mean_cache[key]


def _resolve_mean(data, graph, fields_enabled):
    """Accept a Dataset or a precomputed empirical-mean vector."""
    if isinstance(data, Dataset):
        return data.empirical_mean(graph, fields_enabled)
    tbar = np.asarray(data, dtype=np.float64)
    if tbar.shape != (num_stats(graph, fields_enabled),):
        raise InvalidInputError("empirical mean has the wrong length")
    return tbar


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _check_guard(graph, guard=ENUMERATION_GUARD):
    if graph.num_nodes > guard:
        raise CapacityError(
            f"N={graph.num_nodes} exceeds the enumeration guard ({guard})")


def config_block(start, stop, n):
    """Configurations for state indices [start, stop): bit j gives spin j."""
    idx = np.arange(start, stop, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


@lru_cache(maxsize=8)
def enumerate_configs(n):
    """All 2**n spin configurations, cached for small n."""
    if n > 20:
        raise CapacityError(f"full configuration table refused for N={n}")
    return config_block(0, 1 << n, n)


@lru_cache(maxsize=8)
def _cached_stat_matrix(graph, fields_enabled):
    return batch_stats(enumerate_configs(graph.num_nodes), graph, fields_enabled)


def _stat_blocks(graph, fields_enabled):
    """Yield (start, stats_block) over the state space in a fixed order."""
    n = graph.num_nodes
    if n <= _STAT_CACHE_MAX_NODES:
        yield 0, _cached_stat_matrix(graph, fields_enabled)
        return
    total = 1 << n
    step = 1 << _BLOCK_BITS
    for start in range(0, total, step):
        stop = min(start + step, total)
        yield start, batch_stats(config_block(start, stop, n), graph, fields_enabled)


def exact_log_partition(params, graph):
    """A(theta) = log sum_x exp(theta . t(x)), via max-shifted log-sum-exp."""
    check_params(params, graph)
    _check_guard(graph)
    theta = params.as_vector()
    fields_enabled = params.fields_enabled
    running_max = -np.inf
    running_sum = 0.0
    for _, stats in _stat_blocks(graph, fields_enabled):
        logits = stats @ theta
        block_max = float(logits.max())
        block_sum = float(np.exp(logits - block_max).sum())
        if block_max > running_max:
            running_sum = running_sum * math.exp(running_max - block_max) + block_sum
            running_max = block_max
        else:
            running_sum += block_sum * math.exp(block_max - running_max)
    return running_max + math.log(running_sum)


def exact_distribution(params, graph):
    """Probability vector over state indices (bit j of the index = spin j)."""
    check_params(params, graph)
    if graph.num_nodes > 20:
        raise CapacityError("probability vector refused above N=20")
    log_a = exact_log_partition(params, graph)
    theta = params.as_vector()
    stats = _cached_stat_matrix(graph, params.fields_enabled) \
        if graph.num_nodes <= _STAT_CACHE_MAX_NODES \
        else batch_stats(enumerate_configs(graph.num_nodes), graph, params.fields_enabled)
    return np.exp(stats @ theta - log_a)


def exact_mean_stats(params, graph):
    """E_p[t(X)] by exhaustive enumeration (two streamed passes)."""
    check_params(params, graph)
    _check_guard(graph)
    log_a = exact_log_partition(params, graph)
    theta = params.as_vector()
    acc = np.zeros(num_stats(graph, params.fields_enabled))
    for _, stats in _stat_blocks(graph, params.fields_enabled):
        probs = np.exp(stats @ theta - log_a)
        acc += probs @ stats
    return acc


def negative_log_likelihood(params, data, graph, lam):
    """f(theta) = A(theta) - theta . tbar + (lam/2) ||theta||^2."""
    if lam < 0:
        raise InvalidInputError("lambda must be nonnegative")
    check_params(params, graph)
    tbar = _resolve_mean(data, graph, params.fields_enabled)
    theta = params.as_vector()
    return (exact_log_partition(params, graph)
            - float(theta @ tbar)
            + 0.5 * lam * float(theta @ theta))


def exact_gradient(params, data, graph, lam):
    """f'(theta) = E_p[t(X)] - tbar + lam * theta."""
    if lam < 0:
        raise InvalidInputError("lambda must be nonnegative")
    check_params(params, graph)
    tbar = _resolve_mean(data, graph, params.fields_enabled)
    return exact_mean_stats(params, graph) - tbar + lam * params.as_vector()
