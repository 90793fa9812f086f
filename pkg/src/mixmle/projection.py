"""Euclidean projection onto fast-mixing parameter sets.

Two constraint families are supported, both acting on couplings only (node
fields stay unconstrained unless a box explicitly bounds them):

* box: |theta_ij| <= beta componentwise. The projection is plain clipping.
* spectral: ||R(theta)||_2 <= c where R_ij = |theta_ij|. The projection is
  computed in magnitude-matrix space with Dykstra's alternating projections
  between the spectral-norm ball (eigenvalue clipping) and the cone of
  symmetric matrices that are zero off the edge set and nonnegative on it.
  Splitting each coupling into sign and magnitude shows this equals the
  Euclidean projection in parameter space, with original signs reattached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidInputError
from .model import check_params, Parameters


@dataclass(frozen=True)
class BoxConstraint:
    """|theta_ij| <= beta for every edge, optionally |theta_i| <= field_bound."""

    beta: float
    field_bound: float | None = None
    kind = "box"

    def __post_init__(self):
        if not (self.beta > 0):
            raise InvalidInputError("beta must be positive")
        if self.field_bound is not None and not (self.field_bound > 0):
            raise InvalidInputError("field_bound must be positive when given")


@dataclass(frozen=True)
class SpectralConstraint:
    """||R(theta)||_2 <= c with R_ij = |theta_ij|."""

    c: float
    tolerance: float = 1e-8
    max_iterations: int = 10_000
    kind = "spectral"

    def __post_init__(self):
        if not (0.0 < self.c < 1.0):
            raise InvalidInputError("c must lie in (0, 1)")
        if not (self.tolerance > 0):
            raise InvalidInputError("tolerance must be positive")
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be >= 1")


def project_box(params, beta, field_bound=None):
    """Clip couplings to [-beta, beta]; fields only if a bound is supplied."""
    if not (beta > 0):
        raise InvalidInputError("beta must be positive")
    couplings = np.clip(params.couplings, -beta, beta)
    fields = None
    if params.fields_enabled:
        fields = params.fields.copy() if field_bound is None \
            else np.clip(params.fields, -field_bound, field_bound)
    return Parameters(couplings, fields)


def coupling_matrix(params, graph):
    """R(theta): symmetric nonnegative matrix of coupling magnitudes."""
    check_params(params, graph)
    n = graph.num_nodes
    r = np.zeros((n, n))
    for eid, (i, j) in enumerate(graph.edges):
        r[i, j] = abs(params.couplings[eid])
        r[j, i] = r[i, j]
    return r


def spectral_norm(mat):
    return float(np.max(np.abs(np.linalg.eigvalsh(mat))))


def _clip_to_spectral_ball(mat, c):
    vals, vecs = np.linalg.eigh(mat)
    clipped = np.clip(vals, -c, c)
    return (vecs * clipped) @ vecs.T


def _clip_to_support_cone(mat, support):
    out = 0.5 * (mat + mat.T)
    out = np.where(support, np.maximum(out, 0.0), 0.0)
    return out


def project_spectral(params, graph, constraint):
    """Dykstra projection of the coupling magnitudes onto
    {spectral norm <= c} intersected with the edge-support cone."""
    check_params(params, graph)
    c = constraint.c
    r0 = coupling_matrix(params, graph)
    if spectral_norm(r0) <= c:
        return params.copy()

    n = graph.num_nodes
    support = np.zeros((n, n), dtype=bool)
    for i, j in graph.edges:
        support[i, j] = True
        support[j, i] = True

    x = r0.copy()
    p_corr = np.zeros_like(x)
    q_corr = np.zeros_like(x)
    tol = constraint.tolerance
    for _ in range(constraint.max_iterations):
        y = _clip_to_spectral_ball(x + p_corr, c)
        p_corr = x + p_corr - y
        x_new = _clip_to_support_cone(y + q_corr, support)
        q_corr = y + q_corr - x_new
        change = float(np.abs(x_new - x).max())
        x = x_new
        excess = spectral_norm(x) - c
        if change < tol and excess <= tol:
            break
    else:
        raise ConvergenceError(
            f"spectral projection did not converge within "
            f"{constraint.max_iterations} iterations",
            residual=max(change, excess))

    signs = np.sign(params.couplings)
    mags = np.array([x[i, j] for i, j in graph.edges])
    fields = params.fields.copy() if params.fields_enabled else None
    return Parameters(signs * mags, fields)


def project(params, constraint, graph=None):
    """Dispatch to the box or spectral projection."""
    if isinstance(constraint, BoxConstraint):
        return project_box(params, constraint.beta, constraint.field_bound)
    if isinstance(constraint, SpectralConstraint):
        if graph is None:
            raise InvalidInputError("spectral projection needs the topology")
        return project_spectral(params, graph, constraint)
    raise InvalidInputError(f"unknown constraint {constraint!r}")


def is_feasible(params, constraint, graph=None, slack=0.0):
    """Feasibility check used by post-hoc trace audits."""
    if isinstance(constraint, BoxConstraint):
        ok = np.all(np.abs(params.couplings) <= constraint.beta + slack)
        if constraint.field_bound is not None and params.fields_enabled:
            ok = ok and np.all(np.abs(params.fields) <= constraint.field_bound + slack)
        return bool(ok)
    if isinstance(constraint, SpectralConstraint):
        if graph is None:
            raise InvalidInputError("spectral feasibility needs the topology")
        extra = slack if slack else constraint.tolerance
        return spectral_norm(coupling_matrix(params, graph)) <= constraint.c + extra
    raise InvalidInputError(f"unknown constraint {constraint!r}")
