"""Maximum-likelihood learning of Ising models on fast-mixing parameter sets.

Gradients are estimated by batches of random-scan Gibbs chains whose length
carries an explicit mixing certificate, the iterates stay inside the
certified constraint set by Euclidean projection, and schedule planners pick
(iterations, samples, chain length) from the convergence guarantees. A
verifier module re-checks every implemented bound against brute-force
enumeration oracles at desk scale.
"""

from .errors import (CapacityError, ConfigurationError, ConvergenceError,
                     InvalidInputError, MixmleError, ModeError,
                     NoCertificateError, NumericError)
from .model import (Dataset, GraphTopology, IsingModel, Parameters,
                    StatBounds, batch_stats, chain_topology, exact_distribution,
                    exact_gradient, exact_log_partition, exact_mean_stats,
                    grid_topology, lipschitz_constant, negative_log_likelihood,
                    stat_norm_bound, sufficient_stats)
from .sampler import (ChainConfig, MixingCertificate, active_backend,
                      available_backends, certificate_from_tau, draw_batch,
                      exact_transition_matrix, gibbs_mixing_certificate,
                      gibbs_site_update, run_chain, spectral_mixing_certificate,
                      tau_bound_gibbs, tau_bound_spectral)
from .projection import (BoxConstraint, SpectralConstraint, coupling_matrix,
                         is_feasible, project, project_box, project_spectral,
                         spectral_norm)
from .learner import (ProblemConstants, Schedule, TrainingTrace,
                      approximate_gradient, convex_budget_value,
                      derive_constants, pgd_step, plan_convex,
                      plan_strongly_convex, train, work_lower_bound_convex,
                      work_lower_bound_strongly_convex)
from .verifier import (BoundReport, check_analytic_bounds,
                       check_estimation_moments, check_mixing_certificate,
                       check_sum_error_bound, convergence_envelope,
                       envelope_coverage, exact_optimum, fixed_point_residual,
                       hoeffding_coverage, hoeffding_radius, tv_distance)
from .fileio import load_dataset, load_topology, save_dataset, save_topology

__version__ = "0.1.0"
