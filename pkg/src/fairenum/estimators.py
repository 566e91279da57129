"""scikit-learn style wrappers.

The estimators follow the usual contract: constructor arguments are stored
verbatim (so ``get_params``/``set_params``/``clone`` work), ``fit`` returns
``self`` and results live in attributes with a trailing underscore.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from ._validation import EPS_MAX_OPTIMIZE, EPS_MAX_SATISFY, check_epsilon, check_random_state
from .enumeration import enumerate_csp, enumerate_opt
from .ising import AnnealSchedule
from .maxclique import Graph, enumerate_max_cliques_exact, key_to_vertices, make_clique_sampler
from .stats import solution_coverage

__all__ = ["SolutionEnumerator", "MaxCliqueEnumerator"]


class SolutionEnumerator(BaseEstimator):
    """Enumerate the solutions produced by a sampler.

    Parameters
    ----------
    epsilon : float, default=0.01
        Tolerated probability of missing at least one desirable solution.
    objective : {"optimize", "satisfy"}, default="optimize"
        ``"optimize"`` collects all minimum-cost draws, ``"satisfy"`` all draws.
    budget_cap : int or None, default=None
        Hard cap on sampler draws; hitting it voids the guarantee.
    record_trace : bool, default=False
        Keep the per-sample event log in ``result_.trace``.

    Attributes
    ----------
    solutions_ : list of Solution
        Collected solutions, sorted by key.
    threshold_ : float
        Cost of the collected solutions.
    n_accepted_ : int
        Accepted-sample count at termination.
    n_draws_ : int
        Total sampler draws.
    stop_reason_ : str
    result_ : EnumerationResult
    """

    def __init__(self, epsilon=0.01, objective="optimize", budget_cap=None, record_trace=False):
        self.epsilon = epsilon
        self.objective = objective
        self.budget_cap = budget_cap
        self.record_trace = record_trace

    def _run(self, sampler):
        if self.objective == "optimize":
            check_epsilon(self.epsilon, EPS_MAX_OPTIMIZE)
            algorithm = enumerate_opt
        elif self.objective == "satisfy":
            check_epsilon(self.epsilon, EPS_MAX_SATISFY)
            algorithm = enumerate_csp
        else:
            raise ValueError(f"objective must be 'optimize' or 'satisfy', got {self.objective!r}")
        if not callable(getattr(sampler, "draw", None)):
            raise TypeError("fit expects a sampler object with a draw() method")
        return algorithm(sampler, self.epsilon, budget_cap=self.budget_cap, record_trace=self.record_trace)

    def fit(self, sampler, y=None):
        result = self._run(sampler)
        self.result_ = result
        self.solutions_ = result.sorted_solutions()
        self.threshold_ = result.theta
        self.n_accepted_ = result.accepted_samples
        self.n_draws_ = result.raw_draws
        self.stop_reason_ = result.stop_reason.value
        return self


class MaxCliqueEnumerator(BaseEstimator):
    """Find all maximum cliques of a graph by annealing plus the sampling stopping rule.

    ``fit`` accepts a :class:`~fairenum.maxclique.Graph` or a square symmetric
    0/1 adjacency matrix.

    Attributes
    ----------
    cliques_ : list of tuple of int
        Maximum cliques found, each a sorted vertex tuple.
    clique_size_ : int
    n_accepted_, n_draws_, n_annealing_reads_ : int
    sample_counts_ : dict
        How often each feasible clique (by membership key) was drawn.
    """

    def __init__(
        self,
        epsilon=0.01,
        penalty=2.0,
        sweeps=1000,
        beta_initial=0.1,
        beta_final=10.0,
        interpolation="geometric",
        order="sequential",
        budget_cap=None,
        random_state=None,
    ):
        self.epsilon = epsilon
        self.penalty = penalty
        self.sweeps = sweeps
        self.beta_initial = beta_initial
        self.beta_final = beta_final
        self.interpolation = interpolation
        self.order = order
        self.budget_cap = budget_cap
        self.random_state = random_state

    @staticmethod
    def _validate_graph(X):
        if isinstance(X, Graph):
            return X
        a = check_array(X, dtype=None, ensure_2d=True, ensure_min_samples=1, ensure_min_features=1)
        if not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency matrix entries must be 0 or 1")
        return Graph.from_adjacency(a)

    def fit(self, X, y=None):
        g = self._validate_graph(X)
        check_epsilon(self.epsilon, EPS_MAX_OPTIMIZE)
        schedule = AnnealSchedule(self.sweeps, self.beta_initial, self.beta_final, self.interpolation, self.order)
        sampler = make_clique_sampler(g, self.penalty, schedule, check_random_state(self.random_state))
        result = enumerate_opt(sampler, self.epsilon, budget_cap=self.budget_cap)
        self.result_ = result
        self.cliques_ = sorted(key_to_vertices(s.key) for s in result.solutions)
        self.clique_size_ = int(-result.theta) if result.solutions else 0
        self.n_accepted_ = result.accepted_samples
        self.n_draws_ = result.raw_draws
        self.n_annealing_reads_ = sampler.n_raw
        self.sample_counts_ = dict(sampler.counts)
        self.n_vertices_ = g.n_vertices
        return self

    def score(self, X, y=None):
        """Fraction of the true maximum cliques that were found.

        ``y`` may list the true cliques; otherwise they are computed exactly
        from ``X``.
        """
        check_is_fitted(self, "cliques_")
        truth = enumerate_max_cliques_exact(self._validate_graph(X)) if y is None else y
        return solution_coverage({tuple(sorted(c)) for c in self.cliques_}, {tuple(sorted(c)) for c in truth})
