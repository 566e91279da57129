"""Enumerate all optimal (or all feasible) solutions of a combinatorial problem
by sampling, with a user-set bound on the probability of missing one."""

from .bounds import deadline, derive_params, kappa1, kappa2, sample_budget, zeta_tail
from .enumeration import (
    EnumerationResult,
    FiniteSampler,
    Sampler,
    ScriptedSampler,
    Solution,
    StopReason,
    enumerate_csp,
    enumerate_opt,
    enumerate_threshold,
)
from .estimators import MaxCliqueEnumerator, SolutionEnumerator
from .ising import AnnealSchedule, IsingModel, QuboModel, qubo_to_ising, sa_sample
from .maxclique import Graph, enumerate_max_cliques_exact, erdos_renyi, is_clique, make_clique_sampler, max_clique_qubo

__version__ = "0.1.0"

__all__ = [
    "deadline",
    "derive_params",
    "kappa1",
    "kappa2",
    "sample_budget",
    "zeta_tail",
    "EnumerationResult",
    "FiniteSampler",
    "Sampler",
    "ScriptedSampler",
    "Solution",
    "StopReason",
    "enumerate_csp",
    "enumerate_opt",
    "enumerate_threshold",
    "MaxCliqueEnumerator",
    "SolutionEnumerator",
    "AnnealSchedule",
    "IsingModel",
    "QuboModel",
    "qubo_to_ising",
    "sa_sample",
    "Graph",
    "enumerate_max_cliques_exact",
    "erdos_renyi",
    "is_clique",
    "make_clique_sampler",
    "max_clique_qubo",
]
