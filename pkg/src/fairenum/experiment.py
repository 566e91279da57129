"""Experiment harness: repeated maximum-clique enumeration on one instance,
scored against the exact enumerator, plus the bound-validation campaigns."""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import kappa1, kappa2
from .enumeration import enumerate_opt
from .ising import AnnealSchedule
from .maxclique import (
    ExactBudgetExceeded,
    Graph,
    enumerate_max_cliques_exact,
    erdos_renyi,
    key_to_vertices,
    make_clique_sampler,
    vertices_to_key,
)
from .stats import (
    chi_squared_uniform_test,
    coupon_mc_lemma1,
    summarize_trials,
    tail_bound_mc,
    theorem1_mc,
    theorem2_mc,
    trial_seed,
)

__all__ = ["ExperimentConfig", "run_experiment", "graph_seed_for", "instance_key", "validation_campaign", "THEOREM2_LANDSCAPES"]

RECORD_VERSION = 1


def _key(instance):
    return tuple(instance) if isinstance(instance, (tuple, list)) else (int(instance),)


def instance_key(n: int, density: float, replicate: int = 0) -> tuple:
    """Seed counters identifying one random-graph instance of a sweep."""
    return (int(n), int(round(density * 10**6)), int(replicate))


def graph_seed_for(master_seed: int, instance) -> int:
    """Integer graph seed for an instance (an int or a tuple of ints)."""
    return int(trial_seed(master_seed, *_key(instance)).generate_state(1, np.uint64)[0])


@dataclass
class ExperimentConfig:
    problem_id: str
    n: int
    density: float
    master_seed: int = 0
    instance: tuple | int = 0
    graph_seed: int | None = None
    epsilon: float = 0.01
    penalty: float = 2.0
    schedule: AnnealSchedule = field(default_factory=AnnealSchedule)
    runs: int = 100
    exact_budget_seconds: float | None = 600.0
    jobs: int = 1
    graph: Graph | None = None

    def resolved_graph_seed(self) -> int:
        if self.graph_seed is not None:
            return int(self.graph_seed)
        return graph_seed_for(self.master_seed, self.instance)

    def build_graph(self) -> Graph:
        if self.graph is not None:
            return self.graph
        return erdos_renyi(self.n, self.density, self.resolved_graph_seed())


def _one_run(args):
    g, penalty, schedule, epsilon, master_seed, instance, run = args
    t0 = time.perf_counter()
    sampler = make_clique_sampler(g, penalty, schedule, trial_seed(master_seed, *_key(instance), run))
    result = enumerate_opt(sampler, epsilon)
    return {
        "run": run,
        "found": sorted(s.key for s in result.solutions),
        "theta": result.theta,
        "accepted_samples": result.accepted_samples,
        "feasible_draws": result.raw_draws,
        "annealing_reads": sampler.n_raw,
        "stop_reason": result.stop_reason.value,
        "counts": dict(sampler.counts),
        "wall_time_seconds": time.perf_counter() - t0,
    }


def _map_runs(jobs, tasks):
    if jobs <= 1:
        return [_one_run(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_one_run, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def run_experiment(config: ExperimentConfig) -> dict:
    """Run ``config.runs`` independent enumerations on one instance and summarise them.

    The exact maximum cliques come from the reference enumerator unless it
    exceeds ``exact_budget_seconds``; then the largest cliques found by any
    run stand in as the truth and ``exact.status`` is ``"skipped"``.
    """
    t_start = time.perf_counter()
    g = config.build_graph()
    n = g.n_vertices

    t0 = time.perf_counter()
    try:
        exact = enumerate_max_cliques_exact(g, config.exact_budget_seconds)
        exact_info = {"status": "solved", "n_optima": len(exact), "clique_size": len(exact[0])}
        truth = {vertices_to_key(c, n) for c in exact}
    except ExactBudgetExceeded:
        exact_info = {"status": "skipped", "n_optima": None, "clique_size": None}
        truth = None
    exact_info["wall_time_seconds"] = time.perf_counter() - t0

    tasks = [
        (g, config.penalty, config.schedule, config.epsilon, config.master_seed, config.instance, r)
        for r in range(config.runs)
    ]
    outcomes = sorted(_map_runs(config.jobs, tasks), key=lambda o: o["run"])

    if truth is None:
        best = max(-o["theta"] for o in outcomes)
        truth = {k for o in outcomes for k in o["found"] if k.count("1") == best}
        truth_source = "best_found"
    else:
        truth_source = "exact"

    catalogue = sorted(truth | {k for o in outcomes for k in o["found"]})
    index = {k: i for i, k in enumerate(catalogue)}
    runs = []
    coverages = []
    counts = Counter()
    for o in outcomes:
        found = set(o["found"])
        cov = len(found & truth) / len(truth)
        coverages.append(cov)
        counts.update({k: c for k, c in o["counts"].items() if k in truth})
        runs.append(
            {
                "run": o["run"],
                "found": [index[k] for k in o["found"]],
                "n_found": len(found),
                "coverage": cov,
                "success": found == truth,
                "theta": o["theta"],
                "accepted_samples": o["accepted_samples"],
                "feasible_draws": o["feasible_draws"],
                "annealing_reads": o["annealing_reads"],
                "stop_reason": o["stop_reason"],
                "wall_time_seconds": o["wall_time_seconds"],
            }
        )

    graph_info = {"n": n, "density": config.density, "n_edges": g.n_edges}
    if config.graph is not None:
        graph_info.update(seed=None, edges=[list(e) for e in g.edges()])
    else:
        graph_info["seed"] = config.resolved_graph_seed()

    summary = summarize_trials(coverages)
    truth_sorted = sorted(truth)
    if len(truth_sorted) >= 2:
        report = chi_squared_uniform_test({k: counts.get(k, 0) for k in truth_sorted})
        fairness = report.as_dict()
        fairness["counts"] = [counts.get(k, 0) for k in truth_sorted]
        fairness["category"] = "fair" if report.fair else "unfair"
    else:
        fairness = {"category": "unique", "counts": [counts.get(k, 0) for k in truth_sorted]}
    fairness["incompatible"] = not summary.compatible

    success_times = [r["wall_time_seconds"] for r in runs if r["success"]]
    return {
        "record_type": "experiment",
        "version": RECORD_VERSION,
        "instance_id": config.problem_id,
        "graph": graph_info,
        "algorithm": {
            "epsilon": config.epsilon,
            "kappa2": kappa2(config.epsilon),
            "penalty": config.penalty,
            "schedule": config.schedule.as_dict(),
            "runs": config.runs,
            "master_seed": config.master_seed,
            "instance": list(_key(config.instance)),
            "seed_scheme": "graph: SeedSequence(master_seed, spawn_key=instance); run r: SeedSequence(master_seed, spawn_key=instance + (r,))",
        },
        "exact": exact_info,
        "truth_source": truth_source,
        "solutions": [list(key_to_vertices(k)) for k in catalogue],
        "optimal": [index[k] for k in truth_sorted],
        "runs": runs,
        "summary": summary.as_dict(),
        "fairness": fairness,
        "mean_success_time_seconds": float(np.mean(success_times)) if success_times else None,
        "mean_run_time_seconds": float(np.mean([r["wall_time_seconds"] for r in runs])),
        "total_seconds": time.perf_counter() - t_start,
    }


THEOREM2_LANDSCAPES = {
    "2opt+3sub": [0, 0, 1, 1, 2],
    "5opt+20sub": [0] * 5 + [1] * 5 + [2] * 5 + [3] * 5 + [4] * 5,
}


def validation_campaign(seed=0, lemma_trials=100_000, theorem_trials=20_000, epsilon_theorem=0.05):
    """Yield one record per bound check (tail lemmas, then the two failure-rate theorems)."""
    job = 0
    for n in (2, 5, 10):
        for eps in (0.05, 0.1):
            check = coupon_mc_lemma1(n, eps, lemma_trials, int(trial_seed(seed, job).generate_state(1)[0]))
            job += 1
            yield {"record_type": "lemma1", "epsilon": eps, **check.as_dict()}
    for n, m in ((10, 5), (10, 8), (20, 10)):
        check = tail_bound_mc(n, m, 0.1, lemma_trials, int(trial_seed(seed, job).generate_state(1)[0]))
        job += 1
        yield {"record_type": "lemma2", "epsilon": 0.1, **check.as_dict()}
    for n in range(1, 11):
        check = theorem1_mc(n, epsilon_theorem, theorem_trials, seed=seed + job)
        job += 1
        yield {"record_type": "theorem1", "kappa1": kappa1(epsilon_theorem), **check.as_dict()}
    for name, costs in THEOREM2_LANDSCAPES.items():
        for beta in (0.0, 1.0):
            label = f"{name}-{'uniform' if beta == 0 else f'boltzmann{beta:g}'}"
            check = theorem2_mc(costs, beta, epsilon_theorem, theorem_trials, seed=seed + job, label=label)
            job += 1
            yield {"record_type": "theorem2", "beta": beta, "kappa2": kappa2(epsilon_theorem), **check.as_dict()}

