"""Command-line interface.

Subcommands: ``gen-graph``, ``exact``, ``enumerate``, ``bench`` and
``validate-bounds``.  Results are JSON lines (see :mod:`fairenum.records`)
written to ``--out`` (appended) or standard output.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import sys
import time
from pathlib import Path

from .bounds import kappa1, kappa2
from .enumeration import enumerate_csp, enumerate_opt
from .experiment import ExperimentConfig, graph_seed_for, instance_key, run_experiment, validation_campaign
from .graphio import format_graph, parse_graph
from .ising import AnnealSchedule, QuboModel, QuboSampler, load_model
from .maxclique import (
    ExactBudgetExceeded,
    enumerate_max_cliques_exact,
    erdos_renyi,
    key_to_vertices,
    make_clique_sampler,
)
from .records import read_records, write_record
from .stats import fit_exponential_trend, trial_seed

__all__ = ["main", "build_parser", "parse_graph"]


def _add_sa_flags(p):
    p.add_argument("--epsilon", type=float, default=0.01, help="failure tolerance (default 0.01)")
    p.add_argument("--penalty", type=float, default=2.0, help="clique penalty A > 1 (default 2)")
    p.add_argument("--sweeps", type=int, default=1000, help="annealing sweeps per read (default 1000)")
    p.add_argument("--beta0", type=float, default=0.1, help="initial inverse temperature")
    p.add_argument("--beta1", type=float, default=10.0, help="final inverse temperature")
    p.add_argument("--schedule", choices=("geometric", "linear"), default="geometric")
    p.add_argument("--order", choices=("sequential", "random"), default="sequential", help="spin update order")


def _add_out(p):
    p.add_argument("--out", type=Path, default=None, help="append JSON-lines records here (default stdout)")


def _schedule(args) -> AnnealSchedule:
    return AnnealSchedule(args.sweeps, args.beta0, args.beta1, args.schedule, args.order)


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        torn = path.exists() and path.stat().st_size > 0 and not path.read_bytes().endswith(b"\n")
        with path.open("a", encoding="utf-8") as fh:
            if torn:
                fh.write("\n")
            yield fh


def _load_graph(args):
    if args.graph is not None:
        return parse_graph(Path(args.graph).read_bytes()), None
    if args.n is None:
        raise SystemExit("give either --graph FILE or --n/--density")
    seed = args.graph_seed if args.graph_seed is not None else graph_seed_for(args.seed, 0)
    return erdos_renyi(args.n, args.density, seed), seed


def cmd_gen_graph(args):
    g = erdos_renyi(args.n, args.density, args.seed)
    text = format_graph(g, comment=f"erdos-renyi n={args.n} density={args.density} seed={args.seed}")
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    return 0


def cmd_exact(args):
    g, seed = _load_graph(args)
    t0 = time.perf_counter()
    record = {"record_type": "exact", "n": g.n_vertices, "n_edges": g.n_edges, "graph_seed": seed}
    try:
        cliques = enumerate_max_cliques_exact(g, args.exact_budget_seconds)
        record.update(status="solved", clique_size=len(cliques[0]), cliques=[list(c) for c in cliques])
    except ExactBudgetExceeded:
        record.update(status="skipped", clique_size=None, cliques=None)
    record["wall_time_seconds"] = time.perf_counter() - t0
    with _output(args.out) as out:
        write_record(out, record)
    return 0


def cmd_enumerate(args):
    seed = trial_seed(args.seed, 0, 0)
    t0 = time.perf_counter()
    if args.qubo is not None:
        model = load_model(Path(args.qubo).read_text(encoding="utf-8"))
        if not isinstance(model, QuboModel):
            raise SystemExit(f"{args.qubo}: expected a QUBO model file")
        sampler = QuboSampler(model, _schedule(args), seed)
        problem = {"qubo": str(args.qubo), "n_vars": model.n_vars}
        decode = lambda s: s.key  # noqa: E731
    else:
        g, gseed = _load_graph(args)
        sampler = make_clique_sampler(g, args.penalty, _schedule(args), seed)
        problem = {"graph": None if args.graph is None else str(args.graph), "n": g.n_vertices,
                   "density": args.density if args.graph is None else g.density, "graph_seed": gseed}
        decode = lambda s: list(key_to_vertices(s.key))  # noqa: E731
    algorithm = enumerate_csp if args.satisfy else enumerate_opt
    result = algorithm(sampler, args.epsilon, budget_cap=args.budget_cap)
    sols = result.sorted_solutions()
    record = {
        "record_type": "enumerate",
        "problem": problem,
        "algorithm": {
            "mode": "satisfy" if args.satisfy else "optimize",
            "epsilon": args.epsilon,
            "kappa": kappa1(args.epsilon) if args.satisfy else kappa2(args.epsilon),
            "penalty": args.penalty,
            "schedule": _schedule(args).as_dict(),
            "seed": args.seed,
        },
        "solutions": [decode(s) for s in sols],
        "costs": [s.cost for s in sols],
        "theta": result.theta,
        "accepted_samples": result.accepted_samples,
        "feasible_draws": result.raw_draws,
        "stop_reason": result.stop_reason.value,
        "wall_time_seconds": time.perf_counter() - t0,
    }
    with _output(args.out) as out:
        write_record(out, record)
    return 0


def _trend_records(records):
    by_density = {}
    for r in records:
        if r.get("record_type") != "experiment" or r.get("mean_run_time_seconds") is None:
            continue
        by_density.setdefault(r["graph"]["density"], []).append((r["graph"]["n"], r["mean_run_time_seconds"]))
    out = []
    for density, pts in sorted(by_density.items()):
        sizes = sorted({n for n, _ in pts})
        if len(sizes) < 2:
            continue
        fit = fit_exponential_trend([n for n, _ in pts], [t for _, t in pts])
        out.append({"record_type": "trend", "density": density, "sizes": sizes, "timing_fit": fit})
    return out


def cmd_bench(args):
    existing = read_records(args.out) if args.out is not None else []
    done = {r["instance_id"] for r in existing if r.get("record_type") == "experiment"}
    fresh = []
    grid = itertools.product(args.densities, args.sizes, range(args.graphs_per_cell))
    with _output(args.out) as out:
        for density, n, rep in grid:
            problem_id = f"er-n{n}-d{density:g}-r{rep}-s{args.seed}"
            if problem_id in done:
                continue
            config = ExperimentConfig(
                problem_id=problem_id,
                n=n,
                density=density,
                master_seed=args.seed,
                instance=instance_key(n, density, rep),
                epsilon=args.epsilon,
                penalty=args.penalty,
                schedule=_schedule(args),
                runs=args.runs,
                exact_budget_seconds=args.exact_budget_seconds,
                jobs=args.jobs,
            )
            record = run_experiment(config)
            write_record(out, record)
            fresh.append(record)
            if args.verbose:
                s = record["summary"]
                print(
                    f"{problem_id}: successes {s['successes']}/{s['runs']} coverage {s['mean_coverage']:.4f} "
                    f"fairness {record['fairness']['category']}",
                    file=sys.stderr,
                )
        for trend in _trend_records(existing + fresh):
            write_record(out, trend)
    return 0


def cmd_validate_bounds(args):
    failed = 0
    with _output(args.out) as out:
        for record in validation_campaign(args.seed, args.lemma_trials, args.theorem_trials, args.epsilon):
            write_record(out, record)
            failed += not record["passed"]
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairenum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="write a random graph in DIMACS format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_gen_graph)

    def graph_source(q):
        q.add_argument("--graph", default=None, help="DIMACS graph file")
        q.add_argument("--n", type=int, default=None, help="random graph size (instead of --graph)")
        q.add_argument("--density", type=float, default=0.5)
        q.add_argument("--graph-seed", type=int, default=None)
        q.add_argument("--seed", type=int, default=0, help="master seed")

    p = sub.add_parser("exact", help="maximum cliques by the exact branch-and-bound enumerator")
    graph_source(p)
    p.add_argument("--exact-budget-seconds", type=float, default=None)
    _add_out(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("enumerate", help="enumerate optimal solutions of one instance by sampling")
    graph_source(p)
    p.add_argument("--qubo", default=None, help="QUBO model file (instead of a graph)")
    p.add_argument("--satisfy", action="store_true", help="constraint-satisfaction mode: collect every feasible draw regardless of cost")
    p.add_argument("--budget-cap", type=int, default=None, help="hard cap on sampler draws")
    _add_sa_flags(p)
    _add_out(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bench", help="random-graph sweep: repeated enumeration vs the exact enumerator")
    p.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 30, 40, 50, 60])
    p.add_argument("--densities", type=float, nargs="+", default=[0.25, 0.5, 0.75])
    p.add_argument("--graphs-per-cell", type=int, default=1)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--exact-budget-seconds", type=float, default=600.0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent runs")
    p.add_argument("--verbose", action="store_true")
    _add_sa_flags(p)
    _add_out(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate-bounds", help="Monte Carlo checks of the tail lemmas and failure-rate theorems")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lemma-trials", type=int, default=100_000)
    p.add_argument("--theorem-trials", type=int, default=20_000)
    p.add_argument("--epsilon", type=float, default=0.05, help="tolerance for the theorem campaigns")
    _add_out(p)
    p.set_defaults(func=cmd_validate_bounds)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
