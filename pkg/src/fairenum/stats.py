"""Fairness tests, success-rate inference, coverage and Monte Carlo checks of
the coupon-collector tail bounds behind the stopping rules."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Mapping

import numpy as np
from scipy import special

from ._validation import EPS_MAX_OPTIMIZE, EPS_MAX_SATISFY, check_epsilon, check_int, check_random_state, check_real
from .bounds import coupon_deadline, sample_budget
from .enumeration import FiniteSampler, enumerate_csp, enumerate_opt

__all__ = [
    "FairnessReport",
    "TrialSummary",
    "TailCheck",
    "FailureRateCheck",
    "chi_squared_uniform_test",
    "binomial_tail_p",
    "clopper_pearson_ci",
    "summarize_trials",
    "solution_coverage",
    "coupon_mc_lemma1",
    "tail_bound_mc",
    "theorem1_mc",
    "theorem2_mc",
    "expected_time_estimate",
    "fit_exponential_trend",
    "trial_seed",
]

SE_MARGIN = 3.0


def trial_seed(master_seed: int, *counters: int) -> np.random.SeedSequence:
    """Seed for one job, derived from the master seed and integer counters.

    ``SeedSequence(master_seed, spawn_key=counters)`` depends only on its
    arguments, so jobs can run in any order or on any worker.
    """
    return np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(c) for c in counters))


@dataclass
class FairnessReport:
    counts: dict
    chi2: float
    p_value: float
    pmax_over_pmin: float
    ratio_finite: bool

    @property
    def fair(self) -> bool:
        """Tentative label: chi-squared p-value at least 0.05."""
        return self.p_value >= 0.05

    def as_dict(self) -> dict:
        d = asdict(self)
        if not self.ratio_finite:
            d["pmax_over_pmin"] = None
        d["fair"] = self.fair
        return d


def chi_squared_uniform_test(counts) -> FairnessReport:
    """Pearson chi-squared test of ``counts`` against equal category probabilities.

    ``counts`` is a sequence or a mapping key -> count.  The p-value is the
    upper regularized incomplete gamma function with ``k - 1`` degrees of
    freedom; no continuity correction.  Zero counts make the max/min frequency
    ratio infinite, flagged by ``ratio_finite=False``.
    """
    if isinstance(counts, Mapping):
        labelled = {str(k): int(v) for k, v in counts.items()}
    else:
        labelled = {str(i): int(v) for i, v in enumerate(counts)}
    obs = np.array(list(labelled.values()), dtype=float)
    if obs.size < 2:
        raise ValueError("chi-squared fairness test needs at least two categories")
    if np.any(obs < 0):
        raise ValueError("counts must be nonnegative")
    total = obs.sum()
    if total <= 0:
        raise ValueError("counts must not all be zero")
    expected = total / obs.size
    chi2 = float(((obs - expected) ** 2).sum() / expected)
    p_value = float(special.gammaincc((obs.size - 1) / 2.0, chi2 / 2.0))
    low = obs.min()
    finite = bool(low > 0)
    ratio = float(obs.max() / low) if finite else math.inf
    return FairnessReport(labelled, chi2, min(max(p_value, 0.0), 1.0), ratio, finite)


def binomial_tail_p(successes: int, runs: int, p0: float = 0.99) -> float:
    """Exact ``P(X <= successes)`` for ``X ~ Binomial(runs, p0)``.

    Terms follow the pmf ratio recurrence in log space and are combined with
    log-sum-exp.
    """
    runs = check_int(runs, "runs", min_value=1)
    successes = check_int(successes, "successes", min_value=0, max_value=runs)
    p0 = check_real(p0, "p0", low=0.0, high=1.0, low_inclusive=False, high_inclusive=False)
    if successes == runs:
        return 1.0
    log_ratio = math.log(p0) - math.log1p(-p0)
    term = runs * math.log1p(-p0)
    logs = [term]
    for k in range(successes):
        term += math.log((runs - k) / (k + 1)) + log_ratio
        logs.append(term)
    return min(1.0, float(np.exp(special.logsumexp(logs))))


def clopper_pearson_ci(successes: int, runs: int, level: float = 0.95) -> tuple:
    """Exact binomial interval from beta quantiles; closed at 0 and 1 on boundary counts."""
    runs = check_int(runs, "runs", min_value=1)
    successes = check_int(successes, "successes", min_value=0, max_value=runs)
    level = check_real(level, "level", low=0.0, high=1.0, low_inclusive=False, high_inclusive=False)
    tail = (1.0 - level) / 2.0
    lower = 0.0 if successes == 0 else float(special.betaincinv(successes, runs - successes + 1, tail))
    upper = 1.0 if successes == runs else float(special.betaincinv(successes + 1, runs - successes, 1.0 - tail))
    return lower, upper


@dataclass
class TrialSummary:
    successes: int
    runs: int
    p_value_vs_target: float
    ci_low: float
    ci_high: float
    mean_coverage: float
    target: float = 0.99

    @property
    def compatible(self) -> bool:
        """Success count consistent with the target rate: p >= 0.05 and the CI covers it."""
        return self.p_value_vs_target >= 0.05 and self.ci_low <= self.target <= self.ci_high

    def as_dict(self) -> dict:
        d = asdict(self)
        d["compatible"] = self.compatible
        return d


def summarize_trials(coverages, target: float = 0.99, level: float = 0.95) -> TrialSummary:
    """Success counts, binomial p-value, CI and mean coverage from per-run coverages."""
    cov = np.asarray(list(coverages), dtype=float)
    runs = int(cov.size)
    successes = int(np.sum(cov >= 1.0))
    lo, hi = clopper_pearson_ci(successes, runs, level)
    return TrialSummary(successes, runs, binomial_tail_p(successes, runs, target), lo, hi, float(cov.mean()), target)


def solution_coverage(found, truth) -> float:
    truth = set(truth)
    if not truth:
        raise ValueError("coverage is undefined for an empty set of true solutions")
    return len(set(found) & truth) / len(truth)


@dataclass
class TailCheck:
    n: int
    m: int
    deadline_used: int
    empirical_tail: float
    bound: float
    trials: int
    seed: int

    @property
    def standard_error(self) -> float:
        """Binomial standard error of the tail estimate, evaluated at the bound."""
        b = min(max(self.bound, 0.0), 1.0)
        return math.sqrt(b * (1.0 - b) / self.trials)

    @property
    def passed(self) -> bool:
        return self.empirical_tail <= self.bound + SE_MARGIN * self.standard_error

    def as_dict(self) -> dict:
        d = asdict(self)
        d["standard_error"] = self.standard_error
        d["passed"] = self.passed
        return d


def _count_slow_collections(n, m, horizon, trials, rng, chunk=20000):
    """Number of trials where ``horizon`` uniform draws from ``n`` items show fewer than ``m`` distinct."""
    misses = 0
    done = 0
    while done < trials:
        k = min(chunk, trials - done)
        draws = np.sort(rng.integers(0, n, size=(k, horizon)), axis=1)
        distinct = 1 + np.count_nonzero(np.diff(draws, axis=1), axis=1)
        misses += int(np.count_nonzero(distinct < m))
        done += k
    return misses


def tail_bound_mc(n: int, m: int, epsilon: float, trials: int, seed: int) -> TailCheck:
    """Estimate ``P(T_m > ceil(m ln(m/eps)))`` for uniform sampling over ``n`` items.

    ``T_m`` is the number of draws needed to see ``m`` distinct items.  The
    reference bound is ``(m/n)**(d+1) * C(n, m) * eps`` with ``d`` the deadline.
    """
    n = check_int(n, "n", min_value=1)
    m = check_int(m, "m", min_value=1, max_value=n)
    epsilon = check_epsilon(epsilon)
    trials = check_int(trials, "trials", min_value=1)
    horizon = coupon_deadline(m, epsilon)
    misses = _count_slow_collections(n, m, horizon, trials, check_random_state(seed))
    log_bound = (horizon + 1) * math.log(m / n) + math.log(math.comb(n, m)) + math.log(epsilon)
    return TailCheck(n, m, horizon, misses / trials, math.exp(log_bound), trials, int(seed))


def coupon_mc_lemma1(n: int, epsilon: float, trials: int, seed: int) -> TailCheck:
    """Estimate ``P(T_n > ceil(n ln(n/eps)))`` (collecting all ``n`` items); the bound is ``eps``."""
    check = tail_bound_mc(n, n, epsilon, trials, seed)
    check.bound = float(epsilon)
    return check


@dataclass
class FailureRateCheck:
    label: str
    n_desirable: int
    epsilon: float
    trials: int
    failures: int
    seed: int

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

    @property
    def passed(self) -> bool:
        return self.failure_rate < self.epsilon

    def as_dict(self) -> dict:
        d = asdict(self)
        d["failure_rate"] = self.failure_rate
        d["passed"] = self.passed
        return d


def _failure_campaign(label, make_sampler: Callable, algorithm, truth, epsilon, trials, seed):
    failures = 0
    for t in range(trials):
        result = algorithm(make_sampler(trial_seed(seed, t)), epsilon)
        if {s.key for s in result.solutions} != truth:
            failures += 1
    return FailureRateCheck(label, len(truth), epsilon, trials, failures, int(seed))


def theorem1_mc(n: int, epsilon: float = 0.05, trials: int = 20000, seed: int = 0) -> FailureRateCheck:
    """Failure rate of :func:`enumerate_csp` with a uniform sampler over ``n`` solutions."""
    n = check_int(n, "n", min_value=1)
    epsilon = check_epsilon(epsilon, EPS_MAX_SATISFY)
    trials = check_int(trials, "trials", min_value=1)
    truth = {s.key for s in FiniteSampler.uniform(n).solutions}
    return _failure_campaign(
        f"uniform-csp-n{n}", lambda ss: FiniteSampler.uniform(n, seed=ss), enumerate_csp, truth, epsilon, trials, seed
    )


def theorem2_mc(
    costs, beta: float = 0.0, epsilon: float = 0.05, trials: int = 20000, seed: int = 0, label: str | None = None
) -> FailureRateCheck:
    """Failure rate of :func:`enumerate_opt` on a finite cost landscape.

    Solutions are drawn with weights ``exp(-beta * cost)``; ``beta = 0`` is
    the uniform distribution.  Success means returning exactly the
    minimum-cost solutions.
    """
    epsilon = check_epsilon(epsilon, EPS_MAX_OPTIMIZE)
    beta = check_real(beta, "beta", low=0.0)
    trials = check_int(trials, "trials", min_value=1)
    costs = [float(c) for c in costs]
    template = FiniteSampler.boltzmann(costs, beta)
    best = min(costs)
    truth = {s.key for s in template.solutions if s.cost == best}
    label = label or f"landscape-{len(truth)}opt-{len(costs) - len(truth)}sub-beta{beta:g}"
    return _failure_campaign(
        label, lambda ss: FiniteSampler.boltzmann(costs, beta, seed=ss), enumerate_opt, truth, epsilon, trials, seed
    )


def expected_time_estimate(n: int, epsilon: float, kappa: float, t_sample: float, p_desirable: float) -> float:
    """Expected wall time of a successful run: budget * t_sample / p_desirable."""
    t_sample = check_real(t_sample, "t_sample", low=0.0)
    p_desirable = check_real(p_desirable, "p_desirable", low=0.0, high=1.0, low_inclusive=False)
    return sample_budget(n, epsilon, kappa) * t_sample / p_desirable


def fit_exponential_trend(sizes, times) -> dict:
    """Least-squares fit ``log(time) = a + size * log(base)``, i.e. ``time ~ O(base**size)``."""
    x = np.asarray(sizes, dtype=float)
    y = np.asarray(times, dtype=float)
    if x.size < 2 or np.any(y <= 0):
        raise ValueError("need at least two positive timings to fit a trend")
    slope, intercept = np.polyfit(x, np.log(y), 1)
    return {"base": float(math.exp(slope)), "log_slope": float(slope), "log_intercept": float(intercept), "points": int(x.size)}
