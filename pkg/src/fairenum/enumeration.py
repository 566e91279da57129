"""Enumeration of all feasible or all optimal solutions by repeated sampling.

A *sampler* is any object with a ``draw()`` method returning a
:class:`Solution`.  Draws must be independent, identically distributed and
feasible.  The failure guarantees hold when the sampler is fair (equal-cost
solutions equiprobable) and, for :func:`enumerate_opt`, cost-ordered (cheaper
solutions at least as likely).  These assumptions are trusted here;
:mod:`fairenum.stats` provides the tools to check them empirically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence

import numpy as np

from ._validation import EPS_MAX_OPTIMIZE, EPS_MAX_SATISFY, check_epsilon, check_int, check_random_state
from .bounds import _deadline, kappa1, kappa2

__all__ = [
    "Solution",
    "Sampler",
    "StopReason",
    "EnumerationResult",
    "enumerate_csp",
    "enumerate_opt",
    "enumerate_threshold",
    "FiniteSampler",
    "ScriptedSampler",
    "SamplerExhausted",
]


@dataclass(frozen=True, order=True)
class Solution:
    """A feasible solution identified by its canonical bit-string ``key``.

    Equality, hashing and ordering use the key only.
    """

    key: str
    cost: float = field(default=0.0, compare=False)


class Sampler(Protocol):
    def draw(self) -> Solution: ...


class SamplerExhausted(RuntimeError):
    """Raised by scripted samplers that run out of prepared draws."""


class StopReason(str, enum.Enum):
    DEADLINE_MISSED = "deadline_missed"
    BUDGET_CAP = "sampler_exhausted_budget_cap"


@dataclass
class EnumerationResult:
    solutions: frozenset
    theta: float
    accepted_samples: int
    stop_reason: StopReason
    raw_draws: int = 0
    trace: list | None = None

    @property
    def guaranteed(self) -> bool:
        """False when the run was cut short by ``budget_cap``."""
        return self.stop_reason is StopReason.DEADLINE_MISSED

    def sorted_solutions(self) -> list:
        return sorted(self.solutions)


class _Run:
    """Mutable bookkeeping for one enumeration run."""

    __slots__ = ("sampler", "budget_cap", "raw", "trace")

    def __init__(self, sampler, budget_cap, record_trace):
        self.sampler = sampler
        self.budget_cap = None if budget_cap is None else check_int(budget_cap, "budget_cap", min_value=1)
        self.raw = 0
        self.trace = [] if record_trace else None

    def draw(self):
        if self.budget_cap is not None and self.raw >= self.budget_cap:
            return None
        self.raw += 1
        return self.sampler.draw()

    def log(self, tau, event, *detail):
        if self.trace is not None:
            self.trace.append((tau, event, *detail))


def enumerate_csp(sampler, epsilon=0.01, budget_cap=None, record_trace=False) -> EnumerationResult:
    """Collect every feasible solution with failure probability below ``epsilon``.

    Every draw counts as an accepted sample.  After the first draw the
    deadlines for m = 2, 3, ... distinct solutions are checked in turn and the
    run stops at the first one that is missed.
    """
    epsilon = check_epsilon(epsilon, EPS_MAX_SATISFY)
    kappa = kappa1(epsilon)
    run = _Run(sampler, budget_cap, record_trace)

    first = run.draw()
    if first is None:
        return EnumerationResult(frozenset(), float("nan"), 0, StopReason.BUDGET_CAP, 0, run.trace)
    found = {first}
    tau = 1
    run.log(tau, "accept", first.key)
    m = 2
    while True:
        due = _deadline(m, kappa, epsilon)
        while tau < due:
            x = run.draw()
            if x is None:
                return _finish(found, tau, StopReason.BUDGET_CAP, run)
            tau += 1
            found.add(x)
            run.log(tau, "accept", x.key)
        run.log(tau, "deadline", m, len(found))
        if len(found) < m:
            return _finish(found, tau, StopReason.DEADLINE_MISSED, run)
        m += 1


def _finish(found, tau, reason, run, theta=None):
    if theta is None:
        theta = min(s.cost for s in found)
    return EnumerationResult(frozenset(found), theta, tau, reason, run.raw, run.trace)


def _enumerate_at(run, theta, seed_solution, epsilon, kappa):
    """Collect solutions of cost ``theta``; returns (found, theta, tau, reason)."""
    found = {seed_solution}
    tau = 1
    run.log(tau, "accept", seed_solution.key)
    m = 2
    while True:
        due = _deadline(m, kappa, epsilon)
        while tau < due:
            x = run.draw()
            if x is None:
                return found, theta, tau, StopReason.BUDGET_CAP
            if x.cost > theta:
                run.log(tau, "reject", x.key)
                continue
            if x.cost < theta:
                run.log(1, "lower", x.key, x.cost)
                return {x}, x.cost, 1, None
            tau += 1
            found.add(x)
            run.log(tau, "accept", x.key)
        run.log(tau, "deadline", m, len(found))
        if len(found) < m:
            return found, theta, tau, StopReason.DEADLINE_MISSED
        m += 1


def enumerate_threshold(sampler, theta, seed_solution, epsilon=0.01):
    """Collect all solutions of cost ``theta``, starting from ``seed_solution``.

    Draws costlier than ``theta`` are rejected without counting.  A cheaper
    draw ends the call immediately and is returned alone with its cost.
    Returns ``(solutions, theta)``.
    """
    epsilon = check_epsilon(epsilon, EPS_MAX_OPTIMIZE)
    if seed_solution.cost != theta:
        raise ValueError("seed_solution.cost must equal theta")
    run = _Run(sampler, None, False)
    found, new_theta, _, _ = _enumerate_at(run, theta, seed_solution, epsilon, kappa2(epsilon))
    return frozenset(found), new_theta


def enumerate_opt(sampler, epsilon=0.01, budget_cap=None, record_trace=False) -> EnumerationResult:
    """Collect every minimum-cost solution with failure probability below ``epsilon``.

    The cheapest cost seen so far is the provisional optimum.  Whenever a
    cheaper solution turns up, the collected set and the sample count restart
    from that solution.  The run ends once a collection pass misses a deadline
    without the threshold moving.
    """
    epsilon = check_epsilon(epsilon, EPS_MAX_OPTIMIZE)
    kappa = kappa2(epsilon)
    run = _Run(sampler, budget_cap, record_trace)

    current = run.draw()
    if current is None:
        return EnumerationResult(frozenset(), float("nan"), 0, StopReason.BUDGET_CAP, 0, run.trace)
    theta = current.cost
    while True:
        found, new_theta, tau, reason = _enumerate_at(run, theta, current, epsilon, kappa)
        if reason is not None:
            return _finish(found, tau, reason, run, theta=new_theta)
        theta = new_theta
        (current,) = found


class FiniteSampler:
    """I.i.d. draws from a finite list of solutions with given probabilities.

    Indices are generated in blocks for speed; the stream is fully determined
    by ``seed``.
    """

    def __init__(self, solutions: Sequence[Solution], probabilities=None, seed=None, block=256):
        self.solutions = list(solutions)
        if not self.solutions:
            raise ValueError("need at least one solution")
        n = len(self.solutions)
        if probabilities is None:
            self._cdf = None
        else:
            p = np.asarray(probabilities, dtype=float)
            if p.shape != (n,) or np.any(p < 0) or p.sum() <= 0:
                raise ValueError("probabilities must be a nonnegative vector matching solutions")
            cdf = np.cumsum(p / p.sum())
            cdf[-1] = 1.0
            self._cdf = cdf
        self._rng = check_random_state(seed)
        self._block = block
        self._buffer = []

    @classmethod
    def uniform(cls, n: int, cost: float = 0.0, seed=None):
        width = max(1, (n - 1).bit_length())
        sols = [Solution(format(i, f"0{width}b"), cost) for i in range(n)]
        return cls(sols, seed=seed)

    @classmethod
    def boltzmann(cls, costs: Iterable[float], beta: float, seed=None):
        """Weights ``exp(-beta * cost)``: cost-ordered and fair for ``beta >= 0``."""
        costs = np.asarray(list(costs), dtype=float)
        width = max(1, (len(costs) - 1).bit_length())
        sols = [Solution(format(i, f"0{width}b"), float(c)) for i, c in enumerate(costs)]
        weights = np.exp(-beta * (costs - costs.min()))
        return cls(sols, weights, seed=seed)

    def _refill(self):
        n = len(self.solutions)
        if self._cdf is None:
            idx = self._rng.integers(0, n, size=self._block)
        else:
            idx = np.searchsorted(self._cdf, self._rng.random(self._block), side="right")
            np.minimum(idx, n - 1, out=idx)
        self._buffer = idx[::-1].tolist()

    def draw(self) -> Solution:
        if not self._buffer:
            self._refill()
        return self.solutions[self._buffer.pop()]


class ScriptedSampler:
    """Replays a fixed sequence of solutions, then raises :class:`SamplerExhausted`
    (or repeats the last draw forever if ``repeat_last``)."""

    def __init__(self, sequence: Iterable[Solution], repeat_last: bool = False):
        self._seq = list(sequence)
        self._pos = 0
        self._repeat_last = repeat_last

    @property
    def n_drawn(self) -> int:
        return self._pos

    def draw(self) -> Solution:
        if self._pos >= len(self._seq):
            if self._repeat_last and self._seq:
                self._pos += 1
                return self._seq[-1]
            raise SamplerExhausted(f"scripted sampler exhausted after {self._pos} draws")
        x = self._seq[self._pos]
        self._pos += 1
        return x
