"""Stopping-rule constants and sampling deadlines.

Both enumeration algorithms halt when the number of accepted samples reaches
``ceil(m * ln(m * kappa / epsilon))`` without ``m`` distinct solutions having
been collected.  ``kappa1`` and ``kappa2`` are the correction factors that make
this rule safe when the number of desirable solutions (and, for optimisation,
the minimum cost) is unknown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ._validation import EPS_MAX_OPTIMIZE, EPS_MAX_SATISFY, check_epsilon, check_int, check_real

__all__ = [
    "ToleranceParams",
    "KappaValues",
    "derive_params",
    "kappa1",
    "kappa2",
    "kappa_values",
    "zeta_tail",
    "ceil_guarded",
    "coupon_deadline",
    "deadline",
    "sample_budget",
]

# (1/e + ln(1/3)/3) / (1/e - 1/3), about 0.04850
_BETA_RATIO = (1.0 / math.e + math.log(1.0 / 3.0) / 3.0) / (1.0 / math.e - 1.0 / 3.0)

# B_2, B_4, ..., B_12
_BERNOULLI_EVEN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)

_CEIL_GUARD = 1e-9


@dataclass(frozen=True)
class ToleranceParams:
    epsilon: float
    alpha: float
    beta: float


@dataclass(frozen=True)
class KappaValues:
    kappa1: float
    kappa2: float


def derive_params(epsilon: float) -> ToleranceParams:
    """alpha = ln(1/epsilon) - 1 and beta = 0.0485... * alpha, for 0 < epsilon < 1/e."""
    epsilon = check_epsilon(epsilon, EPS_MAX_SATISFY)
    alpha = math.log(1.0 / epsilon) - 1.0
    return ToleranceParams(epsilon=epsilon, alpha=alpha, beta=_BETA_RATIO * alpha)


def zeta_tail(s: float, k_start: int = 1) -> float:
    """Return ``sum_{k >= k_start} k**(-s)`` for ``s > 1``.

    The first terms are summed directly and the remainder from ``K >= 16`` on
    is closed with an Euler-Maclaurin expansion (integral, half end term and
    six Bernoulli corrections).  The neglected term is below 1e-15 for every
    ``s > 1``, so this stays accurate as ``s -> 1`` where plain summation would
    need an astronomical number of terms.
    """
    s = check_real(s, "s")
    if s <= 1.0:
        raise ValueError(f"zeta_tail requires s > 1, got {s}")
    k_start = check_int(k_start, "k_start", min_value=1)

    big = max(k_start, 16)
    head = math.fsum(k ** -s for k in range(k_start, big))

    tail = [big ** (1.0 - s) / (s - 1.0), 0.5 * big ** -s]
    rising = s  # s (s+1) ... (s+2j-2)
    factorial = 2.0  # (2j)!
    for j, b2j in enumerate(_BERNOULLI_EVEN, start=1):
        tail.append(b2j / factorial * rising * big ** (-s - 2 * j + 1))
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        factorial *= (2 * j + 1) * (2 * j + 2)
    return head + math.fsum(tail)


def kappa1(epsilon: float) -> float:
    p = derive_params(epsilon)
    q = math.exp(-p.alpha / (math.e - 1.0))
    return 3.0 ** (-2.0 * p.alpha) / (1.0 - math.exp(-p.beta)) + 1.0 / (1.0 - q)


def kappa2(epsilon: float) -> float:
    """Correction factor for the optimisation deadlines; needs epsilon < e**-1.5."""
    epsilon = check_epsilon(epsilon, EPS_MAX_OPTIMIZE)
    p = derive_params(epsilon)
    q = math.exp(-p.alpha / (math.e - 1.0))
    series = 4.0 ** p.alpha / (1.0 - math.exp(-p.beta)) * zeta_tail(2.0 * p.alpha, 6)
    return series + (2.0 - q) / (1.0 - q) ** 2


def kappa_values(epsilon: float) -> KappaValues:
    return KappaValues(kappa1=kappa1(epsilon), kappa2=kappa2(epsilon))


def ceil_guarded(x: float) -> int:
    """Ceiling that never under-shoots: values within 1e-9 of an integer ``k`` give ``k + 1``."""
    k = round(x)
    if abs(x - k) < _CEIL_GUARD:
        return int(k) + 1
    return math.ceil(x)


@lru_cache(maxsize=4096)
def _deadline(m: int, kappa: float, epsilon: float) -> int:
    return ceil_guarded(m * math.log(m * kappa / epsilon))


def coupon_deadline(m: int, epsilon: float) -> int:
    """``ceil(m ln(m / epsilon))``, the kappa-free deadline of the plain coupon collector."""
    m = check_int(m, "m", min_value=1)
    epsilon = check_epsilon(epsilon)
    return _deadline(m, 1.0, epsilon)


def deadline(m: int, kappa: float, epsilon: float) -> int:
    """Accepted-sample count by which ``m`` distinct solutions must have appeared."""
    m = check_int(m, "m", min_value=2)
    kappa = check_real(kappa, "kappa", low=1.0)
    epsilon = check_epsilon(epsilon)
    return _deadline(m, kappa, epsilon)


def sample_budget(n: int, epsilon: float, kappa: float) -> int:
    """Accepted samples consumed by a successful run that finds ``n`` solutions."""
    n = check_int(n, "n", min_value=1)
    return deadline(n + 1, kappa, epsilon)
