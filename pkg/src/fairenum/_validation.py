"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import math
import numbers

import numpy as np

EPS_MAX_SATISFY = math.exp(-1.0)
EPS_MAX_OPTIMIZE = math.exp(-1.5)


def check_epsilon(epsilon, upper=1.0, name="epsilon"):
    """Return ``epsilon`` as a float, requiring ``0 < epsilon < upper``."""
    if isinstance(epsilon, bool) or not isinstance(epsilon, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(epsilon).__name__}")
    epsilon = float(epsilon)
    if not (0.0 < epsilon < upper):
        raise ValueError(f"{name} must lie in the open interval (0, {upper:.6g}), got {epsilon!r}")
    return epsilon


def check_int(value, name, min_value=None, max_value=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if min_value is not None and value < min_value:
        raise ValueError(f"{name} must be >= {min_value}, got {value}")
    if max_value is not None and value > max_value:
        raise ValueError(f"{name} must be <= {max_value}, got {value}")
    return value


def check_real(value, name, low=None, high=None, low_inclusive=True, high_inclusive=True):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if low is not None and (value < low or (value == low and not low_inclusive)):
        raise ValueError(f"{name} out of range: {value} (lower limit {low})")
    if high is not None and (value > high or (value == high and not high_inclusive)):
        raise ValueError(f"{name} out of range: {value} (upper limit {high})")
    return value


def check_random_state(seed):
    """Turn ``seed`` into a :class:`numpy.random.Generator`.

    ``None`` gives fresh OS entropy, an int or :class:`~numpy.random.SeedSequence`
    seeds a PCG64 generator, and an existing generator is passed through.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral, np.random.SeedSequence)):
        return np.random.Generator(np.random.PCG64(seed))
    raise TypeError(f"cannot build a random generator from {seed!r}")


def check_spins(spins, n):
    arr = np.asarray(spins)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"expected a spin vector of length {n}, got shape {arr.shape}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError("spin entries must be exactly -1 or +1")
    return arr.astype(np.int8, copy=False)


def check_bits(bits, n):
    arr = np.asarray(bits)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"expected a bit vector of length {n}, got shape {arr.shape}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit entries must be exactly 0 or 1")
    return arr.astype(np.int8, copy=False)
