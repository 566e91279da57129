"""Ising and QUBO energy models, an exhaustive ground-state oracle and a
seeded simulated-annealing sampler.

Conventions: the Ising energy is ``-sum_{i<j} J_ij s_i s_j - sum_i h_i s_i + offset``
and binary variables map to spins through ``s = 1 - 2x`` (so ``x = 0`` is ``s = +1``).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._anneal import metropolis_anneal
from ._validation import check_bits, check_int, check_random_state, check_real, check_spins
from .enumeration import Solution

__all__ = [
    "IsingModel",
    "QuboModel",
    "AnnealSchedule",
    "ising_energy",
    "qubo_energy",
    "qubo_to_ising",
    "ising_energies",
    "qubo_energies",
    "ground_states_exhaustive",
    "sa_sample",
    "spins_to_bits",
    "bits_to_spins",
    "bits_key",
    "QuboSampler",
    "dump_model",
    "load_model",
    "MAX_EXHAUSTIVE",
]

MAX_EXHAUSTIVE = 24


def _normalize_pairs(pairs, n, what):
    out = {}
    for (i, j), value in dict(pairs).items():
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"{what}: self-coupling at index {i}")
        if i > j:
            i, j = j, i
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"{what}: index pair ({i}, {j}) out of range for size {n}")
        value = check_real(value, f"{what}[{i},{j}]")
        out[(i, j)] = out.get((i, j), 0.0) + value
    return out


def _linear_terms(values, n, what):
    arr = np.zeros(n) if values is None else np.array(values, dtype=float)
    if arr.shape != (n,):
        raise ValueError(f"{what} must have length {n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite")
    arr.setflags(write=False)
    return arr


class _QuadraticModel:
    """Shared storage: size, upper-triangular pair map, linear vector, offset."""

    _pair_name = "pairs"
    _linear_name = "linear"

    def __init__(self, size, pairs=None, linear=None, offset=0.0):
        self._size = check_int(size, "size", min_value=1)
        self._pairs = _normalize_pairs(pairs or {}, self._size, self._pair_name)
        self._linear = _linear_terms(linear, self._size, self._linear_name)
        self.offset = check_real(offset, "offset")

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self._size == other._size
            and self._pairs == other._pairs
            and np.array_equal(self._linear, other._linear)
            and self.offset == other.offset
        )

    def __repr__(self):
        return f"{type(self).__name__}(size={self._size}, n_pairs={len(self._pairs)}, offset={self.offset!r})"

    @cached_property
    def upper_matrix(self) -> np.ndarray:
        mat = np.zeros((self._size, self._size))
        for (i, j), v in self._pairs.items():
            mat[i, j] = v
        mat.setflags(write=False)
        return mat


class IsingModel(_QuadraticModel):
    _pair_name = "couplings"
    _linear_name = "fields"

    def __init__(self, n_spins, couplings=None, fields=None, offset=0.0):
        super().__init__(n_spins, couplings, fields, offset)

    @property
    def n_spins(self) -> int:
        return self._size

    @property
    def couplings(self) -> dict:
        return dict(self._pairs)

    @property
    def fields(self) -> np.ndarray:
        return self._linear

    @cached_property
    def csr(self):
        """Symmetric coupling matrix in CSR form, for the annealing kernel."""
        n = self._size
        rows = [[] for _ in range(n)]
        for (i, j), v in sorted(self._pairs.items()):
            rows[i].append((j, v))
            rows[j].append((i, v))
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices, weights = [], []
        for i, row in enumerate(rows):
            row.sort()
            indices.extend(k for k, _ in row)
            weights.extend(v for _, v in row)
            indptr[i + 1] = len(indices)
        return indptr, np.asarray(indices, dtype=np.int64), np.asarray(weights, dtype=np.float64)


class QuboModel(_QuadraticModel):
    _pair_name = "quadratic"
    _linear_name = "linear"

    def __init__(self, n_vars, quadratic=None, linear=None, offset=0.0):
        super().__init__(n_vars, quadratic, linear, offset)

    @property
    def n_vars(self) -> int:
        return self._size

    @property
    def quadratic(self) -> dict:
        return dict(self._pairs)

    @property
    def linear(self) -> np.ndarray:
        return self._linear


@dataclass(frozen=True)
class AnnealSchedule:
    """Inverse-temperature schedule for :func:`sa_sample`.

    ``order`` is ``"sequential"`` (spins visited 0..N-1 each sweep) or
    ``"random"`` (a fresh permutation per sweep).
    """

    sweeps: int = 1000
    beta_initial: float = 0.1
    beta_final: float = 10.0
    interpolation: str = "geometric"
    order: str = "sequential"

    def __post_init__(self):
        check_int(self.sweeps, "sweeps", min_value=1)
        b0 = check_real(self.beta_initial, "beta_initial", low=0.0, low_inclusive=False)
        check_real(self.beta_final, "beta_final", low=b0)
        if self.interpolation not in ("geometric", "linear"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")
        if self.order not in ("sequential", "random"):
            raise ValueError(f"unknown order {self.order!r}")

    def betas(self) -> np.ndarray:
        if self.sweeps == 1:
            return np.array([self.beta_final])
        if self.interpolation == "geometric":
            return np.geomspace(self.beta_initial, self.beta_final, self.sweeps)
        return np.linspace(self.beta_initial, self.beta_final, self.sweeps)

    def as_dict(self) -> dict:
        return {
            "sweeps": self.sweeps,
            "beta_initial": self.beta_initial,
            "beta_final": self.beta_final,
            "interpolation": self.interpolation,
            "order": self.order,
        }


def ising_energy(model: IsingModel, config) -> float:
    s = check_spins(config, model.n_spins).astype(float)
    quad = math.fsum(v * s[i] * s[j] for (i, j), v in model._pairs.items())
    return -quad - float(model.fields @ s) + model.offset


def qubo_energy(model: QuboModel, assignment) -> float:
    x = check_bits(assignment, model.n_vars).astype(float)
    quad = math.fsum(v * x[i] * x[j] for (i, j), v in model._pairs.items())
    return quad + float(model.linear @ x) + model.offset


def ising_energies(model: IsingModel, configs) -> np.ndarray:
    """Energies of each row of a (k, n_spins) array of +-1 configurations."""
    s = np.atleast_2d(np.asarray(configs, dtype=float))
    if s.shape[1] != model.n_spins:
        raise ValueError(f"expected rows of length {model.n_spins}, got {s.shape[1]}")
    return -np.einsum("ij,ij->i", s @ model.upper_matrix, s) - s @ model.fields + model.offset


def qubo_energies(model: QuboModel, assignments) -> np.ndarray:
    """Energies of each row of a (k, n_vars) array of 0/1 assignments."""
    x = np.atleast_2d(np.asarray(assignments, dtype=float))
    if x.shape[1] != model.n_vars:
        raise ValueError(f"expected rows of length {model.n_vars}, got {x.shape[1]}")
    return np.einsum("ij,ij->i", x @ model.upper_matrix, x) + x @ model.linear + model.offset


def qubo_to_ising(model: QuboModel) -> IsingModel:
    """Substitute ``x = (1 - s) / 2``; energies agree on every assignment."""
    n = model.n_vars
    fields = np.zeros(n)
    couplings = {}
    offset = model.offset
    for v, a in enumerate(model.linear):
        # a x = a/2 - (a/2) s
        fields[v] += a / 2.0
        offset += a / 2.0
    for (u, v), b in model._pairs.items():
        # b x_u x_v = b/4 (1 - s_u - s_v + s_u s_v)
        offset += b / 4.0
        fields[u] += b / 4.0
        fields[v] += b / 4.0
        couplings[(u, v)] = -b / 4.0
    return IsingModel(n, couplings, fields, offset)


def spins_to_bits(spins) -> np.ndarray:
    return ((1 - np.asarray(spins, dtype=np.int8)) // 2).astype(np.int8)


def bits_to_spins(bits) -> np.ndarray:
    return (1 - 2 * np.asarray(bits, dtype=np.int8)).astype(np.int8)


def bits_key(bits) -> str:
    return "".join("1" if b else "0" for b in bits)


def _all_spin_rows(n, start, stop):
    idx = np.arange(start, stop, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (1 - 2 * bits).astype(float)


def ground_states_exhaustive(model: IsingModel, atol: float = 1e-9):
    """All minimum-energy spin configurations by brute force (``n_spins <= 24``).

    Returns ``(configs, energy)`` with ``configs`` a sorted list of +-1 tuples.
    Configurations within ``atol`` of the minimum count as ground states.
    """
    n = model.n_spins
    if n > MAX_EXHAUSTIVE:
        raise ValueError(f"exhaustive search is capped at {MAX_EXHAUSTIVE} spins, got {n}")
    total = 1 << n
    chunk = 1 << 16
    best = math.inf
    winners = []
    for start in range(0, total, chunk):
        s = _all_spin_rows(n, start, min(total, start + chunk))
        e = ising_energies(model, s)
        low = e.min()
        if low < best - atol:
            best = low
            winners = []
        if low <= best + atol:
            best = min(best, low)
            hit = np.flatnonzero(e <= best + atol)
            winners.extend((s[k], e[k]) for k in hit)
    configs = sorted(tuple(int(v) for v in row) for row, en in winners if en <= best + atol)
    return configs, float(best)


def _prepare_order(schedule, n, rng):
    if schedule.order == "sequential":
        return np.arange(n, dtype=np.int64)[None, :]
    return np.argsort(rng.random((schedule.sweeps, n)), axis=1).astype(np.int64)


def _anneal(model: IsingModel, schedule: AnnealSchedule, rng, betas=None) -> np.ndarray:
    n = model.n_spins
    indptr, indices, weights = model.csr
    if betas is None:
        betas = schedule.betas()
    spins = (1 - 2 * rng.integers(0, 2, size=n)).astype(np.float64)
    uniforms = rng.random((schedule.sweeps, n))
    order = _prepare_order(schedule, n, rng)
    metropolis_anneal(spins, indptr, indices, weights, np.asarray(model.fields, dtype=np.float64), betas, uniforms, order)
    return spins.astype(np.int8)


def sa_sample(model: IsingModel, schedule: AnnealSchedule | None = None, seed=None) -> np.ndarray:
    """One simulated-annealing read: random start, ``sweeps`` Metropolis passes.

    ``seed`` may be an int (fully determines the result) or a shared
    :class:`numpy.random.Generator` that the call advances.
    """
    if not isinstance(model, IsingModel):
        raise TypeError("sa_sample expects an IsingModel")
    schedule = AnnealSchedule() if schedule is None else schedule
    return _anneal(model, schedule, check_random_state(seed))


class QuboSampler:
    """Sampler over all assignments of a QUBO: annealed reads of its Ising image,
    keyed by bit string and costed by the QUBO energy."""

    def __init__(self, model: QuboModel, schedule: AnnealSchedule | None = None, seed=None):
        self.model = model
        self.ising = qubo_to_ising(model)
        self.schedule = AnnealSchedule() if schedule is None else schedule
        self._betas = self.schedule.betas()
        self._rng = check_random_state(seed)
        self.n_draws = 0

    def draw(self) -> Solution:
        spins = _anneal(self.ising, self.schedule, self._rng, self._betas)
        bits = spins_to_bits(spins)
        self.n_draws += 1
        return Solution(bits_key(bits), qubo_energy(self.model, bits))


def dump_model(model, stream=None) -> str | None:
    """Write a QUBO or Ising model as text.

    Layout::

        # type qubo|ising
        # size <n>
        # offset <value>
        i i <linear or field value>
        i j <pair value>          (i < j)

    Values are written with ``repr`` so reading them back is exact.
    """
    kind = "qubo" if isinstance(model, QuboModel) else "ising"
    lines = [f"# type {kind}", f"# size {model._size}", f"# offset {model.offset!r}"]
    for i, v in enumerate(model._linear):
        if v != 0.0:
            lines.append(f"{i} {i} {float(v)!r}")
    for (i, j), v in sorted(model._pairs.items()):
        lines.append(f"{i} {j} {float(v)!r}")
    text = "\n".join(lines) + "\n"
    if stream is None:
        return text
    stream.write(text)
    return None


def load_model(source):
    """Parse text written by :func:`dump_model` (a string or a readable stream)."""
    text = source.read() if hasattr(source, "read") else str(source)
    kind, size, offset = None, None, 0.0
    linear, pairs = {}, {}
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "type":
                kind = parts[1]
            elif len(parts) == 2 and parts[0] == "size":
                size = int(parts[1])
            elif len(parts) == 2 and parts[0] == "offset":
                offset = float(parts[1])
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'i j value', got {line!r}")
        i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
        if i == j:
            linear[i] = linear.get(i, 0.0) + v
        else:
            key = (min(i, j), max(i, j))
            pairs[key] = pairs.get(key, 0.0) + v
    if kind not in ("qubo", "ising"):
        raise ValueError("missing or unknown '# type' header")
    if size is None:
        indices = list(linear) + [k for p in pairs for k in p]
        size = max(indices) + 1 if indices else 1
    lin = np.zeros(size)
    for i, v in linear.items():
        if not 0 <= i < size:
            raise ValueError(f"linear index {i} out of range for size {size}")
        lin[i] = v
    cls = QuboModel if kind == "qubo" else IsingModel
    return cls(size, pairs, lin, offset)
