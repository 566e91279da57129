"""Compiled single-spin-flip Metropolis kernel."""

import numpy as np
from numba import njit


@njit(cache=True)
def metropolis_anneal(spins, indptr, indices, weights, fields, betas, uniforms, order):
    """Anneal ``spins`` in place.

    Energy is ``-sum_{i<j} J_ij s_i s_j - sum_i h_i s_i`` with ``J`` stored as a
    symmetric CSR matrix (``indptr``, ``indices``, ``weights``).  ``uniforms``
    has shape (sweeps, n) and ``order`` is either (1, n) (same order every
    sweep) or (sweeps, n).
    """
    n = spins.shape[0]
    local = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = fields[i]
        for p in range(indptr[i], indptr[i + 1]):
            acc += weights[p] * spins[indices[p]]
        local[i] = acc
    one_order = order.shape[0] == 1
    for sweep in range(betas.shape[0]):
        beta = betas[sweep]
        row = 0 if one_order else sweep
        for t in range(n):
            i = order[row, t]
            delta = 2.0 * spins[i] * local[i]
            if delta <= 0.0 or uniforms[sweep, t] < np.exp(-beta * delta):
                spins[i] = -spins[i]
                step = 2.0 * spins[i]
                for p in range(indptr[i], indptr[i + 1]):
                    local[indices[p]] += weights[p] * step
    return spins
