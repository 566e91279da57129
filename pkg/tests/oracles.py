"""Brute-force reference implementations, independent of the library code paths."""

from itertools import combinations, product


def brute_force_max_cliques(n, edges):
    """All maximum cliques by checking every vertex subset."""
    adjacent = {frozenset(e) for e in edges}
    best, found = -1, []
    for bits in product((0, 1), repeat=n):
        members = [v for v in range(n) if bits[v]]
        if all(frozenset(p) in adjacent for p in combinations(members, 2)):
            if len(members) > best:
                best, found = len(members), []
            if len(members) == best:
                found.append(tuple(members))
    return sorted(found)


def direct_ising_energy(n, couplings, fields, offset, spins):
    e = offset
    for (i, j), J in couplings.items():
        e -= J * spins[i] * spins[j]
    for i in range(n):
        e -= fields[i] * spins[i]
    return e


def direct_qubo_energy(n, quadratic, linear, offset, bits):
    e = offset
    for (u, v), q in quadratic.items():
        e += q * bits[u] * bits[v]
    for u in range(n):
        e += linear[u] * bits[u]
    return e
