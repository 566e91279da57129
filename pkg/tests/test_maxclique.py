import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_force_max_cliques

from fairenum.ising import AnnealSchedule, qubo_energies, qubo_energy
from fairenum.maxclique import (
    ExactBudgetExceeded,
    Graph,
    SamplerExhausted,
    enumerate_max_cliques_exact,
    er_edge_count,
    erdos_renyi,
    is_clique,
    key_to_vertices,
    make_clique_sampler,
    max_clique_qubo,
    vertices_to_key,
)

K3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
PATH = Graph(3, [(0, 1), (1, 2)])


def complete(n):
    return Graph(n, itertools.combinations(range(n), 2))


def qubo_argmin(g, penalty=2.0):
    x = np.array(list(itertools.product((0, 1), repeat=g.n_vertices)), dtype=np.int8)
    e = qubo_energies(max_clique_qubo(g, penalty), x)
    best = e.min()
    return best, sorted(tuple(np.flatnonzero(row).tolist()) for row in x[np.isclose(e, best)])


def test_graph_validation_and_symmetry():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])
    g = Graph(4, [(2, 0), (0, 2), (3, 1)])
    assert g.n_edges == 2
    assert g.has_edge(0, 2) and g.has_edge(2, 0)
    a = g.to_adjacency()
    assert np.array_equal(a, a.T) and not a.diagonal().any()
    assert Graph.from_adjacency(a) == g
    assert g.density == pytest.approx(2 / 6)
    assert sorted(g.non_edges()) == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_is_clique_examples():
    assert is_clique(K3, [])
    assert is_clique(K3, [0, 1, 2])
    assert not is_clique(PATH, [0, 2])
    assert is_clique(PATH, [1])
    with pytest.raises(ValueError):
        is_clique(K3, [3])


def test_membership_key_round_trip():
    assert vertices_to_key([0, 3], 5) == "10010"
    assert key_to_vertices("10010") == (0, 3)


def test_qubo_k3():
    best, argmin = qubo_argmin(K3)
    assert best == -3.0 and argmin == [(0, 1, 2)]


def test_qubo_path():
    best, argmin = qubo_argmin(PATH)
    assert best == -2.0 and argmin == [(0, 1), (1, 2)]


def test_qubo_single_vertex():
    assert qubo_energy(max_clique_qubo(Graph(1)), [1]) == -1.0


@pytest.mark.parametrize("penalty", [1.0, 0.5, -2.0])
def test_qubo_penalty_must_exceed_one(penalty):
    with pytest.raises(ValueError):
        max_clique_qubo(K3, penalty)


def test_exact_k4():
    assert enumerate_max_cliques_exact(complete(4)) == [(0, 1, 2, 3)]


def test_exact_c5():
    c5 = Graph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert enumerate_max_cliques_exact(c5) == sorted(tuple(sorted(e)) for e in c5.edges())
    assert len(enumerate_max_cliques_exact(c5)) == 5


def test_exact_edgeless_and_single_vertex():
    assert enumerate_max_cliques_exact(Graph(3)) == [(0,), (1,), (2,)]
    assert enumerate_max_cliques_exact(Graph(1)) == [(0,)]


def test_exact_matches_brute_force_n12():
    g = erdos_renyi(12, 0.5, seed=2024)
    assert enumerate_max_cliques_exact(g) == brute_force_max_cliques(12, g.edges())


def test_exact_budget():
    g = erdos_renyi(200, 0.9, seed=1)
    with pytest.raises(ExactBudgetExceeded):
        enumerate_max_cliques_exact(g, budget_seconds=0.01)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 10), density=st.sampled_from([0.25, 0.5, 0.75]), seed=st.integers(0, 2**32 - 1))
def test_exact_brute_force_and_qubo_agree(n, density, seed):
    g = erdos_renyi(n, density, seed=seed)
    truth = brute_force_max_cliques(n, g.edges())
    assert enumerate_max_cliques_exact(g) == truth
    best, argmin = qubo_argmin(g)
    assert argmin == truth
    assert best == -len(truth[0])


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 9), density=st.floats(0, 1), seed=st.integers(0, 2**32 - 1))
def test_clique_energy_orders_by_size(n, density, seed):
    g = erdos_renyi(n, density, seed=seed)
    q = max_clique_qubo(g, 2.0)
    cliques = [c for k in range(n + 1) for c in itertools.combinations(range(n), k) if is_clique(g, c)]
    energy = {c: qubo_energy(q, [int(v in c) for v in range(n)]) for c in cliques}
    for a, b in itertools.combinations(cliques, 2):
        assert (len(a) > len(b)) == (energy[a] < energy[b])
        assert (len(a) < len(b)) == (energy[a] > energy[b])


def test_er_edge_count_examples():
    assert er_edge_count(10, 0.25) == 11
    g = erdos_renyi(10, 0.25, seed=0)
    assert g.n_edges == 11
    assert erdos_renyi(2, 1.0, seed=5).edges() == [(0, 1)]


def test_er_rounds_halves_up():
    # C(4,2) * 0.25 = 1.5
    assert er_edge_count(4, 0.25) == 2
    assert er_edge_count(5, 0.05) == 1  # 0.5


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 40), density=st.floats(0, 1))
def test_er_edge_count_is_nearest_integer(n, density):
    g = erdos_renyi(n, density, seed=0)
    exact = math.comb(n, 2) * density
    assert abs(g.n_edges - exact) <= 0.5 + 1e-9


def test_er_is_deterministic_per_seed():
    assert erdos_renyi(30, 0.5, seed=9) == erdos_renyi(30, 0.5, seed=9)
    assert erdos_renyi(30, 0.5, seed=9) != erdos_renyi(30, 0.5, seed=10)


def test_er_validation():
    with pytest.raises(ValueError):
        erdos_renyi(0, 0.5, seed=0)
    with pytest.raises(ValueError):
        erdos_renyi(5, 1.5, seed=0)


def test_sampler_draws_are_cliques():
    g = erdos_renyi(12, 0.5, seed=4)
    sampler = make_clique_sampler(g, 2.0, AnnealSchedule(sweeps=20), seed=1)
    for _ in range(1000):
        s = sampler.draw()
        members = key_to_vertices(s.key)
        assert is_clique(g, members)
        assert s.cost == -len(members)
    assert sum(sampler.counts.values()) == 1000
    assert sampler.n_raw == 1000 + sampler.n_rejected


def test_sampler_finds_the_triangle():
    sampler = make_clique_sampler(K3, 2.0, AnnealSchedule(sweeps=1000), seed=3)
    draws = [sampler.draw() for _ in range(300)]
    assert sum(d.key == "111" for d in draws) / len(draws) >= 0.9


def test_sampler_edgeless_graph():
    sampler = make_clique_sampler(Graph(3), 2.0, AnnealSchedule(sweeps=1000), seed=8)
    draws = [key_to_vertices(sampler.draw().key) for _ in range(300)]
    assert all(len(d) <= 1 for d in draws)
    assert sum(len(d) == 1 for d in draws) / len(draws) >= 0.9


def test_sampler_is_reproducible():
    g = erdos_renyi(10, 0.5, seed=0)
    a = make_clique_sampler(g, seed=11, schedule=AnnealSchedule(sweeps=50))
    b = make_clique_sampler(g, seed=11, schedule=AnnealSchedule(sweeps=50))
    assert [a.draw() for _ in range(50)] == [b.draw() for _ in range(50)]


def test_sampler_redraw_cap():
    # a single sweep at tiny beta rarely yields a clique on a sparse graph
    g = Graph(12, [(0, 1)])
    sampler = make_clique_sampler(g, 2.0, AnnealSchedule(sweeps=1, beta_initial=1e-3, beta_final=1e-3), seed=0, max_redraws=1)
    with pytest.raises(SamplerExhausted):
        for _ in range(100):
            sampler.draw()
