import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fairenum import FiniteSampler, Graph, MaxCliqueEnumerator, ScriptedSampler, Solution, SolutionEnumerator
from fairenum.maxclique import erdos_renyi


def test_solution_enumerator_params_and_clone():
    est = SolutionEnumerator(epsilon=0.05, objective="satisfy")
    assert est.get_params() == {"epsilon": 0.05, "objective": "satisfy", "budget_cap": None, "record_trace": False}
    twin = clone(est)
    assert twin is not est and twin.get_params() == est.get_params()
    est.set_params(epsilon=0.1)
    assert est.epsilon == 0.1


def test_solution_enumerator_fit_optimize():
    est = SolutionEnumerator(epsilon=0.01).fit(ScriptedSampler([Solution("1", 7.0)] * 13))
    assert est.solutions_ == [Solution("1", 7.0)]
    assert est.threshold_ == 7.0
    assert est.n_accepted_ == 13 and est.n_draws_ == 13
    assert est.stop_reason_ == "deadline_missed"


def test_solution_enumerator_fit_satisfy():
    est = SolutionEnumerator(epsilon=0.05, objective="satisfy").fit(FiniteSampler.uniform(4, seed=1))
    assert [s.key for s in est.solutions_] == ["00", "01", "10", "11"]


def test_solution_enumerator_validation():
    with pytest.raises(ValueError):
        SolutionEnumerator(objective="maximize").fit(ScriptedSampler([]))
    with pytest.raises(ValueError):
        SolutionEnumerator(epsilon=0.3).fit(ScriptedSampler([]))
    with pytest.raises(TypeError):
        SolutionEnumerator().fit([1, 2, 3])


def test_max_clique_enumerator_on_graph_and_matrix():
    g = erdos_renyi(14, 0.5, seed=6)
    est = MaxCliqueEnumerator(sweeps=300, random_state=0).fit(g)
    assert est.n_vertices_ == 14
    assert all(len(c) == est.clique_size_ for c in est.cliques_)
    assert est.score(g) == 1.0
    from_matrix = MaxCliqueEnumerator(sweeps=300, random_state=0).fit(g.to_adjacency())
    assert from_matrix.cliques_ == est.cliques_
    assert est.n_annealing_reads_ >= est.n_draws_ == sum(est.sample_counts_.values())


def test_max_clique_enumerator_clone_reproduces():
    g = erdos_renyi(12, 0.75, seed=2)
    est = MaxCliqueEnumerator(sweeps=200, random_state=4)
    a = est.fit(g).cliques_
    b = clone(est).fit(g).cliques_
    assert a == b


def test_max_clique_enumerator_input_checks():
    est = MaxCliqueEnumerator()
    with pytest.raises(NotFittedError):
        est.score(Graph(2))
    with pytest.raises(ValueError):
        est.fit(np.array([[0, 2], [2, 0]]))
    with pytest.raises(ValueError):
        est.fit(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        MaxCliqueEnumerator(penalty=1.0).fit(Graph(3))


def test_score_against_given_truth():
    est = MaxCliqueEnumerator(sweeps=200, random_state=1).fit(Graph(3, [(0, 1)]))
    assert est.cliques_ == [(0, 1)]
    assert est.score(None, y=[(0, 1), (1, 2)]) == 0.5
