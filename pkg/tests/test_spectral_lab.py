"""
Tests for action graphs, eigenvalues, expansion, Kazhdan numerics, baselines and exports.
"""

import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from construction import CubeConstruction
from experiment_config import BaselineGroup, BudgetExceededError, ExperimentConfig, SolverMethod
from group_engine import build_bsgs
from perm_core import Permutation
from spectral_lab import (GraphKind, brute_force_expansion, build_action_graph, cheeger_interval,
                          delta_power_probe, graph_to_dot, graph_to_matrix_market, inverse_closure,
                          kazhdan_numeric, kazhdan_to_expansion, random_cayley_baseline,
                          second_eigenvalue, vertex_boundary)


def rotation(n):
    return Permutation.from_cycles([tuple(range(n))], n)


def klein_four():
    """Regular action of Z/2 x Z/2 on 4 points: the Schreier graph is K_4."""
    return [Permutation.from_cycles([(0, 1), (2, 3)], 4),
            Permutation.from_cycles([(0, 2), (1, 3)], 4),
            Permutation.from_cycles([(0, 3), (1, 2)], 4)]


def alt4_generators():
    return [Permutation.from_cycles([(0, 1, 2)], 4), Permutation.from_cycles([(1, 2, 3)], 4)]


def petersen_generators():
    """Outer 5-cycle with the inner pentagram, plus the spokes: the Schreier graph is the Petersen graph."""
    return [Permutation.from_cycles([(0, 1, 2, 3, 4), (5, 7, 9, 6, 8)], 10),
            Permutation.from_cycles([(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)], 10)]


def corpus(desk_family):
    """Connected graphs the solvers are cross-checked on."""
    return {
        "cycle-8": build_action_graph([rotation(8)]),
        "complete-4": build_action_graph(klein_four()),
        "petersen": build_action_graph(petersen_generators()),
        "alt4-points": build_action_graph(alt4_generators()),
        "alt4-cayley": build_action_graph(alt4_generators(), GraphKind.CAYLEY),
        "alt4-pairs": build_action_graph(alt4_generators(), GraphKind.SCHREIER_TUPLES, r=2),
        "desk-points": build_action_graph(desk_family.elements),
    }


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------

def test_inverse_closure_rule():
    """Non-involutions gain their inverse once; involutions and present inverses add nothing."""
    c = Permutation.from_cycles([(0, 1, 2)], 3)
    t = Permutation.from_cycles([(0, 1)], 3)
    closed, labels = inverse_closure([c, t], ["c", "t"])
    assert len(closed) == 3 and labels == ["c", "t", "c^-1"]
    closed, _ = inverse_closure([c, closed[2]], ["c", "d"])
    assert len(closed) == 2


def test_cycle_graph_matches_networkx():
    """C_8 adjacency equals networkx's cycle graph."""
    graph = build_action_graph([rotation(8)])
    assert graph.generator_count == 2
    ours = nx.from_scipy_sparse_array(graph.adjacency())
    assert nx.is_isomorphic(ours, nx.cycle_graph(8))
    assert graph.components() == 1


def test_cycle_spectrum():
    """Delta on C_8 has eigenvalues cos(2 pi k / 8); lambda_2 = cos(pi/4)."""
    report = second_eigenvalue(build_action_graph([rotation(8)]), method=SolverMethod.DENSE)
    expected = np.sort(np.real(nx.adjacency_spectrum(nx.cycle_graph(8))) / 2)[::-1][:6]
    assert np.allclose(report.eigenvalues, expected, atol=1e-10)
    assert report.lambda_2 == pytest.approx(math.cos(math.pi / 4), abs=1e-10)
    assert report.lambda_min == pytest.approx(-1.0, abs=1e-10)
    assert report.lambda_star == pytest.approx(1.0, abs=1e-10)
    assert max(report.residuals) < 1e-10


def test_complete_graph_spectrum():
    """K_4: lambda_2 = -1/3."""
    report = second_eigenvalue(build_action_graph(klein_four()))
    assert report.lambda_2 == pytest.approx(-1 / 3, abs=1e-10)
    assert report.gap == pytest.approx(4 / 3, abs=1e-10)


def test_petersen_spectrum():
    """Petersen graph: Markov eigenvalues 1, 1/3 (x5), -2/3 (x4), checked against networkx."""
    graph = build_action_graph(petersen_generators())
    assert graph.generator_count == 3
    assert nx.is_isomorphic(nx.from_scipy_sparse_array(graph.adjacency()), nx.petersen_graph())
    report = second_eigenvalue(graph, method=SolverMethod.DENSE)
    oracle = np.sort(np.linalg.eigvalsh(nx.to_numpy_array(nx.petersen_graph()) / 3))[::-1]
    assert np.allclose(report.eigenvalues, oracle[:6], atol=1e-10)
    assert report.lambda_2 == pytest.approx(1 / 3, abs=1e-10)
    assert report.lambda_min == pytest.approx(-2 / 3, abs=1e-10)


def test_markov_operator_is_symmetric_and_stochastic(desk_family):
    """Inverse-closed generators give a symmetric, row-stochastic operator that apply() reproduces."""
    draw = np.random.default_rng(4).standard_normal
    for name, graph in corpus(desk_family).items():
        matrix = graph.markov_matrix()
        assert abs(matrix - matrix.T).max() < 1e-15, name
        assert np.allclose(np.asarray(matrix.sum(axis=1)).ravel(), 1.0, atol=1e-15), name
        u, v = draw((graph.n_vertices, 2)), draw((graph.n_vertices, 2))
        assert np.allclose(graph.apply(u), matrix @ u, atol=1e-12), name
        assert np.allclose(u.T @ graph.apply(v), graph.apply(u).T @ v, atol=1e-10), name


def test_iterative_solvers_agree_with_dense_on_corpus(desk_family):
    """Lanczos and power deflation stay within 10 tol of the dense eigenvalues on every corpus graph."""
    tol = 1e-9
    for name, graph in corpus(desk_family).items():
        dense = second_eigenvalue(graph, method=SolverMethod.DENSE)
        lanczos = second_eigenvalue(graph, method=SolverMethod.LANCZOS, tol=tol, seed=1)
        power = second_eigenvalue(graph, method=SolverMethod.POWER_DEFLATION, tol=tol, seed=1)
        assert power.converged, name
        assert abs(lanczos.lambda_2 - dense.lambda_2) <= 10 * tol, name
        assert abs(power.lambda_2 - dense.lambda_2) <= 10 * tol, name
        assert abs(lanczos.lambda_min - dense.lambda_min) <= 10 * tol, name
        assert abs(power.lambda_min - dense.lambda_min) <= 10 * tol, name


def test_solvers_agree_on_desk_family(desk_family):
    """Dense, Lanczos and power deflation give the same lambda_2 on the 49-point graph."""
    graph = build_action_graph(desk_family.elements)
    dense = second_eigenvalue(graph, method=SolverMethod.DENSE)
    lanczos = second_eigenvalue(graph, method=SolverMethod.LANCZOS, tol=1e-10)
    power = second_eigenvalue(graph, method=SolverMethod.POWER_DEFLATION, tol=1e-9, seed=3)
    assert power.converged
    assert lanczos.lambda_2 == pytest.approx(dense.lambda_2, abs=1e-6)
    assert power.lambda_2 == pytest.approx(dense.lambda_2, abs=1e-6)
    assert power.lambda_min == pytest.approx(dense.lambda_min, abs=1e-6)
    assert dense.lambda_2 < 1.0 - 1e-6
    assert dense.components == 1


def test_solver_is_seed_reproducible(desk_family):
    """Same seed, same report."""
    graph = build_action_graph(desk_family.elements)
    a = second_eigenvalue(graph, method=SolverMethod.POWER_DEFLATION, tol=1e-8, seed=5)
    b = second_eigenvalue(graph, method=SolverMethod.POWER_DEFLATION, tol=1e-8, seed=5)
    assert a.to_dict() == b.to_dict()


def test_disconnected_graph_has_lambda2_one():
    """<(0 1)> on 3 points leaves a fixed point: two components, lambda_2 = 1."""
    report = second_eigenvalue(build_action_graph([Permutation.from_cycles([(0, 1)], 3)]))
    assert report.components == 2
    assert report.lambda_2 == pytest.approx(1.0, abs=1e-12)


def test_tuple_graph_size_and_budget(desk_family):
    """Ordered 2-tuples of 49 points: 49 * 48 vertices; a smaller budget refuses."""
    graph = build_action_graph(desk_family.elements, GraphKind.SCHREIER_TUPLES, r=2)
    assert graph.n_vertices == 49 * 48
    assert graph.components() == 1
    with pytest.raises(BudgetExceededError):
        build_action_graph(desk_family.elements, GraphKind.SCHREIER_TUPLES, r=2, vertex_budget=1000)


def test_tuple_graph_edges_follow_the_action():
    """Tuple vertex maps agree with the pointwise action."""
    gens = alt4_generators()
    graph = build_action_graph(gens, GraphKind.SCHREIER_TUPLES, r=2, close_inverses=False)
    assert graph.n_vertices == 12
    assert graph.components() == 1
    # vertex order is itertools.permutations order
    tuples = [(a, b) for a in range(4) for b in range(4) if a != b]
    for s, g in enumerate(gens):
        for v, (a, b) in enumerate(tuples):
            assert tuples[graph.maps[s, v]] == (g(a), g(b))


def test_cayley_graph_of_alt4():
    """Cayley graph of Alt(4): 12 vertices, connected; a non-generating set is not."""
    group = build_bsgs(alt4_generators())
    graph = build_action_graph(alt4_generators(), GraphKind.CAYLEY, group=group)
    assert graph.n_vertices == 12
    assert graph.generator_count == 4
    assert graph.components() == 1
    partial = build_action_graph(alt4_generators()[:1], GraphKind.CAYLEY, group=group)
    assert partial.components() == 4


def test_threaded_apply_matches_serial(desk_family):
    """Operator application does not depend on the worker count."""
    graph = build_action_graph(desk_family.elements, GraphKind.SCHREIER_TUPLES, r=3)
    x = np.random.default_rng(0).standard_normal((graph.n_vertices, 2))
    assert np.array_equal(graph.apply(x, threads=1), graph.apply(x, threads=4))


def test_empty_generator_list_rejected():
    with pytest.raises(ValueError):
        build_action_graph([])


# ---------------------------------------------------------------------------
# Delta powers
# ---------------------------------------------------------------------------

def test_delta_power_probe_respects_spectral_bound(desk_family):
    """||Delta^t v|| <= lambda_*^t and the telescoping inequality hold on random probes."""
    graph = build_action_graph(desk_family.elements)
    report = second_eigenvalue(graph)
    probe = delta_power_probe(graph, power=6, probes=10, seed=1, lambda_star=report.lambda_star)
    assert probe.telescoping_holds
    assert probe.bound_holds
    assert len(probe.ratios) == 10 and len(probe.ratios[0]) == 6
    assert all(r[k + 1] <= r[k] + 1e-12 for r in probe.ratios for k in range(5))


def test_delta_eighth_power_on_pair_graph_with_c_samples(desk_construction):
    """C-sample family on ordered pairs (2352 vertices): ||Delta^8 v|| <= lambda_*^8 and telescoping."""
    family = desk_construction.c_family(12, seed=0)
    graph = build_action_graph(family.elements, GraphKind.SCHREIER_TUPLES, r=2)
    assert graph.n_vertices == 2352
    report = second_eigenvalue(graph, method=SolverMethod.DENSE)
    assert report.lambda_star >= report.lambda_2
    decay = delta_power_probe(graph, power=8, probes=20, seed=0, lambda_star=report.lambda_star)
    assert decay.probes == 20
    assert decay.bound_holds
    assert decay.max_ratio <= (report.lambda_star + 1e-10) ** 8
    assert decay.telescoping_holds
    assert decay.max_telescoping_excess <= 1e-12


def test_delta_power_probe_alternating_vector():
    """On C_8 the alternating vector is fixed in norm: ratio 1 at every power."""
    v = np.array([(-1.0) ** k for k in range(8)])[:, None]
    probe = delta_power_probe(build_action_graph([rotation(8)]), power=4, probe_vectors=v)
    assert probe.max_ratio == pytest.approx(1.0, abs=1e-12)
    assert probe.telescoping_holds


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------

def test_expansion_complete_graph():
    """K_4: every pair has the other two as boundary, epsilon = 1."""
    report = brute_force_expansion(build_action_graph(klein_four()))
    assert report.exact == Fraction(1)
    assert report.to_dict()["exact"] == "1/1"


def test_expansion_cycle_graph():
    """C_8: a half-arc of 4 vertices has 2 boundary vertices."""
    graph = build_action_graph([rotation(8)])
    report = brute_force_expansion(graph)
    assert report.exact == Fraction(1, 2)
    witness = report.witness
    assert 1 <= len(witness) <= 4
    assert Fraction(len(vertex_boundary(graph, witness)), len(witness)) == report.exact
    nx_graph = nx.cycle_graph(8)
    assert len(nx.node_boundary(nx_graph, witness)) == len(vertex_boundary(graph, witness))


def test_expansion_with_isolated_vertex():
    """A fixed point is a subset with empty boundary."""
    report = brute_force_expansion(build_action_graph([Permutation.from_cycles([(0, 1)], 3)]))
    assert report.exact == 0
    assert report.witness == [2]


def test_expansion_budget():
    with pytest.raises(BudgetExceededError):
        brute_force_expansion(build_action_graph([rotation(23)]))


@pytest.mark.parametrize("gens", [[rotation(8)], klein_four(), alt4_generators()])
def test_cheeger_interval_contains_exact_value(gens):
    """The spectral interval contains the brute-force expansion."""
    graph = build_action_graph(gens)
    exact = brute_force_expansion(graph).exact
    interval = cheeger_interval(second_eigenvalue(graph))
    assert interval.contains(float(exact))
    assert interval.upper <= graph.n_vertices - 1


# ---------------------------------------------------------------------------
# Kazhdan constants
# ---------------------------------------------------------------------------

def test_kazhdan_z2():
    """Z/2 = <(0 1)>: the sign representation moves every vector by 2."""
    bounds = kazhdan_numeric([Permutation.from_cycles([(0, 1)], 2)], restarts=2)
    assert bounds.group_order == 2
    assert bounds.kazhdan == pytest.approx(2.0, abs=1e-6)
    assert bounds.epsilon0 == pytest.approx(1.0, abs=1e-5)


def test_kazhdan_z3():
    """Z/3 = <(0 1 2)>: |omega - 1| = sqrt(3)."""
    bounds = kazhdan_numeric([Permutation.from_cycles([(0, 1, 2)], 3)], restarts=2)
    assert bounds.kazhdan == pytest.approx(math.sqrt(3), abs=1e-5)


def test_kazhdan_sym3(sym3_generators):
    """Sym(3) = <(0 1), (0 1 2)>: sign gives 2, standard gives sqrt(3), the global value sqrt(12/7)."""
    bounds = kazhdan_numeric(sym3_generators, restarts=8, seed=0)
    by_dim = {e.dim: e for e in bounds.per_irrep}
    assert set(by_dim) == {1, 2}
    assert by_dim[1].value == pytest.approx(2.0, abs=1e-5)
    assert by_dim[2].value == pytest.approx(math.sqrt(3), abs=1e-4)
    assert "dim=2" in bounds.argmin_irrep
    assert bounds.kazhdan == pytest.approx(math.sqrt(12 / 7), abs=1e-3)
    assert bounds.kazhdan_dual_lower <= bounds.kazhdan + 1e-6
    assert bounds.kazhdan_dual_lower == pytest.approx(math.sqrt(12 / 7), abs=1e-3)
    assert bounds.kazhdan <= min(e.value for e in bounds.per_irrep) + 1e-6


def test_kazhdan_order_limit():
    gens = [Permutation.from_cycles([(0, 1)], 5), rotation(5)]
    with pytest.raises(BudgetExceededError):
        kazhdan_numeric(gens)


@pytest.mark.parametrize("gens", [
    [Permutation.from_cycles([(0, 1)], 2)],
    [Permutation.from_cycles([(0, 1, 2)], 3)],
    [rotation(5)],
    klein_four(),
    [Permutation.from_cycles([(0, 1)], 3), Permutation.from_cycles([(0, 1, 2)], 3)],
    [rotation(4), Permutation.from_cycles([(0, 2)], 4)],
    alt4_generators(),
], ids=["Z2", "Z3", "Z5", "Klein", "Sym3", "D4", "Alt4"])
def test_exact_expansion_dominates_kazhdan_bound(gens):
    """On the Cayley graph, brute-force epsilon >= K^2 / 4 up to the optimizer tolerance."""
    group = build_bsgs(gens)
    exact = brute_force_expansion(build_action_graph(gens, GraphKind.CAYLEY, group=group)).exact
    bounds = kazhdan_numeric(gens, restarts=4, seed=0, group=group)
    assert 0 < bounds.kazhdan
    assert float(exact) >= kazhdan_to_expansion(min(bounds.kazhdan, 2.0)) - 1e-3


def test_kazhdan_to_expansion():
    assert kazhdan_to_expansion(2.0) == pytest.approx(1.0)
    assert kazhdan_to_expansion(0.5) == pytest.approx(0.0625)
    for bad in (0.0, -1.0, 2.5):
        with pytest.raises(ValueError):
            kazhdan_to_expansion(bad)


# ---------------------------------------------------------------------------
# Baselines and exports
# ---------------------------------------------------------------------------

def test_desk_family_gap(desk_family):
    """The 49-point Schreier graph of F_N has spectral gap above 0.05."""
    report = second_eigenvalue(build_action_graph(desk_family.elements), method=SolverMethod.DENSE)
    assert report.components == 1
    assert report.gap > 0.05


def test_abelian_baseline_is_far_below_the_construction(desk_family):
    """Z/1000 with two random generators: median gap under 0.01, at least 5 times below F_N's."""
    baseline = random_cayley_baseline(BaselineGroup.CYCLIC, 1000, 2, trials=20, seed=0)
    assert baseline.trials == 20
    assert baseline.median_gap < 0.01
    desk_gap = second_eigenvalue(build_action_graph(desk_family.elements), method=SolverMethod.DENSE).gap
    assert desk_gap >= 5 * baseline.median_gap


@pytest.mark.slow
def test_wide_family_gap():
    """K = 63, d = 2: the 3969-point graph of F_N is connected with a positive gap."""
    family = CubeConstruction(ExperimentConfig(d=2, m_mat=6)).build_F_N()
    graph = build_action_graph(family.elements)
    assert graph.n_vertices == 3969
    report = second_eigenvalue(graph, method=SolverMethod.LANCZOS, tol=1e-8, seed=0)
    assert report.components == 1
    assert 0 < report.gap < 1


def test_baseline_full_set_is_complete_graph():
    """All rotations of Z/7: lambda_2 = -1/6 in every trial."""
    report = random_cayley_baseline(BaselineGroup.CYCLIC, 7, 6, trials=3, seed=0)
    assert report.trials == 3
    assert all(lam == pytest.approx(-1 / 6, abs=1e-9) for lam in report.lambda_2)
    assert report.median_gap == pytest.approx(7 / 6, abs=1e-9)


def test_baseline_is_reproducible():
    a = random_cayley_baseline(BaselineGroup.ALTERNATING, 5, 2, trials=4, seed=11)
    b = random_cayley_baseline(BaselineGroup.ALTERNATING, 5, 2, trials=4, seed=11, threads=2)
    assert a.lambda_2 == b.lambda_2
    assert a.min_gap <= a.median_gap <= a.max_gap


def test_dot_export_lists_every_vertex():
    graph = build_action_graph(alt4_generators(), GraphKind.CAYLEY)
    dot = graph_to_dot(graph)
    assert dot.startswith("graph cayley {")
    vertex_lines = [line for line in dot.splitlines() if line.strip().rstrip(";").isdigit()]
    assert len(vertex_lines) == 12
    assert dot.count(" -- ") == 2 * 12


def test_matrix_market_export():
    text = graph_to_matrix_market(build_action_graph([rotation(8)]))
    assert text.startswith("%%MatrixMarket matrix coordinate real symmetric")
