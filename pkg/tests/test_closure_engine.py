import pytest

from src.errors import InvariantViolation, PreconditionError
from src.models.graph import Edge, Graph
from src.models.pattern import Pattern
from src.services.closure_engine import (
    CopyWitness, InfectionStep, closure, completes_copy, has_copy, percolates, replay,
)
from tests.helpers import brute_force_witness, k_minus_edge, naive_closure, random_graph

K33 = Pattern(3, 3)

# --- Обнаружение копий ---

def test_completes_copy_returns_lexicographically_smallest_witness():
    witness = completes_copy(k_minus_edge(6), Edge(0, 1), K33)
    assert witness == CopyWitness(side_a=(0, 2, 3), side_b=(1, 4, 5))

def test_completes_copy_witness_is_valid():
    g = k_minus_edge(7)
    for pattern in (Pattern(2, 2), Pattern(3, 2), K33, Pattern(4, 3)):
        witness = completes_copy(g, Edge(0, 1), pattern)
        assert witness.is_valid_for(g, Edge(0, 1), pattern)

def test_completes_copy_on_present_edge():
    with pytest.raises(PreconditionError):
        completes_copy(Graph.complete(6), Edge(0, 1), K33)

def test_too_few_vertices_means_no_copy():
    assert completes_copy(k_minus_edge(5), Edge(0, 1), K33) is None
    assert not has_copy(k_minus_edge(5), Edge(0, 1), K33)

def test_unbalanced_pattern_tries_both_orientations():
    # the only K_{3,2} through (0, 1) has 0 on the 2-side
    g = Graph.from_edges(5, [(1, 2), (0, 3), (2, 3), (0, 4), (2, 4)])
    witness = completes_copy(g, Edge(0, 1), Pattern(3, 2))
    assert witness == CopyWitness(side_a=(1, 3, 4), side_b=(0, 2))
    assert witness.is_valid_for(g, Edge(0, 1), Pattern(3, 2))

@pytest.mark.parametrize("pattern", [Pattern(2, 2), Pattern(3, 2), Pattern(3, 3), Pattern(4, 2)])
@pytest.mark.parametrize("p", [0.3, 0.6, 0.85])
def test_detection_agrees_with_brute_force(pattern, p):
    for seed in range(15):
        g = random_graph(7, p, seed)
        for edge in g.missing_edges():
            expected = brute_force_witness(g, edge, pattern)
            assert completes_copy(g, edge, pattern) == expected, (seed, edge)
            assert has_copy(g, edge, pattern) is (expected is not None)

# --- Замыкание ---

def test_k6_minus_edge_percolates_in_one_step():
    result = closure(k_minus_edge(6), K33)
    assert result.percolated
    assert result.infection_count == 1
    assert result.trace[0] == InfectionStep(t=1, edge=Edge(0, 1), copy=CopyWitness((0, 2, 3), (1, 4, 5)))

def test_path_closes_to_a_four_cycle_under_k22():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    result = closure(g, Pattern(2, 2))
    assert result.infected_edges() == [Edge(0, 3)]
    assert not result.percolated

def test_empty_graph_stays_empty():
    result = closure(Graph(8), K33)
    assert result.trace == []
    assert result.final.edge_count == 0
    assert not percolates(Graph(8), K33)

@pytest.mark.parametrize("pattern", [Pattern(2, 2), Pattern(3, 3), Pattern(4, 3)])
def test_isolated_vertex_blocks_percolation(pattern):
    for seed in range(10):
        dense = random_graph(10, 0.8, 300 + seed)
        g = Graph.from_edges(10, [e for e in dense.edges() if 0 not in (e.u, e.v)])
        result = closure(g, pattern)
        assert not result.percolated
        assert not percolates(g, pattern)
        assert all(0 not in (step.edge.u, step.edge.v) for step in result.trace), seed

def test_complete_graph_percolates_trivially():
    assert percolates(Graph.complete(4), K33)

def test_input_graph_is_not_mutated():
    g = random_graph(9, 0.5, 4)
    before = g.copy()
    closure(g, K33)
    assert g == before

def test_trace_numbering_and_replay():
    g = random_graph(9, 0.6, 11)
    result = closure(g, K33)
    assert [step.t for step in result.trace] == list(range(1, len(result.trace) + 1))
    assert replay(g, result.trace, K33) == result.final
    result.final.check_invariants()

def test_replay_rejects_forged_witness():
    g = k_minus_edge(6)
    forged = [InfectionStep(t=1, edge=Edge(0, 1), copy=CopyWitness((0, 2, 3), (1, 4, 2)))]
    with pytest.raises(InvariantViolation):
        replay(g, forged, K33)

def test_no_trace_mode():
    result = closure(k_minus_edge(6), K33, record_trace=False)
    assert result.percolated
    assert result.trace == []

def test_detector_seam():
    calls = []

    def never(graph, edge, pattern):
        calls.append(edge)
        return None

    result = closure(k_minus_edge(6), K33, detector=never)
    assert result.infection_count == 0
    assert calls

def test_lying_detector_is_caught_by_verification_pass():
    seen = set()

    def first_pass_only(graph, edge, pattern):
        # answers "no" the first time an edge is asked about
        if edge not in seen:
            seen.add(edge)
            return None
        return completes_copy(graph, edge, pattern)

    with pytest.raises(InvariantViolation):
        closure(k_minus_edge(6), K33, detector=first_pass_only)

def test_initial_order_must_be_a_permutation():
    with pytest.raises(PreconditionError):
        closure(k_minus_edge(6), K33, initial_order=[Edge(0, 2)])

# --- Эквивалентность с наивным оракулом ---

@pytest.mark.parametrize("pattern", [Pattern(2, 2), Pattern(3, 2), Pattern(3, 3)])
@pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
def test_engine_matches_naive_closure(pattern, p):
    for seed in range(67):
        g = random_graph(6 + seed % 4, p, 1000 + seed)
        assert closure(g, pattern).final == naive_closure(g, pattern), (pattern, p, seed)

def test_pattern_monotonicity():
    for seed in range(20):
        g = random_graph(9, 0.45, seed)
        big = closure(g, Pattern(4, 3)).final
        mid = closure(g, K33).final
        small = closure(g, Pattern(2, 2)).final
        assert big.is_subgraph_of(mid)
        assert mid.is_subgraph_of(small)
