"""Randomized closure properties: extensive, monotone, idempotent, order independent."""
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from src.models.graph import Edge, Graph
from src.models.pattern import Pattern
from src.services.closure_engine import closure

PATTERNS = [Pattern(2, 2), Pattern(3, 2), Pattern(3, 3)]
PROPERTY_SETTINGS = settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graph_strategy(draw, min_vertices=4, max_vertices=9):
    n = draw(st.integers(min_value=min_vertices, max_value=max_vertices))
    pairs = [Edge(u, v) for u in range(n) for v in range(u + 1, n)]
    present = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, present) if keep])


@st.composite
def nested_graphs(draw):
    small = draw(graph_strategy())
    extra = draw(st.lists(st.sampled_from(list(small.missing_edges()) or [None]), max_size=6))
    big = small.copy()
    for e in extra:
        if e is not None:
            big.add_edge(e)
    return small, big


@given(graph_strategy(), st.sampled_from(PATTERNS))
@PROPERTY_SETTINGS
def test_closure_is_extensive(g, pattern):
    assert g.is_subgraph_of(closure(g, pattern).final)


@given(nested_graphs(), st.sampled_from(PATTERNS))
@PROPERTY_SETTINGS
def test_closure_is_monotone(graphs, pattern):
    small, big = graphs
    assert closure(small, pattern).final.is_subgraph_of(closure(big, pattern).final)


@given(graph_strategy(), st.sampled_from(PATTERNS))
@PROPERTY_SETTINGS
def test_closure_is_idempotent(g, pattern):
    once = closure(g, pattern)
    twice = closure(once.final, pattern)
    assert twice.final == once.final
    assert twice.trace == []


@given(graph_strategy(), st.sampled_from(PATTERNS), st.randoms(use_true_random=False))
@PROPERTY_SETTINGS
def test_closure_set_is_order_independent(g, pattern, rnd):
    order = list(g.missing_edges())
    rnd.shuffle(order)
    assert closure(g, pattern, initial_order=order).final == closure(g, pattern).final


@pytest.mark.parametrize("pattern", PATTERNS)
def test_complete_input_is_a_fixed_point(pattern):
    g = Graph.complete(7)
    assert closure(g, pattern).final == g
