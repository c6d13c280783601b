import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedcycles.errors import GraphError, PreconditionError
from mixedcycles.graph import (
    COLOURS,
    Colour,
    ColouredGraph,
    GraphBuilder,
    bipartite_completeness,
    build_graph,
    completeness_report,
    floor_even,
    floor_odd,
    mono_components,
    ramsey_formula_A,
    ramsey_formula_C,
    threshold_c,
)
from mixedcycles.verify import verify_walk
from oracles import graphs

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN


def cycle_graph(n, colour):
    return build_graph(n, [(i, (i + 1) % n, {colour}) for i in range(n)])


def test_build_two_edges():
    G = build_graph(3, [(0, 1, {"red"}), (1, 2, {"blue"})])
    assert G.edge_count() == 2
    assert G.colours(0, 1) == {RED}
    assert G.colours(0, 2) == frozenset()


@pytest.mark.parametrize("n, assignments", [
    (2, [(0, 0, {"red"})]),
    (2, [(0, 2, {"red"})]),
    (3, [(0, 1, set())]),
    (3, [(0, 1, {"red"}), (1, 0, {"blue"})]),
])
def test_build_rejects_bad_pairs(n, assignments):
    with pytest.raises(GraphError) as exc:
        build_graph(n, assignments)
    assert exc.value.pair is not None


def test_multicolour_edge_in_both_subgraphs():
    G = build_graph(4, [(0, 1, {"red", "green"})])
    assert G.has_edge(0, 1, RED) and G.has_edge(0, 1, GREEN) and not G.has_edge(0, 1, BLUE)


def test_json_round_trip_and_sorted_edges():
    G = build_graph(4, [(2, 3, {"green", "red"}), (0, 1, {"blue"})])
    data = G.to_json()
    assert data["edges"] == [[0, 1, ["blue"]], [2, 3, ["red", "green"]]]
    assert ColouredGraph.from_json(data).to_json() == data


def test_completeness_examples():
    K4 = GraphBuilder(4).clique(range(4), {RED}).build()
    assert completeness_report(K4).a_almost == 0
    assert completeness_report(K4.without([(0, 1)])).a_almost == 1
    assert completeness_report(build_graph(5, [])).a_almost == 4
    with pytest.raises(PreconditionError):
        completeness_report(build_graph(0, []))


def test_bipartite_completeness_examples():
    A, B = [0, 1, 2], [3, 4, 5]
    full = GraphBuilder(6).join(A, B, {RED}).build()
    assert bipartite_completeness(full, A, B).a_almost == 0
    assert bipartite_completeness(full.without([(0, 3), (1, 4), (2, 5)]), A, B).a_almost == 1
    assert bipartite_completeness(full, A, B, BLUE).a_almost == 3
    with pytest.raises(PreconditionError):
        bipartite_completeness(full, [0, 1], [1, 2])


def test_mono_components_examples():
    c5 = mono_components(cycle_graph(5, GREEN), GREEN)
    assert len(c5.components) == 1 and c5.components[0].odd
    assert verify_walk(cycle_graph(5, GREEN), c5.components[0].odd_cycle, GREEN) == []
    c6 = mono_components(cycle_graph(6, GREEN), GREEN)
    assert not c6.components[0].odd and c6.components[0].odd_cycle is None
    G = build_graph(5, [(0, 1, {"green"}), (1, 2, {"green"}), (0, 2, {"green"}), (3, 4, {"green"})])
    flags = [c.odd for c in mono_components(G, GREEN).components]
    assert flags == [True, False]


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=9), st.sampled_from(COLOURS))
def test_components_partition_and_witnesses(G, colour):
    split = mono_components(G, colour)
    seen = set(split.isolated)
    for comp in split.components:
        assert not seen & set(comp.vertices)
        seen |= set(comp.vertices)
        if comp.odd:
            assert len(comp.odd_cycle) % 2 == 1
            assert verify_walk(G, comp.odd_cycle, colour) == []
    assert seen == set(range(G.n))


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=1, max_n=9), st.data())
def test_induced_subgraph_keeps_almost_completeness(G, data):
    a = completeness_report(G).a_almost
    X = data.draw(st.sets(st.integers(0, G.n - 1), min_size=1))
    H, _ = G.induced(sorted(X))
    assert completeness_report(H).a_almost <= a
    assert completeness_report(H).min_degree >= completeness_report(G).min_degree - (G.n - len(X))


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=8))
def test_colour_subgraph_membership(G):
    for u in range(G.n):
        for v in range(u + 1, G.n):
            for c in COLOURS:
                assert G.has_edge(u, v, c) == (c in G.colours(u, v))


def test_floors():
    assert floor_even(7) == 6 and floor_odd(5) == 5 and floor_even(6) == 6
    assert floor_even(Fraction(13, 2)) == 6 and floor_odd(Fraction(9, 2)) == 3
    with pytest.raises(PreconditionError):
        floor_odd(Fraction(1, 2))
    with pytest.raises(PreconditionError):
        floor_even(-1)


@given(st.fractions(min_value=1, max_value=1000))
def test_floors_idempotent(x):
    assert floor_even(floor_even(x)) == floor_even(x) <= x < floor_even(x) + 2
    assert floor_odd(floor_odd(x)) == floor_odd(x) <= x < floor_odd(x) + 2


def test_formulas():
    assert ramsey_formula_A(6, 4, 5) == 13
    assert ramsey_formula_A(4, 4, 9) == 11
    with pytest.raises(PreconditionError):
        ramsey_formula_A(5, 4, 5)
    assert ramsey_formula_C(4, 3, 3) == 13
    assert ramsey_formula_C(4, 5, 3) == 13
    assert ramsey_formula_C(6, 3, 3) == 21
    assert threshold_c(1, 1, 3) == 4
    assert threshold_c(1, 1, 1) == 3
    assert threshold_c(2, 1, 2) == 5
    with pytest.raises(PreconditionError):
        threshold_c(1, 2, 1)


def test_random_graph_builder_agrees_with_build_graph():
    rng = random.Random(4)
    gb = GraphBuilder(6)
    expected = []
    for u in range(6):
        for v in range(u + 1, 6):
            if rng.random() < 0.5:
                cs = {rng.choice(COLOURS)}
                gb.set_pair(u, v, cs)
                expected.append((u, v, cs))
    assert gb.build().to_json() == build_graph(6, expected).to_json()
