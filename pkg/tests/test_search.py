import pytest
from hypothesis import given, settings, strategies as st

from mixedcycles.errors import BudgetExceeded, PreconditionError
from mixedcycles.graph import Colour, GraphBuilder, ramsey_formula_A
from mixedcycles.search import (
    CycleQuery,
    applicable_patterns,
    construct_lower_bound,
    find_mono_cycle,
    ramsey_search,
)
from mixedcycles.verify import verify_cycle

from oracles import cycle_lengths, cycle_lengths_by_subsets, graphs, has_cycle

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN


def red_c5():
    gb = GraphBuilder(5)
    for i in range(5):
        gb.set_pair(i, (i + 1) % 5, {RED})
    return gb.build()


# -- cycle queries ------------------------------------------------------------------------


def test_red_c5_found():
    cyc = find_mono_cycle(red_c5(), CycleQuery(RED, 5))
    assert cyc is not None and sorted(cyc) == list(range(5))


def test_red_c5_has_no_c4():
    assert find_mono_cycle(red_c5(), CycleQuery(RED, 4)) is None
    assert find_mono_cycle(red_c5(), CycleQuery(BLUE, 3)) is None


def test_k6_hamilton_cycle():
    G = GraphBuilder(6).clique(range(6), {BLUE}).build()
    cyc = find_mono_cycle(G, CycleQuery(BLUE, 6))
    assert verify_cycle(G, cyc, BLUE, length=6) == []


def test_at_least_mode():
    G = GraphBuilder(7).clique(range(7), {GREEN}).build()
    cyc = find_mono_cycle(G, CycleQuery(GREEN, 5, "at-least"))
    assert len(cyc) >= 5
    assert find_mono_cycle(red_c5(), CycleQuery(RED, 6, "at-least")) is None


def test_query_validation():
    with pytest.raises(PreconditionError):
        CycleQuery(RED, 2)
    with pytest.raises(PreconditionError):
        CycleQuery(RED, 4, "some")


def test_budget_is_distinct_from_absence():
    G = GraphBuilder(12).clique(range(12), {RED}).remove_pair(0, 1).build()
    with pytest.raises(BudgetExceeded):
        find_mono_cycle(G, CycleQuery(RED, 12), budget=1)


@settings(max_examples=150, deadline=None)
@given(graphs(0, 8), st.sampled_from([RED, BLUE, GREEN]), st.integers(3, 8))
def test_exact_query_agrees_with_enumeration(G, colour, length):
    cyc = find_mono_cycle(G, CycleQuery(colour, length))
    assert (cyc is not None) == has_cycle(G, colour, length)
    if cyc is not None:
        assert verify_cycle(G, cyc, colour, length=length) == []


@settings(max_examples=100, deadline=None)
@given(graphs(0, 8), st.sampled_from([RED, BLUE, GREEN]), st.integers(3, 8))
def test_at_least_query_agrees_with_enumeration(G, colour, length):
    cyc = find_mono_cycle(G, CycleQuery(colour, length, "at-least"))
    assert (cyc is not None) == any(L >= length for L in cycle_lengths(G, colour))


@settings(max_examples=150, deadline=None)
@given(graphs(0, 7), st.sampled_from([RED, BLUE, GREEN]))
def test_two_cycle_oracles_agree(G, colour):
    assert cycle_lengths_by_subsets(G, colour) == cycle_lengths(G, colour)


# -- constructions ---------------------------------------------------------------------------


def test_touch_sets_6_4_5():
    G = construct_lower_bound("touch-sets", 6, 4, 5)
    assert G.n == 7
    assert not has_cycle(G, RED, 6) and not has_cycle(G, BLUE, 4) and not has_cycle(G, GREEN, 5)


def test_touch_sets_4_4_3_is_tiny():
    G = construct_lower_bound("touch-sets", 4, 4, 3)
    assert G.n == 4
    assert not has_cycle(G, RED, 4) and not has_cycle(G, BLUE, 4) and not has_cycle(G, GREEN, 3)


def test_green_bipartite_rr_sides():
    G = construct_lower_bound("green-bipartite-rr", 4, 4, 3)
    assert G.n == 2 * (4 + 2 - 2)
    side = G.n // 2
    for half in (range(side), range(side, G.n)):
        H, _ = G.induced(list(half))
        assert max(cycle_lengths(H, RED), default=0) <= 3
    assert cycle_lengths(G, GREEN) <= {4, 6, 8}


@pytest.mark.parametrize("n,m,l", [(4, 4, 5), (6, 4, 5), (6, 6, 7), (8, 4, 9), (10, 6, 3)])
def test_every_pattern_is_target_free(n, m, l):
    for pattern in ("touch-sets", "green-bipartite-rr", "green-bipartite-bb"):
        G = construct_lower_bound(pattern, n, m, l, verify=False)
        for colour, length in ((RED, n), (BLUE, m), (GREEN, l)):
            assert find_mono_cycle(G, CycleQuery(colour, length)) is None


def test_applicable_patterns_reach_formula_minus_one():
    for n, m, l in [(4, 4, 5), (6, 4, 5), (6, 6, 7), (8, 4, 9), (4, 4, 9)]:
        pats = applicable_patterns(n, m, l)
        assert pats
        for p in pats:
            assert construct_lower_bound(p, n, m, l, verify=False).n == ramsey_formula_A(n, m, l) - 1


def test_parity_is_checked():
    with pytest.raises(PreconditionError):
        construct_lower_bound("touch-sets", 5, 4, 3)
    with pytest.raises(PreconditionError):
        construct_lower_bound("touch-sets", 6, 4, 4)
    with pytest.raises(PreconditionError):
        construct_lower_bound("star", 6, 4, 3)


# -- Ramsey search ----------------------------------------------------------------------------


def test_triangle_pair():
    assert ramsey_search((3, 3), 5).verdict == "witness-found"
    assert ramsey_search((3, 3), 6).verdict == "all-colourings-hit"


def test_c4_pair():
    r = ramsey_search((4, 4), 6)
    assert r.verdict == "all-colourings-hit" and r.witness is None


def test_three_colours_small():
    r = ramsey_search((4, 4, 3), 5)
    assert r.verdict == "witness-found"
    for c, length in zip((RED, BLUE, GREEN), (4, 4, 3)):
        assert not has_cycle(r.witness, c, length)


def test_witness_is_target_free():
    r = ramsey_search((3, 3), 5)
    assert not has_cycle(r.witness, RED, 3) and not has_cycle(r.witness, BLUE, 3)


def test_class_counts_match_graph_counts():
    # with unreachable targets every colouring survives, so classes = graphs on N vertices
    counts = [ramsey_search((7, 7), N, count=True).stats["witnesses"] for N in range(1, 7)]
    assert counts == [1, 2, 4, 11, 34, 156]


@pytest.mark.parametrize("targets", [(3, 3), (4, 4), (3, 4), (3, 3, 3), (4, 4, 3)])
def test_isomorph_rejection_agrees_with_naive(targets):
    for N in range(1, 6):
        if len(targets) == 3 and N == 5:
            continue  # 3**10 raw colourings; covered below with a single size
        a = ramsey_search(targets, N)
        b = ramsey_search(targets, N, isomorph_rejection=False)
        assert a.verdict == b.verdict


def test_three_colour_naive_at_five():
    a = ramsey_search((3, 3, 3), 5)
    b = ramsey_search((3, 3, 3), 5, isomorph_rejection=False)
    assert a.verdict == b.verdict == "witness-found"


def test_naive_agrees_on_triangle_pair_at_six():
    assert ramsey_search((3, 3), 6, isomorph_rejection=False).verdict == "all-colourings-hit"


def test_search_is_deterministic():
    a, b = ramsey_search((4, 4), 6, seed=3), ramsey_search((4, 4), 6, seed=3)
    assert a.to_json() == b.to_json()


def test_budget_exceeded():
    r = ramsey_search((4, 4), 6, budget=10)
    assert r.verdict == "budget-exceeded" and r.colourings_examined <= 10


def test_oversized_search_refused():
    with pytest.raises(PreconditionError):
        ramsey_search((3, 3, 3), 12)
    with pytest.raises(PreconditionError):
        ramsey_search((2, 3), 4)


def test_report_json():
    data = ramsey_search((3, 3), 5).to_json()
    assert data["verdict"] == "witness-found" and data["witness"]["n"] == 5


def test_three_colourings_of_k6_up_to_isomorphism():
    r = ramsey_search((7, 7, 7), 6, count=True)
    assert r.stats["witnesses"] == 25506
