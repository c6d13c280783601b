import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from mixedcycles.decomposition import (
    Purified,
    Violation,
    case_e_decomposition,
    green_parity_decomposition,
    green_XYW,
    purify_inside,
    purify_pair,
)
from mixedcycles.errors import PreconditionError
from mixedcycles.graph import Colour, GraphBuilder, mono_components
from mixedcycles.matching import (
    ConnectedMatchingCertificate,
    Matching,
    largest_odd_connected_matching,
    max_bipartite_matching,
)
from mixedcycles.verify import (
    check_case_e,
    check_parity_decomposition,
    check_xyw,
    verify_connected_matching,
    wrong_cross_edges,
    wrong_inside_edges,
)

from oracles import components, graphs, random_graph

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN


def green_cycle(gb, vs):
    for i, v in enumerate(vs):
        gb.set_pair(v, vs[(i + 1) % len(vs)], {GREEN})


def cert_of(G, edges):
    anchor = edges[0][0]
    comp = next(c for c in mono_components(G, GREEN).components if c.mask >> anchor & 1)
    return ConnectedMatchingCertificate(Matching(GREEN, tuple(edges)), comp.vertices, dict(comp.parent), comp.odd_cycle)


# -- parity decomposition -------------------------------------------------------------


def test_parity_c6_and_c5():
    gb = GraphBuilder(11)
    green_cycle(gb, list(range(6)))
    green_cycle(gb, list(range(6, 11)))
    G = gb.build()
    dec = green_parity_decomposition(G, 6)
    assert dec.V_prime == tuple(range(6)) and dec.V_dprime == tuple(range(6, 11))
    assert check_parity_decomposition(G, dec) == []


def test_parity_k5_carries_certificate():
    G = GraphBuilder(5).clique(range(5), {GREEN}).build()
    with pytest.raises(PreconditionError) as err:
        green_parity_decomposition(G, 4)
    cert = err.value.details["certificate"]
    assert cert.vertex_count >= 4 and cert.odd
    assert verify_connected_matching(G, cert, GREEN, require_odd=True) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 20), st.integers(0, 2**30))
def test_parity_bipartite_green_has_empty_odd_part(n, seed):
    rng = random.Random(seed)
    side = [rng.random() < 0.5 for _ in range(n)]
    gb = GraphBuilder(n)
    for u in range(n):
        for v in range(u + 1, n):
            if side[u] != side[v] and rng.random() < 0.5:
                gb.set_pair(u, v, {GREEN})
            elif rng.random() < 0.5:
                gb.set_pair(u, v, {RED})
    G = gb.build()
    dec = green_parity_decomposition(G, 3)
    assert dec.V_dprime == ()
    assert check_parity_decomposition(G, dec) == []


@settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(graphs(3, 12), st.integers(3, 12))
def test_parity_invariants_on_accepted_instances(G, m):
    if m > G.n:
        return
    try:
        dec = green_parity_decomposition(G, m)
    except PreconditionError as err:
        assert err.details["certificate"].vertex_count >= m
        return
    assert check_parity_decomposition(G, dec) == []
    odd = {v for comp, bip in components(G, GREEN) if not bip for v in comp}
    assert set(dec.V_dprime) == odd


# -- X / Y / W ---------------------------------------------------------------------------


def test_xyw_c4_with_isolated_vertices():
    gb = GraphBuilder(6)
    green_cycle(gb, [0, 1, 2, 3])
    gb.set_pair(4, 5, {RED})
    G = gb.build()
    dec = green_XYW(G)
    assert dec.W == ()
    assert len(dec.X) >= len(dec.Y) and len(dec.X) + len(dec.Y) == 6
    assert check_xyw(G, dec) == []


def test_xyw_triangle_and_c4():
    gb = GraphBuilder(7)
    green_cycle(gb, [0, 1, 2])
    green_cycle(gb, [3, 4, 5, 6])
    G = gb.build()
    dec = green_XYW(G, k=7)
    assert dec.W == (0, 1, 2)
    assert {frozenset(dec.X), frozenset(dec.Y)} == {frozenset({3, 5}), frozenset({4, 6})}
    assert dec.w == pytest.approx(3 / 7)


@settings(max_examples=150, deadline=None)
@given(graphs(0, 14))
def test_xyw_invariants(G):
    dec = green_XYW(G)
    assert check_xyw(G, dec) == []


def test_xyw_deterministic():
    G = random_graph(random.Random(3), 30)
    assert green_XYW(G) == green_XYW(G)


# -- Case E -----------------------------------------------------------------------------------


def test_case_e_triangle_with_pendant():
    gb = GraphBuilder(6).clique(range(6), {RED})
    green_cycle(gb, [0, 1, 2])
    gb.set_pair(0, 3, {GREEN}).remove_pair(4, 5)
    G = gb.build()
    dec = case_e_decomposition(G, cert_of(G, [(0, 3), (1, 2)]))
    assert dec.L == (0, 1, 2, 3) and dec.P == () and dec.Q == (4, 5)
    assert check_case_e(G, dec) == []


def test_case_e_k5_plus_pendant():
    gb = GraphBuilder(6).clique(range(5), {GREEN}).set_pair(5, 0, {GREEN})
    G = gb.build()
    F = largest_odd_connected_matching(G, GREEN)
    dec = case_e_decomposition(G, F)
    assert len(dec.L) == 6 and dec.P == () and dec.Q == ()
    assert check_case_e(G, dec) == []


def test_case_e_rejects_augmentable():
    gb = GraphBuilder(6).clique(range(5), {GREEN}).set_pair(5, 0, {GREEN})
    G = gb.build()
    with pytest.raises(PreconditionError) as err:
        case_e_decomposition(G, cert_of(G, [(1, 2)]))
    path = err.value.details["augmenting_path"]
    assert len(path) % 2 == 0


def test_case_e_rejects_bipartite_component():
    gb = GraphBuilder(4)
    green_cycle(gb, [0, 1, 2, 3])
    G = gb.build()
    with pytest.raises(PreconditionError):
        case_e_decomposition(G, cert_of(G, [(0, 1), (2, 3)]))


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(graphs(3, 14))
def test_case_e_invariants(G):
    F = largest_odd_connected_matching(G, GREEN)
    if not F.matching.edges:
        return
    dec = case_e_decomposition(G, F)
    assert check_case_e(G, dec) == []
    # after discards no F-edge has both endpoints with green P-neighbours
    R = dec.residual(G)
    for u, v in F.matching.edges:
        hits = [x for x in (u, v) if any(GREEN in R.colours(x, p) for p in dec.P)]
        assert len(hits) <= 1


# -- purification ------------------------------------------------------------------------


def test_purify_pair_clean():
    G = GraphBuilder(10).join(range(5), range(5, 10), {RED}).build()
    res = purify_pair(G, range(5), range(5, 10), RED, 0)
    assert isinstance(res, Purified) and res.discarded_A == () and res.discarded_B == ()


def test_purify_pair_violation():
    G = GraphBuilder(10).join(range(5), range(5, 10), {BLUE}).build()
    res = purify_pair(G, range(5), range(5, 10), RED, 4)
    assert isinstance(res, Violation)
    assert res.matching.colour == BLUE and res.matching.vertex_count == 10
    assert res.certificate is not None
    assert verify_connected_matching(G, res.certificate, BLUE) == []


def test_purify_pair_single_wrong_edge():
    gb = GraphBuilder(10).join(range(5), range(5, 10), {RED}).set_pair(0, 5, {BLUE})
    res = purify_pair(gb.build(), range(5), range(5, 10), RED, 4)
    assert isinstance(res, Purified)
    assert len(res.discarded_A) + len(res.discarded_B) == 1


def test_purify_pair_rejects_overlap():
    with pytest.raises(PreconditionError):
        purify_pair(GraphBuilder(4).build(), [0, 1], [1, 2], RED, 0)


@settings(max_examples=200, deadline=None)
@given(graphs(2, 14), st.integers(0, 14), st.integers(0, 8), st.sampled_from([RED, BLUE, GREEN]))
def test_purify_pair_dichotomy(G, cut, threshold, keep):
    cut = min(cut, G.n)
    A, B = list(range(cut)), list(range(cut, G.n))
    res = purify_pair(G, A, B, keep, threshold)
    if isinstance(res, Violation):
        assert res.matching.vertex_count > threshold and res.matching.colour != keep
        return
    assert wrong_cross_edges(G, res.kept_A, res.kept_B, keep) == []
    nus = [max_bipartite_matching(G, c, A, B).vertex_count // 2 for c in (RED, BLUE, GREEN) if c != keep]
    assert all(2 * nu <= threshold for nu in nus)
    assert len(res.discarded_A) + len(res.discarded_B) <= sum(nus)
    assert sorted(res.discarded_A + res.kept_A) == A
    assert sorted(res.discarded_B + res.kept_B) == B


def test_purify_inside_clean():
    G = GraphBuilder(6).clique(range(6), {GREEN}).build()
    res = purify_inside(G, range(6), GREEN, 0)
    assert isinstance(res, Purified) and res.discarded_A == ()


def test_purify_inside_violation():
    G = GraphBuilder(6).clique(range(6), {RED}).build()
    res = purify_inside(G, range(6), GREEN, 4)
    assert isinstance(res, Violation) and res.matching.colour == RED and res.matching.vertex_count == 6


def test_purify_inside_single_wrong_edge():
    gb = GraphBuilder(6).clique(range(6), {GREEN}).set_pair(2, 4, {BLUE})
    res = purify_inside(gb.build(), range(6), GREEN, 2)
    assert isinstance(res, Purified) and len(res.discarded_A) == 1


def test_purify_inside_threshold_per_colour():
    gb = GraphBuilder(6).clique(range(6), {GREEN}).set_pair(0, 1, {RED}).set_pair(2, 3, {BLUE})
    G = gb.build()
    assert isinstance(purify_inside(G, range(6), GREEN, {RED: 2, BLUE: 0}), Violation)
    assert isinstance(purify_inside(G, range(6), GREEN, {RED: 2, BLUE: 2}), Purified)


@settings(max_examples=200, deadline=None)
@given(graphs(1, 12), st.integers(0, 8), st.sampled_from([RED, BLUE, GREEN]))
def test_purify_inside_dichotomy(G, threshold, keep):
    A = list(range(G.n))
    res = purify_inside(G, A, keep, threshold)
    if isinstance(res, Violation):
        assert res.matching.vertex_count > threshold
        return
    assert wrong_inside_edges(G, res.kept_A, keep) == []
    assert sorted(res.discarded_A + res.kept_A) == A
    # each wrong colour costs at most its matching endpoints
    assert len(res.discarded_A) <= 2 * threshold


def test_purification_is_deterministic():
    G = random_graph(random.Random(11), 24)
    A, B = range(12), range(12, 24)
    assert purify_pair(G, A, B, RED, 30) == purify_pair(G, A, B, RED, 30)
    assert purify_inside(G, A, GREEN, 30) == purify_inside(G, A, GREEN, 30)
