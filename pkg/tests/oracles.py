"""Brute-force reference implementations used only by the tests.

Nothing here imports the algorithms under test; graphs are read through
``G.colours(u, v)`` alone.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from mixedcycles.graph import COLOURS, Colour, GraphBuilder, build_graph
from mixedcycles.structures import HStructure, KStarStructure, KStructure

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN

SUBSETS = [frozenset(s) for r in range(4) for s in itertools.combinations(COLOURS, r)]


def random_graph(rng: random.Random, n: int, density: float = 0.6, colours=COLOURS, multi: float = 0.2):
    assignments = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() >= density:
                continue
            cs = {rng.choice(colours)}
            if rng.random() < multi:
                cs.add(rng.choice(colours))
            assignments.append((u, v, cs))
    return build_graph(n, assignments)


@st.composite
def graphs(draw, min_n=0, max_n=8, colours=COLOURS):
    n = draw(st.integers(min_n, max_n))
    subsets = [s for s in SUBSETS if s <= frozenset(colours)]
    assignments = []
    for u in range(n):
        for v in range(u + 1, n):
            s = draw(st.sampled_from(subsets))
            if s:
                assignments.append((u, v, set(s)))
    return build_graph(n, assignments)


def colour_edges(G, colour, within=None):
    vs = range(G.n) if within is None else sorted(within)
    return [(u, v) for u, v in itertools.combinations(vs, 2) if colour in G.colours(u, v)]


def max_matching_size(edges) -> int:
    """Maximum matching (edge count) by recursion over vertex subsets.

    The lowest remaining vertex is either left unmatched or matched to one
    of its remaining neighbours; results are memoised per subset.
    """
    adj: dict = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    memo: dict = {}

    def best(S):
        if not S:
            return 0
        if S in memo:
            return memo[S]
        v = min(S)
        rest = S - {v}
        out = best(rest)
        for u in adj[v] & rest:
            out = max(out, 1 + best(rest - {u}))
        memo[S] = out
        return out

    return best(frozenset(adj))


def components(G, colour):
    """Components of the colour graph as (vertex set, is bipartite) for non-isolated vertices."""
    adj = {v: set() for v in range(G.n)}
    for u, v in colour_edges(G, colour):
        adj[u].add(v)
        adj[v].add(u)
    seen, out = set(), []
    for s in range(G.n):
        if s in seen or not adj[s]:
            continue
        side = {s: 0}
        stack, comp, bip = [s], {s}, True
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in side:
                    side[y] = 1 - side[x]
                    comp.add(y)
                    stack.append(y)
                elif side[y] == side[x]:
                    bip = False
        seen |= comp
        out.append((comp, bip))
    return out


def largest_connected_matching_edges(G, colour, odd=False) -> int:
    best = 0
    for comp, bip in components(G, colour):
        if odd and bip:
            continue
        best = max(best, max_matching_size(colour_edges(G, colour, comp)))
    return best


def cycle_lengths(G, colour) -> set[int]:
    """All cycle lengths of the colour graph, by enumerating vertex sequences."""
    n = G.n
    found = set()
    for L in range(3, n + 1):
        for combo in itertools.combinations(range(n), L):
            first = combo[0]
            for rest in itertools.permutations(combo[1:]):
                if rest[0] > rest[-1]:
                    continue
                cyc = (first,) + rest
                if all(colour in G.colours(cyc[i], cyc[(i + 1) % L]) for i in range(L)):
                    found.add(L)
                    break
            if L in found:
                break
    return found


def has_cycle(G, colour, length) -> bool:
    n = G.n
    for combo in itertools.combinations(range(n), length):
        first = combo[0]
        for rest in itertools.permutations(combo[1:]):
            cyc = (first,) + rest
            if all(colour in G.colours(cyc[i], cyc[(i + 1) % length]) for i in range(length)):
                return True
    return False


def cycle_lengths_by_subsets(G, colour) -> set[int]:
    """All cycle lengths, by growing paths from the least vertex of each vertex subset.

    ``ends[S]`` holds the vertices at which a path through exactly ``S``
    that starts at ``min(S)`` can end; ``S`` carries a cycle when such an
    end is adjacent to the start.
    """
    n = G.n
    adj = [sum(1 << u for u in range(n) if u != v and colour in G.colours(u, v)) for v in range(n)]
    ends = [0] * (1 << n)
    for s in range(n):
        ends[1 << s] = 1 << s
    found = set()
    for S in range(1, 1 << n):
        e = ends[S]
        if not e:
            continue
        start = (S & -S).bit_length() - 1
        size = bin(S).count("1")
        higher = ~((1 << (start + 1)) - 1)
        x = e
        while x:
            low = x & -x
            v = low.bit_length() - 1
            x ^= low
            if size >= 3 and adj[v] >> start & 1:
                found.add(size)
            nxt = adj[v] & ~S & higher
            while nxt:
                w = nxt & -nxt
                ends[S | w] |= w
                nxt ^= w
    return found


# -- structure classes, straight from the definitions ------------------------------

K_PAIRS = {(1, 3): Colour.RED, (2, 3): Colour.BLUE, (3, 3): Colour.GREEN}
KSTAR_PAIRS = {(1, 3): Colour.RED, (2, 4): Colour.RED, (1, 4): Colour.BLUE, (2, 3): Colour.BLUE,
               (1, 2): Colour.GREEN, (3, 4): Colour.GREEN}


def _almost_complete(G, span, budget, colours):
    for v in span:
        miss = sum(1 for u in span if u != v and not (G.colours(u, v) & set(colours)))
        if miss > budget:
            return False
    return True


def _h_inside_ok(G, X1, params) -> bool:
    """The conditions of H that only involve pairs inside X1."""
    g1, g2, c2 = params["gamma1"], params["gamma2"], params["c2"]
    for v in X1:
        others = [u for u in X1 if u != v]
        if len(others) - sum(g1 in G.colours(u, v) for u in others) > c2 * len(others):
            return False
        if sum(g2 in G.colours(u, v) for u in others) > c2 * len(others):
            return False
    return True


def is_member(G, kind, parts, params) -> bool:
    """Whether ``G`` restricted to ``parts`` belongs to the class with ``params``."""
    span = [v for p in parts for v in p]
    if kind == "H":
        X1, X2 = parts
        g1, g2, c2 = params["gamma1"], params["gamma2"], params["c2"]
        if len(X1) < params["x1"] or len(X2) < params["x2"]:
            return False
        if not _almost_complete(G, span, params["c1"], (g1, g2)):
            return False
        if not _h_inside_ok(G, X1, params):
            return False
        for side, other in ((X1, X2), (X2, X1)):
            for v in side:
                if len(other) - sum(g2 in G.colours(u, v) for u in other) > c2 * len(other):
                    return False
                if sum(g1 in G.colours(u, v) for u in other) > c2 * len(other):
                    return False
        return True
    floors = [params["x1"], params["x2"], params["x3"]] if kind == "K" else \
        [params["x1"], params["x2"], params["y1"], params["y2"]]
    if any(len(p) < f for p, f in zip(parts, floors)):
        return False
    if kind == "K*" and len(parts[2]) + len(parts[3]) < params["z"]:
        return False
    if not _almost_complete(G, span, params["c"], (Colour.RED, Colour.BLUE, Colour.GREEN)):
        return False
    rules = K_PAIRS if kind == "K" else KSTAR_PAIRS
    for (i, j), colour in rules.items():
        for u in parts[i - 1]:
            for v in parts[j - 1]:
                if u == v:
                    continue
                cs = G.colours(u, v)
                if cs and cs != {colour}:
                    return False
    return True


def _subsets(pool):
    pool = list(pool)
    for r in range(len(pool) + 1):
        yield from itertools.combinations(pool, r)


def _only(G, u, v, colour):
    cs = G.colours(u, v)
    return not cs or cs == {colour}


def structure_exists(G, kind, params) -> bool:
    """Enumerate every choice of parts (vertices may stay unused) and test membership.

    Parts are chosen one after another. A choice is abandoned as soon as
    the parts fixed so far break a rule that adding vertices cannot
    repair: an exclusivity rule, too many uncoloured pairs at one vertex,
    or (for H) a condition living entirely inside X1. The final test is
    :func:`is_member`.
    """
    V = range(G.n)
    if kind == "H":
        pair = (params["gamma1"], params["gamma2"])
        for X1 in _subsets(V):
            if not _almost_complete(G, X1, params["c1"], pair) or not _h_inside_ok(G, X1, params):
                continue
            rest = [v for v in V if v not in X1]
            for X2 in _subsets(rest):
                if is_member(G, kind, [list(X1), list(X2)], params):
                    return True
        return False
    c = params["c"]

    def dense(*parts):
        return _almost_complete(G, [v for p in parts for v in p], c, COLOURS)

    if kind == "K":
        for X3 in _subsets(V):
            if not all(_only(G, u, v, Colour.GREEN) for u, v in itertools.combinations(X3, 2)) or not dense(X3):
                continue
            rest = [v for v in V if v not in X3]
            red_ok = [v for v in rest if all(_only(G, v, x, Colour.RED) for x in X3)]
            blue_ok = [v for v in rest if all(_only(G, v, x, Colour.BLUE) for x in X3)]
            for X1 in _subsets(red_ok):
                if not dense(X3, X1):
                    continue
                for X2 in _subsets([v for v in blue_ok if v not in X1]):
                    if is_member(G, kind, [list(X1), list(X2), list(X3)], params):
                        return True
        return False
    for X1 in _subsets(V):
        if not dense(X1):
            continue
        rest = [v for v in V if v not in X1]
        for X2 in _subsets([v for v in rest if all(_only(G, v, x, Colour.GREEN) for x in X1)]):
            if not dense(X1, X2):
                continue
            rest2 = [v for v in rest if v not in X2]
            y1_ok = [v for v in rest2 if all(_only(G, v, x, Colour.RED) for x in X1)
                     and all(_only(G, v, x, Colour.BLUE) for x in X2)]
            y2_ok = [v for v in rest2 if all(_only(G, v, x, Colour.BLUE) for x in X1)
                     and all(_only(G, v, x, Colour.RED) for x in X2)]
            for Y1 in _subsets(y1_ok):
                if not dense(X1, X2, Y1):
                    continue
                pool = [v for v in y2_ok if v not in Y1 and all(_only(G, v, y, Colour.GREEN) for y in Y1)]
                for Y2 in _subsets(pool):
                    if is_member(G, kind, [list(X1), list(X2), list(Y1), list(Y2)], params):
                        return True
    return False


# -- templates shared by the structure tests ----------------------------------------

TEMPLATES = [
    ("K", KStructure((), (), (), 1, 1, 2, 1), dict(x1=1, x2=1, x3=2, c=1)),
    ("K", KStructure((), (), (), 1, 1, 1, 0), dict(x1=1, x2=1, x3=1, c=0)),
    ("K*", KStarStructure((), (), (), (), 1, 1, 1, 1, 2, 0), dict(x1=1, x2=1, y1=1, y2=1, z=2, c=0)),
    ("K*", KStarStructure((), (), (), (), 1, 1, 0, 1, 2, 1), dict(x1=1, x2=1, y1=0, y2=1, z=2, c=1)),
    ("H", HStructure((), (), 3, 1, 0, 0, RED, BLUE), dict(x1=3, x2=1, c1=0, c2=0, gamma1=RED, gamma2=BLUE)),
    ("H", HStructure((), (), 3, 2, 1, Fraction(1, 3), BLUE, GREEN),
     dict(x1=3, x2=2, c1=1, c2=Fraction(1, 3), gamma1=BLUE, gamma2=GREEN)),
]


def noisy(G, rng, flips):
    gb = GraphBuilder(G.n)
    for u in range(G.n):
        for v in range(u + 1, G.n):
            gb.set_pair(u, v, G.colours(u, v))
    for _ in range(flips):
        u, v = rng.sample(range(G.n), 2)
        gb.set_pair(u, v, rng.choice([set(), {RED}, {BLUE}, {GREEN}, {RED, GREEN}]))
    return gb.build()
