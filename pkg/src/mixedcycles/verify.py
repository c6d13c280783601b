"""Independent certificate checkers.

Nothing here calls the matching, component or search code. Checks are made
edge by edge against the graph, so a bug in a producer cannot hide itself
by agreeing with its own verifier.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .exact import Surd
from .graph import Colour, ColouredGraph


def _edge_ok(G: ColouredGraph, u: int, v: int, colour: Colour) -> bool:
    return 0 <= u < G.n and 0 <= v < G.n and u != v and colour in G.colours(u, v)


def verify_matching(G: ColouredGraph, edges: Iterable, colour: Colour) -> list[str]:
    problems = []
    used: set[int] = set()
    for e in edges:
        u, v = e
        if not _edge_ok(G, u, v, colour):
            problems.append(f"edge {u}-{v} is not a {colour} edge")
        for x in (u, v):
            if x in used:
                problems.append(f"vertex {x} is covered twice")
            used.add(x)
    return problems


def verify_walk(G: ColouredGraph, walk, colour: Colour, closed: bool = True) -> list[str]:
    problems = []
    steps = len(walk) if closed else len(walk) - 1
    for i in range(steps):
        u, v = walk[i], walk[(i + 1) % len(walk)]
        if not _edge_ok(G, u, v, colour):
            problems.append(f"walk step {u}-{v} is not a {colour} edge")
    return problems


def verify_connected_matching(G: ColouredGraph, cert, colour: Optional[Colour] = None,
                              min_vertices=None, require_odd: bool = False) -> list[str]:
    """Check a :class:`ConnectedMatchingCertificate` against ``G``.

    Replays the parent tree to confirm the component is connected in the
    colour, and walks the odd witness to confirm it is a closed odd walk.
    """
    m = cert.matching
    colour = m.colour if colour is None else colour
    problems = []
    if m.colour != colour:
        problems.append(f"matching is {m.colour}, expected {colour}")
    problems += verify_matching(G, m.edges, colour)
    comp = set(cert.component)
    for u, v in m.edges:
        for x in (u, v):
            if x not in comp:
                problems.append(f"matched vertex {x} lies outside the component")
    if min_vertices is not None and 2 * len(m.edges) < min_vertices:
        problems.append(f"matching covers {2 * len(m.edges)} vertices, needs {min_vertices}")

    if comp:
        parent = cert.parent
        roots = [v for v in comp if parent.get(v, -1) is None]
        if len(roots) != 1:
            problems.append(f"spanning tree has {len(roots)} roots")
        for v in comp:
            if v not in parent:
                problems.append(f"component vertex {v} missing from spanning tree")
                continue
            p = parent[v]
            if p is None:
                continue
            if p not in comp:
                problems.append(f"tree parent {p} of {v} lies outside the component")
            elif not _edge_ok(G, v, p, colour):
                problems.append(f"tree edge {v}-{p} is not a {colour} edge")
        # every vertex must reach the root without revisiting
        depth_known: dict[int, bool] = {}
        for v in comp:
            seen = []
            x = v
            ok = False
            while True:
                if x in depth_known:
                    ok = depth_known[x]
                    break
                if x in seen or x not in comp:
                    break
                seen.append(x)
                p = parent.get(x, -1)
                if p is None:
                    ok = True
                    break
                if p == -1:
                    break
                x = p
            for y in seen:
                depth_known[y] = ok
            if not ok:
                problems.append(f"vertex {v} does not reach the tree root")
                break

    w = cert.odd_witness
    if w is not None:
        if len(w) % 2 == 0 or len(w) < 3:
            problems.append(f"odd witness has length {len(w)}")
        problems += verify_walk(G, list(w), colour)
        if any(x not in comp for x in w):
            problems.append("odd witness leaves the component")
    elif require_odd and m.edges:
        problems.append("odd connected-matching lacks an odd witness")
    return problems


def verify_cycle(G: ColouredGraph, cycle, colour: Colour, length: Optional[int] = None,
                 at_least: Optional[int] = None, within: Optional[Iterable[int]] = None) -> list[str]:
    problems = []
    cyc = list(cycle)
    if len(cyc) < 3:
        problems.append(f"cycle has only {len(cyc)} vertices")
    if len(set(cyc)) != len(cyc):
        problems.append("cycle repeats a vertex")
    if length is not None and len(cyc) != length:
        problems.append(f"cycle has length {len(cyc)}, expected {length}")
    if at_least is not None and len(cyc) < at_least:
        problems.append(f"cycle has length {len(cyc)}, needs at least {at_least}")
    if within is not None:
        allowed = set(within)
        if any(v not in allowed for v in cyc):
            problems.append("cycle leaves the allowed vertex set")
    problems += verify_walk(G, cyc, colour)
    return problems


def cross_degree(G: ColouredGraph, v: int, others: Iterable[int], colour: Optional[Colour] = None) -> int:
    """Neighbours of ``v`` among ``others`` counted pair by pair."""
    if colour is None:
        return sum(1 for u in others if u != v and G.has_edge(u, v))
    return sum(1 for u in others if u != v and colour in G.colours(u, v))


# -- lemma outcomes ------------------------------------------------------------


def _root(eta, q: int) -> Surd:
    return Surd.power(eta, q)


def _misses(G: ColouredGraph, v: int, others, colour: Colour) -> int:
    return sum(1 for u in others if colour not in G.colours(u, v))


def h_clause_problems(G: ColouredGraph, X1, X2, g1: Colour, g2: Colour, c2) -> list[str]:
    """Dense/sparse clauses on ``X1`` and across ``[X1, X2]`` with tolerance ``c2``.

    Interior degrees are measured against ``|X1| - 1``, cross degrees
    against the size of the opposite side.
    """
    problems = []
    n1, n2 = len(X1), len(X2)
    for v in X1:
        if c2 * (n1 - 1) < (n1 - 1) - cross_degree(G, v, X1, g1):
            problems.append(f"(b) vertex {v}: {g1} degree inside too low")
        if c2 * (n1 - 1) < cross_degree(G, v, X1, g2):
            problems.append(f"(b) vertex {v}: {g2} degree inside too high")
        if n2:
            if c2 * n2 < n2 - cross_degree(G, v, X2, g2):
                problems.append(f"(c) vertex {v}: {g2} cross degree too low")
            if c2 * n2 < cross_degree(G, v, X2, g1):
                problems.append(f"(c) vertex {v}: {g1} cross degree too high")
    for u in X2:
        if c2 * n1 < n1 - cross_degree(G, u, X1, g2):
            problems.append(f"(c) vertex {u}: {g2} cross degree too low")
        if c2 * n1 < cross_degree(G, u, X1, g1):
            problems.append(f"(c) vertex {u}: {g1} cross degree too high")
    return problems


def check_skb_partition(G: ColouredGraph, out) -> list[str]:
    """Clause-by-clause check of a partition alternative of the red/blue detector."""
    p = out.params
    a, b, e, k = p["alpha"], p["beta"], p["eta"], p["k"]
    h, theta = _root(e, 2), _root(e, 16)
    W, V1, V2 = list(out.payload["W"]), list(out.payload["V1"]), list(out.payload["V2"])
    problems = []
    if sorted(W + V1 + V2) != list(range(G.n)):
        problems.append("W, V', V'' do not partition the vertices")
    if out.outcome == "iii":
        g1, g2 = Colour.RED, Colour.BLUE
        cap1, cap2 = h * a * k + a * k, h * b * k / 2 + b * k / 2
    else:
        g1, g2 = Colour.BLUE, Colour.RED
        cap1, cap2 = h * b * k + b * k, _root(e, 8) * a * k / 2 + a * k / 2
        if not b > (1 - _root(e, 8)) * a:
            problems.append("(iv) requires beta > (1 - eta^(1/8)) alpha")
    if not cap1 > len(V1):
        problems.append(f"(a) |V'| = {len(V1)} too large")
    if not cap2 >= len(V2):
        problems.append(f"(a) |V''| = {len(V2)} too large")
    if not theta * k >= len(W):
        problems.append(f"(a) |W| = {len(W)} too large")
    problems += h_clause_problems(G, V1, V2, g1, g2, theta)
    return problems


def _check_component(G, cert, need) -> list[str]:
    problems = verify_connected_matching(G, cert)
    if not len(cert.component) >= need:
        problems.append(f"component has {len(cert.component)} vertices, needs {float(need):.3f}")
    return problems


def _check_matching(G, cert, colour, need, odd=False) -> list[str]:
    problems = verify_connected_matching(G, cert, colour, require_odd=odd)
    if not cert.vertex_count >= need:
        problems.append(f"matching covers {cert.vertex_count} vertices, needs {float(need):.3f}")
    return problems


def _check_stars(G, stars, others, colour, allowance, label) -> list[str]:
    problems = []
    if not stars:
        problems.append(f"{label} is empty")
    for v in stars:
        miss = _misses(G, v, others, colour)
        if not miss <= allowance:
            problems.append(f"{label} vertex {v} misses {miss} {colour} edges")
    return problems


def verify_lemma_outcome(G: ColouredGraph, out) -> list[str]:
    """Re-check a lemma outcome against the lemma's conclusion for its recorded parameters."""
    p, pay, tag = out.params, out.payload, out.outcome
    lemma = out.lemma
    R, B = Colour.RED, Colour.BLUE
    if lemma == "dgf0":
        return _check_component(G, pay["component"], (1 - 3 * p["eta"]) * p["K"])
    if lemma == "dgf1":
        e, K = p["eta"], p["K"]
        if tag == "i":
            return _check_component(G, pay["component"], K - _root(e, 2) * 2 * K)
        W = set(p["W"])
        rest = [v for v in range(G.n) if v not in W]
        allowance = _root(e, 2) * 3 * K
        problems = _check_stars(G, pay["W_r"], rest, R, allowance, "W_r")
        problems += _check_stars(G, pay["W_b"], rest, B, allowance, "W_b")
        if not set(pay["W_r"]) | set(pay["W_b"]) <= W:
            problems.append("star vertices outside the hole")
        return problems
    if lemma == "twoholes":
        e, K, A, Bs = p["eta"], p["K"], list(p["A"]), list(p["B"])
        if tag == "i":
            return _check_component(G, pay["component"], (1 - 7 * e) * K)
        if tag == "ii":
            A1, A2, B1, B2 = (list(pay[x]) for x in ("A1", "A2", "B1", "B2"))
            problems = []
            if sorted(A1 + A2) != sorted(A) or sorted(B1 + B2) != sorted(Bs):
                problems.append("parts do not partition A and B")
            for part in (A1, A2, B1, B2):
                if not len(part) >= 3 * e * K:
                    problems.append(f"part of size {len(part)} below 3 eta K")
            for i, Ai in enumerate((A1, A2)):
                for j, Bj in enumerate((B1, B2)):
                    want = frozenset({R}) if i == j else frozenset({B})
                    for u in Ai:
                        for v in Bj:
                            cs = G.colours(u, v)
                            if cs and cs != want:
                                problems.append(f"edge {u}-{v} between A{i + 1} and B{j + 1} is {sorted(map(str, cs))}")
            return problems
        allowance = 4 * e * K
        if tag == "iii":
            return (_check_stars(G, pay["A_r"], Bs, R, allowance, "A_r")
                    + _check_stars(G, pay["A_b"], Bs, B, allowance, "A_b")
                    + (["A_r or A_b not inside A"] if not set(pay["A_r"]) | set(pay["A_b"]) <= set(A) else []))
        if tag == "iv":
            return (_check_stars(G, pay["B_r"], A, R, allowance, "B_r")
                    + _check_stars(G, pay["B_b"], A, B, allowance, "B_b")
                    + (["B_r or B_b not inside B"] if not set(pay["B_r"]) | set(pay["B_b"]) <= set(Bs) else []))
        return [f"unknown outcome {tag}"]
    if lemma == "skb":
        a, b, e, k = p["alpha"], p["beta"], p["eta"], p["k"]
        h = _root(e, 2)
        if tag in ("i", "i'"):
            return _check_matching(G, pay["matching"], R, h * a * k + a * k, odd=(tag == "i'"))
        if tag == "ii":
            return _check_matching(G, pay["matching"], B, h * b * k + b * k)
        if tag in ("iii", "iv"):
            return check_skb_partition(G, out)
        return [] if tag == "inconclusive" else [f"unknown outcome {tag}"]
    if lemma == "skbe":
        e, k = p["eps"], p["k"]
        need = Surd(Fraction(2, 3) * k, -7 * k, e, 8)
        return _check_matching(G, pay["matching"], R if tag == "i" else B, need)
    if lemma == "largew":
        i = int(tag) - 1
        al = (p["alpha1"], p["alpha2"], p["alpha3"])[i]
        return _check_matching(G, pay["matching"], Colour(i), (al + p["eta"]) * p["k"])
    if lemma == "hole":
        base = p["alpha"] if tag == "red" else p["beta"]
        return _check_matching(G, pay["matching"], R if tag == "red" else B, (base + p["eta"]) * p["k"])
    return [f"unknown lemma {lemma}"]


# -- decompositions ------------------------------------------------------------


def _green_pieces(G: ColouredGraph, verts) -> list[tuple[list[int], bool]]:
    """Green components inside ``verts`` with a bipartiteness flag, by plain 2-colouring."""
    verts = list(verts)
    side: dict[int, int] = {}
    pieces = []
    for s in verts:
        if s in side:
            continue
        side[s] = 0
        queue = [s]
        comp = [s]
        bip = True
        while queue:
            v = queue.pop()
            for u in verts:
                if u == v or Colour.GREEN not in G.colours(u, v):
                    continue
                if u not in side:
                    side[u] = side[v] ^ 1
                    queue.append(u)
                    comp.append(u)
                elif side[u] == side[v]:
                    bip = False
        pieces.append((sorted(comp), bip))
    return pieces


def _green_between(G: ColouredGraph, S, T) -> list[tuple[int, int]]:
    return [(u, v) for u in S for v in T if u != v and Colour.GREEN in G.colours(u, v)]


def _green_inside(G: ColouredGraph, S) -> list[tuple[int, int]]:
    S = sorted(S)
    return [(u, v) for i, u in enumerate(S) for v in S[i + 1:] if Colour.GREEN in G.colours(u, v)]


def check_parity_decomposition(G: ColouredGraph, dec) -> list[str]:
    problems = []
    Vp, Vd = list(dec.V_prime), list(dec.V_dprime)
    if sorted(Vp + Vd) != list(range(G.n)):
        problems.append("V' and V'' do not partition the vertices")
    for comp, bip in _green_pieces(G, Vp):
        if not bip:
            problems.append(f"(i) green graph on V' is not bipartite near {comp[0]}")
    for comp, bip in _green_pieces(G, Vd):
        if bip:
            problems.append(f"(ii) green component {comp} inside V'' is not odd")
    edges = len(_green_inside(G, Vd))
    if 2 * edges > dec.m * len(Vd):
        problems.append(f"(iii) V'' has {edges} green edges, above m|V''|/2")
    if _green_between(G, Vp, Vd):
        problems.append("(iv) green edge between V' and V''")
    for a, b in dec.bipartitions:
        if _green_inside(G, a) or _green_inside(G, b):
            problems.append("stated bipartition has a green edge inside a side")
    return problems


def check_xyw(G: ColouredGraph, dec) -> list[str]:
    problems = []
    X, Y, W = list(dec.X), list(dec.Y), list(dec.W)
    if sorted(X + Y + W) != list(range(G.n)):
        problems.append("X, Y, W do not partition the vertices")
    if len(X) < len(Y):
        problems.append("|X| < |Y|")
    if _green_inside(G, X):
        problems.append("green edge inside X")
    if _green_inside(G, Y):
        problems.append("green edge inside Y")
    if _green_between(G, X + Y, W):
        problems.append("green edge between X u Y and W")
    for comp, bip in _green_pieces(G, W):
        if bip:
            problems.append(f"bipartite green component {comp} placed in W")
    return problems


def check_case_e(G: ColouredGraph, dec) -> list[str]:
    """Split, attachment and green-freeness of the residual graph, plus the shape of the discards."""
    problems = []
    M, N, P, Q = (list(x) for x in (dec.M, dec.N, dec.P, dec.Q))
    if sorted(M + N + P + Q) != list(range(G.n)):
        problems.append("M, N, P, Q do not partition the vertices")
    F = dec.F.matching
    problems += verify_matching(G, F.edges, Colour.GREEN)
    Ms, Ns = set(M), set(N)
    if sorted(M + N) != sorted(F.vertices):
        problems.append("split: M u N differs from V(F)")
    for u, v in F.edges:
        if not ((u in Ms and v in Ns) or (u in Ns and v in Ms)):
            problems.append(f"split: F-edge {u}-{v} not split between M and N")
    if len(dec.discarded_green_edges) > len(F.edges):
        problems.append("more discarded edges than F-edges")
    Ps = set(P)
    for u, v in dec.discarded_green_edges:
        if not ({u, v} & Ns and {u, v} & Ps):
            problems.append(f"discarded edge {u}-{v} is not an N-P pair")
    R = G.without(dec.discarded_green_edges, Colour.GREEN)
    for p in P:
        if not any(Colour.GREEN in R.colours(p, x) for x in M):
            problems.append(f"attachment: P-vertex {p} has no green edge to M")
    for name, S, T in (("N,P", N, P), ("M,Q", M, Q), ("N,Q", N, Q), ("P,Q", P, Q)):
        bad = _green_between(R, S, T)
        if bad:
            problems.append(f"green-free: green edge {bad[0]} in G[{name}]")
    bad = _green_inside(R, P)
    if bad:
        problems.append(f"green-free: green edge {bad[0]} in G[P]")
    return problems


def wrong_cross_edges(G: ColouredGraph, A, B, keep: Colour) -> list[tuple[int, int]]:
    return [(a, b) for a in A for b in B if G.colours(a, b) and G.colours(a, b) != frozenset({keep})]


def wrong_inside_edges(G: ColouredGraph, A, keep: Colour) -> list[tuple[int, int]]:
    A = sorted(A)
    out = []
    for i, u in enumerate(A):
        for v in A[i + 1:]:
            cs = G.colours(u, v)
            if cs and cs != frozenset({keep}):
                out.append((u, v))
    return out


def mono_cycle_lengths(G: ColouredGraph, colour: Colour, limit: Optional[int] = None) -> set[int]:
    """Every length of a ``colour`` cycle, by plain enumeration of simple paths.

    Exponential; meant for checking small graphs only. Lengths above
    ``limit`` are not explored.
    """
    n = G.n
    adj = [[v for v in range(n) if _edge_ok(G, u, v, colour)] for u in range(n)]
    top = n if limit is None else min(n, limit)
    found: set[int] = set()

    def walk(start, path, used):
        last = path[-1]
        if len(path) >= 3 and start in adj[last]:
            found.add(len(path))
        if len(path) == top:
            return
        for nxt in adj[last]:
            if nxt > start and nxt not in used:
                used.add(nxt)
                path.append(nxt)
                walk(start, path, used)
                path.pop()
                used.discard(nxt)

    for s in range(n):
        walk(s, [s], {s})
    return found
