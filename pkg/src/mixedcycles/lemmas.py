"""Constructive and checking versions of the tool lemmas.

Each function checks its hypotheses exactly (rationals and surds, no
floats), then either builds the promised object or searches for it with an
exact matcher. A conclusion that fails on valid input raises
:class:`CounterexampleFound` carrying the input and the measurements,
rather than being reported as success.

Where a lemma only holds for unspecified large ``k``, its smallness bound
on the error parameter is multiplied by ``slack`` so desk-scale instances
can be admitted on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import CounterexampleFound, PreconditionError
from .exact import Surd, as_fraction, real_to_json
from .graph import (
    Colour,
    ColouredGraph,
    completeness_report,
    iter_bits,
    mask_of,
    members,
    mono_components,
)
from .cycles import find_cycle
from .verify import check_skb_partition
from .matching import (
    ConnectedMatchingCertificate,
    Matching,
    greedy_almost_complete_matching,
    largest_connected_matching,
    largest_odd_connected_matching,
    max_bipartite_matching,
)

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN

DEFAULT_CYCLE_BUDGET = 10**7


@dataclass
class LemmaOutcome:
    """Result of one lemma run.

    ``outcome`` is the alternative that was established ("i".."iv", or
    "holds" for single-conclusion lemmas, or "inconclusive" for the
    best-effort detector). ``margins`` maps each checked bound to
    ``(measured, required)``.
    """

    lemma: str
    outcome: str
    payload: dict
    params: dict = field(default_factory=dict)
    margins: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def conv(x):
            if isinstance(x, ConnectedMatchingCertificate):
                return x.to_json()
            if isinstance(x, (list, tuple)):
                return [conv(y) for y in x]
            if isinstance(x, dict):
                return {str(k): conv(v) for k, v in x.items()}
            if isinstance(x, Colour):
                return str(x)
            if isinstance(x, (Fraction, Surd)):
                return real_to_json(x)
            return x

        return {
            "lemma": self.lemma,
            "outcome": self.outcome,
            "payload": conv(self.payload),
            "params": conv(self.params),
            "margins": {k: [conv(m), float(r)] for k, (m, r) in self.margins.items()},
        }


# -- shared helpers ----------------------------------------------------------


def _root(eta, q: int, coeff=1, base=0) -> Surd:
    return Surd(base, coeff, eta, q)


def _require(cond: bool, message: str, **details) -> None:
    if not cond:
        raise PreconditionError(message, **details)


def _two_coloured(G: ColouredGraph) -> None:
    _require(GREEN not in G.colours_present(), "graph must use only red and blue")


def _eta(eta, lo=0, hi=None, name="eta") -> Fraction:
    e = as_fraction(eta)
    _require(e > lo, f"{name} must exceed {lo}", **{name: str(e)})
    if hi is not None:
        _require(e < hi, f"{name} must be below {hi}", **{name: str(e)})
    return e


def _component_certificate(comp, colour: Colour) -> ConnectedMatchingCertificate:
    return ConnectedMatchingCertificate(Matching(colour, ()), comp.vertices, dict(comp.parent), comp.odd_cycle)


def _singleton(v: int, colour: Colour) -> ConnectedMatchingCertificate:
    return ConnectedMatchingCertificate(Matching(colour, ()), (v,), {v: None}, None)


def largest_mono_component(G: ColouredGraph, colours=(RED, BLUE)) -> ConnectedMatchingCertificate:
    """Largest component over the given colours; returned as an empty-matching certificate.

    Ties go to the earlier colour, then the lower minimum vertex.
    """
    best = None
    for c in colours:
        for comp in mono_components(G, c).components:
            if best is None or len(comp) > len(best.component):
                best = _component_certificate(comp, c)
    if best is None:
        if G.n == 0:
            return ConnectedMatchingCertificate(Matching(colours[0], ()), (), {}, None)
        return _singleton(0, colours[0])
    return best


def _missing_outside_hole(G: ColouredGraph, hole_masks: list[int]) -> int:
    """Largest number of absent pairs at a vertex, ignoring pairs inside a hole."""
    full = G.full_mask
    worst = 0
    for v in G.vertices:
        allowed = full & ~(1 << v)
        for h in hole_masks:
            if h >> v & 1:
                allowed &= ~h
        worst = max(worst, (allowed & ~G.adjacency(v)).bit_count())
    return worst


# -- cycles --------------------------------------------------------------------


def dirac_cycle(G: ColouredGraph, colour: Colour, within: Optional[Iterable[int]] = None) -> tuple[int, ...]:
    """Hamiltonian cycle of ``G_colour[within]`` under the minimum degree condition.

    Rotation-extension: grow a path greedily at both ends; a maximal path
    closes into a cycle because the end neighbourhoods must cross; a cycle
    short of spanning is reopened at a vertex with a neighbour outside.
    """
    sel = G.full_mask if within is None else mask_of(within)
    n = sel.bit_count()
    _require(n >= 3, "need at least 3 vertices", n=n)
    rows = [G.rows(colour)[v] & sel if sel >> v & 1 else 0 for v in range(G.n)]
    worst = min(iter_bits(sel), key=lambda v: (rows[v].bit_count(), v))
    _require(2 * rows[worst].bit_count() >= n, "minimum degree below half the order",
             worst_vertex=worst, degree=rows[worst].bit_count(), order=n)

    path = [(sel & -sel).bit_length() - 1]
    on = 1 << path[0]
    while True:
        grown = True
        while grown:
            grown = False
            for end in (0, -1):
                cand = rows[path[end]] & ~on
                if cand:
                    u = (cand & -cand).bit_length() - 1
                    on |= 1 << u
                    if end == 0:
                        path.insert(0, u)
                    else:
                        path.append(u)
                    grown = True
        cycle = _close_path(rows, path)
        if len(cycle) == n:
            return tuple(cycle)
        outside = sel & ~on
        for i, v in enumerate(cycle):
            cand = rows[v] & outside
            if cand:
                u = (cand & -cand).bit_length() - 1
                path = cycle[i + 1:] + cycle[:i + 1] + [u]
                on |= 1 << u
                break
        else:  # pragma: no cover - impossible under the degree condition
            raise CounterexampleFound("graph disconnected despite degree condition", {"cycle": cycle})


def _close_path(rows, path: list[int]) -> list[int]:
    first, last = path[0], path[-1]
    if rows[last] >> first & 1:
        return list(path)
    # find i with first ~ path[i+1] and last ~ path[i]
    for i in range(len(path) - 1):
        if rows[first] >> path[i + 1] & 1 and rows[last] >> path[i] & 1:
            return path[: i + 1] + path[i + 1:][::-1]
    raise CounterexampleFound("maximal path did not close", {"path": list(path)})  # pragma: no cover


def erdos_gallai_cycle(G: ColouredGraph, colour: Colour, m: int,
                       budget: int = DEFAULT_CYCLE_BUDGET) -> tuple[int, ...]:
    """A ``colour`` cycle on at least ``m`` vertices in a graph with enough edges.

    Raises :class:`BudgetExceeded` if the backtracking budget runs out and
    :class:`CounterexampleFound` if the search completes without a cycle.
    """
    K = G.n
    _require(3 <= m <= K, "need 3 <= m <= K", m=m, K=K)
    edges = G.edge_count(colour)
    _require(2 * edges >= (m - 1) * (K - 1) + 2, "too few edges",
             edges=edges, required=Fraction((m - 1) * (K - 1), 2) + 1)
    cyc = find_cycle(G, colour, m, at_least=True, budget=budget)
    if cyc is None:
        raise CounterexampleFound("no long cycle despite edge count", {"graph": G.to_json(), "m": m})
    return cyc


def connected_matching_from_degree(G: ColouredGraph, colour: Colour, m: int) -> ConnectedMatchingCertificate:
    K = G.n
    _require(3 <= m <= K, "need 3 <= m <= K", m=m, K=K)
    edges = G.edge_count(colour)
    _require(2 * edges >= m * K, "average degree below m", average=Fraction(2 * edges, K), m=m)
    cert = largest_connected_matching(G, colour)
    if cert.vertex_count < m:
        raise CounterexampleFound("connected-matching below m", {"graph": G.to_json(), "m": m})
    return cert


# -- component lemmas ----------------------------------------------------------


def dgf0_largest_component(G: ColouredGraph, eta) -> LemmaOutcome:
    """Largest monochromatic component of a (1-eta)-complete red/blue graph."""
    e = _eta(eta, 0, Fraction(1, 3))
    K = G.n
    _two_coloured(G)
    _require(K >= 1 / e, "need K >= 1/eta", K=K)
    rep = completeness_report(G)
    _require(rep.is_complete(e), "graph is not (1-eta)-complete", min_degree=rep.min_degree)
    F = largest_mono_component(G)
    need = (1 - 3 * e) * K
    out = LemmaOutcome("dgf0", "holds", {"component": F}, {"eta": e, "K": K},
                       {"component": (len(F.component), need)})
    if len(F.component) < need:
        raise CounterexampleFound("largest component below (1-3eta)K", {"graph": G.to_json(), **out.to_json()})
    return out


def _star_set(G: ColouredGraph, side: int, other: int, colour: Colour, allowance) -> tuple[int, ...]:
    """Vertices of ``side`` with ``colour`` edges to all but at most ``allowance`` of ``other``."""
    rows = G.rows(colour)
    size = other.bit_count()
    return tuple(v for v in iter_bits(side) if size - (rows[v] & other).bit_count() <= allowance)


def dgf1_one_hole(G: ColouredGraph, W: Iterable[int], eta) -> LemmaOutcome:
    """One-hole dichotomy: a huge monochromatic component, or red and blue stars in the hole."""
    e = _eta(eta, 0, Fraction(1, 20))
    K = G.n
    _two_coloured(G)
    _require(K >= 1 / e, "need K >= 1/eta", K=K)
    wm = mask_of(W)
    rest = G.full_mask & ~wm
    h = _root(e, 2)
    _require(h * 4 * K <= wm.bit_count() and h * 4 * K <= rest.bit_count(),
             "hole and its complement need at least 4 eta^(1/2) K vertices",
             W=wm.bit_count(), rest=rest.bit_count())
    for v in iter_bits(wm):
        _require(not G.adjacency(v) & wm, "edge inside the hole", vertex=v)
    miss = _missing_outside_hole(G, [wm])
    _require(miss <= e * (K - 1), "host graph is not (1-eta)-complete", missing=miss)

    params = {"eta": e, "K": K, "W": members(wm)}
    F = largest_mono_component(G)
    need = 1 * K - h * 2 * K
    if need <= len(F.component):
        return LemmaOutcome("dgf1", "i", {"component": F}, params, {"component": (len(F.component), need)})
    allowance = h * 3 * K
    Wr = _star_set(G, wm, rest, RED, allowance)
    Wb = _star_set(G, wm, rest, BLUE, allowance)
    if Wr and Wb:
        return LemmaOutcome("dgf1", "ii", {"W_r": Wr, "W_b": Wb}, params,
                            {"W_r": (len(Wr), 1), "W_b": (len(Wb), 1)})
    raise CounterexampleFound("neither alternative holds", {"graph": G.to_json(), "W": list(members(wm)),
                                                            "eta": str(e)})


def _split_two_holes(G: ColouredGraph, am: int, bm: int, least: int):
    """Partition with red inside A_i-B_i and blue across, all parts >= ``least``.

    Each cross edge forces its ends to the same index (red only) or to
    different indices (blue only); an edge with both colours rules the
    split out. The forced classes are then oriented by a subset-sum over
    ``(|A_1|, |B_1|)``. Returns ``(A1, A2, B1, B2)`` or ``None``.
    """
    parent = list(range(G.n))
    parity = [0] * G.n

    def find(x):
        path = []
        while parent[x] != x:
            path.append(x)
            x = parent[x]
        root = x
        # compress, accumulating parity from the far end
        acc = 0
        for y in reversed(path):
            acc ^= parity[y]
            parity[y] = acc
            parent[y] = root
        return root

    red, blue = G.rows(RED), G.rows(BLUE)
    for a in iter_bits(am):
        for b in iter_bits((red[a] | blue[a]) & bm):
            r, bl = red[a] >> b & 1, blue[a] >> b & 1
            if r and bl:
                return None
            want = 0 if r else 1
            ra, rb = find(a), find(b)
            pa, pb = parity[a], parity[b]
            if ra == rb:
                if pa ^ pb != want:
                    return None
            else:
                parent[ra] = rb
                parity[ra] = pa ^ pb ^ want

    classes: dict[int, list[list[int]]] = {}
    for v in iter_bits(am | bm):
        r = find(v)
        classes.setdefault(r, [[], []])[parity[v]].append(v)
    groups = [classes[r] for r in sorted(classes)]
    na, nb = am.bit_count(), bm.bit_count()
    width = nb + 1

    def counts(vs):
        ca = sum(1 for v in vs if am >> v & 1)
        return ca, len(vs) - ca

    masks = [1]
    options = []
    for g in groups:
        a0, b0 = counts(g[0])
        a1, b1 = counts(g[1])
        options.append(((a0, b0), (a1, b1)))
        prev = masks[-1]
        masks.append((prev << (a0 * width + b0)) | (prev << (a1 * width + b1)))
    final = masks[-1]
    target = None
    for a1 in range(least, na - least + 1):
        for b1 in range(least, nb - least + 1):
            if final >> (a1 * width + b1) & 1:
                target = (a1, b1)
                break
        if target:
            break
    if target is None:
        return None
    a1, b1 = target
    part_one: list[int] = []
    for i in range(len(groups) - 1, -1, -1):
        prev = masks[i]
        (x0, y0), (x1, y1) = options[i]
        if a1 >= x0 and b1 >= y0 and prev >> ((a1 - x0) * width + (b1 - y0)) & 1:
            part_one += groups[i][0]
            a1, b1 = a1 - x0, b1 - y0
        else:
            part_one += groups[i][1]
            a1, b1 = a1 - x1, b1 - y1
    one = mask_of(part_one)
    return members(am & one), members(am & ~one), members(bm & one), members(bm & ~one)


def twoholes_analysis(G: ColouredGraph, A: Iterable[int], B: Iterable[int], eta) -> LemmaOutcome:
    """Four-way dichotomy for a red/blue graph whose only edges run between A and B."""
    e = _eta(eta, 0, Fraction(1, 10))
    K = G.n
    _two_coloured(G)
    _require(K >= 2 / e, "need K >= 2/eta", K=K)
    am, bm = mask_of(A), mask_of(B)
    _require(not am & bm and (am | bm) == G.full_mask, "A and B must partition the vertices")
    _require(min(am.bit_count(), bm.bit_count()) >= 6 * e * K, "A and B need at least 6 eta K vertices",
             A=am.bit_count(), B=bm.bit_count())
    for v in iter_bits(am):
        _require(not G.adjacency(v) & am, "edge inside A", vertex=v)
    for v in iter_bits(bm):
        _require(not G.adjacency(v) & bm, "edge inside B", vertex=v)
    miss = _missing_outside_hole(G, [am, bm])
    _require(miss <= e * (K - 1), "host graph is not (1-eta)-complete", missing=miss)

    params = {"eta": e, "K": K, "A": members(am), "B": members(bm)}
    F = largest_mono_component(G)
    need = (1 - 7 * e) * K
    if len(F.component) >= need:
        return LemmaOutcome("twoholes", "i", {"component": F}, params, {"component": (len(F.component), need)})
    least = math.ceil(3 * e * K)
    split = _split_two_holes(G, am, bm, least)
    if split is not None:
        A1, A2, B1, B2 = split
        return LemmaOutcome("twoholes", "ii", {"A1": A1, "A2": A2, "B1": B1, "B2": B2}, params,
                            {"smallest part": (min(map(len, split)), 3 * e * K)})
    allowance = 4 * e * K
    Ar, Ab = _star_set(G, am, bm, RED, allowance), _star_set(G, am, bm, BLUE, allowance)
    if Ar and Ab:
        return LemmaOutcome("twoholes", "iii", {"A_r": Ar, "A_b": Ab}, params, {"A_r": (len(Ar), 1), "A_b": (len(Ab), 1)})
    Br, Bb = _star_set(G, bm, am, RED, allowance), _star_set(G, bm, am, BLUE, allowance)
    if Br and Bb:
        return LemmaOutcome("twoholes", "iv", {"B_r": Br, "B_b": Bb}, params, {"B_r": (len(Br), 1), "B_b": (len(Bb), 1)})
    raise CounterexampleFound("no alternative holds", {"graph": G.to_json(), "A": list(members(am)),
                                                       "B": list(members(bm)), "eta": str(e)})


# -- bipartite matchings ---------------------------------------------------------


def ten_dense_bipartite(G: ColouredGraph, colour: Colour, A: Iterable[int], B: Iterable[int],
                        eps) -> ConnectedMatchingCertificate:
    """Connected-matching in a dense bipartite colour graph.

    Searches every component of the ``colour`` cross graph with an exact
    bipartite matcher and keeps the best.
    """
    e = _eta(eps, 0, name="eps")
    # the endpoint 1/100 itself is admitted
    _require(e <= Fraction(1, 100), "eps must be at most 1/100", eps=str(e))
    am, bm = mask_of(A), mask_of(B)
    _require(am and bm and not am & bm, "sides must be nonempty and disjoint")
    na, nb = am.bit_count(), bm.bit_count()
    _require(na >= nb, "need |A| >= |B|", A=na, B=nb)
    rows = G.rows(colour)
    cross = [0] * G.n
    for v in iter_bits(am):
        cross[v] = rows[v] & bm
    for v in iter_bits(bm):
        cross[v] = rows[v] & am
    edges = sum(cross[v].bit_count() for v in iter_bits(am))
    _require(edges >= (1 - e) * na * nb, "cross graph too sparse", edges=edges, required=(1 - e) * na * nb)
    H = ColouredGraph(G.n, [cross if c == colour else [0] * G.n for c in Colour])
    best = None
    for comp in mono_components(H, colour).components:
        if best is not None and len(comp) < best.vertex_count + 2:
            continue
        m = max_bipartite_matching(H, colour, members(comp.mask & am), members(comp.mask & bm))
        cert = ConnectedMatchingCertificate(m, comp.vertices, dict(comp.parent), None)
        if best is None or cert.vertex_count > best.vertex_count:
            best = cert
    need = 2 * (1 - 3 * e) * nb
    if best is None or best.vertex_count < need:
        raise CounterexampleFound("dense bipartite matching below bound", {"graph": G.to_json(), "eps": str(e)})
    return best


def eleven_matching(G: ColouredGraph, colour: Colour, A, B, a: int, ell: int) -> ConnectedMatchingCertificate:
    A, B = tuple(A), tuple(B)
    cert = greedy_almost_complete_matching(G, colour, A, B, a, ell)
    nb = len(set(B))
    if cert.vertex_count < 2 * nb - 2 * a:
        raise CounterexampleFound("greedy matching below 2|B|-2a", {"graph": G.to_json(), "a": a})
    return cert


# -- matching-or-structure lemmas ---------------------------------------------------


def _matching_outcome(G: ColouredGraph, colour: Colour, need, odd: bool = False):
    cert = largest_odd_connected_matching(G, colour) if odd else largest_connected_matching(G, colour)
    return cert if cert.vertex_count >= need else None


def _almost_complete_budget(G: ColouredGraph) -> int:
    return completeness_report(G).a_almost if G.n else 0


@dataclass
class _Profile:
    """Colour-degree bookkeeping for the partition search of the detector."""

    G: ColouredGraph
    g1: Colour
    g2: Colour

    def deg(self, v: int, colour: Colour, mask: int) -> int:
        return (self.G.rows(colour)[v] & mask & ~(1 << v)).bit_count()


def _h_violations(P: _Profile, core: int, outer: int, theta: Surd):
    """Vertices breaking (b) or (c) for core ``V'`` and outer set ``V''``."""
    bad_core, bad_outer = [], []
    nc, no = core.bit_count(), outer.bit_count()
    for v in iter_bits(core):
        d1 = P.deg(v, P.g1, core)
        d2 = P.deg(v, P.g2, core)
        worst = 0
        if theta * (nc - 1) < (nc - 1) - d1:
            worst += (nc - 1) - d1
        if theta * (nc - 1) < d2:
            worst += d2
        if no:
            c2 = P.deg(v, P.g2, outer)
            c1 = P.deg(v, P.g1, outer)
            if theta * no < no - c2:
                worst += no - c2
            if theta * no < c1:
                worst += c1
        if worst:
            bad_core.append((worst, v))
    for u in iter_bits(outer):
        c2 = P.deg(u, P.g2, core)
        c1 = P.deg(u, P.g1, core)
        worst = 0
        if theta * nc < nc - c2:
            worst += nc - c2
        if theta * nc < c1:
            worst += c1
        if worst:
            bad_outer.append((worst, u))
    return bad_core, bad_outer


def h_partition_search(G: ColouredGraph, g1: Colour, g2: Colour, theta: Surd,
                       max_core=None, max_outer=None, max_rest=None, within: Optional[int] = None):
    """Greedy search for ``W, V', V''`` with a ``g1``-dense core blue-joined to ``V''``.

    The core starts as every vertex and sheds its worst offender until its
    interior is ``g1``-complete and ``g2``-sparse up to ``theta``; vertices
    outside with a dense ``g2`` join and a sparse ``g1`` join become ``V''``;
    the two sets are then trimmed together until both cross conditions
    hold. Size caps are enforced by moving the highest-index vertices to
    ``W``. ``within`` (a mask) confines all three sets. Returns
    ``(W, V', V'')`` masks, or ``None`` if a cap cannot be met.
    """
    P = _Profile(G, g1, g2)
    span = G.full_mask if within is None else within
    core = span
    while core:
        bad, _ = _h_violations(P, core, 0, theta)
        if not bad:
            break
        core &= ~(1 << max(bad)[1])
    if not core:
        return None
    if max_core is not None:
        while core and core.bit_count() > max_core:
            core &= ~(1 << (core.bit_length() - 1))
    outer = 0
    nc = core.bit_count()
    for u in iter_bits(span & ~core):
        if not theta * nc < nc - P.deg(u, g2, core) and not theta * nc < P.deg(u, g1, core):
            outer |= 1 << u
    if max_outer is not None:
        while outer.bit_count() > max_outer:
            outer &= ~(1 << (outer.bit_length() - 1))
    while core:
        bad_core, bad_outer = _h_violations(P, core, outer, theta)
        if not bad_core and not bad_outer:
            break
        if bad_outer:
            outer &= ~(1 << max(bad_outer)[1])
        else:
            core &= ~(1 << max(bad_core)[1])
    if not core:
        return None
    rest = span & ~core & ~outer
    if max_rest is not None and rest.bit_count() > max_rest:
        return None
    return rest, core, outer


def skb_detector(G: ColouredGraph, alpha, beta, eta, k: int, slack=1) -> LemmaOutcome:
    """Best-effort detector for the red/blue matching-or-structure dichotomy.

    Tries the two matching alternatives with the exact matcher, then looks
    for either partition by :func:`h_partition_search`. Every partition is
    checked against all its clauses before being returned; when nothing
    verifies the outcome is "inconclusive".
    """
    a, b = as_fraction(alpha), as_fraction(beta)
    e = _eta(eta, 0, Fraction(1, 10**20) * as_fraction(slack))
    _two_coloured(G)
    h = _root(e, 2)
    _require(a >= b and h * 100 * a <= b, "need alpha >= beta >= 100 eta^(1/2) alpha")
    K = G.n
    _require(h * (-b * k) + (a + b / 2) * k < K, "K too small", K=K)
    budget = _almost_complete_budget(G)
    _require(budget <= b * e * e * k, "graph is not beta eta^2 k-almost-complete", a_almost=budget)
    params = {"alpha": a, "beta": b, "eta": e, "k": k}

    red_need = h * a * k + a * k
    blue_need = h * b * k + b * k
    odd_clause = a + b / 2 >= h * 2 * b + 2 * b
    cert = _matching_outcome(G, RED, red_need, odd=odd_clause)
    if cert is not None:
        return LemmaOutcome("skb", "i'" if odd_clause else "i", {"matching": cert}, params,
                            {"red": (cert.vertex_count, red_need)})
    if odd_clause:
        plain = _matching_outcome(G, RED, red_need)
        if plain is not None:
            # the strengthened alternative is not met; the plain one is
            return LemmaOutcome("skb", "i", {"matching": plain}, params, {"red": (plain.vertex_count, red_need)})
    cert = _matching_outcome(G, BLUE, blue_need)
    if cert is not None:
        return LemmaOutcome("skb", "ii", {"matching": cert}, params, {"blue": (cert.vertex_count, blue_need)})

    theta = _root(e, 16)
    cap_rest = math.floor(theta * k)
    layouts = [("iii", RED, BLUE, red_need, h * b * k / 2 + b * k / 2)]
    if b > (1 - _root(e, 8)) * a:
        layouts.append(("iv", BLUE, RED, blue_need, _root(e, 8) * a * k / 2 + a * k / 2))
    for tag, g1, g2, core_cap, outer_cap in layouts:
        # |V'| < core_cap strictly, |V''| <= outer_cap
        max_core = math.ceil(core_cap) - 1
        found = h_partition_search(G, g1, g2, theta, max_core, math.floor(outer_cap), cap_rest)
        if found is None:
            continue
        rest, core, outer = found
        payload = {"W": members(rest), "V1": members(core), "V2": members(outer)}
        out = LemmaOutcome("skb", tag, payload, params,
                           {"V1": (core.bit_count(), core_cap), "V2": (outer.bit_count(), outer_cap),
                            "W": (rest.bit_count(), theta * k)})
        if not check_skb_partition(G, out):
            return out
    return LemmaOutcome("skb", "inconclusive", {}, params, {})


def skbe_search(G: ColouredGraph, eps, k: int, slack=1) -> LemmaOutcome:
    e = _eta(eps, 0, Fraction(1, 10**12) * as_fraction(slack), name="eps")
    _two_coloured(G)
    K = G.n
    _require(K > (1 - e) * k, "need K > (1 - eps) k", K=K)
    budget = _almost_complete_budget(G)
    _require(budget <= Fraction(27, 8) * e**4 * k, "graph is not (27/8) eps^4 k-almost-complete", a_almost=budget)
    need = _root(e, 8, -7 * k, Fraction(2, 3) * k)
    params = {"eps": e, "k": k}
    for tag, colour in (("i", RED), ("ii", BLUE)):
        cert = _matching_outcome(G, colour, need)
        if cert is not None:
            return LemmaOutcome("skbe", tag, {"matching": cert}, params, {str(colour): (cert.vertex_count, need)})
    raise CounterexampleFound("no monochromatic connected-matching meets the bound",
                              {"graph": G.to_json(), "eps": str(e), "k": k})


def largeW_check(G: ColouredGraph, alpha1, alpha2, alpha3, eta, k: int, slack=1) -> LemmaOutcome:
    al = [as_fraction(alpha1), as_fraction(alpha2), as_fraction(alpha3)]
    _require(min(al) > 0, "alphas must be positive")
    e = _eta(eta, 0, Fraction(2, 1000) * min(x * x for x in al) * as_fraction(slack))
    K = G.n
    h = _root(e, 2)
    floor_K = (h * 18 + sum(al) + max(al)) * k / 2
    _require(floor_K <= K, "K below the required order", K=K, required=float(floor_K))
    rep = completeness_report(G)
    _require(rep.is_complete(e**4), "graph is not (1-eta^4)-complete", min_degree=rep.min_degree)
    params = {"alpha1": al[0], "alpha2": al[1], "alpha3": al[2], "eta": e, "k": k}
    for i, colour in enumerate(Colour):
        need = (al[i] + e) * k
        cert = _matching_outcome(G, colour, need)
        if cert is not None:
            return LemmaOutcome("largew", str(i + 1), {"matching": cert}, params, {str(colour): (cert.vertex_count, need)})
    raise CounterexampleFound("no colour reaches (alpha_i + eta) k", {"graph": G.to_json(), **{
        key: str(val) for key, val in params.items()}})


def hole_check(G: ColouredGraph, W: Iterable[int], alpha, beta, v, eta, k: int, slack=1) -> LemmaOutcome:
    a, b, vv = as_fraction(alpha), as_fraction(beta), as_fraction(v)
    _require(a > 0 and b > 0 and vv >= 0, "need alpha, beta > 0 and v >= 0")
    e = _eta(eta, 0, Fraction(1, 100) * min(a, b) * as_fraction(slack))
    _two_coloured(G)
    K = G.n
    wm = mask_of(W)
    _require(wm.bit_count() <= vv * k, "hole larger than vk", W=wm.bit_count())
    for x in iter_bits(wm):
        _require(not G.adjacency(x) & wm, "edge inside the hole", vertex=x)
    floor_K = (_root(e, 2) * 6 + a + b + max(2 * vv, a, b)) * k / 2
    _require(floor_K <= K, "K below the required order", K=K, required=float(floor_K))
    miss = _missing_outside_hole(G, [wm])
    _require(miss <= e**4 * (K - 1), "host graph is not (1-eta^4)-complete", missing=miss)
    params = {"alpha": a, "beta": b, "v": vv, "eta": e, "k": k, "W": members(wm)}
    for tag, colour, base in (("red", RED, a), ("blue", BLUE, b)):
        need = (base + e) * k
        cert = _matching_outcome(G, colour, need)
        if cert is not None:
            return LemmaOutcome("hole", tag, {"matching": cert}, params, {tag: (cert.vertex_count, need)})
    raise CounterexampleFound("neither colour reaches its bound", {"graph": G.to_json(), **{
        key: str(val) if not isinstance(val, tuple) else list(val) for key, val in params.items()}})
