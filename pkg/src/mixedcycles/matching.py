"""Exact maximum matchings and monochromatic connected-matchings.

General graphs use Edmonds' blossom algorithm, bipartite graphs use
augmenting paths (with a König vertex cover on request). Both start from a
greedy matching, which on the near-complete graphs met here leaves only a
handful of augmentations to do.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import PreconditionError
from .graph import (
    Colour,
    ColouredGraph,
    Component,
    bipartite_completeness,
    component_of,
    iter_bits,
    mask_of,
    members,
    mono_components,
)


@dataclass(frozen=True)
class Matching:
    colour: Colour
    edges: tuple[tuple[int, int], ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for e in self.edges for v in e))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def vertex_count(self) -> int:
        return 2 * len(self.edges)


@dataclass(frozen=True)
class ConnectedMatchingCertificate:
    """A matching inside one colour component, with a replayable witness.

    ``parent`` is a spanning tree of ``component`` in the colour subgraph
    (root maps to ``None``); ``odd_witness`` is an odd cycle of the colour
    inside the component when one is known.
    """

    matching: Matching
    component: tuple[int, ...]
    parent: dict = field(default_factory=dict, repr=False, compare=False)
    odd_witness: Optional[tuple[int, ...]] = None

    @property
    def colour(self) -> Colour:
        return self.matching.colour

    @property
    def vertex_count(self) -> int:
        return self.matching.vertex_count

    @property
    def odd(self) -> bool:
        return self.odd_witness is not None

    def to_json(self) -> dict:
        return {
            "colour": str(self.colour),
            "edges": [list(e) for e in self.matching.edges],
            "component": list(self.component),
            "odd_witness": list(self.odd_witness) if self.odd_witness else None,
            "parent": {str(v): p for v, p in sorted(self.parent.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConnectedMatchingCertificate":
        parent = {int(v): (None if p is None else int(p)) for v, p in data.get("parent", {}).items()}
        odd = data.get("odd_witness")
        return cls(
            Matching(Colour.parse(data["colour"]), tuple(tuple(sorted(map(int, e))) for e in data["edges"])),
            tuple(sorted(map(int, data["component"]))),
            parent,
            tuple(odd) if odd else None,
        )


def empty_certificate(colour: Colour) -> ConnectedMatchingCertificate:
    return ConnectedMatchingCertificate(Matching(colour, ()), (), {}, None)


def _pairs(mate: dict | list, vertices: Iterable[int]) -> tuple[tuple[int, int], ...]:
    out = []
    for v in vertices:
        u = mate[v]
        if u != -1 and v < u:
            out.append((v, u))
    return tuple(out)


# -- general graphs: Edmonds' blossom algorithm -----------------------------


def _edmonds(n: int, adj: list[int], vertices: list[int]) -> list[int]:
    mate = [-1] * n
    free = mask_of(vertices)
    for v in vertices:
        if mate[v] == -1:
            cand = adj[v] & free & ~(1 << v)
            if cand:
                u = (cand & -cand).bit_length() - 1
                mate[v], mate[u] = u, v
                free &= ~((1 << v) | (1 << u))
            free &= ~(1 << v)

    parent = [-1] * n
    base = list(range(n))
    in_tree = [False] * n

    def lca(a: int, b: int) -> int:
        seen = set()
        while True:
            a = base[a]
            seen.add(a)
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if b in seen:
                return b
            b = parent[mate[b]]

    def find_path(root: int) -> int:
        for v in vertices:
            parent[v] = -1
            base[v] = v
            in_tree[v] = False
        in_tree[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in iter_bits(adj[v]):
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    blossom = set()

                    def mark(x: int, child: int) -> None:
                        while base[x] != cur:
                            blossom.add(base[x])
                            blossom.add(base[mate[x]])
                            parent[x] = child
                            child = mate[x]
                            x = parent[mate[x]]

                    mark(v, to)
                    mark(to, v)
                    for i in vertices:
                        if base[i] in blossom:
                            base[i] = cur
                            if not in_tree[i]:
                                in_tree[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        return to
                    nxt = mate[to]
                    in_tree[nxt] = True
                    queue.append(nxt)
        return -1

    unmatched = sum(1 for v in vertices if mate[v] == -1)
    for root in vertices:
        # an augmenting path needs two free ends
        if unmatched < 2:
            break
        if mate[root] != -1:
            continue
        end = find_path(root)
        if end == -1:
            unmatched -= 1  # a root that fails now fails for good
        else:
            unmatched -= 2
        while end != -1:
            pv = parent[end]
            nxt = mate[pv]
            mate[end], mate[pv] = pv, end
            end = nxt
    return mate


def max_matching(G: ColouredGraph, colour: Colour, within: Optional[Iterable[int]] = None) -> Matching:
    """Maximum-cardinality matching of the ``colour`` subgraph (of ``G[within]``)."""
    sel = G.full_mask if within is None else mask_of(within)
    rows = G.rows(colour)
    vertices = [v for v in iter_bits(sel) if rows[v] & sel]
    if not vertices:
        return Matching(colour, ())
    adj = [0] * G.n
    for v in vertices:
        adj[v] = rows[v] & sel
    mate = _edmonds(G.n, adj, vertices)
    return Matching(colour, _pairs(mate, vertices))


# -- bipartite graphs ------------------------------------------------------


def _bipartite(adj: dict[int, int], left: list[int]) -> dict[int, int]:
    """Maximum matching from ``left`` into the bits of ``adj``; returns mates both ways."""
    mate: dict[int, int] = {}
    taken = 0
    for a in left:
        cand = adj[a] & ~taken
        if cand:
            b = (cand & -cand).bit_length() - 1
            mate[a], mate[b] = b, a
            taken |= 1 << b
    for root in left:
        if root in mate:
            continue
        visited = 0
        stack_a = [root]
        stack_c = [adj[root]]
        picks: list[int] = []
        while stack_a:
            cand = stack_c[-1] & ~visited
            if not cand:
                stack_a.pop()
                stack_c.pop()
                if picks:
                    picks.pop()
                continue
            low = cand & -cand
            b = low.bit_length() - 1
            visited |= low
            stack_c[-1] = cand ^ low
            picks.append(b)
            nxt = mate.get(b)
            if nxt is None:
                for a, bb in zip(stack_a, picks):
                    mate[a], mate[bb] = bb, a
                break
            stack_a.append(nxt)
            stack_c.append(adj[nxt])
    return mate


def _sides(A: Iterable[int], B: Iterable[int]) -> tuple[int, int]:
    am, bm = mask_of(A), mask_of(B)
    if am & bm:
        raise PreconditionError("bipartite sides overlap", overlap=members(am & bm))
    return am, bm


def max_bipartite_matching(G: ColouredGraph, colour: Optional[Colour], A: Iterable[int],
                           B: Iterable[int]) -> Matching:
    """Maximum matching of ``colour`` edges with one end in ``A`` and one in ``B``.

    With ``colour=None`` every present edge counts, and the returned
    matching is tagged red by convention.
    """
    am, bm = _sides(A, B)
    rows = G.rows(colour)
    left = members(am)
    adj = {a: rows[a] & bm for a in left}
    mate = _bipartite(adj, list(left))
    edges = tuple(sorted((min(a, mate[a]), max(a, mate[a])) for a in left if a in mate))
    return Matching(Colour.RED if colour is None else colour, edges)


def bipartite_matching_and_cover(adj: dict[int, int], left: list[int]) -> tuple[dict[int, int], tuple[int, ...], tuple[int, ...]]:
    """Maximum matching plus a minimum vertex cover ``(cover_left, cover_right)``.

    The cover comes from König's construction: vertices reachable from
    unmatched left vertices by alternating paths.
    """
    mate = _bipartite(adj, left)
    reach_left = [a for a in left if a not in mate]
    seen_left = mask_of(reach_left)
    seen_right = 0
    queue = deque(reach_left)
    while queue:
        a = queue.popleft()
        for b in iter_bits(adj[a] & ~seen_right):
            seen_right |= 1 << b
            nxt = mate.get(b)
            if nxt is not None and not seen_left >> nxt & 1:
                seen_left |= 1 << nxt
                queue.append(nxt)
    cover_left = tuple(a for a in left if not seen_left >> a & 1)
    cover_right = members(seen_right)
    return mate, cover_left, cover_right


# -- connected-matchings -----------------------------------------------------


def _certificate_for(G: ColouredGraph, colour: Colour, comp: Component, sel: int) -> ConnectedMatchingCertificate:
    m = max_matching(G, colour, members(comp.mask & sel))
    return ConnectedMatchingCertificate(m, comp.vertices, dict(comp.parent), comp.odd_cycle)


def _best(G, colour, comps, sel, require_odd) -> ConnectedMatchingCertificate:
    best = empty_certificate(colour)
    for comp in comps:
        if require_odd and not comp.odd:
            continue
        # a component with fewer vertices than the incumbent matching cannot beat it
        if (comp.mask & sel).bit_count() < best.vertex_count + 2:
            continue
        cert = _certificate_for(G, colour, comp, sel)
        if cert.vertex_count > best.vertex_count:
            best = cert
    return best


def _components(G, colour, within, effective):
    if within is None or not effective:
        return mono_components(G, colour, within).components
    sel = mask_of(within)
    comps = []
    for comp in mono_components(G, colour).components:
        if comp.mask & sel:
            comps.append(comp)
    return comps


def largest_connected_matching(G: ColouredGraph, colour: Colour, within: Optional[Iterable[int]] = None,
                               effective: bool = False) -> ConnectedMatchingCertificate:
    """Largest matching lying inside a single ``colour`` component.

    With ``within`` the matching is restricted to those vertices. By default
    components are those of the colour subgraph of ``G[within]``; with
    ``effective=True`` they are the restrictions of the components of the
    whole colour subgraph, so connectivity may route outside ``within``.
    Ties go to the component with the smallest minimum vertex.
    """
    sel = G.full_mask if within is None else mask_of(within)
    return _best(G, colour, _components(G, colour, within, effective), sel, False)


def largest_odd_connected_matching(G: ColouredGraph, colour: Colour, within: Optional[Iterable[int]] = None,
                                   effective: bool = False) -> ConnectedMatchingCertificate:
    """Like :func:`largest_connected_matching` over non-bipartite components only."""
    sel = G.full_mask if within is None else mask_of(within)
    return _best(G, colour, _components(G, colour, within, effective), sel, True)


def greedy_almost_complete_matching(G: ColouredGraph, colour: Colour, A: Iterable[int], B: Iterable[int],
                                    a: int, ell: int) -> ConnectedMatchingCertificate:
    """Connected-matching on at least ``2|B| - 2a`` vertices of ``G[A, B]``.

    Requires ``|A| >= |B| >= ell`` and the ``colour`` cross graph to be
    a-almost-complete with ``a/ell < 1/2``. Each still-unmatched B-vertex is
    matched to its lowest unmatched A-neighbour; almost-completeness makes
    such a neighbour exist while fewer than ``|B| - a`` edges are placed.
    """
    am, bm = _sides(A, B)
    na, nb = am.bit_count(), bm.bit_count()
    if not (na >= nb >= ell >= 1):
        raise PreconditionError("need |A| >= |B| >= ell >= 1", A=na, B=nb, ell=ell)
    if a < 0 or 2 * a >= ell:
        raise PreconditionError("need 0 <= a/ell < 1/2", a=a, ell=ell)
    measured = bipartite_completeness(G, members(am), members(bm), colour).a_almost
    if measured > a:
        raise PreconditionError("cross graph is not a-almost-complete", a=a, measured_a=measured)
    rows = G.rows(colour)
    used = 0
    edges = []
    for b in iter_bits(bm):
        cand = rows[b] & am & ~used
        if cand:
            x = (cand & -cand).bit_length() - 1
            used |= 1 << x
            edges.append((min(x, b), max(x, b)))
    matching = Matching(colour, tuple(sorted(edges)))
    # the cross graph is (1 - a/ell)-complete with a/ell < 1/2, hence connected
    cross = [0] * G.n
    for v in iter_bits(am):
        cross[v] = rows[v] & bm
    for v in iter_bits(bm):
        cross[v] = rows[v] & am
    root = (am & -am).bit_length() - 1
    parent = {root: None}
    seen = 1 << root
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in iter_bits(cross[v] & ~seen):
            seen |= 1 << w
            parent[w] = v
            queue.append(w)
    return ConnectedMatchingCertificate(matching, members(seen), parent, None)


def colour_component_mask(G: ColouredGraph, colour: Colour, v: int, within=None) -> int:
    return component_of(G, colour, v, within)
