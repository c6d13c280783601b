"""Vertex partitions of the green graph and the discard-or-extract step.

``purify_pair`` and ``purify_inside`` implement one repeated argument:
either some wrong colour carries a large matching (returned as evidence),
or a small vertex cover of the wrong-coloured edges exists and is removed.
Thresholds are supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import PreconditionError
from .graph import (
    COLOURS,
    Colour,
    ColouredGraph,
    iter_bits,
    mask_of,
    members,
    mono_components,
)
from .matching import (
    ConnectedMatchingCertificate,
    Matching,
    bipartite_matching_and_cover,
    max_bipartite_matching,
    max_matching,
)
from .verify import verify_connected_matching

GREEN = Colour.GREEN


# -- parity decomposition ----------------------------------------------------------


@dataclass(frozen=True)
class ParityDecomposition:
    V_prime: tuple[int, ...]
    V_dprime: tuple[int, ...]
    bipartitions: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    m: int

    def to_json(self) -> dict:
        return {"kind": "parity", "V_prime": list(self.V_prime), "V_dprime": list(self.V_dprime),
                "bipartitions": [[list(a), list(b)] for a, b in self.bipartitions], "m": self.m}


def green_parity_decomposition(G: ColouredGraph, m: int) -> ParityDecomposition:
    """Bipartite green components (and green-isolated vertices) versus odd ones.

    Raises :class:`PreconditionError` with ``details["certificate"]`` when an
    odd green component holds a matching on ``m`` or more vertices.
    """
    if not 3 <= m <= G.n:
        raise PreconditionError("need 3 <= m <= K", m=m, K=G.n)
    split = mono_components(G, GREEN)
    prime, dprime, sides = [], [], []
    for comp in split.components:
        if comp.odd:
            mt = max_matching(G, GREEN, comp.vertices)
            if mt.vertex_count >= m:
                cert = ConnectedMatchingCertificate(mt, comp.vertices, dict(comp.parent), comp.odd_cycle)
                raise PreconditionError("odd green component has a large matching",
                                        certificate=cert, vertices=mt.vertex_count, m=m)
            dprime.extend(comp.vertices)
        else:
            prime.extend(comp.vertices)
            sides.append(comp.sides)
    for v in split.isolated:
        prime.append(v)
        sides.append(((v,), ()))
    return ParityDecomposition(tuple(sorted(prime)), tuple(sorted(dprime)), tuple(sides), m)


# -- X / Y / W --------------------------------------------------------------------


@dataclass(frozen=True)
class XYWDecomposition:
    X: tuple[int, ...]
    Y: tuple[int, ...]
    W: tuple[int, ...]
    k: Optional[int] = None

    @property
    def w(self) -> Optional[Fraction]:
        return None if self.k is None else Fraction(len(self.W), self.k)

    def to_json(self) -> dict:
        return {"kind": "XYW", "X": list(self.X), "Y": list(self.Y), "W": list(self.W), "k": self.k,
                "w": None if self.k is None else str(self.w)}


def green_XYW(G: ColouredGraph, k: Optional[int] = None) -> XYWDecomposition:
    """Split into ``X, Y`` (sides of the bipartite green components) and ``W`` (odd ones).

    Components are taken in order of their smallest vertex; each puts its
    larger side into whichever of ``X``/``Y`` is currently smaller (``X``
    on ties). Green-isolated vertices follow the same rule one by one, and
    the sides are swapped at the end if needed so that ``|X| >= |Y|``.
    """
    split = mono_components(G, GREEN)
    X: list[int] = []
    Y: list[int] = []
    W: list[int] = []
    for comp in split.components:
        if comp.odd:
            W.extend(comp.vertices)
            continue
        big, small = sorted(comp.sides, key=lambda s: (-len(s), s))
        if len(X) <= len(Y):
            X.extend(big)
            Y.extend(small)
        else:
            Y.extend(big)
            X.extend(small)
    for v in split.isolated:
        (X if len(X) <= len(Y) else Y).append(v)
    if len(Y) > len(X):
        X, Y = Y, X
    return XYWDecomposition(tuple(sorted(X)), tuple(sorted(Y)), tuple(sorted(W)), k)


# -- Case E ------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseEDecomposition:
    M: tuple[int, ...]
    N: tuple[int, ...]
    P: tuple[int, ...]
    Q: tuple[int, ...]
    F: ConnectedMatchingCertificate
    discarded_green_edges: tuple[tuple[int, int], ...] = ()

    @property
    def L(self) -> tuple[int, ...]:
        return tuple(sorted(self.M + self.N))

    def residual(self, G: ColouredGraph) -> ColouredGraph:
        """``G`` with green removed from every discarded pair."""
        return G.without(self.discarded_green_edges, GREEN)

    def to_json(self) -> dict:
        return {"kind": "caseE", "M": list(self.M), "N": list(self.N), "P": list(self.P), "Q": list(self.Q),
                "F": self.F.to_json(), "discarded_green_edges": [list(e) for e in self.discarded_green_edges]}


def augmenting_path(G: ColouredGraph, F: Matching, within: Iterable[int]) -> Optional[tuple[int, ...]]:
    """A path alternating outside/inside ``F`` with both ends uncovered, if ``F`` is not maximum."""
    within = tuple(within)
    best = max_matching(G, F.colour, within)
    if best.vertex_count <= F.vertex_count:
        return None
    mate_f, mate_b = {}, {}
    for u, v in F.edges:
        mate_f[u], mate_f[v] = v, u
    for u, v in best.edges:
        mate_b[u], mate_b[v] = v, u
    for start in within:
        if start in mate_f or start not in mate_b:
            continue
        path = [start]
        v = start
        while True:
            nxt = mate_b.get(v)
            if nxt is None or (v in mate_f and mate_f[v] == nxt):
                break
            path.append(nxt)
            if nxt not in mate_f:
                return tuple(path)
            v = mate_f[nxt]
            path.append(v)
    return None  # pragma: no cover - symmetric difference always holds one


def case_e_decomposition(G: ColouredGraph, F: ConnectedMatchingCertificate) -> CaseEDecomposition:
    """``L = V(F)`` split into ``M, N``; ``P`` the outside vertices green-adjacent to ``L``; ``Q`` the rest.

    ``F`` must be a maximum green matching of its odd green component. An
    edge of ``F`` sends to ``M`` its endpoint with green ``P``-neighbours;
    when neither has any, the smaller index goes to ``M``. When both do,
    maximality forces a single common ``P``-neighbour ``p``: the smaller
    index goes to ``M`` and the green edge from the other endpoint to ``p``
    is discarded.
    """
    if F.colour != GREEN:
        raise PreconditionError("F must be green")
    problems = verify_connected_matching(G, F, GREEN)
    if problems:
        raise PreconditionError("F is not a green connected-matching", problems=problems)
    if not F.matching.edges:
        raise PreconditionError("F is empty")
    split = mono_components(G, GREEN)
    anchor = F.matching.edges[0][0]
    comp = next(c for c in split.components if c.mask >> anchor & 1)
    if not comp.odd:
        raise PreconditionError("F does not lie in an odd green component", component=comp.vertices)
    cover = mask_of(F.matching.vertices)
    if cover & ~comp.mask:
        raise PreconditionError("F leaves its green component")
    path = augmenting_path(G, F.matching, comp.vertices)
    if path is not None:
        raise PreconditionError("F is not maximum in its component", augmenting_path=path)

    green = G.rows(GREEN)
    outside = G.full_mask & ~cover
    P_mask = 0
    for v in iter_bits(cover):
        P_mask |= green[v] & outside
    Q_mask = outside & ~P_mask
    M, N, dropped = [], [], []
    for u, v in F.matching.edges:
        pu, pv = green[u] & P_mask, green[v] & P_mask
        if pu and pv:
            if pu != pv or pu.bit_count() != 1:  # pragma: no cover - excluded by maximality
                raise PreconditionError("F is not maximum in its component", edge=(u, v))
            p = pu.bit_length() - 1
            lo, hi = min(u, v), max(u, v)
            M.append(lo)
            N.append(hi)
            dropped.append((min(hi, p), max(hi, p)))
        elif pu or pv:
            M.append(u if pu else v)
            N.append(v if pu else u)
        else:
            M.append(min(u, v))
            N.append(max(u, v))
    return CaseEDecomposition(tuple(sorted(M)), tuple(sorted(N)), members(P_mask), members(Q_mask), F,
                              tuple(sorted(dropped)))


# -- purification -------------------------------------------------------------------


@dataclass(frozen=True)
class Purified:
    discarded_A: tuple[int, ...]
    discarded_B: tuple[int, ...] = ()
    kept_A: tuple[int, ...] = ()
    kept_B: tuple[int, ...] = ()

    ok = True

    def to_json(self) -> dict:
        return {"result": "purified", "discarded_A": list(self.discarded_A), "discarded_B": list(self.discarded_B)}


@dataclass(frozen=True)
class Violation:
    """A wrong-colour matching larger than the threshold.

    ``certificate`` is set when the matching lies in a single component of
    its colour in the whole graph.
    """

    matching: Matching
    certificate: Optional[ConnectedMatchingCertificate] = field(default=None, compare=False)

    ok = False

    def to_json(self) -> dict:
        return {"result": "violation", "colour": str(self.matching.colour),
                "edges": [list(e) for e in self.matching.edges],
                "certificate": None if self.certificate is None else self.certificate.to_json()}


PurificationResult = Union[Purified, Violation]


def _wrap(G: ColouredGraph, m: Matching) -> Violation:
    if not m.edges:
        return Violation(m)
    anchor = m.edges[0][0]
    for comp in mono_components(G, m.colour).components:
        if comp.mask >> anchor & 1:
            if mask_of(m.vertices) & ~comp.mask:
                return Violation(m)
            return Violation(m, ConnectedMatchingCertificate(m, comp.vertices, dict(comp.parent), comp.odd_cycle))
    return Violation(m)  # pragma: no cover


def purify_pair(G: ColouredGraph, A: Iterable[int], B: Iterable[int], keep: Colour,
                threshold_vertices) -> PurificationResult:
    """Make every cross edge of ``[A, B]`` exclusively ``keep`` or report a large wrong matching.

    Each wrong colour is matched exactly on its own; one exceeding
    ``threshold_vertices`` vertices is returned as a :class:`Violation`.
    Otherwise a minimum vertex cover (König) of all wrong-coloured cross
    edges is discarded, which costs exactly the wrong matching number.
    """
    am, bm = mask_of(A), mask_of(B)
    if am & bm:
        raise PreconditionError("sides overlap", overlap=members(am & bm))
    wrong = [c for c in COLOURS if c != keep]
    for c in wrong:
        m = max_bipartite_matching(G, c, members(am), members(bm))
        if m.vertex_count > threshold_vertices:
            return _wrap(G, m)
    adj = {}
    for a in iter_bits(am):
        row = 0
        for c in wrong:
            row |= G.rows(c)[a]
        adj[a] = row & bm
    _, cover_a, cover_b = bipartite_matching_and_cover(adj, list(iter_bits(am)))
    ca, cb = mask_of(cover_a), mask_of(cover_b)
    return Purified(cover_a, cover_b, members(am & ~ca), members(bm & ~cb))


def purify_inside(G: ColouredGraph, A: Iterable[int], keep: Colour, threshold_vertices) -> PurificationResult:
    """Make every edge inside ``A`` exclusively ``keep`` or report a large wrong matching.

    Wrong colours are handled one at a time in the order red, blue, green.
    For each, the endpoints of a maximum matching cover its edges; the cover
    is pruned to a minimal one before being discarded. The threshold may be
    a mapping from colour to threshold.
    """
    am = mask_of(A)
    discarded = 0
    for c in COLOURS:
        if c == keep:
            continue
        limit = threshold_vertices[c] if isinstance(threshold_vertices, dict) else threshold_vertices
        m = max_matching(G, c, members(am))
        if m.vertex_count > limit:
            return _wrap(G, m)
        rows = G.rows(c)
        cover = mask_of(m.vertices)
        for v in sorted(iter_bits(cover), reverse=True):
            if not rows[v] & am & ~cover:
                cover &= ~(1 << v)
        discarded |= cover
        am &= ~cover
    return Purified(members(discarded), (), members(am), ())
