"""Three-multicoloured graphs, completeness predicates and colour components.

A :class:`ColouredGraph` stores, for each colour, one adjacency bitset per
vertex (a Python int). An edge may carry several colours at once; a pair
with no colours is a hole.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import GraphError, PreconditionError
from .exact import as_fraction


class Colour(enum.IntEnum):
    RED = 0
    BLUE = 1
    GREEN = 2

    def __str__(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value) -> "Colour":
        if isinstance(value, Colour):
            return value
        if isinstance(value, int):
            return cls(value)
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ValueError(f"unknown colour {value!r}") from None


COLOURS = (Colour.RED, Colour.BLUE, Colour.GREEN)

VertexSet = tuple  # sorted, duplicate-free tuple of vertex indices


def iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def members(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertex_set(vertices: Iterable[int], n: Optional[int] = None) -> VertexSet:
    vs = tuple(sorted(set(int(v) for v in vertices)))
    if vs and vs[0] < 0:
        raise GraphError(f"negative vertex index {vs[0]}")
    if n is not None and vs and vs[-1] >= n:
        raise GraphError(f"vertex {vs[-1]} out of range for n={n}")
    return vs


def _colour_set(colours) -> frozenset:
    if isinstance(colours, (str, Colour, int)):
        colours = [colours]
    return frozenset(Colour.parse(c) for c in colours)


class ColouredGraph:
    """Immutable edge-multicoloured graph on vertices ``0 .. n-1``."""

    __slots__ = ("n", "_rows", "_any", "_full")

    def __init__(self, n: int, rows: Sequence[Sequence[int]]):
        # trusted constructor: rows must be symmetric and loop-free
        self.n = n
        self._rows = tuple(tuple(r) for r in rows)
        self._any = tuple(
            self._rows[0][v] | self._rows[1][v] | self._rows[2][v] for v in range(n)
        )
        self._full = (1 << n) - 1

    # -- queries -----------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return self._full

    def adjacency(self, v: int, colour: Optional[Colour] = None) -> int:
        """Neighbour bitset of ``v`` (in ``colour`` if given, else any colour)."""
        if colour is None:
            return self._any[v]
        return self._rows[colour][v]

    def rows(self, colour: Optional[Colour] = None) -> tuple[int, ...]:
        if colour is None:
            return self._any
        return self._rows[colour]

    def colours(self, u: int, v: int) -> frozenset:
        bit = 1 << v
        return frozenset(c for c in COLOURS if self._rows[c][u] & bit)

    def has_edge(self, u: int, v: int, colour: Optional[Colour] = None) -> bool:
        if u == v:
            return False
        return bool(self.adjacency(u, colour) >> v & 1)

    def neighbours(self, v: int, colour: Optional[Colour] = None, within: int = -1) -> tuple[int, ...]:
        return members(self.adjacency(v, colour) & within)

    def degree(self, v: int, colour: Optional[Colour] = None, within: int = -1) -> int:
        return (self.adjacency(v, colour) & within).bit_count()

    def edges(self, colour: Optional[Colour] = None) -> Iterator[tuple[int, int, frozenset]]:
        """Present edges ``(u, v, colours)`` with ``u < v`` in lexicographic order."""
        rows = self.rows(colour)
        for u in range(self.n):
            for v in iter_bits(rows[u] >> (u + 1)):
                w = u + 1 + v
                yield u, w, self.colours(u, w)

    def edge_count(self, colour: Optional[Colour] = None) -> int:
        return sum(r.bit_count() for r in self.rows(colour)) // 2

    def colours_present(self) -> frozenset:
        return frozenset(c for c in COLOURS if any(self._rows[c]))

    # -- derived graphs ----------------------------------------------------

    def without(self, pairs: Iterable[tuple[int, int]], colour: Optional[Colour] = None) -> "ColouredGraph":
        """Copy with ``colour`` (or every colour) stripped from ``pairs``."""
        rows = [list(r) for r in self._rows]
        targets = COLOURS if colour is None else (colour,)
        for u, v in pairs:
            for c in targets:
                rows[c][u] &= ~(1 << v)
                rows[c][v] &= ~(1 << u)
        return ColouredGraph(self.n, rows)

    def restricted_to(self, colours: Iterable[Colour]) -> "ColouredGraph":
        """Copy keeping only the given colours."""
        keep = set(colours)
        rows = [self._rows[c] if c in keep else (0,) * self.n for c in COLOURS]
        return ColouredGraph(self.n, rows)

    def induced(self, vertices: Sequence[int]) -> tuple["ColouredGraph", tuple[int, ...]]:
        """Relabelled induced subgraph plus the old index of each new vertex."""
        order = tuple(sorted(vertices))
        pos = {v: i for i, v in enumerate(order)}
        rows = [[0] * len(order) for _ in COLOURS]
        sel = mask_of(order)
        for c in COLOURS:
            src = self._rows[c]
            dst = rows[c]
            for i, v in enumerate(order):
                m = 0
                for w in iter_bits(src[v] & sel):
                    m |= 1 << pos[w]
                dst[i] = m
        return ColouredGraph(len(order), rows), order

    # -- comparison / serialisation -----------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, ColouredGraph) and self.n == other.n and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.n, self._rows))

    def __repr__(self) -> str:
        return f"ColouredGraph(n={self.n}, edges={self.edge_count()})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [[u, v, [str(c) for c in sorted(cs)]] for u, v, cs in self.edges()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "ColouredGraph":
        if "n" not in data or "edges" not in data:
            raise GraphError("graph JSON needs 'n' and 'edges'")
        return build_graph(int(data["n"]), [(e[0], e[1], e[2]) for e in data["edges"]])


class GraphBuilder:
    """Mutable assembly of a :class:`ColouredGraph` from blocks of pairs.

    Later calls overwrite the colour set of a pair; use
    :func:`build_graph` when duplicate pairs should be rejected instead.
    """

    def __init__(self, n: int):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        self.n = n
        self._rows = [[0] * n for _ in COLOURS]

    def _clear(self, a_mask: int, b_mask: int) -> None:
        for c in COLOURS:
            row = self._rows[c]
            for a in iter_bits(a_mask):
                row[a] &= ~(b_mask & ~(1 << a))
            for b in iter_bits(b_mask):
                row[b] &= ~(a_mask & ~(1 << b))

    def set_pair(self, u: int, v: int, colours) -> "GraphBuilder":
        if u == v:
            raise GraphError(f"self-loop at {u}", (u, v))
        cs = _colour_set(colours)
        for c in COLOURS:
            if c in cs:
                self._rows[c][u] |= 1 << v
                self._rows[c][v] |= 1 << u
            else:
                self._rows[c][u] &= ~(1 << v)
                self._rows[c][v] &= ~(1 << u)
        return self

    def remove_pair(self, u: int, v: int) -> "GraphBuilder":
        for c in COLOURS:
            self._rows[c][u] &= ~(1 << v)
            self._rows[c][v] &= ~(1 << u)
        return self

    def join(self, a: Iterable[int], b: Iterable[int], colours) -> "GraphBuilder":
        """Colour every pair between disjoint sets ``a`` and ``b``."""
        am, bm = mask_of(a), mask_of(b)
        if am & bm:
            raise GraphError("join sides overlap")
        cs = _colour_set(colours)
        self._clear(am, bm)
        for c in cs:
            row = self._rows[c]
            for x in iter_bits(am):
                row[x] |= bm
            for y in iter_bits(bm):
                row[y] |= am
        return self

    def clique(self, a: Iterable[int], colours) -> "GraphBuilder":
        """Colour every pair inside ``a``."""
        am = mask_of(a)
        cs = _colour_set(colours)
        self._clear(am, am)
        for c in cs:
            row = self._rows[c]
            for x in iter_bits(am):
                row[x] |= am & ~(1 << x)
        return self

    def build(self) -> ColouredGraph:
        return ColouredGraph(self.n, self._rows)


def build_graph(n: int, assignments: Iterable[tuple]) -> ColouredGraph:
    """Build a graph from ``(u, v, colours)`` triples.

    Raises :class:`GraphError` naming the pair on a self-loop, an
    out-of-range vertex, an empty colour set or a repeated pair.
    """
    if n < 0:
        raise GraphError("vertex count must be nonnegative")
    rows = [[0] * n for _ in COLOURS]
    seen: set[tuple[int, int]] = set()
    for item in assignments:
        u, v, colours = item
        u, v = int(u), int(v)
        pair = (u, v)
        if u == v:
            raise GraphError(f"self-loop at vertex {u}", pair)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"pair {pair} out of range for n={n}", pair)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"duplicate pair {key}", pair)
        seen.add(key)
        cs = _colour_set(colours)
        if not cs:
            raise GraphError(f"empty colour set on pair {key}", pair)
        for c in cs:
            rows[c][u] |= 1 << v
            rows[c][v] |= 1 << u
    return ColouredGraph(n, rows)


def load_graph(path) -> ColouredGraph:
    with open(path) as fh:
        return ColouredGraph.from_json(json.load(fh))


# -- completeness ------------------------------------------------------------


@dataclass(frozen=True)
class CompletenessReport:
    """Degree profile of a graph or bipartite graph.

    ``a_almost`` is the least ``a`` for which the graph is a-almost-complete;
    ``fraction`` the largest ``c'`` with minimum degree ``>= c' (N-1)``
    (``>= c'|other side|`` for bipartite graphs); ``sparse_fraction`` the
    least ``c`` for which the graph is c-sparse.
    """

    min_degree: int
    a_almost: int
    fraction: Fraction
    max_degree: int
    sparse_fraction: Fraction

    def is_almost_complete(self, a) -> bool:
        return a >= self.a_almost

    def is_complete(self, c) -> bool:
        """(1-c)-completeness."""
        return 1 - c <= self.fraction

    def is_sparse(self, c) -> bool:
        return self.sparse_fraction <= c


def completeness_report(G: ColouredGraph, within: Optional[Iterable[int]] = None,
                        colour: Optional[Colour] = None) -> CompletenessReport:
    """Min/max degree profile of ``G`` (or ``G[within]``, or one colour of it)."""
    sel = G.full_mask if within is None else mask_of(within)
    N = sel.bit_count()
    if N == 0:
        raise PreconditionError("completeness of the empty graph is undefined")
    rows = G.rows(colour)
    degs = [(rows[v] & sel).bit_count() for v in iter_bits(sel)]
    lo, hi = min(degs), max(degs)
    if N == 1:
        return CompletenessReport(0, 0, Fraction(1), 0, Fraction(0))
    return CompletenessReport(lo, (N - 1) - lo, Fraction(lo, N - 1), hi, Fraction(hi, N - 1))


def bipartite_completeness(G: ColouredGraph, A: Iterable[int], B: Iterable[int],
                           colour: Optional[Colour] = None) -> CompletenessReport:
    """Cross-degree profile of ``G[A, B]``.

    ``a_almost`` is the least ``a`` such that every A-vertex has at least
    ``|B| - a`` cross neighbours and every B-vertex at least ``|A| - a``.
    """
    am, bm = mask_of(A), mask_of(B)
    if not am or not bm:
        raise PreconditionError("bipartite sides must be nonempty")
    if am & bm:
        raise PreconditionError("bipartite sides overlap", overlap=members(am & bm))
    rows = G.rows(colour)
    na, nb = am.bit_count(), bm.bit_count()
    missing = 0
    frac = Fraction(1)
    sparse = Fraction(0)
    lo = None
    hi = 0
    for side, other, size in ((am, bm, nb), (bm, am, na)):
        for v in iter_bits(side):
            d = (rows[v] & other).bit_count()
            missing = max(missing, size - d)
            frac = min(frac, Fraction(d, size))
            sparse = max(sparse, Fraction(d, size))
            lo = d if lo is None else min(lo, d)
            hi = max(hi, d)
    return CompletenessReport(lo, missing, frac, hi, sparse)


# -- colour components -------------------------------------------------------


@dataclass(frozen=True)
class Component:
    """One component of a colour subgraph.

    ``parent`` is a BFS spanning tree (root maps to ``None``); when the
    component is non-bipartite, ``odd_cycle`` lists the vertices of an odd
    cycle in order and ``sides`` is ``None``; otherwise ``sides`` is its
    bipartition.
    """

    vertices: VertexSet
    odd: bool
    odd_cycle: Optional[tuple[int, ...]]
    parent: dict = field(repr=False, compare=False)
    sides: Optional[tuple[VertexSet, VertexSet]] = None

    @property
    def mask(self) -> int:
        return mask_of(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class ComponentSplit:
    components: list[Component]
    isolated: VertexSet

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)


def _bfs_component(rows, root: int, sel: int):
    parent = {root: None}
    depth = {root: 0}
    levels = [1 << root]
    seen = frontier = 1 << root
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            fresh = rows[v] & sel & ~seen & ~nxt
            for w in iter_bits(fresh):
                parent[w] = v
                depth[w] = len(levels)
            nxt |= fresh
        if nxt:
            levels.append(nxt)
        seen |= nxt
        frontier = nxt
    clash = None
    for d, level in enumerate(levels):
        for v in iter_bits(level):
            same = rows[v] & level
            if same:
                clash = (v, (same & -same).bit_length() - 1)
                break
        if clash:
            break
    return seen, parent, depth, clash


def _odd_cycle_from_clash(parent, depth, u: int, v: int) -> tuple[int, ...]:
    left, right = [u], [v]
    a, b = u, v
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    # left ends at the common ancestor; right repeats it
    return tuple(left + right[-2::-1])


def mono_components(G: ColouredGraph, colour: Colour, within: Optional[Iterable[int]] = None) -> ComponentSplit:
    """Components of the ``colour`` subgraph (of ``G[within]`` if given).

    Components are listed by minimum vertex. Vertices with no edge of the
    colour are returned separately as ``isolated``.
    """
    sel = G.full_mask if within is None else mask_of(within)
    rows = G.rows(colour)
    comps: list[Component] = []
    isolated = []
    remaining = sel
    while remaining:
        low = remaining & -remaining
        root = low.bit_length() - 1
        if not rows[root] & sel:
            isolated.append(root)
            remaining ^= low
            continue
        seen, parent, depth, clash = _bfs_component(rows, root, sel)
        remaining &= ~seen
        verts = members(seen)
        if clash is None:
            even = tuple(v for v in verts if depth[v] % 2 == 0)
            odd_side = tuple(v for v in verts if depth[v] % 2 == 1)
            comps.append(Component(verts, False, None, parent, (even, odd_side)))
        else:
            cyc = _odd_cycle_from_clash(parent, depth, *clash)
            comps.append(Component(verts, True, cyc, parent, None))
    return ComponentSplit(comps, tuple(isolated))


def component_of(G: ColouredGraph, colour: Colour, v: int, within: Optional[Iterable[int]] = None) -> int:
    """Bitset of the ``colour`` component containing ``v``."""
    sel = G.full_mask if within is None else mask_of(within)
    rows = G.rows(colour)
    seen = frontier = 1 << v
    while frontier:
        nxt = 0
        for w in iter_bits(frontier):
            nxt |= rows[w]
        frontier = nxt & sel & ~seen
        seen |= frontier
    return seen


# -- bracket arithmetic and the Ramsey formulas -------------------------------


def floor_even(x) -> int:
    """Largest even integer not greater than ``x`` (``x >= 0``)."""
    x = as_fraction(x)
    if x < 0:
        raise PreconditionError("floor_even needs x >= 0", x=x)
    f = x.numerator // x.denominator
    return f - (f % 2)


def floor_odd(x) -> int:
    """Largest odd integer not greater than ``x`` (``x >= 1``)."""
    x = as_fraction(x)
    if x < 1:
        raise PreconditionError("floor_odd needs x >= 1", x=x)
    f = x.numerator // x.denominator
    return f if f % 2 else f - 1


def _check_even(name: str, v: int) -> None:
    if v < 4 or v % 2:
        raise PreconditionError(f"{name} must be an even cycle length >= 4", **{name: v})


def _check_odd(name: str, v: int) -> None:
    if v < 3 or v % 2 == 0:
        raise PreconditionError(f"{name} must be an odd cycle length >= 3", **{name: v})


def ramsey_formula_A(n: int, m: int, l: int) -> int:
    """Asymptotic value for two even cycles ``C_n, C_m`` (``n >= m``) and odd ``C_l``.

    This is the conjectured-asymptotic expression, not a verified Ramsey
    number for small lengths.
    """
    _check_even("n", n)
    _check_even("m", m)
    _check_odd("l", l)
    if n < m:
        raise PreconditionError("need n >= m", n=n, m=m)
    return max(2 * n + m - 3, n // 2 + m // 2 + l - 2)


def ramsey_formula_C(n: int, m: int, l: int) -> int:
    """Asymptotic value for even ``C_n`` and odd ``C_m``, ``C_l``."""
    _check_even("n", n)
    _check_odd("m", m)
    _check_odd("l", l)
    return max(4 * n, n + 2 * m, n + 2 * l) - 3


def threshold_c(alpha1, alpha2, alpha3) -> Fraction:
    """``max{2 a1 + a2, a1/2 + a2/2 + a3}`` with ``a1 >= a2 > 0``, ``a3 > 0``."""
    a1, a2, a3 = (as_fraction(a) for a in (alpha1, alpha2, alpha3))
    if not (a2 > 0 and a3 > 0):
        raise PreconditionError("alphas must be positive", alpha2=a2, alpha3=a3)
    if a1 < a2:
        raise PreconditionError("need alpha1 >= alpha2", alpha1=a1, alpha2=a2)
    return max(2 * a1 + a2, a1 / 2 + a2 / 2 + a3)
