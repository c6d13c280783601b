"""Monochromatic cycle queries, lower-bound colourings and a small Ramsey search.

The Ramsey search colours each edge of ``K_N`` with exactly one colour and
builds colourings one vertex at a time. A colouring is kept only if its
code (the upper triangle read column by column) is the least among all
relabellings, so each isomorphism class is met once; children of a
colouring with a forbidden cycle are never generated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cycles import find_cycle
from .errors import PreconditionError
from .graph import Colour, ColouredGraph, GraphBuilder, ramsey_formula_A
from .verify import mono_cycle_lengths, verify_cycle

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN

MODES = ("exact", "at-least")


@dataclass(frozen=True)
class CycleQuery:
    colour: Colour
    length: int
    mode: str = "exact"

    def __post_init__(self):
        object.__setattr__(self, "colour", Colour.parse(self.colour))
        if int(self.length) != self.length or self.length < 3:
            raise PreconditionError("cycle length must be an integer >= 3", length=self.length)
        if self.mode not in MODES:
            raise PreconditionError("mode must be 'exact' or 'at-least'", mode=self.mode)


def find_mono_cycle(G: ColouredGraph, q: CycleQuery, budget: Optional[int] = None) -> Optional[tuple[int, ...]]:
    """A cycle answering ``q``, or ``None`` once the search space is exhausted.

    ``budget`` caps the number of path extensions; exceeding it raises
    :class:`BudgetExceeded`, which is distinct from an absent cycle.
    """
    at_least = q.mode == "at-least"
    cyc = find_cycle(G, q.colour, q.length, at_least=at_least, budget=budget)
    if cyc is not None:
        problems = verify_cycle(G, cyc, q.colour, length=None if at_least else q.length,
                                at_least=q.length if at_least else None)
        if problems:  # pragma: no cover - guards the search itself
            raise AssertionError(f"cycle search returned an invalid cycle: {problems}")
    return cyc


# -- lower-bound colourings ---------------------------------------------------------

PATTERNS = ("touch-sets", "green-bipartite-rr", "green-bipartite-bb")


def _parities(n: int, m: int, l: int) -> None:
    if n % 2 or m % 2 or n < 4 or m < 4:
        raise PreconditionError("n and m must be even and at least 4", n=n, m=m)
    if l % 2 == 0 or l < 3:
        raise PreconditionError("l must be odd and at least 3", l=l)
    if n < m:
        raise PreconditionError("need n >= m", n=n, m=m)


def _two_colour_side(gb: GraphBuilder, start: int, clique: int, small: int, inner: Colour, outer: Colour) -> list[int]:
    big = list(range(start, start + clique))
    rest = list(range(start + clique, start + clique + small))
    gb.clique(big, {inner})
    gb.clique(rest, {inner})
    gb.join(big, rest, {outer})
    return big + rest


def construct_lower_bound(pattern: str, n: int, m: int, l: int = 3, verify: bool = True) -> ColouredGraph:
    """A colouring of a complete graph with no red ``C_n``, blue ``C_m`` or green ``C_l``.

    touch-sets: parts R, B, K of sizes ``n/2-1``, ``m/2-1``, ``l-1``; an
    edge is red if it meets R, else blue if it meets B, else green. A red
    cycle alternates into R at least every other vertex, so it has at most
    ``2|R| < n`` vertices; the same holds for blue, and green lives in K.

    green-bipartite-rr: two copies of a red ``K_{n-1}`` blue-joined to
    ``m/2-1`` vertices (red inside), every edge between the copies green.
    green-bipartite-bb swaps the roles of the colours and of ``n, m``.

    With ``verify`` the absence of each target is confirmed by exact search.
    """
    pattern = pattern.lower().replace("_", "-")
    _parities(n, m, l)
    if pattern == "touch-sets":
        r, b, g = n // 2 - 1, m // 2 - 1, l - 1
        N = r + b + g
        gb = GraphBuilder(N)
        R, B = range(r), range(r, r + b)
        for u in range(N):
            for v in range(u + 1, N):
                if u in R or v in R:
                    gb.set_pair(u, v, {RED})
                elif u in B or v in B:
                    gb.set_pair(u, v, {BLUE})
                else:
                    gb.set_pair(u, v, {GREEN})
    elif pattern in ("green-bipartite-rr", "green-bipartite-bb"):
        if pattern.endswith("rr"):
            clique, small, inner, outer = n - 1, m // 2 - 1, RED, BLUE
        else:
            clique, small, inner, outer = m - 1, n // 2 - 1, BLUE, RED
        side = clique + small
        gb = GraphBuilder(2 * side)
        left = _two_colour_side(gb, 0, clique, small, inner, outer)
        right = _two_colour_side(gb, side, clique, small, inner, outer)
        gb.join(left, right, {GREEN})
    else:
        raise PreconditionError("unknown pattern", pattern=pattern, known=PATTERNS)
    G = gb.build()
    if verify:
        for colour, length in ((RED, n), (BLUE, m), (GREEN, l)):
            if find_mono_cycle(G, CycleQuery(colour, length)) is not None:
                raise AssertionError(f"{pattern} contains a {colour} C_{length}")
    return G


def applicable_patterns(n: int, m: int, l: int) -> list[str]:
    """Patterns whose order is one below the formula value for ``(n, m, l)``."""
    target = ramsey_formula_A(n, m, l) - 1
    orders = {"touch-sets": n // 2 + m // 2 + l - 3,
              "green-bipartite-rr": 2 * (n + m // 2 - 2),
              "green-bipartite-bb": 2 * (m + n // 2 - 2)}
    return [p for p in PATTERNS if orders[p] == target]


# -- Ramsey search --------------------------------------------------------------------

SCHEMA = "mixedcycles.search-report/1"
VERDICTS = ("all-colourings-hit", "witness-found", "budget-exceeded")


@dataclass
class SearchReport:
    N: int
    targets: tuple[int, ...]
    verdict: str
    witness: Optional[ColouredGraph] = None
    colourings_examined: int = 0
    stats: dict = field(default_factory=dict)
    seed: int = 0
    isomorph_rejection: bool = True

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "N": self.N, "targets": list(self.targets), "verdict": self.verdict,
                "witness": None if self.witness is None else self.witness.to_json(),
                "colourings_examined": self.colourings_examined, "stats": dict(self.stats),
                "seed": self.seed, "isomorph_rejection": self.isomorph_rejection}


def _closes_cycle(adj: list[int], v: int, length: int) -> bool:
    """Whether ``adj`` (a colour class on vertices ``0..v``) has a ``length``-cycle through ``v``."""
    # paths from v of length-1 vertices that end next to v
    stack = [(v, 1 << v, 1)]
    while stack:
        u, used, size = stack.pop()
        if size == length:
            if adj[u] >> v & 1:
                return True
            continue
        nxt = adj[u] & ~used
        while nxt:
            low = nxt & -nxt
            w = low.bit_length() - 1
            nxt ^= low
            stack.append((w, used | low, size + 1))
    return False


def _is_canonical(col: list[list[int]], size: int) -> bool:
    """Whether the column-wise code of ``col`` on ``0..size-1`` is least among relabellings.

    Relabellings are built one new position at a time; a branch stops as
    soon as its code prefix is larger, and a smaller prefix proves the
    colouring is not canonical.
    """
    perm: list[int] = []
    used = [False] * size

    def rec(j: int) -> bool:
        if j == size:
            return True
        for cand in range(size):
            if used[cand]:
                continue
            cmp = 0
            for i in range(j):
                a, b = col[perm[i]][cand], col[i][j]
                if a != b:
                    cmp = -1 if a < b else 1
                    break
            if cmp < 0:
                return False
            if cmp > 0:
                continue
            used[cand] = True
            perm.append(cand)
            ok = rec(j + 1)
            perm.pop()
            used[cand] = False
            if not ok:
                return False
        return True

    return rec(0)


def _estimate(colours: int, N: int, iso: bool) -> float:
    space = colours ** (N * (N - 1) // 2)
    return space / math.factorial(N) if iso else float(space)


def ramsey_search(targets: Sequence[int], N: int, budget: Optional[int] = None, seed: int = 0,
                  isomorph_rejection: bool = True, max_estimate: float = 5e7, count: bool = False) -> SearchReport:
    """Decide whether every colouring of ``K_N`` has a target cycle.

    ``targets`` gives one cycle length per colour (two or three colours).
    The verdict is "witness-found" with the first target-free colouring
    met, "all-colourings-hit" when none exists, or "budget-exceeded" when
    more than ``budget`` partial colourings would be examined. Sizes whose
    raw search space estimate exceeds ``max_estimate`` are refused. The
    search order is fixed, so ``seed`` is only recorded. With ``count`` the
    search continues past the first witness and ``stats["witnesses"]``
    counts all target-free colourings (up to isomorphism when rejecting
    isomorphs).
    """
    targets = tuple(int(t) for t in targets)
    if len(targets) not in (2, 3) or min(targets) < 3:
        raise PreconditionError("need two or three cycle lengths, each at least 3", targets=targets)
    if N < 1:
        raise PreconditionError("N must be positive", N=N)
    q = len(targets)
    est = _estimate(q, N, isomorph_rejection)
    if est > max_estimate:
        raise PreconditionError("search space too large", N=N, estimate=est, limit=max_estimate)
    col = [[-1] * N for _ in range(N)]
    adj = [[0] * N for _ in range(q)]
    stats = {"nodes": 0, "cycle_pruned": 0, "isomorph_pruned": 0, "witnesses": 0}
    witness = None

    def extend(v: int) -> bool:
        """Colour column ``v``; True once a witness is stored."""
        nonlocal witness
        if v == N:
            stats["witnesses"] += 1
            if witness is None:
                gb = GraphBuilder(N)
                for a in range(N):
                    for b in range(a + 1, N):
                        gb.set_pair(a, b, {Colour(col[a][b])})
                witness = gb.build()
            return not count
        for code in range(q**v):
            colours = []
            for _ in range(v):
                colours.append(code % q)
                code //= q
            colours.reverse()
            stats["nodes"] += 1
            if budget is not None and stats["nodes"] > budget:
                raise _OutOfBudget
            for i, c in enumerate(colours):
                col[i][v] = col[v][i] = c
                adj[c][i] |= 1 << v
                adj[c][v] |= 1 << i
            bad = any(_closes_cycle(adj[c], v, targets[c]) for c in set(colours))
            if bad:
                stats["cycle_pruned"] += 1
            elif isomorph_rejection and not _is_canonical(col, v + 1):
                stats["isomorph_pruned"] += 1
            elif extend(v + 1):
                return True
            for i, c in enumerate(colours):
                col[i][v] = col[v][i] = -1
                adj[c][i] &= ~(1 << v)
                adj[c][v] = 0
        return False

    try:
        extend(0)
    except _OutOfBudget:
        return SearchReport(N, targets, "budget-exceeded", None, stats["nodes"] - 1, stats, seed, isomorph_rejection)
    if witness is not None:
        for c, length in enumerate(targets):
            if length in mono_cycle_lengths(witness, Colour(c), limit=length):
                raise AssertionError("search produced a witness containing a target cycle")  # pragma: no cover
        return SearchReport(N, targets, "witness-found", witness, stats["nodes"], stats, seed, isomorph_rejection)
    return SearchReport(N, targets, "all-colourings-hit", None, stats["nodes"], stats, seed, isomorph_rejection)


class _OutOfBudget(Exception):
    pass
