"""Exact monochromatic cycle search by backtracking over bitset rows."""

from __future__ import annotations

from typing import Iterable, Optional

from .errors import BudgetExceeded
from .graph import Colour, ColouredGraph, iter_bits, mask_of


def _reach(rows, root: int, allowed: int) -> int:
    seen = 1 << root
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= rows[v]
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


def _distances(rows, root: int, allowed: int) -> dict[int, int]:
    dist = {root: 0}
    seen = 1 << root
    frontier = seen
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= rows[v]
        frontier = nxt & allowed & ~seen
        seen |= frontier
        for v in iter_bits(frontier):
            dist[v] = d
    return dist


def _bipartite(rows, comp: int) -> bool:
    root = (comp & -comp).bit_length() - 1
    side = {root: 0}
    stack = [root]
    while stack:
        v = stack.pop()
        for u in iter_bits(rows[v] & comp):
            if u not in side:
                side[u] = side[v] ^ 1
                stack.append(u)
            elif side[u] == side[v]:
                return False
    return True


class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.left = limit

    def spend(self) -> None:
        if self.left is None:
            return
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("cycle search budget exhausted", self.limit)


def find_cycle(G: ColouredGraph, colour: Colour, length: int, at_least: bool = False,
               budget: Optional[int] = None, within: Optional[Iterable[int]] = None) -> Optional[tuple[int, ...]]:
    """A ``colour`` cycle of exactly ``length`` vertices (or at least, with ``at_least``).

    Each cycle is searched from its smallest vertex, so a start vertex only
    ever extends through larger ones. Starts whose reachable set is too
    small are skipped, odd exact lengths skip bipartite regions, and in
    exact mode a branch is cut once the way back to the start is longer
    than the edges left. Returns ``None`` only after an exhaustive search;
    running out of ``budget`` extension steps raises :class:`BudgetExceeded`.
    """
    if length < 3:
        raise ValueError("cycles have at least 3 vertices")
    rows = G.rows(colour)
    sel = G.full_mask if within is None else mask_of(within)
    tick = _Budget(budget)
    for s in iter_bits(sel):
        allowed = sel & ~((1 << s) - 1)
        comp = _reach(rows, s, allowed)
        if comp.bit_count() < length:
            continue
        if not at_least and length % 2 and _bipartite(rows, comp):
            continue
        dist = _distances(rows, s, comp) if not at_least else None
        back = rows[s] & comp
        if back.bit_count() < 2:
            continue
        found = _extend(rows, s, comp, back, length, at_least, dist, tick)
        if found is not None:
            return found
    return None


def _extend(rows, s, comp, back, length, at_least, dist, tick) -> Optional[tuple[int, ...]]:
    path = [s]
    on_path = 1 << s
    stack = [rows[s] & comp & ~on_path]
    while stack:
        p = len(path)
        v = path[-1]
        if p >= 3 and back >> v & 1:
            if (p == length) or (at_least and p >= length):
                return tuple(path)
        cand = stack[-1]
        if not at_least and p >= length:
            cand = 0
        if cand:
            low = cand & -cand
            stack[-1] = cand ^ low
            u = low.bit_length() - 1
            if not at_least:
                # after stepping to u the path has p edges; length - p remain
                if dist.get(u, length + 1) > length - p:
                    continue
                if p + 1 == length and not back >> u & 1:
                    continue
            tick.spend()
            path.append(u)
            on_path |= low
            stack.append(rows[u] & comp & ~on_path)
        else:
            stack.pop()
            on_path &= ~(1 << path.pop())
    return None


def longest_cycle_at_least(G: ColouredGraph, colour: Colour, m: int, budget: Optional[int] = None,
                           within: Optional[Iterable[int]] = None) -> Optional[tuple[int, ...]]:
    """Any ``colour`` cycle on at least ``m`` vertices, or ``None`` after exhausting the space."""
    return find_cycle(G, colour, m, at_least=True, budget=budget, within=within)
