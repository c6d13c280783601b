"""Seeded random instances that satisfy each lemma's hypotheses.

Used by the property tests and by ``verify-lemma --trials``. Every
generator takes a :class:`random.Random` and is deterministic given it.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .graph import Colour, ColouredGraph

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN

PAIR_CHOICES = ((RED,), (BLUE,), (RED, BLUE))


class _Rows:
    """Minimal write-once pair colouring; faster than the general builder."""

    def __init__(self, n: int):
        self.n = n
        self.rows = [[0] * n for _ in Colour]

    def set_pair(self, u: int, v: int, colours) -> None:
        for c in colours:
            row = self.rows[c]
            row[u] |= 1 << v
            row[v] |= 1 << u

    def build(self) -> ColouredGraph:
        return ColouredGraph(self.n, self.rows)


def trial_rng(seed, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


def _drop_with_budget(rng: random.Random, pairs: list, budget: int, n: int) -> set:
    """Random subset of ``pairs`` touching each vertex at most ``budget`` times."""
    if budget <= 0 or not pairs:
        return set()
    used = [0] * n
    target = rng.randint(0, budget * n // 2)
    dropped = set()
    for u, v in rng.sample(pairs, min(len(pairs), 4 * target + 1)):
        if len(dropped) >= target:
            break
        if used[u] < budget and used[v] < budget:
            used[u] += 1
            used[v] += 1
            dropped.add((u, v))
    return dropped


def eleven_instance(rng: random.Random, max_side: int = 40):
    """``(G, A, B, a, ell)`` with ``G[A, B]`` red and a-almost-complete, ``a/ell < 1/2``."""
    nb = rng.randint(1, max_side)
    na = rng.randint(nb, max_side)
    ell = rng.randint(1, nb)
    a = rng.randint(0, (ell - 1) // 2)
    n = na + nb
    A, B = list(range(na)), list(range(na, n))
    cross = [(x, y) for x in A for y in B]
    dropped = _drop_with_budget(rng, cross, a, n)
    gb = _Rows(n)
    for x, y in cross:
        if (x, y) in dropped:
            if rng.random() < 0.5:
                gb.set_pair(x, y, (BLUE,))
        else:
            gb.set_pair(x, y, (RED,) if rng.random() < 0.8 else (RED, GREEN))
    return gb.build(), A, B, a, ell


def dirac_instance(rng: random.Random, max_n: int = 40) -> ColouredGraph:
    """Red graph on ``n >= 3`` vertices with minimum red degree at least ``n/2``."""
    n = rng.randint(3, max_n)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    dropped = _drop_with_budget(rng, pairs, (n - 1) - math.ceil(n / 2), n)
    gb = _Rows(n)
    for u, v in pairs:
        gb.set_pair(u, v, (BLUE,) if (u, v) in dropped else (RED,))
    return gb.build()


def eg_instance(rng: random.Random, max_n: int = 30):
    """``(G, m)`` with at least ``((m-1)(K-1))/2 + 1`` red edges."""
    n = rng.randint(3, max_n)
    m = rng.randint(3, n)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    need = -(-((m - 1) * (n - 1) + 2) // 2)
    red = set(rng.sample(pairs, rng.randint(need, len(pairs))))
    gb = _Rows(n)
    for u, v in pairs:
        gb.set_pair(u, v, (RED,) if (u, v) in red else (BLUE,))
    return gb.build(), m


def ten_instance(rng: random.Random, eps, nb: int, extra: int = 100):
    """``(G, A, B)``: red bipartite graph with at least ``(1-eps)|A||B|`` edges, ``|A| >= |B|``."""
    e = Fraction(eps)
    na = nb + rng.randint(0, extra)
    n = na + nb
    amask = (1 << na) - 1
    bmask = ((1 << n) - 1) ^ amask
    drop = math.floor(e * na * nb)
    removed = rng.sample(range(na * nb), drop)
    rows_a = [bmask] * na
    rows_b = [amask] * nb
    for idx in removed:
        x, y = divmod(idx, nb)
        rows_a[x] &= ~(1 << (na + y))
        rows_b[y] &= ~(1 << x)
    red = rows_a + rows_b
    blue = [0] * n
    return ColouredGraph(n, [red, blue, [0] * n]), list(range(na)), list(range(na, n))


def _colour_pair(rng: random.Random, base, noise: float):
    if rng.random() < noise:
        return rng.choice(PAIR_CHOICES)
    return base


def dgf0_instance(rng: random.Random, eta=Fraction(1, 20), K: int = 100) -> ColouredGraph:
    """A (1-eta)-complete red/blue graph on K vertices from one of several templates."""
    e = Fraction(eta)
    budget = math.floor(e * (K - 1))
    pairs = [(u, v) for u in range(K) for v in range(u + 1, K)]
    dropped = _drop_with_budget(rng, pairs, budget, K)
    style = rng.randrange(4)
    side = [rng.random() < 0.5 for _ in range(K)]
    p = rng.random()
    noise = rng.choice((0, 0.01, 0.1))
    gb = _Rows(K)
    for u, v in pairs:
        if (u, v) in dropped:
            continue
        if style == 0:
            base = (RED,) if rng.random() < p else (BLUE,)
        elif style == 1:
            base = (RED,) if side[u] == side[v] else (BLUE,)
        elif style == 2:
            base = (RED,) if side[u] and side[v] else (BLUE,)
        else:
            base = (RED,) if min(u, v) < K // 3 else (BLUE,)
        gb.set_pair(u, v, _colour_pair(rng, base, noise))
    return gb.build()


def twoholes_instance(rng: random.Random):
    """``(G, A, B, eta)`` meeting the two-hole hypotheses."""
    eta = rng.choice((Fraction(1, 50), Fraction(1, 20), Fraction(2, 25)))
    K = rng.randint(math.ceil(2 / eta), max(math.ceil(2 / eta), 110))
    least = math.ceil(6 * eta * K)
    na = rng.randint(least, K - least)
    A, B = list(range(na)), list(range(na, K))
    cross = [(a, b) for a in A for b in B]
    dropped = _drop_with_budget(rng, cross, math.floor(eta * (K - 1)), K)
    style = rng.randrange(5)
    noise = rng.choice((0, 0, 0.005, 0.05))
    cut_a = rng.randint(0, na)
    cut_b = na + rng.randint(0, K - na)
    if style == 3:
        # a thin B_1 and a few red stars in A_1
        cut_b = na + rng.randint(0, max(0, math.ceil(3 * eta * K) - 1))
    stars = set(rng.sample(A, rng.randint(0, min(3, na))))
    p = rng.random()
    gb = _Rows(K)
    for a, b in cross:
        if (a, b) in dropped:
            continue
        same = (a < cut_a) == (b < cut_b)
        if style == 0:
            base = (RED,) if rng.random() < p else (BLUE,)
        elif style in (1, 3):
            base = (RED,) if same else (BLUE,)
        elif style == 2:
            base = (RED,) if a < cut_a else (BLUE,)
        else:
            base = rng.choice(PAIR_CHOICES)
        if style == 3 and a in stars:
            base = (RED,)
        gb.set_pair(a, b, _colour_pair(rng, base, noise))
    return gb.build(), A, B, eta


# -- stability instances at the certifier's parameter scale --------------------------


def _paint(n: int, blocks: list, rules, perm: list) -> ColouredGraph:
    """Complete graph on ``n`` vertices: ``rules`` colours block pairs, the rest green."""
    rows = [[0] * n for _ in Colour]
    colour_of = {}
    for i, j, colour in rules:
        colour_of[(i, j)] = colour_of[(j, i)] = colour
    owner = [0] * n
    for b, part in enumerate(blocks):
        for v in part:
            owner[v] = b
    for u in range(n):
        for v in range(u + 1, n):
            c = colour_of.get((owner[u], owner[v]), GREEN)
            pu, pv = perm[u], perm[v]
            rows[c][pu] |= 1 << pv
            rows[c][pv] |= 1 << pu
    return ColouredGraph(n, rows)


def _consecutive(sizes):
    out, start = [], 0
    for s in sizes:
        out.append(list(range(start, start + s)))
        start += s
    return out


def stability_instance(rng: random.Random, kind: str, k=None, noise: int = 0):
    """``(G, params, parts)`` for the stability certifier.

    ``kind`` is "K", "K*" or "H" (two H blocks with green glue between
    them). The alphas sit just above the sizes the planted structure
    needs, by amounts far below ``eta^(1/2) k``, so that no large
    monochromatic connected-matching exists and the graph order lies in
    the admissible window. ``parts`` lists the planted parts as vertex
    labels of ``G``. ``noise`` recolours that many random pairs.
    """
    from .certifier import ScaledParams, eta_bound

    k = rng.randint(200, 500) if k is None else k
    if kind == "K":
        n1 = rng.randint(k // 20, k // 8)
        n2 = rng.randint(max(1, (3 * n1) // 5), n1)
        n3 = 3 * n1 + n2 + rng.randint(1, k // 5)
        sizes = [n1, n2, n3]
        base = (Fraction(2 * n1, k), Fraction(2 * n2, k))
        rules = [(0, 2, RED), (1, 2, BLUE)]
    elif kind == "K*":
        a = rng.randint(k // 20, k // 8)
        b1 = rng.randint(a + 1, 3 * a)
        b2 = max(a + 1, 4 * a + 1 - b1) + rng.randint(0, k // 10)
        sizes = [a, a, b1, b2]
        base = (Fraction(2 * a, k), Fraction(2 * a, k))
        rules = [(0, 2, RED), (1, 3, RED), (0, 3, BLUE), (1, 2, BLUE)]
    elif kind == "H":
        n1 = rng.randint(k // 10, k // 4)
        n2 = rng.randint(1, (n1 - 1) // 2)
        sizes = [n1, n2, n1, n2]
        base = (Fraction(n1, k), Fraction(2 * n2, k))
        # inside each block: X1 and X2 red, across them blue; between blocks green
        rules = [(0, 0, RED), (1, 1, RED), (0, 1, BLUE), (2, 2, RED), (3, 3, RED), (2, 3, BLUE)]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    eta = eta_bound(*base) / 4
    d = Fraction(3, 8) * eta * k
    if kind == "K":
        a1, a2, a3 = (2 * n1 + d) / k, (2 * n2 + d) / k, (n3 + d) / k
    elif kind == "K*":
        a1 = a2 = (2 * a + d) / k
        a3 = (b1 + b2 + d) / k
    else:
        # order deficit 2 (d / 2) + d = 3 eta k / 4
        a1, a2 = (n1 + d / 2) / k, (2 * n2 + d) / k
        a3 = a1
    params = ScaledParams(a1, a2, a3, eta, k)
    n = sum(sizes)
    perm = list(range(n))
    rng.shuffle(perm)
    blocks = _consecutive(sizes)
    G = _paint(n, blocks, rules, perm)
    if noise:
        rows = [list(G.rows(c)) for c in Colour]
        for _ in range(noise):
            u, v = rng.sample(range(n), 2)
            new = rng.choice(list(Colour))
            for c in Colour:
                rows[c][u] &= ~(1 << v)
                rows[c][v] &= ~(1 << u)
            rows[new][u] |= 1 << v
            rows[new][v] |= 1 << u
        G = ColouredGraph(n, rows)
    parts = [sorted(perm[v] for v in b) for b in blocks]
    return G, params, parts
