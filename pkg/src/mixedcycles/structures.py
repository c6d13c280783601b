"""The coloured structure classes H, K and K*: validators, builders, search.

A structure names disjoint parts of a subset of the vertices; the graph it
certifies is ``G`` induced on the union of the parts. Validators evaluate
each clause exactly and report every failing vertex or pair.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, fields
from typing import Optional, Sequence

from .errors import BudgetExceeded, PreconditionError
from .exact import Real, real_from_json, real_to_json
from .graph import COLOURS, Colour, ColouredGraph, GraphBuilder, iter_bits, mask_of, members, mono_components

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN


@dataclass(frozen=True)
class HStructure:
    X1: tuple[int, ...]
    X2: tuple[int, ...]
    x1: Real
    x2: Real
    c1: Real
    c2: Real
    gamma1: Colour = RED
    gamma2: Colour = BLUE

    kind = "H"
    part_names = ("X1", "X2")

    @property
    def parts(self):
        return (self.X1, self.X2)


@dataclass(frozen=True)
class KStructure:
    X1: tuple[int, ...]
    X2: tuple[int, ...]
    X3: tuple[int, ...]
    x1: Real
    x2: Real
    x3: Real
    c: Real

    kind = "K"
    part_names = ("X1", "X2", "X3")

    @property
    def parts(self):
        return (self.X1, self.X2, self.X3)


@dataclass(frozen=True)
class KStarStructure:
    X1: tuple[int, ...]
    X2: tuple[int, ...]
    Y1: tuple[int, ...]
    Y2: tuple[int, ...]
    x1: Real
    x2: Real
    y1: Real
    y2: Real
    z: Real
    c: Real

    kind = "K*"
    part_names = ("X1", "X2", "Y1", "Y2")

    @property
    def parts(self):
        return (self.X1, self.X2, self.Y1, self.Y2)


Structure = HStructure | KStructure | KStarStructure  # type: ignore[operator]

_CLASSES = {"H": HStructure, "K": KStructure, "K*": KStarStructure}


def structure_to_json(s) -> dict:
    out = {"class": s.kind}
    for f in fields(s):
        v = getattr(s, f.name)
        if f.name in s.part_names:
            out[f.name] = list(v)
        elif isinstance(v, Colour):
            out[f.name] = str(v)
        else:
            out[f.name] = real_to_json(v)
    return out


def structure_from_json(data: dict):
    cls = _CLASSES[data["class"]]
    kw = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        v = data[f.name]
        if f.name in cls.part_names:
            kw[f.name] = tuple(sorted(int(x) for x in v))
        elif f.name.startswith("gamma"):
            kw[f.name] = Colour.parse(v)
        else:
            kw[f.name] = real_from_json(v)
    return cls(**kw)


def with_parts(s, parts: Sequence[Sequence[int]]):
    return type(s)(**{**{f.name: getattr(s, f.name) for f in fields(s)},
                      **{name: tuple(sorted(p)) for name, p in zip(s.part_names, parts)}})


@dataclass
class VerificationReport:
    valid: bool
    violations: list = field(default_factory=list)

    def add(self, clause: str, detail: str) -> None:
        self.valid = False
        self.violations.append((clause, detail))

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": [list(v) for v in self.violations]}


def _part_masks(G: ColouredGraph, parts) -> list[int]:
    masks = []
    seen = 0
    for p in parts:
        m = 0
        for v in p:
            if not 0 <= v < G.n:
                raise PreconditionError("part vertex out of range", vertex=v)
            if m >> v & 1:
                raise PreconditionError("part lists a vertex twice", vertex=v)
            m |= 1 << v
        if m & seen:
            raise PreconditionError("parts overlap", overlap=members(m & seen))
        seen |= m
        masks.append(m)
    return masks


def _check_almost_complete(G: ColouredGraph, span: int, c, rep: VerificationReport, colours=None) -> None:
    rows = G.rows(None) if colours is None else _union_rows(G, colours)
    n = span.bit_count()
    for v in iter_bits(span):
        miss = (n - 1) - (rows[v] & span & ~(1 << v)).bit_count()
        if not miss <= c:
            rep.add("ii", f"vertex {v} misses {miss} neighbours, budget {float(c):.4g}")


def _union_rows(G: ColouredGraph, colours):
    out = [0] * G.n
    for c in colours:
        r = G.rows(c)
        for v in range(G.n):
            out[v] |= r[v]
    return out


def validate_H(G: ColouredGraph, cand: HStructure, span: Optional[Sequence[int]] = None) -> VerificationReport:
    """Membership of ``G[X1 u X2]`` (restricted to the two colours) in H.

    ``span``, when given, must equal ``X1 u X2``; without it the span is the
    union of the parts.
    """
    m1, m2 = _part_masks(G, cand.parts)
    if span is not None and mask_of(span) != m1 | m2:
        raise PreconditionError("X1 and X2 do not partition the span")
    rep = VerificationReport(True)
    g1, g2 = cand.gamma1, cand.gamma2
    n1, n2 = m1.bit_count(), m2.bit_count()
    if not n1 >= cand.x1:
        rep.add("i", f"|X1| = {n1} below {float(cand.x1):.4g}")
    if not n2 >= cand.x2:
        rep.add("i", f"|X2| = {n2} below {float(cand.x2):.4g}")
    _check_almost_complete(G, m1 | m2, cand.c1, rep, colours=(g1, g2))
    r1, r2 = G.rows(g1), G.rows(g2)
    c2 = cand.c2
    for v in iter_bits(m1):
        inside = m1 & ~(1 << v)
        d1, d2 = (r1[v] & inside).bit_count(), (r2[v] & inside).bit_count()
        if not (n1 - 1) - d1 <= c2 * (n1 - 1):
            rep.add("iii.a", f"vertex {v}: {g1} degree {d1} in X1 below (1-c2)(|X1|-1)")
        if not d2 <= c2 * (n1 - 1):
            rep.add("iii.a", f"vertex {v}: {g2} degree {d2} in X1 above c2(|X1|-1)")
    for side, other, size in ((m1, m2, n2), (m2, m1, n1)):
        for v in iter_bits(side):
            d1, d2 = (r1[v] & other).bit_count(), (r2[v] & other).bit_count()
            if not size - d2 <= c2 * size:
                rep.add("iii.b", f"vertex {v}: {g2} cross degree {d2} below (1-c2)*{size}")
            if not d1 <= c2 * size:
                rep.add("iii.b", f"vertex {v}: {g1} cross degree {d1} above c2*{size}")
    return rep


K_RULES = ((0, 2, RED), (1, 2, BLUE), (2, 2, GREEN))
KSTAR_RULES = ((0, 2, RED), (1, 3, RED), (0, 3, BLUE), (1, 2, BLUE), (0, 1, GREEN), (2, 3, GREEN))


def _check_exclusive(G: ColouredGraph, masks, rules, names, rep: VerificationReport) -> None:
    for i, j, colour in rules:
        others = [G.rows(c) for c in COLOURS if c != colour]
        for u in iter_bits(masks[i]):
            target = masks[j] & ~(1 << u)
            if i == j:
                target &= ~((1 << u) - 1)  # each inner pair once
            bad = (others[0][u] | others[1][u]) & target
            for v in iter_bits(bad):
                cs = sorted(str(c) for c in G.colours(u, v))
                tag = f"[{names[i]},{names[j]}]" if i != j else f"[{names[i]}]"
                rep.add("iii", f"edge {u}-{v} in {tag} is {'+'.join(cs)}, not exclusively {colour}")


def validate_K(G: ColouredGraph, cand: KStructure) -> VerificationReport:
    masks = _part_masks(G, cand.parts)
    rep = VerificationReport(True)
    for name, m, floor in zip(cand.part_names, masks, (cand.x1, cand.x2, cand.x3)):
        if not m.bit_count() >= floor:
            rep.add("i", f"|{name}| = {m.bit_count()} below {float(floor):.4g}")
    _check_almost_complete(G, masks[0] | masks[1] | masks[2], cand.c, rep)
    _check_exclusive(G, masks, K_RULES, cand.part_names, rep)
    return rep


def validate_K_star(G: ColouredGraph, cand: KStarStructure) -> VerificationReport:
    masks = _part_masks(G, cand.parts)
    rep = VerificationReport(True)
    for name, m, floor in zip(cand.part_names, masks, (cand.x1, cand.x2, cand.y1, cand.y2)):
        if not m.bit_count() >= floor:
            rep.add("i", f"|{name}| = {m.bit_count()} below {float(floor):.4g}")
    ys = masks[2].bit_count() + masks[3].bit_count()
    if not ys >= cand.z:
        rep.add("i", f"|Y1|+|Y2| = {ys} below {float(cand.z):.4g}")
    span = masks[0] | masks[1] | masks[2] | masks[3]
    _check_almost_complete(G, span, cand.c, rep)
    _check_exclusive(G, masks, KSTAR_RULES, cand.part_names, rep)
    return rep


def validate(G: ColouredGraph, cand) -> VerificationReport:
    return {"H": validate_H, "K": validate_K, "K*": validate_K_star}[cand.kind](G, cand)


def strip_to_pattern(G: ColouredGraph, cand) -> ColouredGraph:
    """Largest subgraph of ``G`` on which the exclusivity clauses can hold.

    Each constrained pair keeps only its prescribed colour (or disappears
    if it lacks it); other pairs are untouched. Since almost-completeness
    only improves with more edges, ``G`` contains a member of the class on
    these parts exactly when this subgraph validates.
    """
    if cand.kind == "H":
        return G
    rules = K_RULES if cand.kind == "K" else KSTAR_RULES
    masks = _part_masks(G, cand.parts)
    rows = [list(G.rows(c)) for c in COLOURS]
    for i, j, colour in rules:
        for u in iter_bits(masks[i]):
            target = masks[j] & ~(1 << u)
            for c in COLOURS:
                if c != colour:
                    rows[c][u] &= ~target
                    for v in iter_bits(target & G.rows(c)[u]):
                        rows[c][v] &= ~(1 << u)
    return ColouredGraph(G.n, rows)


# -- builders --------------------------------------------------------------------


def paint_H(gb: GraphBuilder, X1, X2, gamma1: Colour = RED, gamma2: Colour = BLUE) -> None:
    """``X1`` a ``gamma1`` clique joined in ``gamma2`` to ``X2``; ``X2`` inside in ``gamma1``."""
    gb.clique(X1, {gamma1})
    gb.clique(X2, {gamma1})
    gb.join(X1, X2, {gamma2})


def paint_K(gb: GraphBuilder, X1, X2, X3) -> None:
    """Prescribed pairs as required; the free pairs (inside X1, X2 and across them) green."""
    gb.clique(list(X1) + list(X2), {GREEN})
    gb.clique(X3, {GREEN})
    gb.join(X1, X3, {RED})
    gb.join(X2, X3, {BLUE})


def paint_K_star(gb: GraphBuilder, X1, X2, Y1, Y2) -> None:
    """Prescribed pairs as required; the free pairs (inside each part) green."""
    for part in (X1, X2, Y1, Y2):
        gb.clique(part, {GREEN})
    gb.join(X1, Y1, {RED})
    gb.join(X2, Y2, {RED})
    gb.join(X1, Y2, {BLUE})
    gb.join(X2, Y1, {BLUE})
    gb.join(X1, X2, {GREEN})
    gb.join(Y1, Y2, {GREEN})


def _sizes(*xs) -> list[int]:
    out = []
    for x in xs:
        if int(x) != x or x < 0:
            raise PreconditionError("part sizes must be nonnegative integers", size=x)
        out.append(int(x))
    return out


def _blocks(sizes):
    start = 0
    for s in sizes:
        yield list(range(start, start + s))
        start += s


def build_H(x1: int, x2: int, gamma1: Colour = RED, gamma2: Colour = BLUE) -> ColouredGraph:
    x1, x2 = _sizes(x1, x2)
    if gamma1 == gamma2:
        raise PreconditionError("gamma1 and gamma2 must differ")
    X1, X2 = _blocks((x1, x2))
    gb = GraphBuilder(x1 + x2)
    paint_H(gb, X1, X2, gamma1, gamma2)
    return gb.build()


def build_K(x1: int, x2: int, x3: int) -> ColouredGraph:
    sizes = _sizes(x1, x2, x3)
    gb = GraphBuilder(sum(sizes))
    paint_K(gb, *_blocks(sizes))
    return gb.build()


def build_K_star(x1: int, x2: int, y1: int, y2: int, z: Optional[int] = None) -> ColouredGraph:
    sizes = _sizes(x1, x2, y1, y2)
    if z is not None and y1 + y2 < z:
        raise PreconditionError("need y1 + y2 >= z", y1=y1, y2=y2, z=z)
    gb = GraphBuilder(sum(sizes))
    paint_K_star(gb, *_blocks(sizes))
    return gb.build()


def canonical(kind: str, sizes: Sequence[int], **params):
    """The structure matching a freshly built graph, parts in index order."""
    parts = list(_blocks(sizes))
    cls = _CLASSES[kind]
    return cls(*[tuple(p) for p in parts], **params)


# -- search ----------------------------------------------------------------------


@dataclass(frozen=True)
class SearchOutcome:
    certificate: object
    exhaustive: bool
    steps: int

    @property
    def found(self) -> bool:
        return self.certificate is not None


def _floors(template) -> list:
    if template.kind == "H":
        return [template.x1, template.x2]
    if template.kind == "K":
        return [template.x1, template.x2, template.x3]
    return [template.x1, template.x2, template.y1, template.y2]


def _pair_tables(G: ColouredGraph, template):
    """For K/K*: allowed-label-pair table per vertex pair (labels 0 = unused)."""
    if template.kind == "H":
        return None
    rules = K_RULES if template.kind == "K" else KSTAR_RULES
    need = {}
    for i, j, colour in rules:
        need[(i + 1, j + 1)] = colour
        need[(j + 1, i + 1)] = colour
    return need


def find_structure(G: ColouredGraph, template, budget: int = 2_000_000, seed: int = 0,
                   restarts: int = 200, exhaustive_limit: int = 12) -> SearchOutcome:
    """Search for parts making ``G`` contain a member of ``template``'s class.

    ``template`` supplies the class and its parameters; its parts are
    ignored. Up to ``exhaustive_limit`` vertices every assignment of
    vertices to parts (or to no part) is tried with pairwise pruning, so a
    negative answer is definitive. Larger graphs get a seeded hill climb.
    Running out of ``budget`` raises :class:`BudgetExceeded`.
    """
    if G.n <= exhaustive_limit:
        return _exhaustive(G, template, budget)
    return _local_search(G, template, budget, seed, restarts)


def _exhaustive(G: ColouredGraph, template, budget: int) -> SearchOutcome:
    k = len(template.part_names)
    need = _pair_tables(G, template)
    floors = _floors(template)
    n = G.n
    colours = [[G.colours(u, v) for v in range(n)] for u in range(n)]
    labels = [0] * n
    counts = [0] * (k + 1)
    steps = 0

    def pair_ok(u, lu, v, lv) -> bool:
        colour = need.get((lu, lv))
        if colour is None:
            return True
        cs = colours[u][v]
        return not cs or cs == {colour}

    z = math.ceil(template.z) if template.kind == "K*" else 0

    def feasible(pos) -> bool:
        left = n - pos
        gaps = [max(0, math.ceil(f) - counts[i + 1]) for i, f in enumerate(floors)]
        if z:
            gaps[2:] = [max(gaps[2] + gaps[3], z - counts[3] - counts[4])]
        return sum(gaps) <= left

    h_ok = _h_pruner(G, template, labels, counts) if template.kind == "H" else None
    # uncoloured pairs inside the span only accumulate, so K/K* can prune on them early
    adj = G.rows(None)
    miss = [0] * n
    budget_c = None if template.kind == "H" else template.c

    def place(pos, lab, sign) -> bool:
        if budget_c is None or not lab:
            return True
        bad = False
        for u in range(pos):
            if labels[u] and not adj[u] >> pos & 1:
                miss[u] += sign
                miss[pos] += sign
                bad = bad or miss[u] > budget_c
        return not (bad or miss[pos] > budget_c)

    def rec(pos):
        nonlocal steps
        if pos == n:
            cand = with_parts(template, [[v for v in range(n) if labels[v] == i + 1] for i in range(k)])
            if validate(G, cand).valid:
                return cand
            return None
        for lab in range(k, -1, -1):
            steps += 1
            if steps > budget:
                raise BudgetExceeded("structure search budget exhausted", steps)
            if need is not None and lab:
                if any(labels[u] and not pair_ok(u, labels[u], pos, lab) for u in range(pos)):
                    continue
            labels[pos] = lab
            counts[lab] += 1
            if place(pos, lab, 1) and feasible(pos + 1) and (h_ok is None or h_ok(pos)):
                got = rec(pos + 1)
                if got is not None:
                    return got
            place(pos, lab, -1)
            counts[lab] -= 1
            labels[pos] = 0
        return None

    found = rec(0)
    return SearchOutcome(found, True, steps)


def _h_pruner(G: ColouredGraph, template, labels, counts):
    """Necessary conditions for H on the vertices labelled so far.

    Every count below only grows as more vertices are labelled, and each
    is compared with its tolerance at the largest size the relevant part
    can still reach, so a failed check rules out every completion.
    """
    n = G.n
    g1, g2, c1, c2 = template.gamma1, template.gamma2, template.c1, template.c2
    r1, r2 = G.rows(g1), G.rows(g2)

    def ok(pos: int) -> bool:
        left = n - pos - 1
        cap = {1: counts[1] + left, 2: counts[2] + left}
        sets = {1: 0, 2: 0}
        for v in range(pos + 1):
            if labels[v]:
                sets[labels[v]] |= 1 << v
        span = sets[1] | sets[2]
        for v in iter_bits(span):
            here = sets[labels[v]] & ~(1 << v)
            there = sets[3 - labels[v]]
            if (span & ~(1 << v) & ~(r1[v] | r2[v])).bit_count() > c1:
                return False
            if labels[v] == 1:
                if (here & r2[v]).bit_count() > c2 * (cap[1] - 1):
                    return False
                if (here & ~r1[v]).bit_count() > c2 * (cap[1] - 1):
                    return False
            if (there & r1[v]).bit_count() > c2 * cap[3 - labels[v]]:
                return False
            if (there & ~r2[v]).bit_count() > c2 * cap[3 - labels[v]]:
                return False
        return True

    return ok


def _violation_score(G: ColouredGraph, cand) -> int:
    return len(validate(G, cand).violations)


def _side_by_colour(G: ColouredGraph, v: int, target, first: Colour, second: Colour) -> int:
    """1 if ``v`` sends at least as many ``first`` as ``second`` edges into ``target``, else 2."""
    a = sum(1 for u in target if first in G.colours(u, v))
    b = sum(1 for u in target if second in G.colours(u, v))
    return 1 if a >= b else 2


def _k_seeds(G: ColouredGraph, template):
    n = G.n
    x3 = max(1, int(float(template.x3)))
    # X3 sees both red and blue, X1 and X2 mostly one of them
    scores = (
        lambda v: G.degree(v, GREEN),
        lambda v: min(G.degree(v, RED), G.degree(v, BLUE)),
    )
    for score in scores:
        core = sorted(range(n), key=lambda v: (-score(v), v))[:x3]
        labels = [3 if v in core else _side_by_colour(G, v, core, RED, BLUE) for v in range(n)]
        yield labels


def _k_star_seeds(G: ColouredGraph):
    """Red components split by their bipartition: ``X_i`` and ``Y_i`` of one index."""
    comps = sorted(mono_components(G, RED).components, key=lambda c: (-len(c), c.vertices))
    if not comps:
        return
    a1, b1 = comps[0].sides
    labels = [0] * G.n
    for v in a1:
        labels[v] = 1
    for v in b1:
        labels[v] = 3
    if len(comps) > 1:
        a2, b2 = comps[1].sides
        # X1 and X2 are joined in green
        greens = sum(1 for u in a1 for v in a2 if GREEN in G.colours(u, v))
        greens_swapped = sum(1 for u in a1 for v in b2 if GREEN in G.colours(u, v))
        if greens_swapped > greens:
            a2, b2 = b2, a2
        for v in a2:
            labels[v] = 2
        for v in b2:
            labels[v] = 4
    yield labels
    yield [{1: 3, 3: 1, 2: 4, 4: 2}.get(x, 0) for x in labels]


def _seed_partitions(G: ColouredGraph, template, rng: random.Random):
    """Starting assignments from colour-degree profiles and components, then random ones."""
    k = len(template.part_names)
    n = G.n
    if template.kind == "H":
        g1 = template.gamma1
        order = sorted(range(n), key=lambda v: (-G.degree(v, g1), v))
        x1 = max(1, int(float(template.x1)))
        rank = {v: i for i, v in enumerate(order)}
        yield [1 if rank[v] < x1 else 2 for v in range(n)]
    elif template.kind == "K":
        yield from _k_seeds(G, template)
    else:
        yield from _k_star_seeds(G)
        yield [1 + (v % 4) for v in range(n)]
    while True:
        yield [rng.randint(0, k) for _ in range(n)]


def _local_search(G: ColouredGraph, template, budget: int, seed: int, restarts: int) -> SearchOutcome:
    rng = random.Random(seed)
    k = len(template.part_names)
    steps = 0
    seeds = _seed_partitions(G, template, rng)

    def make(labels):
        return with_parts(template, [[v for v in range(G.n) if labels[v] == i + 1] for i in range(k)])

    for _ in range(restarts):
        labels = list(next(seeds))
        score = _violation_score(G, make(labels))
        improved = True
        while score and improved:
            improved = False
            for v in range(G.n):
                for lab in range(k + 1):
                    if lab == labels[v]:
                        continue
                    steps += 1
                    if steps > budget:
                        raise BudgetExceeded("structure search budget exhausted", steps)
                    old = labels[v]
                    labels[v] = lab
                    s = _violation_score(G, make(labels))
                    if s < score:
                        score = s
                        improved = True
                        break
                    labels[v] = old
        if score == 0:
            return SearchOutcome(make(labels), False, steps)
    return SearchOutcome(None, False, steps)
