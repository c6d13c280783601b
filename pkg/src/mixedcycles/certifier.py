"""Certified outcomes for the three-colour stability dichotomy.

Given a near-complete three-multicoloured graph on ``K`` vertices and
scaled parameters, :func:`certify_stability` looks for one of six outcomes:
a large red, blue or green-odd connected-matching, two disjoint copies of
the two-colour structure H, or a copy of K or K*. Every candidate is
re-validated before it is returned; when nothing validates the result is
:class:`Inconclusive` with the transcript of what was tried.

:func:`verify_outcome` re-checks an outcome from scratch against the graph
and the parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .decomposition import Purified, case_e_decomposition, green_XYW, purify_inside, purify_pair
from .errors import PreconditionError
from .exact import Surd, as_fraction
from .graph import Colour, ColouredGraph, completeness_report, mask_of, members, threshold_c
from .lemmas import _split_two_holes, h_partition_search
from .matching import (
    ConnectedMatchingCertificate,
    largest_connected_matching,
    largest_odd_connected_matching,
    max_bipartite_matching,
)
from .structures import (
    HStructure,
    KStarStructure,
    KStructure,
    find_structure,
    structure_from_json,
    structure_to_json,
    strip_to_pattern,
    validate_H,
    validate_K,
    validate_K_star,
    with_parts,
)
from .verify import verify_connected_matching

RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN

TAGS = ("i", "ii", "iii", "iv", "v", "vi")
NAMES = {"i": "RedMatching", "ii": "BlueMatching", "iii": "GreenOddMatching",
         "iv": "DoubleH", "v": "K", "vi": "KStar"}
DEFAULT_ORDER = ("i", "ii", "iii", "v", "vi", "iv")

# Multiples of eta^(1/2) k. The dispatch bounds are used as stated; the
# purification bounds are further multiplied by the caller's slack.
THRESHOLDS = {
    "case_c_w": 7,
    "small_P": 95,
    "small_Q": 95,
    "l2q1_first": 322,
    "l1q2_second": 520,
    "l1q1_first": 842,
    "inside_first": 1880,
    "inside_second": 842,
    "split_green": 196,
    "split_inside": 196,
}


def eta_bound(alpha1, alpha2) -> Fraction:
    """The largest admissible ``eta`` (exclusive) for the given alphas."""
    a1, a2 = as_fraction(alpha1), as_fraction(alpha2)
    return min(Fraction(1, 10**5), a2 / 10**24, (a2 / 100) ** 8, (a2 / (1200 * a1)) ** 2)


@dataclass(frozen=True)
class ScaledParams:
    alpha1: Fraction
    alpha2: Fraction
    alpha3: Fraction
    eta: Fraction
    k: int
    enforce_scaling: bool = False

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3", "eta"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        a1, a2, a3 = self.alpha1, self.alpha2, self.alpha3
        if not (a2 > 0 and a3 > 0 and a1 >= a2):
            raise PreconditionError("need alpha1 >= alpha2 > 0 and alpha3 > 0", alpha1=a1, alpha2=a2, alpha3=a3)
        if int(self.k) != self.k or self.k < 1:
            raise PreconditionError("k must be a positive integer", k=self.k)
        bound = eta_bound(a1, a2)
        if not 0 < self.eta < bound:
            raise PreconditionError("eta outside (0, eta bound)", eta=self.eta, bound=bound)
        if self.enforce_scaling and not (2 >= a3 >= 1 >= a1):
            raise PreconditionError("scaling convention 2 >= alpha3 >= 1 >= alpha1 violated")

    @property
    def c(self) -> Fraction:
        return threshold_c(self.alpha1, self.alpha2, self.alpha3)

    @property
    def eta_bound(self) -> Fraction:
        return eta_bound(self.alpha1, self.alpha2)

    @property
    def window(self) -> tuple[Fraction, Fraction]:
        return (self.c - self.eta) * self.k, (self.c - self.eta / 2) * self.k

    def orders(self) -> range:
        """The admissible graph orders."""
        lo, hi = self.window
        return range(math.ceil(lo), math.floor(hi) + 1)

    def root(self, q: int, coeff=1, base=0) -> Surd:
        return Surd(base, coeff, self.eta, q)

    # class parameters, each a template with empty parts

    def H1(self) -> HStructure:
        t = self.root(32)
        k, a1, a2 = self.k, self.alpha1, self.alpha2
        return HStructure((), (), (a1 - 2 * t) * k, (a2 / 2 - 2 * t) * k, 3 * self.eta**4 * k, t, RED, BLUE)

    def H2(self) -> HStructure:
        t = self.root(32)
        k, a1, a2 = self.k, self.alpha1, self.alpha2
        return HStructure((), (), (a2 - 2 * t) * k, (a1 / 2 - 2 * t) * k, 3 * self.eta**4 * k, t, BLUE, RED)

    def K(self) -> KStructure:
        h = self.root(2)
        k, a1, a2, a3 = self.k, self.alpha1, self.alpha2, self.alpha3
        return KStructure((), (), (), (a1 / 2 - 14000 * h) * k, (a2 / 2 - 14000 * h) * k,
                          (a3 - 68000 * h) * k, 4 * self.eta**4 * k)

    def K_star1(self) -> KStarStructure:
        h = self.root(2)
        k, a1, a3 = self.k, self.alpha1, self.alpha3
        low, high = (a1 / 2 - 97 * h) * k, (a1 / 2 + 102 * h) * k
        return KStarStructure((), (), (), (), low, low, high, high, (a3 - 10 * h) * k, 4 * self.eta**4 * k)

    def K_star2(self) -> KStarStructure:
        h = self.root(2)
        k, a1, a2, a3 = self.k, self.alpha1, self.alpha2, self.alpha3
        return KStarStructure((), (), (), (), (a1 / 2 - 97 * h) * k, (a2 / 2 - 97 * h) * k,
                              (3 * a3 / 4 - 140 * h) * k, 100 * h * k, (a3 - 10 * h) * k, 4 * self.eta**4 * k)

    def templates(self) -> dict:
        return {"H1": self.H1(), "H2": self.H2(), "K": self.K(), "K1*": self.K_star1(), "K2*": self.K_star2()}

    def to_json(self) -> dict:
        return {"alpha1": str(self.alpha1), "alpha2": str(self.alpha2), "alpha3": str(self.alpha3),
                "eta": str(self.eta), "k": self.k}


@dataclass
class StabilityOutcome:
    tag: str
    payload: dict
    transcript: list = field(default_factory=list)
    case: Optional[str] = None

    ok = True

    @property
    def name(self) -> str:
        return NAMES[self.tag]

    def to_json(self) -> dict:
        return {"result": "outcome", "tag": self.tag, "name": self.name, "case": self.case,
                "payload": _payload_json(self.payload), "transcript": self.transcript}


@dataclass
class Inconclusive:
    transcript: list = field(default_factory=list)
    case: Optional[str] = None

    ok = False
    tag = None

    def to_json(self) -> dict:
        return {"result": "inconclusive", "case": self.case, "transcript": self.transcript}


def _payload_json(payload: dict) -> dict:
    out = {}
    for key, val in payload.items():
        if isinstance(val, ConnectedMatchingCertificate):
            out[key] = val.to_json()
        elif isinstance(val, (HStructure, KStructure, KStarStructure)):
            out[key] = structure_to_json(val)
        elif isinstance(val, list) and val and isinstance(val[0], HStructure):
            out[key] = [structure_to_json(s) for s in val]
        else:
            out[key] = val
    return out


def outcome_from_json(data: dict):
    if data.get("result") == "inconclusive":
        return Inconclusive(data.get("transcript", []), data.get("case"))
    payload = {}
    for key, val in data["payload"].items():
        if key == "matching":
            payload[key] = ConnectedMatchingCertificate.from_json(val)
        elif key == "structure":
            payload[key] = structure_from_json(val)
        elif key == "H":
            payload[key] = [structure_from_json(s) for s in val]
        else:
            payload[key] = val
    return StabilityOutcome(data["tag"], payload, data.get("transcript", []), data.get("case"))


# -- the pipeline ---------------------------------------------------------------------


def _check_preconditions(G: ColouredGraph, p: ScaledParams) -> None:
    lo, hi = p.window
    if not lo <= G.n <= hi:
        raise PreconditionError("graph order outside the window", K=G.n, low=float(lo), high=float(hi))
    if G.n > 1:
        rep = completeness_report(G)
        if rep.min_degree < (1 - p.eta**4) * (G.n - 1):
            raise PreconditionError("graph is not (1-eta^4)-complete", min_degree=rep.min_degree)


def _fmt(x) -> str:
    return f"{float(x):.6g}"


def _validated(G: ColouredGraph, cand):
    """Validation report of a K/K* candidate on the prescribed-colour subgraph."""
    if cand.kind == "K":
        return validate_K(strip_to_pattern(G, cand), cand)
    return validate_K_star(strip_to_pattern(G, cand), cand)


def _minus(vs, *drop) -> tuple[int, ...]:
    gone = set()
    for d in drop:
        gone.update(d)
    return tuple(v for v in vs if v not in gone)


class _Route:
    """One purification chain; records every step and gives up on the first violation."""

    def __init__(self, G: ColouredGraph, log: list, label: str):
        self.G, self.log, self.label, self.alive = G, log, label, True

    def pair(self, A, B, keep: Colour, limit, name: str):
        if not self.alive:
            return A, B
        res = purify_pair(self.G, A, B, keep, limit)
        if not isinstance(res, Purified):
            self.alive = False
            self.log.append({"step": self.label, "purify": name, "violation": res.matching.vertex_count,
                             "threshold": _fmt(limit)})
            return A, B
        self.log.append({"step": self.label, "purify": name,
                         "discarded": len(res.discarded_A) + len(res.discarded_B), "threshold": _fmt(limit)})
        return res.kept_A, res.kept_B

    def inside(self, A, keep: Colour, limits, name: str):
        if not self.alive:
            return A
        res = purify_inside(self.G, A, keep, limits)
        if not isinstance(res, Purified):
            self.alive = False
            self.log.append({"step": self.label, "purify": name, "violation": res.matching.vertex_count})
            return A
        self.log.append({"step": self.label, "purify": name, "discarded": len(res.discarded_A)})
        return res.kept_A


def _k_candidates(G, p: ScaledParams, L, Q, unit, log):
    """K from a maximum ``first``-colour matching between ``L`` and ``Q``, for both colour roles."""
    out = []
    T = THRESHOLDS
    for first, second in ((RED, BLUE), (BLUE, RED)):
        route = _Route(G, log, f"K route ({first} first, |L|={len(L)})")
        R = max_bipartite_matching(G, first, L, Q)
        cover = set(R.vertices)
        L1 = tuple(v for v in L if v in cover)
        Q1 = tuple(v for v in Q if v in cover)
        L2, Q2 = _minus(L, L1), _minus(Q, Q1)
        L2, Q1 = route.pair(L2, Q1, first, T["l2q1_first"] * unit, "[L2,Q1]")
        L1, Q2 = route.pair(L1, Q2, second, T["l1q2_second"] * unit, "[L1,Q2]")
        L1, Q1 = route.pair(L1, Q1, first, T["l1q1_first"] * unit, "[L1,Q1]")
        X3 = tuple(sorted(L1 + L2))
        X3 = route.inside(X3, GREEN, {first: T["inside_first"] * unit, second: T["inside_second"] * unit}, "[L]")
        # the same bounds close any pair the staged steps did not reach
        X3, Q1 = route.pair(X3, Q1, first, T["l1q1_first"] * unit, "[X3,Q1]")
        X3, Q2 = route.pair(X3, Q2, second, T["l1q1_first"] * unit, "[X3,Q2]")
        if not route.alive:
            continue
        X1, X2 = (Q1, Q2) if first == RED else (Q2, Q1)
        out.append(with_parts(p.K(), (X1, X2, X3)))
    return out


def _k_star_candidates(G, p: ScaledParams, L, Q, P, unit, log):
    """K* from a cross-coloured split of ``[L, Q]``; ``P`` vertices join a side when consistent."""
    split = _split_two_holes(G, mask_of(L), mask_of(Q), 1)
    if split is None:
        log.append({"step": "K* route", "split": "none"})
        return [], []
    L1, L2, Q1, Q2 = split
    red, blue = G.rows(RED), G.rows(BLUE)
    q1, q2 = mask_of(Q1), mask_of(Q2)
    extra1, extra2 = [], []
    for v in P:
        cols = G.rows(GREEN)[v] & (q1 | q2)
        if cols:
            continue
        if red[v] & q1 == q1 and blue[v] & q2 == q2 and not blue[v] & q1 and not red[v] & q2:
            extra1.append(v)
        elif blue[v] & q1 == q1 and red[v] & q2 == q2 and not red[v] & q1 and not blue[v] & q2:
            extra2.append(v)
    T = THRESHOLDS
    ks, kstars = [], []
    for Y1, Y2 in ((L1, L2), (tuple(sorted(L1 + tuple(extra1))), tuple(sorted(L2 + tuple(extra2))))):
        route = _Route(G, log, f"K* route (|Y|={len(Y1) + len(Y2)})")
        A1, A2 = route.pair(Q1, Q2, GREEN, T["split_green"] * unit, "[Q1,Q2]")
        B1, B2 = route.pair(Y1, Y2, GREEN, T["split_green"] * unit, "[L1,L2]")
        if route.alive:
            for tpl in (p.K_star1(), p.K_star2()):
                kstars.append(with_parts(tpl, (A1, A2, B1, B2)))
                kstars.append(with_parts(tpl, (A2, A1, B2, B1)))
        # a lopsided split leaves K with the larger L side
        for big, q_red in ((Y1, Q1), (Y2, Q2)):
            r2 = _Route(G, log, "K from split")
            X3 = r2.inside(big, GREEN, T["split_inside"] * unit, "[L1]")
            q_blue = Q2 if q_red is Q1 else Q1
            if r2.alive:
                ks.append(with_parts(p.K(), (q_red, q_blue, X3)))
    return ks, kstars


def _case_d(G, p: ScaledParams, xyw, log):
    """Two disjoint H members, one inside each of X and Y."""
    theta = p.root(32)
    allow_h2 = p.alpha2 >= p.alpha1 - p.root(16) * 1
    found = []
    for side_name, side in (("X", xyw.X), ("Y", xyw.Y)):
        hit = None
        options = [("H1", p.H1())] + ([("H2", p.H2())] if allow_h2 else [])
        for cls, tpl in options:
            res = h_partition_search(G, tpl.gamma1, tpl.gamma2, theta, within=mask_of(side))
            if res is None:
                continue
            _, core, outer = res
            cand = with_parts(tpl, (members(core), members(outer)))
            rep = validate_H(G, cand)
            log.append({"step": f"H search in {side_name}", "class": cls, "valid": rep.valid,
                        "sizes": [len(cand.X1), len(cand.X2)]})
            if rep.valid:
                hit = (cls, cand)
                break
        if hit is None:
            return None
        found.append(hit)
    return {"H": [h for _, h in found], "classes": [c for c, _ in found]}


def certify_stability(G: ColouredGraph, params: ScaledParams, slack=1,
                      order: Sequence[str] = DEFAULT_ORDER):
    """Find and verify one outcome; :class:`Inconclusive` when none verifies.

    ``order`` lists the outcome tags to attempt, most preferred first;
    tags left out are not searched for.
    """
    p = params
    slack = as_fraction(slack)
    if slack <= 0:
        raise PreconditionError("slack must be positive", slack=slack)
    unknown = set(order) - set(TAGS)
    if unknown:
        raise PreconditionError("unknown outcome tags", tags=sorted(unknown))
    _check_preconditions(G, p)
    k = p.k
    h = p.root(2)
    log: list = [{"step": "params", **p.to_json(), "K": G.n, "slack": str(slack),
                  "window": [_fmt(x) for x in p.window]}]
    found: dict = {}

    def accept(tag, payload, case=None):
        out = StabilityOutcome(tag, payload, log, case)
        problems = verify_outcome(G, p, out)
        log.append({"step": "verify", "tag": tag, "valid": not problems, "problems": problems[:5]})
        if not problems and tag not in found:
            found[tag] = out

    for tag, colour, alpha, odd in (("i", RED, p.alpha1, False), ("ii", BLUE, p.alpha2, False),
                                    ("iii", GREEN, p.alpha3, True)):
        if tag not in order:
            continue
        cert = largest_odd_connected_matching(G, colour) if odd else largest_connected_matching(G, colour)
        need = alpha * k
        log.append({"step": "matching", "tag": tag, "vertices": cert.vertex_count, "need": _fmt(need)})
        if cert.vertex_count >= need:
            accept(tag, {"matching": cert})

    def best(case):
        for tag in order:
            if tag in found:
                found[tag].case = case
                return found[tag]
        return None

    early = best(None)
    if early is not None and not {"iv", "v", "vi"} & set(order[:order.index(early.tag)]):
        return early

    F = largest_connected_matching(G, GREEN)
    log.append({"step": "green F", "vertices": F.vertex_count, "odd": F.odd_witness is not None})
    unit = h * k * slack
    if F.odd_witness is None:
        xyw = green_XYW(G, k)
        w = Fraction(len(xyw.W), k)
        case = "C" if w >= THRESHOLDS["case_c_w"] * h else "D"
        log.append({"step": "dispatch", "case": case, "w": str(w), "bound": "7 eta^(1/2)",
                    "X": len(xyw.X), "Y": len(xyw.Y), "W": len(xyw.W)})
        if case == "D" and "iv" in order:
            payload = _case_d(G, p, xyw, log)
            if payload is not None:
                accept("iv", payload, "D")
        chosen = best(case)
        return chosen if chosen is not None else Inconclusive(log, case)

    dec = case_e_decomposition(G, F)
    L, P, Q = dec.L, dec.P, dec.Q
    small_p = len(P) <= THRESHOLDS["small_P"] * h * k
    small_q = len(Q) <= THRESHOLDS["small_Q"] * h * k
    sub = "E.i" if small_p else "E.ii" if small_q else "E.iii"
    log.append({"step": "dispatch", "case": "E", "subcase": sub, "L": len(L), "P": len(P), "Q": len(Q)})
    cands = []
    if "v" in order or "vi" in order:
        R = dec.residual(G)
        for base in (L, tuple(sorted(L + P))):
            cands += [("v", c) for c in _k_candidates(R, p, base, Q, unit, log)]
        ks, kstars = _k_star_candidates(R, p, L, Q, P, unit, log)
        cands += [("v", c) for c in ks] + [("vi", c) for c in kstars]
    for tag, cand in cands:
        if tag not in order or tag in found:
            continue
        if _validated(G, cand).valid:
            payload = {"structure": cand}
            if tag == "vi":
                payload["class"] = "K1*" if cand.y2 == p.K_star1().y2 else "K2*"
            accept(tag, payload, "E")
    if not ({"v", "vi"} & set(found)) and G.n <= 12:
        for tag, cls, tpl in (("v", "K", p.K()), ("vi", "K1*", p.K_star1()), ("vi", "K2*", p.K_star2())):
            if tag not in order or tag in found:
                continue
            res = find_structure(G, tpl)
            log.append({"step": "exhaustive structure search", "class": cls, "found": res.found})
            if res.found:
                payload = {"structure": res.certificate}
                if tag == "vi":
                    payload["class"] = cls
                accept(tag, payload, "E")
    chosen = best("E")
    return chosen if chosen is not None else Inconclusive(log, "E")


# -- re-verification ------------------------------------------------------------------


def _same_params(s, tpl) -> bool:
    skip = set(s.part_names)
    return all(getattr(s, f) == getattr(tpl, f) for f in s.__dataclass_fields__ if f not in skip)


def verify_outcome(G: ColouredGraph, params: ScaledParams, outcome) -> list[str]:
    """Problems with ``outcome`` as a witness for ``G`` and ``params``; empty when valid."""
    p = params
    if not getattr(outcome, "ok", False):
        return ["not an outcome"]
    tag, payload = outcome.tag, outcome.payload
    k, h = p.k, p.root(2)
    problems: list[str] = []
    if tag in ("i", "ii", "iii"):
        colour, alpha = {"i": (RED, p.alpha1), "ii": (BLUE, p.alpha2), "iii": (GREEN, p.alpha3)}[tag]
        cert = payload.get("matching")
        if cert is None:
            return ["missing matching"]
        return verify_connected_matching(G, cert, colour, min_vertices=alpha * k, require_odd=tag == "iii")
    if tag == "iv":
        hs, classes = payload.get("H", []), payload.get("classes", [])
        if len(hs) != 2 or len(classes) != 2:
            return ["need two H structures with their classes"]
        spans = []
        for s, cls in zip(hs, classes):
            tpl = {"H1": p.H1(), "H2": p.H2()}.get(cls)
            if tpl is None:
                problems.append(f"unknown class {cls}")
                continue
            if not _same_params(s, tpl):
                problems.append(f"{cls}: parameters differ from the required ones")
            rep = validate_H(G, with_parts(tpl, s.parts))
            problems += [f"{cls} {c}: {d}" for c, d in rep.violations]
            spans.append(mask_of(s.X1) | mask_of(s.X2))
        if len(spans) == 2 and spans[0] & spans[1]:
            problems.append("the two H structures overlap")
        if not p.alpha3 <= h * 14 + (3 * p.alpha1 / 2 + p.alpha2 / 2):
            problems.append("furthermore: alpha3 too large for outcome (iv)")
        if "H2" in classes and not p.alpha2 >= p.alpha1 - p.root(16):
            problems.append("furthermore: H2 only allowed when alpha2 >= alpha1 - eta^(1/16)")
        return problems
    if tag in ("v", "vi"):
        s = payload.get("structure")
        if s is None:
            return ["missing structure"]
        if tag == "v":
            tpl = p.K() if s.kind == "K" else None
        else:
            tpl = {"K1*": p.K_star1(), "K2*": p.K_star2()}.get(payload.get("class")) if s.kind == "K*" else None
        if tpl is None:
            return [f"structure of kind {s.kind} does not fit outcome ({tag})"]
        if not _same_params(s, tpl):
            problems.append("parameters differ from the required ones")
        cand = with_parts(tpl, s.parts)
        rep = validate_K(strip_to_pattern(G, cand), cand) if tag == "v" else validate_K_star(strip_to_pattern(G, cand), cand)
        problems += [f"{c}: {d}" for c, d in rep.violations]
        if not p.alpha3 >= h * -10 + (3 * p.alpha1 / 2 + p.alpha2 / 2):
            problems.append(f"furthermore: alpha3 too small for outcome ({tag})")
        return problems
    return [f"unknown tag {tag}"]
