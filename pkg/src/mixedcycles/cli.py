"""Command-line entry point: ``mixedcycles <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 counterexample or violation,
3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BudgetExceeded, CounterexampleFound, GraphError, PreconditionError
from .graph import Colour, load_graph, ramsey_formula_A, ramsey_formula_C, threshold_c

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _vertices(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _emit(args, data: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(data, indent=2, default=str))
    else:
        for line in lines:
            print(line)


# -- formula ------------------------------------------------------------------------


def cmd_formula(args) -> int:
    if args.theorem == "A":
        value = ramsey_formula_A(args.n, args.m, args.l)
    elif args.theorem == "C":
        value = ramsey_formula_C(args.n, args.m, args.l)
    else:
        if None in (args.alpha1, args.alpha2, args.alpha3):
            raise PreconditionError("--theorem B needs --alpha1, --alpha2 and --alpha3")
        value = threshold_c(Fraction(args.alpha1), Fraction(args.alpha2), Fraction(args.alpha3))
    _emit(args, {"theorem": args.theorem, "value": str(value)}, [str(value)])
    return EXIT_OK


# -- construct ------------------------------------------------------------------------


def cmd_construct(args) -> int:
    from .search import construct_lower_bound

    G = construct_lower_bound(args.pattern, args.n, args.m, args.l, verify=args.verify)
    formula = ramsey_formula_A(args.n, args.m, args.l)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(G.to_json(), fh)
    data = {"pattern": args.pattern, "order": G.n, "formula": formula, "verified": args.verify,
            "graph": G.to_json()}
    lines = [f"pattern {args.pattern}: order {G.n} (formula value {formula})"]
    if args.verify:
        lines.append(f"verified: no red C_{args.n}, blue C_{args.m}, green C_{args.l}")
    _emit(args, data, lines)
    return EXIT_OK


# -- search ---------------------------------------------------------------------------


def cmd_search(args) -> int:
    from .search import ramsey_search

    targets = [args.c1, args.c2] + ([args.c3] if args.colours == 3 else [])
    if args.colours == 3 and args.c3 is None:
        raise PreconditionError("three colours need --c3")
    report = ramsey_search(targets, args.N, budget=args.budget, seed=args.seed,
                           isomorph_rejection=not args.naive)
    formula = None
    if args.colours == 3:
        try:
            formula = ramsey_formula_A(*targets)
        except PreconditionError:
            formula = None
    data = report.to_json()
    data["formula"] = formula
    data["threads"] = args.threads
    lines = [f"targets {tuple(targets)}, N={args.N}: {report.verdict}",
             f"partial colourings examined: {report.colourings_examined}",
             f"formula value: {formula if formula is not None else 'n/a'}"]
    _emit(args, data, lines)
    return EXIT_BUDGET if report.verdict == "budget-exceeded" else EXIT_OK


# -- verify-lemma ---------------------------------------------------------------------

LEMMAS = ("dirac", "eg", "dgf0", "dgf1", "twoholes", "ten", "eleven", "skb", "skbe", "largew", "hole")
TRIAL_LEMMAS = ("dirac", "eg", "eleven", "ten", "dgf0", "twoholes")


def _trial(lemma: str, rng) -> tuple[list[str], dict]:
    """Run one random trial; returns the problems found and the instance record."""
    from . import instances, lemmas, matching, verify

    if lemma == "dirac":
        G = instances.dirac_instance(rng)
        cyc = lemmas.dirac_cycle(G, Colour.RED)
        return verify.verify_cycle(G, cyc, Colour.RED, length=G.n), {"graph": G.to_json()}
    if lemma == "eg":
        G, m = instances.eg_instance(rng)
        cyc = lemmas.erdos_gallai_cycle(G, Colour.RED, m)
        return verify.verify_cycle(G, cyc, Colour.RED, at_least=m), {"graph": G.to_json(), "m": m}
    if lemma == "eleven":
        G, A, B, a, ell = instances.eleven_instance(rng)
        cert = matching.greedy_almost_complete_matching(G, Colour.RED, A, B, a, ell)
        problems = verify.verify_connected_matching(G, cert, Colour.RED, min_vertices=2 * len(B) - 2 * a)
        return problems, {"graph": G.to_json(), "A": A, "B": B, "a": a, "ell": ell}
    if lemma == "ten":
        eps = rng.choice((Fraction(1, 500), Fraction(1, 200), Fraction(1, 100)))
        G, A, B = instances.ten_instance(rng, eps, rng.randint(100, 200))
        cert = lemmas.ten_dense_bipartite(G, Colour.RED, A, B, eps)
        problems = verify.verify_connected_matching(G, cert, Colour.RED, min_vertices=2 * (1 - 3 * eps) * len(B))
        return problems, {"graph": G.to_json(), "A": A, "B": B, "eps": str(eps)}
    if lemma == "dgf0":
        G = instances.dgf0_instance(rng)
        out = lemmas.dgf0_largest_component(G, Fraction(1, 20))
        return verify.verify_lemma_outcome(G, out), {"graph": G.to_json(), "eta": "1/20"}
    if lemma == "twoholes":
        G, A, B, eta = instances.twoholes_instance(rng)
        out = lemmas.twoholes_analysis(G, A, B, eta)
        return verify.verify_lemma_outcome(G, out), {"graph": G.to_json(), "A": A, "B": B, "eta": str(eta)}
    raise PreconditionError(f"no random trials for lemma {lemma}; pass --graph and --params")


def _load_params(args) -> dict:
    params: dict = {}
    if args.params:
        with open(args.params) as fh:
            params = json.load(fh)
        if not isinstance(params, dict):
            raise PreconditionError("--params must hold a JSON object")
    for key in ("eta", "A", "B", "W"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value if key == "eta" else _vertices(value)
    return params


def _need(params: dict, *keys: str) -> list:
    missing = [k for k in keys if k not in params]
    if missing:
        raise PreconditionError(f"missing parameter(s): {', '.join(missing)}")
    return [params[k] for k in keys]


def _on_graph(lemma: str, G, params: dict) -> tuple[list[str], dict]:
    from . import lemmas, verify

    colour = Colour.parse(params.get("colour", "red"))
    slack = params.get("slack", 1)
    if lemma == "dirac":
        within = params.get("within")
        cyc = lemmas.dirac_cycle(G, colour, within)
        size = G.n if within is None else len(set(within))
        return verify.verify_cycle(G, cyc, colour, length=size), {"cycle": list(cyc)}
    if lemma == "eg":
        (m,) = _need(params, "m")
        cyc = lemmas.erdos_gallai_cycle(G, colour, int(m))
        return verify.verify_cycle(G, cyc, colour, at_least=int(m)), {"cycle": list(cyc)}
    if lemma == "ten":
        A, B, eps = _need(params, "A", "B", "eps")
        cert = lemmas.ten_dense_bipartite(G, colour, A, B, eps)
        bound = 2 * (1 - 3 * Fraction(eps)) * len(set(B))
        return verify.verify_connected_matching(G, cert, colour, min_vertices=bound), cert.to_json()
    if lemma == "eleven":
        A, B, a, ell = _need(params, "A", "B", "a", "ell")
        cert = lemmas.eleven_matching(G, colour, A, B, int(a), int(ell))
        bound = 2 * len(set(B)) - 2 * int(a)
        return verify.verify_connected_matching(G, cert, colour, min_vertices=bound), cert.to_json()
    if lemma == "dgf0":
        out = lemmas.dgf0_largest_component(G, *_need(params, "eta"))
    elif lemma == "dgf1":
        out = lemmas.dgf1_one_hole(G, *_need(params, "W", "eta"))
    elif lemma == "twoholes":
        out = lemmas.twoholes_analysis(G, *_need(params, "A", "B", "eta"))
    elif lemma == "skb":
        alpha, beta, eta, k = _need(params, "alpha", "beta", "eta", "k")
        out = lemmas.skb_detector(G, alpha, beta, eta, int(k), slack)
    elif lemma == "skbe":
        eps, k = _need(params, "eps", "k")
        out = lemmas.skbe_search(G, eps, int(k), slack)
    elif lemma == "largew":
        a1, a2, a3, eta, k = _need(params, "alpha1", "alpha2", "alpha3", "eta", "k")
        out = lemmas.largeW_check(G, a1, a2, a3, eta, int(k), slack)
    else:
        W, alpha, beta, v, eta, k = _need(params, "W", "alpha", "beta", "v", "eta", "k")
        out = lemmas.hole_check(G, W, alpha, beta, v, eta, int(k), slack)
    return verify.verify_lemma_outcome(G, out), out.to_json()


def _write_artefact(path: str, record: dict) -> None:
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2, default=str)


def cmd_verify_lemma(args) -> int:
    from .instances import trial_rng

    artefact = args.artefact or f"counterexample-{args.lemma}.json"
    if args.graph:
        G = load_graph(args.graph)
        params = _load_params(args)
        try:
            problems, result = _on_graph(args.lemma, G, params)
        except CounterexampleFound as exc:
            problems, result = [str(exc)], exc.artefact
        if problems:
            _write_artefact(artefact, {"lemma": args.lemma, "graph": G.to_json(), "params": params,
                                       "problems": problems, "result": result})
        lines = [f"violation: {p}" for p in problems] or [f"{args.lemma}: verified"]
        if problems:
            lines.append(f"counterexample artefact written to {artefact}")
        _emit(args, {"lemma": args.lemma, "verified": not problems, "problems": problems, "result": result}, lines)
        return EXIT_VIOLATION if problems else EXIT_OK
    failures = []
    for t in range(args.trials):
        try:
            problems, record = _trial(args.lemma, trial_rng(args.seed, t))
        except CounterexampleFound as exc:
            problems, record = [str(exc)], exc.artefact
        if problems:
            failures.append({"trial": t, "problems": problems, "instance": record})
            if not args.json:
                print(f"trial {t}: {problems[0]}")
    lines = [f"{args.lemma}: {args.trials - len(failures)}/{args.trials} trials verified"]
    if failures:
        _write_artefact(artefact, {"lemma": args.lemma, "seed": args.seed, "failures": failures})
        lines.append(f"counterexample artefact written to {artefact}")
    _emit(args, {"lemma": args.lemma, "trials": args.trials, "failures": len(failures)}, lines)
    return EXIT_VIOLATION if failures else EXIT_OK


# -- certify ---------------------------------------------------------------------------


def cmd_certify(args) -> int:
    from .certifier import ScaledParams, certify_stability, verify_outcome

    G = load_graph(args.graph)
    params = ScaledParams(Fraction(args.alpha1), Fraction(args.alpha2), Fraction(args.alpha3),
                          Fraction(args.eta), args.k)
    out = certify_stability(G, params, Fraction(args.slack))
    lines = []
    for entry in out.transcript:
        lines.append("  " + ", ".join(f"{k}={v}" for k, v in entry.items()))
    if out.ok:
        problems = verify_outcome(G, params, out)
        lines.insert(0, f"outcome ({out.tag}) {out.name}, case {out.case or '-'}")
        if problems:  # pragma: no cover - the certifier re-verifies before returning
            lines += [f"violation: {p}" for p in problems]
    else:
        lines.insert(0, f"inconclusive (case {out.case or '-'})")
    _emit(args, out.to_json(), lines)
    return EXIT_OK


# -- check-structure -------------------------------------------------------------------


def cmd_check_structure(args) -> int:
    from .structures import strip_to_pattern, structure_from_json, validate

    G = load_graph(args.graph)
    with open(args.structure) as fh:
        cand = structure_from_json(json.load(fh))
    host = G if args.exact_colours else strip_to_pattern(G, cand)
    rep = validate(host, cand)
    lines = [f"{cand.kind}: {'valid' if rep.valid else 'invalid'}"]
    lines += [f"  clause {c}: {d}" for c, d in rep.violations]
    _emit(args, rep.to_json(), lines)
    return EXIT_OK if rep.valid else EXIT_VIOLATION


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixedcycles", description="Monochromatic cycle and connected-matching toolkit.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("formula", help="evaluate a closed-form value")
    p.add_argument("--theorem", choices=("A", "B", "C"), default="A")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--alpha1")
    p.add_argument("--alpha2")
    p.add_argument("--alpha3")
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("construct", help="emit a lower-bound colouring")
    p.add_argument("--pattern", required=True, choices=("touch-sets", "green-bipartite-rr", "green-bipartite-bb"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--verify", action="store_true", help="confirm target-freeness by cycle search")
    p.add_argument("--out", help="write the graph JSON here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exhaustive small-order Ramsey search")
    p.add_argument("--colours", type=int, choices=(2, 3), default=2)
    p.add_argument("--c1", type=int, required=True)
    p.add_argument("--c2", type=int, required=True)
    p.add_argument("--c3", type=int)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="recorded only; the search runs in one thread")
    p.add_argument("--naive", action="store_true", help="disable isomorph rejection")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-lemma", help="run a lemma on random instances or a given graph")
    p.add_argument("--lemma", required=True, choices=LEMMAS)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", default="0")
    p.add_argument("--graph", help="run once on this graph instead of random trials")
    p.add_argument("--params", help="JSON object of lemma parameters")
    p.add_argument("--artefact", help="where to write a counterexample (default counterexample-<lemma>.json)")
    p.add_argument("--eta")
    p.add_argument("--A", help="comma-separated vertices")
    p.add_argument("--B", help="comma-separated vertices")
    p.add_argument("--W", help="comma-separated vertices")
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("certify", help="certify a stability outcome for a graph")
    p.add_argument("--graph", required=True)
    for name in ("alpha1", "alpha2", "alpha3", "eta"):
        p.add_argument(f"--{name}", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--slack", default="1")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check-structure", help="validate a structure certificate against a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--exact-colours", action="store_true",
                   help="validate on the graph as given instead of its prescribed-colour subgraph")
    p.set_defaults(func=cmd_check_structure)
    return parser


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    # accept --json anywhere on the line
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    argv = [a for a in argv if a != "--json"]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    args.json = as_json
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CounterexampleFound as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (PreconditionError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())
