"""Command-line frontend.

Subcommands: parse, classify, define, solve, verify-interp, ramsey, catalog,
report.  Exit codes: 0 for a definite answer, 2 when any sub-verdict is
Inconclusive, 1 for usage or input errors.  Reports print to stdout as JSON
(--json) or a short human rendering; both carry the same verdict and the
JSON form validates against the published schemas.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ReductLabError
from .structures import EQUALITY, Q_ORDER, RANDOM_GRAPH, chain, FiniteStructure
from .formulas import Language, normalize, parse_qf, render
from .catalog import (
    boolean_names,
    builtin_names,
    builtin_relation,
    is_equality_determined,
    language as make_language,
)
from .canonical import catalog_behavior, catalog_names
from .classifiers import (
    cameron_class,
    equality_csp,
    graph_monoid_case,
    temporal_csp,
    thomas_class,
)
from .definability import DefinabilityCaps, decide_ep, decide_pp
from .interp import SHIPPED, shipped_interpretation, verify_interpretation
from .jsonio import load_instance, load_interpretation, load_language
from .ppalg import solve_csp
from .ramsey import ArrowQuery, arrows
from .schemas import validate_report

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


def _emit(command: str, result: dict, status: str, as_json: bool,
          human: str) -> int:
    report = {"command": command, "status": status, "result": result}
    validate_report(report)
    if as_json:
        print(json.dumps(report, indent=2, default=str))
    else:
        print(human)
    return EXIT_INCONCLUSIVE if status == "inconclusive" else EXIT_OK


def _load_language_arg(args) -> Language:
    if args.language:
        return load_language(args.language)
    names = [n.strip() for n in args.relations.split(",")]
    return make_language(*names, base=args.base,
                         constants=getattr(args, "constants", 0) or 0)


def cmd_parse(args) -> int:
    variables = [v.strip() for v in args.vars.split(",")]
    f = parse_qf(args.formula, args.base, variables)
    rel = normalize(f, name=args.formula)
    result = {"normalized": render(rel, variables),
              "types": [t.key() for t in rel.sorted_types()],
              "count": len(rel.types)}
    human = f"{len(rel.types)} types satisfy; normalized: {result['normalized']}"
    return _emit("parse", result, "ok", args.json, human)


def cmd_classify(args) -> int:
    lang = _load_language_arg(args)
    if args.mode == "fo":
        if lang.base == Q_ORDER:
            rep = cameron_class(lang)
        elif lang.base == RANDOM_GRAPH:
            rep = thomas_class(lang)
        else:
            raise ReductLabError(f"no first-order classifier for {lang.base}")
    elif args.mode == "monoid":
        rep = graph_monoid_case(lang)
    else:
        if lang.base == EQUALITY or (
                lang.base != Q_ORDER and
                all(is_equality_determined(r) for r in lang.relations)):
            rep = equality_csp(lang)
        elif lang.base == Q_ORDER:
            if all(is_equality_determined(r) for r in lang.relations):
                rep = equality_csp(lang)
            else:
                rep = temporal_csp(lang)
        else:
            raise ReductLabError(
                "csp classification over the graph base covers "
                "equality-pattern languages only")
    status = "inconclusive" if rep.verdict == "Inconclusive" else "ok"
    human = f"{rep.classifier}: {rep.verdict}"
    if rep.caveats:
        human += "  [" + "; ".join(rep.caveats) + "]"
    return _emit("classify", rep.to_json(), status, args.json, human)


def cmd_define(args) -> int:
    lang = _load_language_arg(args)
    target = builtin_relation(args.target, lang.base) if lang.get(args.target) \
        is None else lang.require(args.target)
    caps = DefinabilityCaps(max_vars=args.max_vars,
                            max_behavior_arity=args.max_arity,
                            max_constants=args.max_constants)
    fn = decide_pp if args.mode == "pp" else decide_ep
    verdict = fn(target, lang, caps)
    status = "inconclusive" if verdict.kind == "Inconclusive" else "ok"
    human = f"{verdict.kind}"
    if verdict.derivation is not None:
        human += f": {verdict.derivation.render()}"
    if verdict.witness_behavior is not None:
        human += f": witness behavior {verdict.witness_behavior.name or '<table>'}"
    return _emit("define", verdict.to_json(), status, args.json, human)


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    result = solve_csp(inst)
    human = "SAT" if result.satisfiable else "UNSAT"
    if result.witness is not None:
        human += f" with witness {result.witness.key()}"
    return _emit("solve", result.to_json(), "ok", args.json, human)


def cmd_verify_interp(args) -> int:
    if args.builtin:
        interp = shipped_interpretation(args.builtin)
    else:
        interp = load_interpretation(args.interpretation)
    report = verify_interpretation(
        interp,
        max_candidates=args.max_candidates,
        sample_stride=args.sample_stride)
    status = "ok" if (report.ok or report.counterexamples) else "inconclusive"
    human = (f"{interp.name}: "
             + ("verified" if report.ok else
                f"{len(report.counterexamples)} counterexamples")
             + f" over {report.checked} types")
    if report.skipped:
        human += f" (skipped: {'; '.join(report.skipped)})"
    return _emit("verify-interp", report.to_json(), status, args.json, human)


def _parse_structure(text: str) -> FiniteStructure:
    if text.startswith("chain:"):
        return chain(int(text.split(":", 1)[1]))
    return FiniteStructure.from_json(json.loads(open(text).read()))


def cmd_ramsey(args) -> int:
    q = ArrowQuery(_parse_structure(args.S), _parse_structure(args.H),
                   _parse_structure(args.P), args.k)
    result = arrows(q)
    human = (f"{args.S} -> ({args.H})^{args.P}_{args.k}: {result.holds} "
             f"({result.n_copies} copies, {result.n_colorings} colorings)")
    if result.bad_coloring is not None:
        human += f"; bad coloring on {len(result.bad_coloring)} copies"
    return _emit("ramsey", result.to_json(), "ok", args.json, human)


def cmd_catalog(args) -> int:
    flt = (args.filter or "").lower()
    relations = [{"name": n, "base": b, "arity": a, "defines": d}
                 for n, b, a, d in builtin_names()
                 if flt in n.lower() or flt in d.lower()]
    behaviors = []
    for name in catalog_names():
        if flt and flt not in name.lower():
            continue
        for base in (Q_ORDER, RANDOM_GRAPH, EQUALITY):
            try:
                b = catalog_behavior(name, base)
            except ReductLabError:
                continue
            behaviors.append({"name": name, "base": b.base, "arity": b.arity,
                              "constants": b.constants.count})
            break
    interps = [{"name": n, **{k: v for k, v in
                              shipped_interpretation(n).to_json().items()
                              if k in ("dim", "language", "stretch")}}
               for n in SHIPPED if not flt or flt in n]
    booleans = [n for n in boolean_names() if not flt or flt in n.lower()]
    result = {"relations": relations, "behaviors": behaviors,
              "interpretations": interps, "boolean_structures": booleans}
    lines = ["relations:"]
    lines += [f"  {r['name']:<6} {r['base']:<20} arity {r['arity']}  {r['defines']}"
              for r in relations]
    lines.append("behaviors:")
    lines += [f"  {b['name']:<22} {b['base']:<20} arity {b['arity']}"
              + (f"  constants {b['constants']}" if b["constants"] else "")
              for b in behaviors]
    lines.append("interpretations: " + ", ".join(i["name"] for i in interps))
    lines.append("boolean structures: " + ", ".join(booleans))
    return _emit("catalog", result, "ok", args.json, "\n".join(lines))


def cmd_report(args) -> int:
    from .report import write_report
    manifest = write_report(args.out_dir)
    human = (f"wrote {manifest['rows']} verdict rows to {manifest['csv']} and "
             f"{len(manifest['figures'])} figures")
    report = {"command": "report", "status": "ok", "result": manifest}
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(human)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reductlab",
        description="Exact workbench for reducts of the dense linear order "
                    "and the random graph")
    parser.add_argument("--json", action="store_true",
                        help="emit a JSON report instead of the human summary")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and normalize a quantifier-free formula")
    p.add_argument("--base", default=Q_ORDER)
    p.add_argument("--vars", required=True, help="comma-separated variables")
    p.add_argument("--formula", required=True)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("classify", help="run a reduct or CSP classifier")
    p.add_argument("mode", choices=["fo", "csp", "monoid"])
    p.add_argument("--base", default=Q_ORDER)
    p.add_argument("--language", help="language JSON file")
    p.add_argument("--relations", help="comma-separated builtin relation names")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("define", help="decide pp or ep definability")
    p.add_argument("mode", choices=["pp", "ep"])
    p.add_argument("--target", required=True)
    p.add_argument("--base", default=Q_ORDER)
    p.add_argument("--language", help="language JSON file")
    p.add_argument("--relations", help="comma-separated builtin relation names")
    p.add_argument("--max-vars", type=int, default=8)
    p.add_argument("--max-arity", type=int, default=2,
                   help="behavior arity cap for the witness search")
    p.add_argument("--max-constants", type=int, default=2)
    p.set_defaults(fn=cmd_define)

    p = sub.add_parser("solve", help="decide a CSP instance")
    p.add_argument("instance", help="instance JSON file")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("verify-interp", help="verify a pp interpretation")
    p.add_argument("interpretation", nargs="?",
                   help="interpretation JSON file")
    p.add_argument("--builtin", choices=list(SHIPPED))
    p.add_argument("--max-candidates", type=int, default=None)
    p.add_argument("--sample-stride", type=int, default=1)
    p.set_defaults(fn=cmd_verify_interp)

    p = sub.add_parser("ramsey", help="decide a partition arrow")
    arrows_p = p.add_subparsers(dest="ramsey_cmd", required=True)
    a = arrows_p.add_parser("arrows")
    a.add_argument("--S", required=True, help="chain:N or a structure JSON file")
    a.add_argument("--H", required=True)
    a.add_argument("--P", required=True)
    a.add_argument("--k", type=int, default=2)
    a.set_defaults(fn=cmd_ramsey)

    p = sub.add_parser("catalog", help="list named relations and behaviors")
    p.add_argument("--filter", default="")
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("report", help="write the verdict battery and figures")
    p.add_argument("--out-dir", default="reports")
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ReductLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
