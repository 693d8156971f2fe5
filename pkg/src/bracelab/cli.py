"""Command-line driver.

Exit codes: 0 success, 1 mathematical failure (invalid brace, no
isomorphism, failed verification), 2 usage error.  Reports print as plain
key/value text by default; ``--format structured`` emits JSON.  The
BRACELAB_SEED environment variable overrides the default RNG seed 0 for
sampled checks and searches.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._checking import default_seed
from .braces import (
    annihilator,
    derived_ideal,
    is_perfect,
    is_two_sided,
    lift_group_to_brace,
    quotient_brace,
    second_annihilator,
    socle,
)
from .constructions import build_counterexample, example1_brace
from .errors import BraceLabError
from .fixtures import (
    group_by_name,
    prop1_matrix_group,
    prop3_matrix_group,
)
from .fplinalg import matrix_group_closure, recipe_check, search_recipe
from .groups import find_isomorphism
from .grun import grun_defect, identity_suite
from .reports import VerificationReport
from .sbr import (
    load_brace_document,
    parse_brace_file,
    parse_matrix_file,
    serialize_brace,
    write_brace_file,
)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if getattr(args, "format", "text") == "structured":
        output = json.dumps(payload, indent=2) + "\n"
    else:
        output = "\n".join(text_lines) + "\n"
    out_path = getattr(args, "out", None)
    if out_path:
        Path(out_path).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)


def _report_lines(report: VerificationReport) -> list[str]:
    lines = [f"check: {report.check}", f"status: {report.status}"]
    for key, value in report.counts:
        lines.append(f"{key}: {value}")
    for name, witness in report.details:
        lines.append(f"witness {name}: {witness}")
    return lines


def _load_brace_arg(path: str, seed: int):
    return parse_brace_file(path, seed=seed)


def _resolve_seed(args) -> int:
    seed = getattr(args, "seed", None)
    return default_seed() if seed is None else seed


def _cmd_validate(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    brace, doc, report = load_brace_document(text, seed=_resolve_seed(args))
    lines = _report_lines(report)
    meta = doc.metadata_dict()
    if "relabeled-identity" in meta:
        lines.append(f"relabeled-identity: {meta['relabeled-identity']}")
    payload = {"command": "validate", "report": report.to_dict(), "metadata": meta}
    _emit(args, payload, lines)
    return 0 if brace is not None else 1


def _cmd_info(args) -> int:
    brace = _load_brace_arg(args.file, _resolve_seed(args))
    perfect = is_perfect(brace)
    two_sided, _ = is_two_sided(brace)
    info = {
        "name": brace.name or Path(args.file).stem,
        "order": brace.order,
        "socle_order": socle(brace).order,
        "ann_order": annihilator(brace).order,
        "ann2_order": second_annihilator(brace).order,
        "derived_order": derived_ideal(brace).order,
        "perfect": perfect,
        "two_sided": two_sided,
    }
    lines = [f"{key}: {value}" for key, value in info.items()]
    _emit(args, {"command": "info", "info": info}, lines)
    return 0


def _cmd_quotient(args) -> int:
    brace = _load_brace_arg(args.file, _resolve_seed(args))
    members = [int(tok) for tok in args.ideal.split(",") if tok.strip() != ""]
    quotient, _ = quotient_brace(brace, members)
    text = serialize_brace(quotient)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _construct(args, seed: int):
    kind = args.kind
    if kind in ("trivial", "almost-trivial"):
        if not args.group:
            raise BraceLabError("--group is required for trivial/almost-trivial")
        if Path(args.group).exists():
            base = parse_brace_file(args.group, seed=seed)
            group = base.dot
            label = Path(args.group).stem
        else:
            group = group_by_name(args.group)
            label = args.group
        mode = "trivial" if kind == "trivial" else "almost_trivial"
        return lift_group_to_brace(group, mode, name=f"{label}-{kind}"), None
    if kind == "example1":
        return example1_brace(), None
    if kind == "prop1":
        return build_counterexample(example1_brace(), prop1_matrix_group(2), (2, 2))
    if kind == "prop3":
        return build_counterexample(example1_brace(), prop3_matrix_group(), (2, 4))
    if kind == "semidirect":
        if not (args.base and args.acting and args.matrices):
            raise BraceLabError("semidirect needs --base, --acting and --matrices")
        p_str, n_str = args.base.split(",")
        acting = (
            example1_brace()
            if args.acting == "example1"
            else parse_brace_file(args.acting, seed=seed)
        )
        group = matrix_group_closure(parse_matrix_file(args.matrices))
        return build_counterexample(acting, group, (int(p_str), int(n_str)))
    raise BraceLabError(f"unknown construction {kind!r}")


def _cmd_construct(args) -> int:
    brace, report = _construct(args, _resolve_seed(args))
    text = serialize_brace(brace)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        if report is not None:
            sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_grun(args) -> int:
    seed = _resolve_seed(args)
    if args.construct:
        namespace = argparse.Namespace(
            kind=args.construct, group=None, base=None, acting=None, matrices=None
        )
        brace, report = _construct(namespace, seed)
        if report is None:
            report = grun_defect(brace, seed=seed)
    else:
        if not args.file:
            raise BraceLabError("grun needs a brace file or --construct")
        brace = _load_brace_arg(args.file, seed)
        report = grun_defect(brace, seed=seed)
    payload = {"command": "grun", "report": report.to_dict()}
    lines = [f"{key}: {value}" for key, value in report.to_dict().items()]
    _emit(args, payload, lines)
    return 0


def _cmd_identities(args) -> int:
    brace = _load_brace_arg(args.file, _resolve_seed(args))
    report = identity_suite(brace, args.mode, seed=_resolve_seed(args))
    _emit(args, {"command": "identities", "report": report.to_dict()}, _report_lines(report))
    return 0 if report.ok else 1


def _cmd_recipe_check(args) -> int:
    matrices = parse_matrix_file(args.matrices)
    outcome = recipe_check(matrices)
    group = matrix_group_closure(matrices)
    result = {
        "cond1": outcome.cond1,
        "cond2": outcome.cond2,
        "fixed_dim": outcome.fixed.dim,
        "fixed_basis": [list(map(int, row)) for row in outcome.fixed.basis],
        "witnesses_v": [list(w) for w in outcome.witnesses_v],
        "closure_order": group.order,
    }
    lines = [f"{key}: {value}" for key, value in result.items()]
    _emit(args, {"command": "recipe-check", "result": result}, lines)
    return 0


def _cmd_recipe_search(args) -> int:
    result = search_recipe(
        args.n,
        args.p,
        budget=args.budget,
        strategy=args.strategy,
        seed=_resolve_seed(args),
        max_gens=args.max_gens,
        max_sets=args.max_sets,
    )
    entries = []
    for cand in result.candidates:
        entries.append(
            {
                "closure_order": cand.closure_order,
                "fixed_dim": cand.fixed_dim,
                "order_profile": [list(pair) for pair in (cand.order_profile or ())],
                "generators": [
                    [list(map(int, row)) for row in g.entries] for g in cand.generators
                ],
            }
        )
    payload = {
        "command": "recipe-search",
        "nodes": result.nodes,
        "budget_exceeded": result.budget_exceeded,
        "candidates": entries,
    }
    lines = [
        f"nodes: {result.nodes}",
        f"budget_exceeded: {result.budget_exceeded}",
        f"candidates: {len(entries)}",
    ]
    for entry in entries:
        lines.append(
            f"  order={entry['closure_order']} fixed_dim={entry['fixed_dim']} "
            f"generators={entry['generators']}"
        )
    _emit(args, payload, lines)
    return 0


def _cmd_iso(args) -> int:
    seed = _resolve_seed(args)
    left = _load_brace_arg(args.file1, seed)
    right = _load_brace_arg(args.file2, seed)
    table = {"dot": (left.dot, right.dot), "circ": (left.circ, right.circ)}[args.op]
    hom = find_isomorphism(*table)
    found = hom is not None
    payload = {
        "command": "iso",
        "op": args.op,
        "isomorphic": found,
        "map": [int(x) for x in hom.image_of] if found else None,
    }
    lines = [f"isomorphic: {found}"]
    if found:
        lines.append(f"map: {' '.join(str(int(x)) for x in hom.image_of)}")
    _emit(args, payload, lines)
    return 0 if found else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bracelab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["text", "structured"], default="text")
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument("--seed", type=int, default=None, help="RNG seed for sampled checks")

    p = sub.add_parser("validate", help="validate a brace file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("info", help="orders of the invariant series of a brace")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("quotient", help="quotient a brace by an ideal")
    p.add_argument("file")
    p.add_argument("--ideal", required=True, help="comma-separated member indices")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_quotient)

    p = sub.add_parser("construct", help="build a bundled or semidirect brace")
    p.add_argument(
        "kind",
        choices=["trivial", "almost-trivial", "semidirect", "example1", "prop1", "prop3"],
    )
    p.add_argument("--group", default=None, help="fixture name or brace file (lifts)")
    p.add_argument("--base", default=None, help="p,n for the vector base (semidirect)")
    p.add_argument("--acting", default=None, help="'example1' or a brace file (semidirect)")
    p.add_argument("--matrices", default=None, help="matrix fixture file (semidirect)")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("grun", help="annihilator-series diagnostic")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--construct", choices=["example1", "prop1", "prop3"], default=None)
    common(p)
    p.set_defaults(func=_cmd_grun)

    p = sub.add_parser("identities", help="run the identity verification suite")
    p.add_argument("file")
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default=None)
    common(p)
    p.set_defaults(func=_cmd_identities)

    p = sub.add_parser("recipe-check", help="check the counterexample conditions")
    p.add_argument("--matrices", required=True)
    common(p)
    p.set_defaults(func=_cmd_recipe_check)

    p = sub.add_parser("recipe-search", help="search for qualifying generator sets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--strategy", choices=["exhaustive", "random"], default=None)
    p.add_argument("--max-gens", type=int, default=4)
    p.add_argument("--max-sets", type=int, default=4)
    common(p)
    p.set_defaults(func=_cmd_recipe_search)

    p = sub.add_parser("iso", help="search for a group isomorphism between braces")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--op", choices=["dot", "circ"], default="dot")
    common(p)
    p.set_defaults(func=_cmd_iso)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "recipe-search" and args.strategy is None:
        args.strategy = "exhaustive" if args.p ** (args.n * args.n) <= 1 << 20 else "random"
    try:
        return args.func(args)
    except BraceLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
