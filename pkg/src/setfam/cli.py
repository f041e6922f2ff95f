"""Command-line front end.

Exit codes: 0 success, 1 a requested check failed, 2 usage or format error,
3 domain error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from setfam import __version__
from setfam.constructions import from_label
from setfam.errors import CounterexampleError, DomainError, FormatError, SharpPairError
from setfam.search import (
    BRANCH_AND_BOUND,
    EXHAUSTIVE,
    SearchProblem,
    default_node_budget,
    solve,
    solve_via_generators,
    verify_theorem_table,
)
from setfam.setcore import (
    Family,
    elements,
    format_family,
    generating_set,
    is_left_compressed,
    is_r_wise_k_intersecting,
    is_up_set,
    parse_family,
    weight,
)
from setfam.transforms import find_sharp_pairs, find_sharp_triples, is_almost_trivial, lemma1_transform
from setfam.verify import BUNDLES, run_bundle

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


@dataclass
class RunManifest:
    command: list[str]
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    seed: int | None = None
    version: str = __version__


def load_source(source: str) -> Family:
    """A family file path, or a construction label."""
    if os.path.isfile(source):
        with open(source) as fh:
            return parse_family(fh.read())
    return from_label(source).family


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _pred(text: str) -> tuple[int, int]:
    try:
        r, k = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected R,K, got {text!r}") from None
    return r, k


def cmd_construct(args) -> int:
    f = from_label(args.label).family
    text = format_family(f)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"{len(f)} sets, weight {weight(f)}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_check(args) -> int:
    f = load_source(args.source)
    preds = args.pred or [(2, 3), (3, 1)]
    result: dict = {"n": f.n, "size": len(f), "weight": weight(f).to_json(), "predicates": []}
    ok = True
    for r, k in preds:
        holds = is_r_wise_k_intersecting(f, r, k)
        ok &= holds
        result["predicates"].append({"r": r, "k": k, "holds": holds})
    if args.lc:
        result["left_compressed"] = is_left_compressed(f)
        ok &= result["left_compressed"]
    if args.almost_trivial:
        result["almost_trivial"] = is_almost_trivial(f)
        ok &= result["almost_trivial"]
    result["up_set"] = is_up_set(f)
    result["ok"] = ok
    sys.stdout.write(_dump(result))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sharp(args) -> int:
    g = generating_set(load_source(args.source))
    records = [p.to_json() for p in find_sharp_pairs(g)]
    records += [t.to_json() for t in find_sharp_triples(g)]
    sys.stdout.write(_dump(records))
    return EXIT_OK


def cmd_transform(args) -> int:
    f = load_source(args.source)
    steps: list = []
    try:
        out = lemma1_transform(f, steps)
    except SharpPairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.stdout.write(_dump({"blocked_by": exc.pair.to_json()}))
        return EXIT_DOMAIN
    record = {
        "before": {"size": len(f), "weight": weight(f).to_json()},
        "after": {"size": len(out), "weight": weight(out).to_json()},
        "steps": steps,
    }
    sys.stdout.write(_dump(record))
    if args.out:
        _write(args.out, format_family(out))
    return EXIT_OK


def cmd_search(args) -> int:
    budget = args.node_budget if args.node_budget is not None else default_node_budget()
    problem = SearchProblem(
        n=args.n,
        r1=args.r1,
        k1=args.k1,
        r2=args.r2,
        k2=args.k2,
        mode=args.mode,
        restrict_lc=args.lc,
        node_budget=budget,
    )
    engine = solve_via_generators if args.engine == "generators" else solve
    report = engine(problem, threads=args.threads)
    print(report.summary())
    for f in report.optimal_families:
        print("  " + " ".join(",".join(map(str, elements(m))) or "-" for m in f.sorted()))
    if args.json_out:
        _write(args.json_out, _dump(report.to_json(timing=not args.no_timing)))
    return EXIT_OK


def cmd_table(args) -> int:
    table = verify_theorem_table(args.n_max, search_max=args.search_max, threads=args.threads)
    for r in table.rows:
        line = f"{r.n:4d}  {r.source:10s} {r.predicted}"
        if r.searched is not None:
            line += f"  search={r.searched} proven={r.proven} maximizers={r.maximizers}"
        print(line)
    print(f"monotone={table.monotone} at_most_quarter={table.at_most_quarter}")
    return EXIT_OK if table.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        checks = run_bundle(args.scope, seed=args.seed)
    except CounterexampleError as exc:
        print(f"FAIL  counterexample: {exc}")
        return EXIT_FAIL
    ok = True
    for c in checks:
        ok &= c.passed
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
        for row in c.rows:
            print(f"      {row}")
        if not c.passed and c.witness is not None:
            print(f"      witness: {c.witness!r}")
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_replay(args) -> int:
    with open(args.manifest) as fh:
        manifest = json.load(fh)
    return main(manifest["command"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setfam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--manifest-out", help="write a replayable run manifest (JSON)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a named family")
    p.add_argument("label", help="Fn:<n> | katona:<n>:<k> | extend:<path|label>:<k>")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", help="evaluate intersection predicates")
    p.add_argument("source", help="family file or construction label")
    p.add_argument("--pred", type=_pred, action="append", metavar="R,K", help="r-wise k-intersecting (repeatable)")
    p.add_argument("--lc", action="store_true", help="also require left-compressed")
    p.add_argument("--almost-trivial", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sharp", help="list sharp pairs and triples")
    p.add_argument("source")
    p.set_defaults(func=cmd_sharp)

    p = sub.add_parser("transform", help="reduce a family on [n] to a cylinder over [n-1]")
    p.add_argument("source")
    p.add_argument("-o", "--out", help="write the transformed family")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("search", help="compute W_{k1,k2}(n) exactly")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r1", type=int, default=3)
    p.add_argument("--k1", type=int, default=1)
    p.add_argument("--r2", type=int, default=2)
    p.add_argument("--k2", type=int, default=3)
    p.add_argument("--mode", choices=(EXHAUSTIVE, BRANCH_AND_BOUND), default=BRANCH_AND_BOUND)
    p.add_argument("--lc", action="store_true", help="only left-compressed families")
    p.add_argument("--engine", choices=("family", "generators"), default="family")
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json-out")
    p.add_argument("--no-timing", action="store_true", help="write millis=0 for byte-stable reports")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", help="predicted W(n) table, search-confirmed at small n")
    p.add_argument("--n-max", type=int, default=80)
    p.add_argument("--search-max", type=int, default=8)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify-paper", help="run a verification bundle")
    p.add_argument("scope", choices=sorted(BUNDLES))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="re-run the command stored in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return parser


def _manifest(argv: list[str], args) -> RunManifest:
    inputs = [v for k in ("source", "label") if (v := getattr(args, k, None))]
    outputs = [v for k in ("out", "json_out") if (v := getattr(args, k, None))]
    command = [a for a in argv]
    if "--manifest-out" in command:
        idx = command.index("--manifest-out")
        del command[idx:idx + 2]
    return RunManifest(command, inputs, outputs, getattr(args, "seed", None))


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.manifest_out:
        _write(args.manifest_out, _dump(asdict(_manifest(argv, args))))
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
