"""Command-line driver: ``ewopt solve``, ``ewopt transform`` and ``ewopt verify``."""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .core import StateCapExceeded
from .document import DocumentError, EwsDocument, dumps, loads
from .ewsys import MAX, MIN, IncoherentSystemError
from .frontends import FORMATS, ParseError
from .solver import solve
from .transforms import EXTENDED_UNSAFE, TRANSFORMS, apply
from .verify import GUARDED, STATED, RandomSystemParams, run_verify

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3
FORMAT_CHOICES = ["ews", *FORMATS]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_document(path: str, fmt: str, strict: bool = True) -> EwsDocument:
    """Parse any supported input into a document carrying its natural sense and mode."""
    text = _read(path)
    if fmt == "ews":
        return loads(text)
    f = FORMATS[fmt]
    system = f.lower(f.parse(text), strict)
    return EwsDocument(system, f.sense, f.extended, strict)


def _model_json(system, item, cost, extended: bool, optimal: bool | None = None) -> dict:
    vocab, spec = system.vocabulary, system.specification
    interp, nu = (item.interpretation, item.evaluation) if extended else (item, {})
    out = {
        "atoms": vocab.sorted_atoms(interp),
        "evaluation": {v: nu[v] for v in spec.variables} if extended else {},
        "costs": {str(l): str(c) for l, c in cost.costs},
    }
    if optimal is not None:
        out["optimal"] = optimal
    return out


def _model_text(system, item, cost, extended: bool) -> str:
    vocab, spec = system.vocabulary, system.specification
    interp = item.interpretation if extended else item
    atoms = "{" + ", ".join(vocab.sorted_atoms(interp)) + "}"
    parts = [atoms]
    if extended and spec.variables:
        parts.append(" ".join(f"{v}={item.evaluation[v]}" for v in spec.variables))
    parts.append(f"costs [{cost}]" if cost.costs else "costs []")
    return "  " + "  ".join(parts)


def run_solve(args) -> int:
    doc = load_document(args.file, args.format, strict=not args.nonstrict)
    extended = doc.extended if args.extended is None else args.extended
    sense = doc.sense if args.sense == "auto" else args.sense
    result = solve(doc.system, sense, extended, cap=args.cap, threads=args.threads, all_costs=args.all)
    system = doc.system
    optimal = set(result.optimal)
    listed = (result.extended_models if extended else result.models) if args.all else result.optimal
    stats = {k: v for k, v in result.stats.items() if k != "seconds"}
    stats.update(format=args.format, sense=sense, sense_overridden=sense != doc.sense, extended=extended)
    if args.json:
        models = [
            _model_json(system, x, result.costs[x], extended, (x in optimal) if args.all else None)
            for x in listed
        ]
        print(json.dumps({"models": models, "stats": stats}, indent=2, ensure_ascii=False))
        return EXIT_OK
    kind = "extended models" if extended else "models"
    note = " (override; format default is %s)" % doc.sense if stats["sense_overridden"] else ""
    print(f"sense {sense}{note}; {stats['models']} models, {stats['extended_models']} extended models "
          f"over {stats['states']} states")
    title = f"all {kind}, optimal ones marked *" if args.all else f"optimal {kind}: {len(result.optimal)}"
    print(title)
    for x in listed:
        line = _model_text(system, x, result.costs[x], extended)
        if args.all:
            line = ("* " if x in optimal else "  ") + line.lstrip()
        print(line)
    return EXIT_OK


def run_transform(args) -> int:
    doc = load_document(args.file, args.format, strict=not args.nonstrict)
    extended = doc.extended if args.extended is None else args.extended
    system = doc.system
    for name in args.apply:
        if extended and name in EXTENDED_UNSAFE:
            print(f"warning: {name} does not preserve optimal extended models", file=sys.stderr)
        report = apply(name, system)
        print(f"{name}: {len(report.rewrites)} rewrites", file=sys.stderr)
        for line in report.rewrites:
            print(f"  {line}", file=sys.stderr)
        system = report.result
    out = dumps(EwsDocument(system, doc.sense, extended, doc.strict))
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


def run_verify_cmd(args) -> int:
    params = RandomSystemParams(
        seed=args.seed,
        max_atoms=args.max_atoms,
        max_vars=args.max_vars,
        max_domain=args.max_domain,
        max_soft=args.max_soft,
        max_states=args.max_states,
        sign_checks=args.sign_checks,
    )
    report = run_verify(params, args.trials)
    if args.json:
        print(json.dumps({
            "passed": report.passed,
            "trials": report.trials,
            "seed": params.seed,
            "checks": {n: {"ran": report.ran[n], "failed": report.failed[n]} for n in report.ran},
            "first_failure": None if report.passed else {
                "check": report.failures[0].check,
                "seed": report.failures[0].seed,
                "messages": report.failures[0].messages,
                "system": report.failures[0].dump,
            },
        }, indent=2))
    else:
        print(report.summary())
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ewopt", description="Exact optimization over extended weighted systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p):
        p.add_argument("file", help="input file, or - for stdin")
        p.add_argument("--format", choices=FORMAT_CHOICES, default="ews")
        p.add_argument("--nonstrict", action="store_true", help="constraint atoms only constrain when true")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--extended", dest="extended", action="store_true", default=None,
                          help="optimize extended models (interpretation plus evaluation)")
        mode.add_argument("--plain", dest="extended", action="store_false", help="optimize plain models")

    p = sub.add_parser("solve", help="enumerate and print optimal (extended) models")
    source(p)
    p.add_argument("--sense", choices=["auto", MAX, MIN], default="auto")
    p.add_argument("--all", action="store_true", help="list every model with its costs")
    p.add_argument("--json", action="store_true")
    p.add_argument("--cap", type=int, default=None, help="largest state space to enumerate")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=run_solve)

    p = sub.add_parser("transform", help="rewrite a system and emit an .ews document")
    source(p)
    p.add_argument("--apply", action="append", choices=sorted(TRANSFORMS), required=True,
                   help="transform to apply; repeat to chain")
    p.add_argument("-o", "--output")
    p.set_defaults(func=run_transform)

    p = sub.add_parser("verify", help="check formal properties on random systems")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-atoms", type=int, default=6)
    p.add_argument("--max-vars", type=int, default=3)
    p.add_argument("--max-domain", type=int, default=4)
    p.add_argument("--max-soft", type=int, default=6)
    p.add_argument("--max-states", type=int, default=256)
    p.add_argument("--sign-checks", choices=[STATED, GUARDED], default=STATED,
                   help="'guarded' runs weight-sign checks only where their hypotheses hold")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=run_verify_cmd)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            return args.func(args)
    except StateCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, DocumentError, IncoherentSystemError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
