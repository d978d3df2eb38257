"""``gfa``: run, check and property-test experiment specs."""
from __future__ import annotations

import argparse
import os
import sys

from . import config
from .dsl.runner import PROPS_COLUMNS, _csv, run_source
from .dsl.syntax import ERROR, diagnose
from .props import DEFAULT_SEED, SUITE_NAMES, run_suites


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"gfa: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return None


def _report(diags, source, path) -> bool:
    for d in diags:
        print(d.render(source, path), file=sys.stderr)
    return any(d.severity == ERROR for d in diags)


def cmd_check(args) -> int:
    source = _read(args.spec)
    if source is None:
        return 1
    spec, diags = diagnose(source)
    if _report(diags, source, args.spec):
        return 1
    print(f"{args.spec}: ok ({len(spec.declarations)} declarations, {len(spec.tasks)} tasks)")
    return 0


def cmd_run(args) -> int:
    source = _read(args.spec)
    if source is None:
        return 1
    spec, diags = diagnose(source)
    if _report(diags, source, args.spec):
        return 1
    out = args.out or os.path.splitext(os.path.basename(args.spec))[0] + "-out"
    try:
        code, results = run_source(source, out, seed=args.seed, nmax=args.nmax, parallel=args.parallel)
    except (OSError, ValueError) as exc:
        print(f"gfa: {exc}", file=sys.stderr)
        return 1
    for r in results:
        line = f"[{r.index:02d}] {r.kind:<17} {r.target:<24} {r.verdict}"
        if r.status != "ok":
            line += f"  ({r.status}: {r.detail})"
        print(line)
    print(f"wrote {len(results) + 1} files to {out}; exit {code}")
    return code


def cmd_props(args) -> int:
    results = run_suites(args.suite, args.count, args.seed)
    rows = [row.as_dict() for res in results for row in res.rows]
    if args.csv:
        sys.stdout.write(_csv(rows, PROPS_COLUMNS))
    else:
        for r in rows:
            print(f"{r['status']:<5} {r['suite']:<12} {r['property']:<45} "
                  f"{r['instances']:>5} instances, {r['violations']} violations")
    return 0 if all(res.passed for res in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gfa", description="Sequence-space algebra experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a spec and write CSV reports")
    run.add_argument("spec")
    run.add_argument("--out", help="output directory (default: <spec>-out)")
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--nmax", type=int, default=None,
                     help=f"sample budget (default {config.NMAX:.0e} or $GFA_NMAX)")
    run.add_argument("--parallel", action="store_true", help="run tasks in worker processes")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="parse and validate a spec")
    check.add_argument("spec")
    check.set_defaults(func=cmd_check)

    props = sub.add_parser("props", help="run the built-in property suites")
    props.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    props.add_argument("--count", type=int, default=None, help="instances per property")
    props.add_argument("--seed", type=int, default=DEFAULT_SEED)
    props.add_argument("--csv", action="store_true", help="print CSV instead of a table")
    props.set_defaults(func=cmd_props)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
