"""Command-line driver: ``verify`` identity suites and print ``table``s."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import graded as gr
from .scalars import parse_rat
from .suites import SUITES, run_suite


def print_table(kind: str, fam: Optional[gr.StructureFamily] = None, range_: int = 3, fmt: str = "text") -> str:
    """Render ``f(p,q)``, the antisymmetrized charge ``ω(e_p,e_q)``, or ``φ(p)``."""
    if range_ < 0:
        raise ValueError("range must be non-negative")
    fam = fam or gr.VirasoroEps()
    R = range(-range_, range_ + 1)
    if kind == "mul":
        rows = [((p, q), fam.coeff(p, q)) for p in R for q in R]
        text = [f"f({p},{q}) = {v}" for (p, q), v in rows]
        data = [{"p": p, "q": q, "ratfunc": v.to_json()} for (p, q), v in rows]
    elif kind == "cocycle":
        phi = gr.CentralCharge.virasoro()
        rows = [((p, q), gr.antisymmetrize(phi, p, q)) for p in R for q in R]
        text = [f"ω(e_{p},e_{q}) = {v}" for (p, q), v in rows]
        data = [{"p": p, "q": q, "ratfunc": v.to_json()} for (p, q), v in rows]
    elif kind == "phi":
        rows = [(p, gr.central_phi(p)) for p in R]
        text = [f"φ({p}) = {v}" for p, v in rows]
        data = [{"p": p, "ratfunc": v.to_json()} for p, v in rows]
    else:
        raise ValueError(f"unknown table kind {kind!r}")
    if fmt == "json":
        return json.dumps({"kind": kind, "family": fam.name, "range": range_, "entries": data}, ensure_ascii=False)
    return "\n".join(text)


def _fraction(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _family(text: str) -> gr.StructureFamily:
    try:
        return gr.family_from_spec(text)
    except (OSError, ValueError, KeyError) as exc:
        raise argparse.ArgumentTypeError(f"cannot load family {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasiassoc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run identity suites")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--window", type=int, default=10)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--eps-value", type=_fraction, default=None, help="evaluate at a numeric ε (p/q)")
    v.add_argument("--family", type=_family, default=None, help="virasoro, lambda=<p/q>, or a table file")
    v.add_argument("--timing", action="store_true", help="include elapsed seconds in JSON output")

    t = sub.add_parser("table", help="print structure tables")
    t.add_argument("kind", choices=("mul", "cocycle", "phi"))
    t.add_argument("--range", type=int, default=3, dest="range_")
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.add_argument("--family", type=_family, default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "table":
        if args.range_ < 0:
            parser.error("--range must be non-negative")
        print(print_table(args.kind, args.family, args.range_, args.format))
        return 0
    if args.window < 2:
        parser.error("--window must be at least 2")
    if args.trials < 1:
        parser.error("--trials must be at least 1")
    reports = run_suite(args.suite, args.window, args.trials, args.seed, args.family, args.eps_value)
    passed = all(r.ok for r in reports)
    if args.format == "json":
        out = {"passed": passed, "reports": [r.to_json(timing=args.timing) for r in reports]}
        print(json.dumps(out, ensure_ascii=False, sort_keys=True))
    else:
        for r in reports:
            status = "PASS" if r.ok else "FAIL"
            print(f"{r.suite:<10} {status}  cases={r.cases:<8} failures={r.failed_cases:<3} ({r.elapsed:.2f}s)")
            for note in r.notes:
                print(f"    note: {note}")
            for f in r.failures[:5]:
                print(f"    {f['operation']} {f['inputs']}: {f.get('error') or (str(f['lhs']) + ' != ' + str(f['rhs']))}")
        print("all suites passed" if passed else "FAILURES PRESENT")
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
