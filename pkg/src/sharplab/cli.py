"""Command-line front end: ``sharplab verify | eval | list``.

Exit codes: 0 when every verdict matches the expected table (or evaluation
succeeded), 1 on a verdict mismatch, 2 on a configuration, parse or
validation error.
"""

import argparse
import json
import sys

from .diagram import (bindings_from_dict, diagram_from_dict, double_bindings, double_diagram,
                      eval_diagram, validate)
from .errors import InvalidDiagram, TypeMismatch, UnboundBox
from .scalars import DEFAULT_TOL, EXACT, FLOAT, format_scalar
from .suite import CHECKS, ConfigError, SuiteConfig, default_seed, report_json, report_text, \
    run_suite
from .tensor import CLM, DCLM, MCLM


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="sharplab", description="Check candidate test structures on linear maps.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification checks")
    v.add_argument("--dim", type=int, action="append",
                   help="wire dimension to probe (repeatable; default 2 and 3)")
    v.add_argument("--seed", type=int, default=None,
                   help="PRNG seed (default: $SHARPLAB_SEED or 0)")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    v.add_argument("--backend", choices=(EXACT, FLOAT), default=None,
                   help="force one backend for every check")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--check", action="append", default=[], metavar="ID",
                   help="check id to run (repeatable)")
    v.add_argument("--all", action="store_true", help="run every check (the default)")
    v.add_argument("--output", "-o", help="also write the report to this file")
    v.add_argument("--list", action="store_true", help="list check ids and exit")

    e = sub.add_parser("eval", help="evaluate a diagram file")
    e.add_argument("path")
    e.add_argument("--bindings", help="JSON file mapping box labels to matrices")
    e.add_argument("--backend", choices=(EXACT, FLOAT), default=EXACT)
    e.add_argument("--theory", choices=(CLM, DCLM, MCLM), default=None,
                   help="DCLM doubles every box before evaluation")
    e.add_argument("--format", choices=("text", "json"), default="text")

    lst = sub.add_parser("list", help="list check ids with their anchors")
    lst.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _fail(msg):
    print(f"sharplab: error: {msg}", file=sys.stderr)
    return 2


def cmd_verify(args):
    if args.list:
        return cmd_list(args)
    if args.all and args.check:
        return _fail("--all and --check are mutually exclusive")
    try:
        seed = args.seed if args.seed is not None else default_seed()
        cfg = SuiteConfig(dims=tuple(args.dim) if args.dim else (2, 3), seed=seed,
                          samples=args.samples, tolerance=args.tolerance,
                          backend=args.backend, format=args.format)
        code, results = run_suite(cfg, args.check)
    except ConfigError as exc:
        return _fail(str(exc))
    out = report_json(results) if cfg.format == "json" else report_text(results)
    print(out)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    return code


def _render_map(f):
    if f.is_scalar:
        return format_scalar(f.scalar())
    rows = ["[" + ", ".join(format_scalar(x) for x in row) + "]" for row in f.matrix]
    head = f"{f.theory} map {list(f.dom)} -> {list(f.cod)}"
    return "\n".join([head] + rows)


def cmd_eval(args):
    try:
        with open(args.path, encoding="utf-8") as fh:
            doc = json.load(fh)
        d, theory = diagram_from_dict(doc, args.backend)
        bindings = {}
        if args.bindings:
            with open(args.bindings, encoding="utf-8") as fh:
                bindings = bindings_from_dict(json.load(fh), d, args.backend)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(f"cannot read diagram: {exc}")
    result = validate(d)
    if not result.ok:
        for v in result.violations:
            print(str(v), file=sys.stderr)
        return 2
    if args.theory in (DCLM, MCLM) and theory == CLM:
        # raw boxes: lift every payload into the doubled theory
        d, bindings = double_diagram(d), double_bindings(bindings)
    theory = args.theory or theory
    try:
        f = eval_diagram(d, bindings, args.backend)
    except (UnboundBox, TypeMismatch, InvalidDiagram) as exc:
        return _fail(str(exc))
    if theory != CLM:
        f = f.with_theory(theory)
    if args.format == "json":
        print(json.dumps({"dom": list(f.dom), "cod": list(f.cod), "theory": f.theory,
                          "matrix": [[format_scalar(x) for x in row] for row in f.matrix]},
                         ensure_ascii=False))
    else:
        print(_render_map(f))
    return 0


def cmd_list(args):
    if args.format == "json":
        print(json.dumps([{"check_id": c.check_id, "paper_anchor": c.anchor,
                           "expected": c.expected} for c in CHECKS.values()],
                         indent=2, ensure_ascii=False))
    else:
        width = max(len(k) for k in CHECKS)
        for c in CHECKS.values():
            print(f"{c.check_id:<{width}}  {c.expected}  {c.anchor}")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"verify": cmd_verify, "eval": cmd_eval, "list": cmd_list}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
