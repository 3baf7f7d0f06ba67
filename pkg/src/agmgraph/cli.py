"""Command-line surface: build, census, component, verify, export, curve.

Exit codes: 0 ok (pass or inconclusive), 1 verification failure, 2 usage or
precondition error, 3 flagged discrepancies.  JSON outputs carry a top-level
"schema": 1 and render field elements as coefficient strings.

Budgets come from flags first, then the environment (AGM_MEMORY_CAP bytes for
graph builds, AGM_MAX_Q for the largest permitted field), then defaults.
Output is deterministic for a fixed configuration regardless of --threads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import verify as V
from .aquarium import BuildBudgetError, Vertex, build, lift, vertex_count
from .fields import FieldCtx, FieldError, field_new, parse_field_spec
from .graphio import write_csv, write_dot, write_graphml
from .legendre import BudgetError, curve_for, lambda_fiber
from .taxonomy import StructuralViolation, census, classify_component
from .verify import exit_code_for

CHECK_NAMES = ("identity", "ms", "ns", "multiplicity", "fate", "isogeny",
               "bounds", "taxonomy", "all")


def _add_common(p):
    p.add_argument("--field", required=True,
                   help='field spec: "13", "5^3", or "3^2;modulus=1,0,1"')
    p.add_argument("--memory-cap", type=int, default=None,
                   help="graph build budget in bytes (default AGM_MEMORY_CAP or 4e9)")
    p.add_argument("--max-q", type=int, default=None,
                   help="refuse fields larger than this (default AGM_MAX_Q)")
    p.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="parallelism hint; results do not depend on it")


def _parse_field(args) -> FieldCtx:
    ctx = parse_field_spec(args.field)
    max_q = args.max_q
    if max_q is None and os.environ.get("AGM_MAX_Q"):
        max_q = int(os.environ["AGM_MAX_Q"])
    if max_q is not None and ctx.q > max_q:
        raise FieldError(f"q={ctx.q} exceeds the configured limit {max_q}")
    return ctx


def _emit(obj, args):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="agm",
        description="AGM graphs over odd finite fields: build, classify, verify, export")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build the graph and print a summary")
    _add_common(p)

    p = sub.add_parser("census", help="component census")
    _add_common(p)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("component", help="component snapshot across a tower")
    _add_common(p)
    p.add_argument("--a", required=True, help='first coordinate, e.g. "3" or "1+2*t"')
    p.add_argument("--b", required=True, help="second coordinate")
    p.add_argument("--extend", type=int, default=1, metavar="M",
                   help="inspect A(F_{q^k}) for k = 1..M")

    p = sub.add_parser("verify", help="run a verification check")
    _add_common(p)
    p.add_argument("--check", choices=CHECK_NAMES, required=True)
    p.add_argument("--s", type=int, default=None, help="trace for ms/ns checks")
    p.add_argument("--a", default=None, help="vertex coordinate for fate")
    p.add_argument("--b", default=None)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--sample-size", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("export", help="write the graph to a file")
    _add_common(p)
    p.add_argument("--format", choices=("dot", "graphml", "csv"), required=True)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--color-components", action="store_true",
                   help="DOT only: color nodes by component type")

    p = sub.add_parser("curve", help="dump the invariants of one Legendre curve")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", required=True,
                   help='lambda as a coefficient string, e.g. "16" or "2+1*t"')

    args = ap.parse_args(argv)
    try:
        return _dispatch(args)
    except (FieldError, BudgetError, BuildBudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StructuralViolation as exc:
        print(f"structural violation: {exc}", file=sys.stderr)
        return 1


def _build(args, ctx):
    cap = args.memory_cap
    if cap is None and os.environ.get("AGM_MEMORY_CAP"):
        cap = int(os.environ["AGM_MEMORY_CAP"])
    return build(ctx, memory_cap=cap)


def _dispatch(args) -> int:
    ctx = _parse_field(args)

    if args.command == "build":
        t0 = time.perf_counter()
        aq = _build(args, ctx)
        dt = time.perf_counter() - t0
        print(f"field={ctx.spec_str()} q={ctx.q} vertices={aq.n_vertices} "
              f"edges={aq.edge_count} build_seconds={dt:.3f}")
        return 0

    if args.command == "census":
        aq = _build(args, ctx)
        cen = census(aq)
        if args.format == "text":
            d = cen.to_dict()
            for k in ("field", "q", "vertices", "edges", "component_count",
                      "jellyfish"):
                print(f"{k}: {d[k]}")
            for t, c in d["components"].items():
                print(f"  {t}: {c}")
            print(f"size_histogram: {d['size_histogram']}")
            print(f"head_length_histogram: {d['head_length_histogram']}")
            for fl in d["flags"]:
                print(f"flag: {fl}")
        else:
            _emit(cen.to_dict(), args)
        return 0

    if args.command == "component":
        a = ctx.parse_elem_str(args.a)
        b = ctx.parse_elem_str(args.b)
        v = Vertex(ctx.from_rank(a), ctx.from_rank(b))  # validates
        out = {"schema": 1, "field": ctx.spec_str(),
               "vertex": f"{v.a},{v.b}", "levels": []}
        rep = V.check_fate(ctx, a, b, m_max=args.extend)
        out["levels"] = rep.ledger["levels"]
        out["supersingular"] = rep.ledger["supersingular"]
        _emit(out, args)
        return 0

    if args.command == "verify":
        names = CHECK_NAMES[:-1] if args.check == "all" else (args.check,)
        if args.check == "all":
            names = [n for n in names
                     if not (n == "identity" and (ctx.n != 1 or ctx.q % 4 != 1))
                     and not (n in ("bounds",) and ctx.q % 4 != 1)
                     and n not in ("ms", "ns", "fate")]
        kw = {}
        if args.s is not None:
            kw["s"] = args.s
        if args.a is not None and args.b is not None:
            kw["a"] = ctx.parse_elem_str(args.a)
            kw["b"] = ctx.parse_elem_str(args.b)
        kw["m_max"] = args.m_max
        kw["sample_size"] = args.sample_size
        kw["seed"] = args.seed
        for name in names:
            if name in ("ms", "ns") and "s" not in kw:
                raise ValueError(f"check {name!r} requires --s")
            if name == "fate" and "a" not in kw:
                raise ValueError("check 'fate' requires --a and --b")
        aq = _build(args, ctx)
        _apply_test_perturbation(aq)
        reports = V.run_checks(names, ctx, aq=aq, **kw)
        _emit({"schema": 1, "reports": [r.to_dict() for r in reports]}, args)
        return exit_code_for(reports)

    if args.command == "export":
        aq = _build(args, ctx)
        writer = {"dot": lambda fh: write_dot(aq, fh, args.color_components),
                  "graphml": lambda fh: write_graphml(aq, fh),
                  "csv": lambda fh: write_csv(aq, fh)}[args.format]
        if args.out:
            with open(args.out, "w") as fh:
                writer(fh)
        else:
            writer(sys.stdout)
        return 0

    if args.command == "curve":
        lam = ctx.parse_elem_str(args.lam)
        cur = curve_for(ctx, lam)
        out = {
            "schema": 1,
            "field": ctx.spec_str(),
            "lambda": ctx.elem_str(lam),
            "j": ctx.elem_str(cur.j),
            "point_count": cur.point_count,
            "trace": cur.trace,
            "supersingular": cur.is_supersingular,
            "group_structure": list(cur.group_structure),
            "lambda_fiber": sorted(str(e) for e in lambda_fiber(ctx, lam)),
        }
        if cur.frobenius_disc is not None:
            out["d_K"], out["conductor"] = cur.frobenius_disc
        _emit(out, args)
        return 0

    raise ValueError(f"unhandled command {args.command!r}")  # pragma: no cover


def _apply_test_perturbation(aq):
    """Test-only hook: AGM_TEST_PERTURB_EDGE="src:slot:dst" rewires one edge
    after the build so the exit-code contract can be exercised end to end."""
    spec = os.environ.get("AGM_TEST_PERTURB_EDGE")
    if not spec:
        return
    src, slot, dst = (int(x) for x in spec.split(":"))
    aq.children[src, slot] = dst
    aq._csr = None
    aq._labels = {}


if __name__ == "__main__":
    sys.exit(main())
