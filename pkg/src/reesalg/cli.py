"""Command-line front end: ``reesalg <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys

from . import invariants as inv
from .blowup import blow_up, make_basic_object
from .builtins import BUILTINS, builtin_report, list_builtins, run_builtin
from .closure import canonical_compare
from .diff import diff_saturate
from .poly import Stratum, format_point
from .rees import (Horizons, NotInSingularLocus, algebra_vars, make_ring, order_at_point,
                   parse_algebra, sing_ideal, sing_membership, zero_set_membership)
from .scenario import Scenario, format_trace, run_scenario, trace_to_dict


def _globals(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--char", type=int, default=d(0), help="0 or a prime")
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--horizon", type=int, default=d(8), help="A_max for Veronese searches")
    p.add_argument("--check-depth", type=int, default=d(4), help="K_check for multiplicativity checks")


def _ring_for(args, *texts):
    if args.vars:
        names = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    else:
        names = ()
        for t in texts:
            names += tuple(v for v in algebra_vars(t) if v not in names)
    return make_ring(args.char, names)


def parse_point(text: str, ring):
    """``z=0,x=1``, ``0,1`` or ``generic:z,x``."""
    text = text.strip()
    if text.startswith("generic:"):
        return Stratum([v.strip() for v in text[8:].split(",") if v.strip()]).check(ring)
    parts = [s.strip() for s in text.split(",") if s.strip()]
    if parts and all("=" in s for s in parts):
        return ring.point({k.strip(): ring.field(v) for k, v in (s.split("=", 1) for s in parts)})
    return ring.point([ring.field(s) for s in parts])


def _emit(args, data: dict, text: str):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def cmd_saturate(args) -> int:
    ring = _ring_for(args, args.algebra)
    G = parse_algebra(args.algebra, ring)
    S = diff_saturate(G)
    _emit(args, {"vars": list(ring.vars), "char": args.char, "saturation": str(S),
                 "generators": [{"poly": str(g.poly), "weight": g.weight} for g in S.gens]}, str(S))
    return 0


def cmd_sing(args) -> int:
    ring = _ring_for(args, args.algebra)
    G = parse_algebra(args.algebra, ring)
    I = sing_ideal(G)
    data = {"vars": list(ring.vars), "sing_ideal": [str(g) for g in I.gens]}
    text = f"Sing = V{I}"
    if args.point:
        p = parse_point(args.point, ring)
        data["point"] = format_point(p)
        data["in_sing"] = sing_membership(G, p)
        data["in_zero_set"] = zero_set_membership(G, p)
        text += f"\n{format_point(p)}: in Sing {data['in_sing']}, in zero set {data['in_zero_set']}"
    _emit(args, data, text)
    return 0


def cmd_order(args) -> int:
    ring = _ring_for(args, args.algebra)
    G = parse_algebra(args.algebra, ring)
    p = parse_point(args.point, ring)
    try:
        o = order_at_point(G, p)
    except NotInSingularLocus as exc:
        _emit(args, {"point": format_point(p), "error": str(exc)}, f"error: {exc}")
        return 1
    _emit(args, {"point": format_point(p), "order": str(o)}, f"ord at {format_point(p)} = {o}")
    return 0


def cmd_blowup(args) -> int:
    ring = _ring_for(args, args.algebra)
    G = parse_algebra(args.algebra, ring)
    center = [v.strip() for v in args.center.split(",")]
    rename = dict(s.split("=") for s in args.rename.split(",")) if args.rename else None
    bo = make_basic_object(ring, {"G": G}, Horizons(args.horizon, args.check_depth))
    new, exps = blow_up(bo, center, args.chart, rename, 1)
    _emit(args, {"vars": list(new.ring.vars), "transform": str(new["G"]), "exponent": exps["G"]},
          f"vars {', '.join(new.ring.vars)}\n{new['G']}\nexceptional exponent {exps['G']}")
    return 0


def cmd_compare(args) -> int:
    ring = _ring_for(args, args.left, args.right)
    G, K = parse_algebra(args.left, ring), parse_algebra(args.right, ring)
    cmp = canonical_compare(G, K, Horizons(args.horizon, args.check_depth))
    _emit(args, {"verdict": cmp.verdict.value, "certificate": cmp.verdict.certificate,
                 "left_in_right": str(cmp.left_in_right), "right_in_left": str(cmp.right_in_left),
                 "weight": cmp.weight}, str(cmp))
    return 0


def _load(path: str, args) -> Scenario:
    with open(path) as fh:
        return Scenario.from_json(fh.read(), Horizons(args.horizon, args.check_depth))


def cmd_run(args) -> int:
    trace = run_scenario(_load(args.scenario, args))
    if args.json:
        print(json.dumps(trace_to_dict(trace), indent=2, sort_keys=True, default=str))
    else:
        print(format_trace(trace, show_algebras=args.trace))
    return 0 if trace.passed else 1


def cmd_invariants(args) -> int:
    trace = run_scenario(_load(args.scenario, args), evaluate=False)
    i = trace.frame_index(args.step if args.step is None else int(args.step))
    bo = trace.frames[i].bo
    p = parse_point(args.point, bo.ring)
    names = [args.algebra] if args.algebra else bo.names()
    out = {"step": i, "point": format_point(p), "algebras": {}}
    for n in names:
        rec = {}
        for key, fn in (("ord", lambda: inv.ord_at(trace, i, p, n)),
                        ("word", lambda: inv.word_at(trace, i, p, n)),
                        ("t", lambda: inv.t_at(trace, i, p, n))):
            try:
                v = fn()
                rec[key] = [str(v[0]), v[1]] if isinstance(v, tuple) else str(v)
            except ValueError as exc:
                rec[key] = f"undefined ({exc})"
        try:
            td = inv.tau_lower_bound(bo[n], p)
            rec["tau_lower"] = td.tau_lower
            rec["tau_exact"] = td.exact
            rec["linear_forms"] = [str(f) for f in td.linear_forms]
            if td.note:
                rec["tau_note"] = td.note
        except ValueError as exc:
            rec["tau_lower"] = f"undefined ({exc})"
        out["algebras"][n] = rec
    lines = [f"step {i}, point {format_point(p)}"]
    lines += [f"{n}: " + ", ".join(f"{k}={v}" for k, v in r.items()) for n, r in out["algebras"].items()]
    text = "\n".join(lines)
    _emit(args, out, text)
    return 0


def cmd_builtin(args) -> int:
    if args.list or not args.name:
        cat = [{"name": n, "description": BUILTINS[n].description} for n in list_builtins()]
        _emit(args, {"builtins": cat}, "\n".join(f"{c['name']}: {c['description']}" for c in cat))
        return 0
    try:
        traces = run_builtin(args.name, Horizons(args.horizon, args.check_depth))
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    ok = all(t.passed for t in traces)
    if args.json:
        print(json.dumps(builtin_report(args.name, traces, as_dict=True), indent=2, sort_keys=True, default=str))
    else:
        print(builtin_report(args.name, traces))
        print(f"\n{args.name}: {'all assertions passed' if ok else 'FAILED'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reesalg", description="Rees-algebra calculus on exact polynomials")
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        _globals(sp, suppress=True)
        sp.set_defaults(func=fn)
        return sp

    for name, fn, h in (("saturate", cmd_saturate, "differential saturation"),
                        ("sing", cmd_sing, "singular-locus ideal and point membership"),
                        ("order", cmd_order, "Hironaka order at a point")):
        sp = add(name, fn, h)
        sp.add_argument("--algebra", required=True, help='e.g. "[z^2 + x^3 @ 2]"')
        sp.add_argument("--vars", help="comma-separated variable order")
        sp.add_argument("--point", required=(name == "order"), help='"z=0,x=1", "0,1" or "generic:z,x"')
    sp = add("blowup", cmd_blowup, "weighted transform at a coordinate center")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--vars")
    sp.add_argument("--center", required=True, help="comma-separated center variables")
    sp.add_argument("--chart", required=True, help="center variable generating the exceptional ideal")
    sp.add_argument("--rename", help="old=new,... for the chart variables")
    sp = add("compare", cmd_compare, "compare closures of saturations")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--vars")
    sp = add("run", cmd_run, "run a scenario file")
    sp.add_argument("scenario")
    sp.add_argument("--trace", action="store_true", help="print every intermediate algebra")
    sp = add("invariants", cmd_invariants, "ord, w-ord, t and tau at a point of a trace")
    sp.add_argument("scenario")
    sp.add_argument("--step", help="frame index (default: final)")
    sp.add_argument("--point", required=True)
    sp.add_argument("--algebra")
    sp = add("builtin", cmd_builtin, "run a built-in scenario")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--list", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
