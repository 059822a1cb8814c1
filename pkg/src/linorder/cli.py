"""The ``ord`` command line tool.

Exit codes: 0 success, 1 violations found, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .automorph import (
    StdInterval, build_nra, identity_auto, standard_map_apply, standard_map_invert,
    verify_automorphism,
)
from .epseq import compare_ep, tail_equiv_n
from .errors import OrderError
from .isobuild import (
    ClassAssignment, RepPointX, address, back_and_forth, check_rep_point, fl_iso, power_compare,
    pra_lift, rebuild_from_digits, right_decompose, span_witness, sql_power_iso, zeta_binary_iso,
)
from .orders import SqLimit, Zeta, construct
from .parse import (
    _Reader, _point, format_element, format_order, format_seq, parse_order_expr, parse_point,
    parse_seq,
)
from .selftest import report_json, run_selftest, sb_scenario

SCHEMA = 1


class UsageError(Exception):
    pass


def _default_seed() -> int:
    try:
        return int(os.environ.get("ORD_SEED", "1"))
    except ValueError:
        raise UsageError("ORD_SEED must be an integer") from None


def _word(order, text: str) -> tuple:
    """Comma separated points, e.g. "0,0" or "(0,1),(1,0)"."""
    O = construct(order)
    r = _Reader(text)
    items = [_point(r, O.descriptor)]
    while r.accept(","):
        items.append(_point(r, O.descriptor))
    r.end()
    return tuple(O.check(x) for x in items)


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, default=str))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_parse(args):
    d = parse_order_expr(args.expr)
    O = construct(d)
    meta = O.meta.as_dict()
    payload = {"expr": format_order(d), "meta": meta}
    if O.has_min:
        payload["min"] = format_element(O, O.min)
    if O.has_max:
        payload["max"] = format_element(O, O.max)
    flags = ", ".join(f"{k}={v}" for k, v in meta.items())
    _emit(args, payload, f"{format_order(d)}\n{flags}")
    return 0


def cmd_compare(args):
    d = parse_order_expr(args.order)
    x, y = parse_point(d, args.x), parse_point(d, args.y)
    c = construct(d).compare(x, y)
    _emit(args, {"result": c.name}, c.name)
    return 0


def cmd_seq_compare(args):
    d = parse_order_expr(args.order)
    c = compare_ep(parse_seq(d, args.u), parse_seq(d, args.v))
    _emit(args, {"result": c.name}, c.name)
    return 0


def cmd_tailequiv(args):
    d = parse_order_expr(args.order)
    u, v = parse_seq(d, args.u), parse_seq(d, args.v)
    w = tail_equiv_n(u, v, args.n)
    if w is None:
        _emit(args, {"equivalent": False}, "not equivalent")
    else:
        _emit(args, {"equivalent": True, "k": w.k, "l": w.l}, f"equivalent (k={w.k}, l={w.l})")
    return 0


def cmd_stdmap(args):
    d = parse_order_expr(args.order)
    iv = StdInterval(d, _word(d, args.r), _word(d, args.s))
    u = parse_seq(d, args.seq)
    out = standard_map_invert(iv, u) if args.invert else standard_map_apply(iv, u)
    _emit(args, {"result": format_seq(out)}, format_seq(out))
    return 0


def _auto(args, n):
    d = parse_order_expr(args.order)
    if args.fault == "identity":
        return identity_auto(d, n)
    strategy = {"auto": "auto", "both": "both_endpoints", "both_endpoints": "both_endpoints"}[args.cover]
    return build_nra(d, n, strategy, swapped=args.fault == "swapped")


def _verify(args, n):
    F = _auto(args, n)
    rep = verify_automorphism(F, args.samples, args.depth, args.seed)
    text = (
        f"{F.name}: {'PASS' if rep.passed else 'FAIL'} "
        f"({rep.samples} samples, depth {rep.depth}, seed {rep.seed}, modulus {n}); "
        f"order {len(rep.order_violations)}, revolving {len(rep.parity_violations)}, "
        f"round trip {len(rep.roundtrip_failures)}"
    )
    for kind in ("order_violations", "parity_violations", "roundtrip_failures"):
        for item in getattr(rep, kind):
            text += f"\n  {kind}: {item}"
    _emit(args, rep.as_dict(), text)
    return 0 if rep.passed else 1


def cmd_pra(args):
    return _verify(args, 2)


def cmd_nra(args):
    return _verify(args, args.n)


def _load_assignment(d, n, path) -> ClassAssignment:
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read assignment file: {exc}") from None
    fiber = lambda s: None if s in (None, "empty") else parse_order_expr(s)  # noqa: E731
    entries = [(parse_seq(d, e["rep"]), fiber(e.get("fiber"))) for e in spec.get("entries", [])]
    return ClassAssignment(d, n, entries, fiber(spec.get("default")))


def cmd_lift(args):
    d = parse_order_expr(args.order)
    CA = _load_assignment(d, args.n, args.assignment)
    u = parse_seq(d, args.seq)
    fib = CA.fiber_order(u)
    if fib is None:
        raise UsageError(f"{args.seq} lies in an empty class")
    x = check_rep_point(CA, RepPointX(u, parse_point(fib, args.fiber)))
    iso = pra_lift(CA, build_nra(d, args.n), args.samples, args.depth, args.seed)
    a, y = iso.forward(x)
    flat = iso.extra["flat"](x)
    fe = format_element(fib, y.fiber_elem)
    payload = {
        "letter": format_element(d, a),
        "address": format_seq(y.address),
        "fiber": fe,
        "image": format_seq(flat.address),
    }
    _emit(args, payload, f"({format_element(d, a)}, {format_seq(y.address)} ; {fe})   image {format_seq(flat.address)}")
    return 0


def cmd_iso(args):
    X, Y = parse_order_expr(args.x), parse_order_expr(args.y)
    colors = args.colors if args.kind == "skolem" else None
    if args.kind == "skolem" and colors is None:
        raise UsageError("skolem needs --colors")
    P = back_and_forth(X, Y, colors, args.steps)
    bad = P.violations()
    pairs = [[format_element(X, x), format_element(Y, y)] for x, y in P.pairs]
    text = f"{len(P)} matched pairs after {P.steps} steps, {len(bad)} violations"
    if args.show:
        text += "\n" + "\n".join(f"  {x} -> {y}" for x, y in pairs[: args.show])
    _emit(args, {"matched": len(P), "steps": P.steps, "violations": len(bad), "pairs": pairs}, text)
    return 0 if not bad else 1


def cmd_sb(args):
    try:
        O, h = sb_scenario(args.scenario, args.fuel)
    except KeyError:
        raise UsageError(f"unknown scenario {args.scenario!r} (omega-shift3, omega-identity, fin4-identity)") from None
    count = args.count if O.size is None else min(args.count, O.size)
    rows = [(k, h.forward(k), h.extra["classify"](k)) for k in range(count)]
    text = "\n".join(f"{k} -> {v}  [{c}]" for k, v, c in rows)
    _emit(args, {"scenario": args.scenario, "map": [{"x": k, "h": v, "chain": c} for k, v, c in rows]}, text)
    return 0


def cmd_sqlimit(args):
    base = parse_order_expr(args.base)
    X = construct(SqLimit(base, args.n))
    I = sql_power_iso(X)
    xs = [X.nth(k) for k in range(args.check_samples)]
    bad = 0
    for x, y in zip(xs, xs[1:] + xs[:1]):
        px, py = I.forward(x), I.forward(y)
        ok = power_compare(X, px, py) == X.compare(x, y) and I.inverse(px) == x
        a, b = span_witness(X, x)
        ok = ok and X.compare(X.make(0, [a]), x) <= 0 <= X.compare(X.make(0, [b]), x)
        bad += not ok
    rows = [
        (format_element(X, x), [format_element(X, c) for c in I.forward(x)]) for x in xs[: args.show]
    ]
    text = f"{format_order(X.descriptor)}: {len(xs)} samples, {bad} violations"
    text += "".join(f"\n  {x} -> ({', '.join(cs)})" for x, cs in rows)
    _emit(args, {"samples": len(xs), "violations": bad, "examples": rows}, text)
    return 0 if not bad else 1


def cmd_address(args):
    d = parse_order_expr(args.order)
    u = parse_seq(d, args.point)
    word = address(None, fl_iso(d), u, args.depth)
    out = [format_element(d, a) for a in word]
    _emit(args, {"address": out}, ",".join(out))
    return 0


def cmd_rdecomp(args):
    if args.scenario != "zeta-binary":
        raise UsageError(f"unknown scenario {args.scenario!r} (zeta-binary)")
    iso = zeta_binary_iso()
    x = parse_point(Zeta(), args.point)
    digits, anchor = right_decompose(Zeta(), iso, x, args.depth)
    assert rebuild_from_digits(Zeta(), iso, anchor, digits) == x
    _emit(args, {"digits": list(digits), "anchor": anchor},
          f"digits {','.join(map(str, digits)) or '-'}  anchor {anchor}")
    return 0


def cmd_selftest(args):
    report = run_selftest(args.seed, args.budget, corrupt_stdmap=args.corrupt_stdmap)
    if args.json:
        print(report_json(report))
    else:
        for s in report["suites"]:
            line = f"{'PASS' if s['passed'] else 'FAIL'}  {s['name']}  ({s['checks']} checks)"
            if s["counterexample"]:
                line += f"\n      counterexample: {s['counterexample']}"
            print(line)
        print("all suites passed" if report["passed"] else "some suites FAILED")
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    p = argparse.ArgumentParser(prog="ord", description="Computable linear orders and A^omega automorphisms.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("parse", cmd_parse, "parse and pretty-print an order expression")
    sp.add_argument("expr")

    sp = add("compare", cmd_compare, "compare two points of an order")
    sp.add_argument("--order", required=True)
    sp.add_argument("x")
    sp.add_argument("y")

    sp = add("seq-compare", cmd_seq_compare, "compare two eventually periodic sequences")
    sp.add_argument("--order", required=True)
    sp.add_argument("u")
    sp.add_argument("v")

    sp = add("tailequiv", cmd_tailequiv, "decide n-tail equivalence")
    sp.add_argument("--order", required=True)
    sp.add_argument("-n", type=int, default=1)
    sp.add_argument("u")
    sp.add_argument("v")

    sp = add("stdmap", cmd_stdmap, "apply the standard map on [r^, s^]")
    sp.add_argument("--order", required=True)
    sp.add_argument("--r", required=True)
    sp.add_argument("--s", required=True)
    sp.add_argument("--seq", required=True)
    sp.add_argument("--invert", action="store_true")

    for name, fn in (("pra", cmd_pra), ("nra", cmd_nra)):
        sp = add(name, fn, "build and verify a parity-reversing automorphism" if name == "pra"
                 else "build and verify an n-revolving automorphism")
        sp.add_argument("--order", required=True)
        if name == "nra":
            sp.add_argument("-n", type=int, required=True)
        sp.add_argument("--cover", default="auto", choices=["auto", "both", "both_endpoints"])
        sp.add_argument("--samples", type=int, default=200)
        sp.add_argument("--depth", type=int, default=16)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--fault", default="none", choices=["none", "identity", "swapped"],
                        help="debug: verify a deliberately wrong map")

    sp = add("lift", cmd_lift, "map a replacement point X -> A X along an automorphism")
    sp.add_argument("--order", required=True)
    sp.add_argument("-n", type=int, default=2)
    sp.add_argument("--assignment", required=True, help="JSON file: {entries: [{rep, fiber}], default}")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--fiber", required=True)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--depth", type=int, default=16)
    sp.add_argument("--seed", type=int, default=None)

    sp = add("iso", cmd_iso, "back-and-forth between dense orders")
    sp.add_argument("kind", choices=["cantor", "skolem"])
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--colors", type=int, default=None)
    sp.add_argument("--steps", type=int, default=200)
    sp.add_argument("--show", type=int, default=0, help="print this many matched pairs")

    sp = add("sb", cmd_sb, "Schroeder-Bernstein on a built-in scenario")
    sp.add_argument("scenario")
    sp.add_argument("--fuel", type=int, default=1000)
    sp.add_argument("--count", type=int, default=10)

    sp = add("sqlimit", cmd_sqlimit, "check the power isomorphism of a square limit")
    sp.add_argument("--base", required=True)
    sp.add_argument("-n", type=int, default=2)
    sp.add_argument("--check-samples", type=int, default=200)
    sp.add_argument("--show", type=int, default=5)

    sp = add("address", cmd_address, "A^omega address of a sequence under flattening")
    sp.add_argument("--order", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--depth", type=int, default=8)

    sp = add("rdecomp", cmd_rdecomp, "right digit decomposition on a built-in scenario")
    sp.add_argument("scenario")
    sp.add_argument("point")
    sp.add_argument("--depth", type=int, default=8)

    sp = add("selftest", cmd_selftest, "run every property suite and acceptance check")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--budget", default="small", choices=["small", "full"])
    sp.add_argument("--corrupt-stdmap", action="store_true", help="debug: swap the standard-map branches")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args)
    except (OrderError, UsageError) as exc:
        print(f"ord: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
