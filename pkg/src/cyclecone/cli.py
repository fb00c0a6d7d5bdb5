"""Command-line front end.

Every command prints one JSON object (keys sorted, rationals as ints or
``"p/q"`` strings).  Exit status: 0 on success, 1 when ``verify`` finds a
failure, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import verify as verify_mod
from .chow_ring import RingContext, degree
from .cycle_spaces import (
    FiberCone, cf_membership, dual_rays, dual_via_polyhedral, index_sets, pair, pair_via_chow,
)
from .expr import ExprIndexError, ExprSyntaxError, parse, to_class, to_ring
from .linear_systems import (
    base_locus, basis_Ws, order_witness, restrict_to_stratum, restricted_zero_locus, stratum_class,
)
from .polyhedral import DimensionLimitError
from .theorems import status
from .toric_fans import (
    UnsupportedFanError, cox_grading, enumerate_cones, invariant_cycle_classes, preset,
)

PRESETS = ("p1n", "x1", "x2", "x2fiber", "xtilde")


class UsageError(Exception):
    pass


def jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    return str(x)


def render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            value = obj[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.extend(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


# -- commands ---------------------------------------------------------------------


def _ctx(args) -> RingContext:
    try:
        return RingContext(args.n, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_k(args):
    if not 1 <= args.k <= args.n - 1:
        raise UsageError(f"--k must lie in 1..{args.n - 1}")


def cmd_intersect(args) -> dict:
    ctx = _ctx(args)
    product = ctx.one()
    for text in args.exprs:
        product = product * to_ring(parse(text, ctx), ctx)
    degs = product.degrees()
    top = not degs or degs == {ctx.n}
    return {"n": ctx.n, "r": ctx.r, "factors": list(args.exprs), "product": str(product),
            "degree": degree(product) if top else None}


def cmd_pair(args) -> dict:
    ctx = _ctx(args)
    _check_k(args)
    alpha = to_class(parse(args.alpha, ctx), ctx, args.k)
    beta = to_class(parse(args.beta, ctx), ctx, ctx.n - args.k)
    value = pair(alpha, beta)
    via_ring = pair_via_chow(alpha, beta)
    return {"n": ctx.n, "k": args.k, "r": ctx.r, "alpha": str(alpha), "beta": str(beta),
            "pairing": value, "chow_degree": via_ring, "agree": value == via_ring}


def _decomposition_json(dec, ctx, k) -> list:
    return [{"generator": str(g), "weight": w} for g, w in dec.combo(ctx, k).items() if w]


def cmd_cone(args) -> dict:
    ctx = _ctx(args)
    _check_k(args)
    cone = FiberCone(ctx, args.k)
    out = {"n": ctx.n, "k": args.k, "r": ctx.r}
    if args.action == "members":
        out["generators"] = [str(g) for g in cone.generators]
        if args.expr:
            alpha = to_class(parse(args.expr, ctx), ctx, args.k)
            m = cf_membership(alpha)
            out["class"] = str(alpha)
            out["inside"] = m.inside
            if m.inside:
                out["decomposition"] = _decomposition_json(m.decomposition, ctx, args.k)
            else:
                out["separator"] = str(m.separator)
                out["separator_pairing"] = pair(alpha, m.separator)
        return out
    if args.action == "dual":
        rays = dual_rays(cone)
        out["rays"] = [str(c) for c in rays]
        out["count"] = len(rays)
        try:
            out["double_description_agrees"] = set(dual_via_polyhedral(cone)) == set(rays)
        except DimensionLimitError as exc:
            out["double_description_agrees"] = None
            out["note"] = str(exc)
        return out
    alpha = to_class(parse(args.expr, ctx), ctx, args.k)
    sets = index_sets(ctx.n, ctx.n - args.k)
    m = cf_membership(alpha)
    out["class"] = str(alpha)
    out["a"] = [alpha.a(I) for I in sets]
    out["b"] = [alpha.b(j) for j in range(1, ctx.r + 1)]
    out["inside"] = m.inside
    if m.inside:
        rebuilt = m.decomposition.reconstruct(ctx, args.k)
        out["decomposition"] = _decomposition_json(m.decomposition, ctx, args.k)
        out["reconstruction"] = str(rebuilt)
        out["reconstruction_matches"] = rebuilt == alpha
    else:
        out["separator"] = str(m.separator)
        out["separator_pairing"] = pair(alpha, m.separator)
    return out


def _fan_for(args):
    if args.preset == "x2fiber" and args.s is None:
        raise UsageError("preset x2fiber needs --s")
    try:
        return preset(args.preset, args.n, args.s)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cone_json(fan, cone) -> list:
    return [fan.labels[i] for i in sorted(cone)]


def cmd_fan(args) -> dict:
    nf = _fan_for(args)
    fan = nf.fan
    out = {"preset": args.preset, "n": args.n}
    if args.s is not None:
        out["s"] = args.s
    if args.action == "build":
        out["rays"] = {fan.labels[i]: list(v) for i, v in enumerate(fan.rays)}
        out["ray_order"] = list(fan.labels)
        out["max_cones"] = [_cone_json(fan, c) for c in sorted(fan.max_cones, key=sorted)]
        out["max_cone_count"] = len(fan.max_cones)
        return out
    if args.codim is None or not 1 <= args.codim <= args.n - 1:
        raise UsageError(f"--codim must lie in 1..{args.n - 1}")
    out["codim"] = args.codim
    if args.action == "enumerate":
        cones = enumerate_cones(fan, args.n - args.codim)
        out["cones"] = [_cone_json(fan, c) for c in cones]
        out["count"] = len(cones)
        return out
    if args.preset == "xtilde":
        if args.codim != 1:
            raise UsageError("preset xtilde only has divisor classes (--codim 1)")
        out["basis"] = [f"H{i}" for i in range(1, args.n + 1)] + ["E1", "E"]
        out["classes"] = [{"variable": v.name, "ray": list(v.ray), "class": str(v.divisor)}
                          for v in cox_grading(args.n).variables]
        return out
    k = args.n - args.codim
    try:
        rows = invariant_cycle_classes(nf, k)
    except UnsupportedFanError as exc:
        raise UsageError(str(exc)) from exc
    out["classes"] = [{"cone": _cone_json(fan, c), "class": str(cls)} for c, cls in rows]
    out["distinct"] = sorted({str(cls) for _, cls in rows})
    return out


def _check_s(args):
    if args.n < 2 or not 1 <= args.s <= args.n - 1:
        raise UsageError(f"need n >= 2 and 1 <= s <= n-1, got n={args.n}, s={args.s}")


def cmd_linsys(args) -> dict:
    _check_s(args)
    sys_ = basis_Ws(args.n, args.s)
    out = {"n": args.n, "s": args.s, "class": str(sys_.cls)}
    if args.action == "basis":
        out["monomials"] = [str(m) for m in sys_.sorted_monomials()]
        out["count"] = len(sys_.monomials)
    elif args.action == "baselocus":
        out["components"] = [{"vanishing": str(st), "class": str(c)} for st, c in base_locus(sys_)]
    elif args.action == "mult":
        order, witness = order_witness(sys_)
        out["multiplicity"] = order
        out["witness"] = str(witness)
    else:
        if args.s > args.n - 2:
            raise UsageError("restrict needs s <= n-2 (strata come from the base locus of W_{s+1})")
        rows = []
        for st, _ in base_locus(basis_Ws(args.n, args.s + 1)):
            survivors = restrict_to_stratum(sys_, st)
            zeros = restricted_zero_locus(sys_, st)
            rows.append({"stratum": str(st),
                         "survivors": [str(m) for m in survivors.sorted_monomials()],
                         "zero_locus": [{"vanishing": str(z), "class": str(stratum_class(args.n, z))}
                                        for z in zeros]})
        out["restrictions"] = rows
    return out


def cmd_verify(args) -> dict:
    return verify_mod.run(args.check, args.max_n)


def cmd_status(args) -> dict:
    try:
        rep = status(args.n, args.k, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return {"n": rep.n, "k": rep.k, "r": rep.r, "status": rep.status, "reason": rep.reason}


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                        help="output format (default json)")
    common.add_argument("--out", metavar="FILE", default=argparse.SUPPRESS,
                        help="write output to FILE instead of standard output")

    p = argparse.ArgumentParser(prog="cyclecone", parents=[common],
                                description="Intersection numbers and cones of cycles on blowups of (P^1)^n.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    q = sub.add_parser("intersect", parents=[common], help="product of classes in the Chow ring and its degree")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("exprs", nargs="+", metavar="EXPR")
    q.set_defaults(func=cmd_intersect)

    q = sub.add_parser("pair", parents=[common], help="pairing of a k-class with an (n-k)-class")
    for flag in ("--n", "--k", "--r"):
        q.add_argument(flag, type=int, required=True)
    q.add_argument("alpha", metavar="EXPR")
    q.add_argument("beta", metavar="EXPR")
    q.set_defaults(func=cmd_pair)

    group = sub.add_parser("cone", parents=[common], help="cone of fibers: members, dual rays, decomposition")
    actions = group.add_subparsers(dest="action", required=True, metavar="ACTION")
    for action, text, need in (("members", "generators, and membership of EXPR if given", "?"),
                               ("dual", "extremal rays of the dual cone", None),
                               ("decompose", "write EXPR as a combination of generators", 1)):
        q = actions.add_parser(action, parents=[common], help=text)
        for flag in ("--n", "--k", "--r"):
            q.add_argument(flag, type=int, required=True)
        if need == "?":
            q.add_argument("expr", nargs="?", metavar="EXPR")
        elif need:
            q.add_argument("expr", metavar="EXPR")
        q.set_defaults(func=cmd_cone, expr=None)

    group = sub.add_parser("fan", parents=[common], help="toric fans: build, enumerate cones, orbit classes")
    actions = group.add_subparsers(dest="action", required=True, metavar="ACTION")
    for action, text in (("build", "rays and maximal cones"),
                         ("enumerate", "cones with --codim rays"),
                         ("classes", "classes of the orbit closures of codimension --codim")):
        q = actions.add_parser(action, parents=[common], help=text)
        q.add_argument("--preset", choices=PRESETS, required=True)
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--codim", type=int, help="codimension of the orbit closures (rays per cone)")
        q.add_argument("--s", type=int, help="fiber dimension for preset x2fiber")
        q.set_defaults(func=cmd_fan)

    group = sub.add_parser("linsys", parents=[common], help="monomial linear systems |W_s| on X_1^n")
    actions = group.add_subparsers(dest="action", required=True, metavar="ACTION")
    for action, text in (("basis", "monomial basis"), ("baselocus", "base locus with classes"),
                         ("mult", "multiplicity along L"),
                         ("restrict", "restriction to the base locus of |W_(s+1)|")):
        q = actions.add_parser(action, parents=[common], help=text)
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--s", type=int, required=True)
        q.set_defaults(func=cmd_linsys)

    q = sub.add_parser("verify", parents=[common], help="run self-checks")
    q.add_argument("check", choices=("all",) + tuple(verify_mod.CHECKS))
    q.add_argument("--max-n", type=int, dest="max_n")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("status", parents=[common], help="what is known about fiber generation")
    for flag in ("--n", "--k", "--r"):
        q.add_argument(flag, type=int, required=True)
    q.set_defaults(func=cmd_status)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (UsageError, ExprSyntaxError, ExprIndexError, ValueError, DimensionLimitError) as exc:
        print(f"cyclecone: error: {exc}", file=sys.stderr)
        return 2
    data = jsonable(result)
    if getattr(args, "format", "json") == "text":
        text = "\n".join(render_text(data)) + "\n"
    else:
        text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and not result.get("passed", False):
        return 1
    return 0
