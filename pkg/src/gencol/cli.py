"""Command-line front end.

Exit codes: 0 success, 1 bad input (usage, parse or validation errors),
2 internal contract violation.  Every witness is printed together with the
result of its independent re-check.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any

from . import admissibility, augmentation, colorings, games, partitions, reach, wideness
from .errors import ContractError, GencolError
from .graph import INF, degeneracy, finite_radius, nabla_exact, read_graph

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _radius(text: str):
    if text.lower() in ("inf", "infinity", "oo"):
        return INF
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("radius must be non-negative")
    return value


def _read_ints(path) -> list[int]:
    with open(path) as fh:
        return [int(tok) for tok in fh.read().split()]


def _order(args, g):
    if getattr(args, "order", None):
        with open(args.order) as fh:
            o = reach.VertexOrder.parse(fh.read())
        reach.check_order(g, o)
        return o
    # small graphs get an optimal wcol order, larger ones the greedy adm order
    r = finite_radius(getattr(args, "r", 1), g.n) if g.n else 1
    if args.command in ("cover", "play") and args.__dict__.get("game") != "counter":
        r = 2 * r
    if g.n <= reach.EXACT_CAP:
        return reach.exact_parameter(g, r, "wcol").order
    return admissibility.greedy_adm_order(g, r, "auto").order


def _jsonable(r):
    return "inf" if r == INF else r


# ---------------------------------------------------------------- handlers


def cmd_compute(args, g) -> dict[str, Any]:
    m, r = args.measure, args.r
    out: dict[str, Any] = {"measure": m, "r": _jsonable(r), "n": g.n}
    if m == "degeneracy":
        out.update(value=degeneracy(g), exact=True)
    elif m == "nabla":
        w = nabla_exact(g, r)
        out.update(value=str(w.density), exact=True, branch_sets=[sorted(b) for b in w.branch_sets])
    elif args.exact:
        res = reach.exact_parameter(g, r, m, hops=args.hops)
        out.update(value=res.value, exact=True, order=list(res.order))
    else:
        if m == "adm":
            res = admissibility.greedy_adm_order(g, r, "auto")
            o, value = res.order, admissibility.adm_of_order(g, res.order, r, "auto" if g.n > admissibility.FAN_CAP else "exact")
        else:
            o = reach.heuristic_order(g)
            value = {
                "col": lambda: reach.col_of_order(g, o, r),
                "wcol": lambda: reach.wcol_of_order(g, o, r),
                "gcol": lambda: reach.gcol_of_order(g, o, r, args.hops or 1),
                "treewidth": lambda: reach.order_width(g, o),
                "treedepth": lambda: reach.order_depth(g, o),
            }[m]()
        out.update(value=value, exact=False, bound="upper", order=list(o))
    return out


def cmd_order(args, g) -> dict[str, Any]:
    method, r = args.method, args.r
    extra: dict[str, Any] = {}
    if method == "degeneracy":
        o = augmentation.degeneracy_order(g)
    elif method == "adm":
        res = admissibility.greedy_adm_order(g, r, args.mode)
        o = res.order
        extra["greedy_value"] = res.value
    elif method == "universal":
        res = admissibility.universal_order(g, args.r_max)
        o = res.order
        extra["adm"] = {str(k): v for k, v in res.achieved.items()}
        extra["thresholds"] = {str(k): v for k, v in res.thresholds.items()}
    elif method == "augmentation":
        seq = augmentation.fraternal_augment(g, r)
        res = augmentation.order_from_augmentation(g, seq)
        o = res.order
        extra.update(bound=res.bound, delta=res.delta)
    elif method == "partition":
        o = partitions.order_from_partition(g, partitions.isometric_peel(g, args.policy))
    else:
        res = reach.exact_parameter(g, r, args.exact_measure)
        o = res.order
        extra["optimum"] = res.value
    reach.check_order(g, o)
    profile = reach.order_profile(g, o, args.r_max)
    return {
        "method": method,
        "order": list(o),
        "profile": json.loads(profile.to_json()),
        "verified": True,
        **extra,
    }


def cmd_color(args, g) -> dict[str, Any]:
    o = _order(args, g) if args.order else None
    if args.kind == "centered":
        c = colorings.p_centered_zhu(g, args.p, o)
        check = colorings._verify_any(g, c, args.p)
        verified = bool(check)
    elif args.kind == "exact-distance":
        c = colorings.exact_distance_color(g, args.p, o)
        target = colorings.exact_distance_graph(g, args.p)
        verified = all(c.colors[u] != c.colors[v] for u, v in target.edges)
    else:
        o = o or reach.heuristic_order(g)
        c = colorings.reach_graph_coloring(g, o, args.r)
        h = colorings.reach_graph(g, o, args.r)
        verified = all(c.colors[u] != c.colors[v] for u, v in h.edges)
    return {"kind": args.kind, "colors": list(c.colors), "palette": c.palette, "verified": verified}


def cmd_partition(args, g) -> dict[str, Any]:
    P = partitions.isometric_peel(g, args.policy)
    P.validate(g)
    q = partitions.quotient(g, P)
    o = partitions.order_from_partition(g, P)
    return {
        "policy": args.policy,
        "parts": [sorted(p) for p in P.parts],
        "quotient_width": q.width,
        "order": list(o),
        "verified": True,
    }


def cmd_decompose(args, g) -> dict[str, Any]:
    with open(args.td) as fh:
        td = partitions.TreeDecomposition.parse(fh.read())
    td.validate(g)
    o = partitions.compose_td_order(g, td)
    r = args.r
    reach_counts = [partitions.skeleton_reach(g, td, u, r).count for u in range(g.n)]
    return {
        "width": td.width,
        "adhesion": td.adhesion_size,
        "order": list(o),
        "wcol": reach.wcol_of_order(g, o, r),
        "skeleton_reach_max": max(reach_counts, default=0),
        "verified": True,
    }


def _strategy(role, rule, args, g):
    order = _order(args, g) if rule == "order" else None
    return games.Strategy(role, rule, order=order, seed=args.seed)


def cmd_play(args, g):
    cap = args.round_cap
    if args.game == "counter":
        o = _order(args, g)
        depth = games.counter_game(g, args.r, o)
        check = reach.wcol_of_order(g, o, args.r)
        return {"game": "counter", "depth": depth, "order": list(o), "verified": depth == check}
    if args.game == "splitter":
        t = games.splitter_game(
            g, args.r, _strategy("splitter", args.splitter, args, g), _strategy("connector", args.connector, args, g), cap
        )
        replayed = games.replay_splitter(g, t)
    else:
        k = args.k
        cop = _strategy("cop", args.cops, args, g)
        if k is None:
            o = cop.order or reach.heuristic_order(g)
            rr = finite_radius(args.r, g.n)
            k = reach.wcol_of_order(g, o, 2 * rr) if args.game == "agile" else reach.col_of_order(g, o, rr)
        t = games.pursuit_game(g, args.r, args.game, k, cop, _strategy("robber", args.robber, args, g), cap)
        replayed = games.replay_pursuit(g, t)
    verified = replayed == (t.winner if t.resolved else "unresolved")
    return t, verified


def cmd_cover(args, g) -> dict[str, Any]:
    o = _order(args, g)
    c = wideness.neighborhood_cover(g, o, args.r)
    verified = not wideness.cover_defects(g, c.clusters, c.r)
    return {
        "clusters": [sorted(x) for x in c.clusters],
        "centers": c.centers,
        "radius": c.radius,
        "degree": c.degree,
        "verified": verified,
    }


def cmd_wideness(args, g) -> dict[str, Any]:
    A = _read_ints(args.set) if args.set else list(range(g.n))
    res = wideness.uqw_extract(g, A, args.r, args.m, args.s_budget)
    out = json.loads(res.to_json())
    out["verified"] = res.verify(g)
    if args.traces:
        count, report = wideness.neighborhood_complexity(g, A, args.r)
        out["traces"] = report.as_dict()
    return out


def cmd_certify(args, g) -> dict[str, Any]:
    kind = getattr(args, "kind", "fanset")
    if kind == "fanset":
        A = _read_ints(args.set) if args.set else list(range(g.n))
        res = admissibility.verify_fan_set(g, A, args.k, args.r)
        if isinstance(res, admissibility.FanSetRefutation):
            return {"certified": False, "vertex": res.vertex, "best": res.best, "verified": True}
        return {"certified": True, **json.loads(res.to_json()), "verified": res.verify(g)}
    if kind == "order":
        o = _order(args, g)
        return {"order": list(o), "profile": json.loads(reach.order_profile(g, o, args.r_max).to_json()), "verified": True}
    if kind == "decomposition":
        with open(args.td) as fh:
            td = partitions.TreeDecomposition.parse(fh.read())
        td.validate(g)
        return {"width": td.width, "verified": True}
    # coloring
    colors = []
    with open(args.coloring) as fh:
        for line in fh:
            if line.strip():
                v, c = map(int, line.split())
                colors.append((v, c))
    col = colorings.Coloring.of(c for _, c in sorted(colors))
    res = colorings.verify_centered(g, col, args.p) if g.n <= colorings.CENTERED_CAP else colorings.verify_centered_by_decomposition(g, col, args.p)
    return {"p": args.p, "centered": bool(res), "witness": sorted(res.witness or ()), "verified": True}


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--graph", required=True, help="edge list or DIMACS file")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", help="write the result here instead of stdout")

    p = _Parser(prog="gencol", description="Generalised colouring numbers: compute, construct, certify.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", parents=[common], help="parameter values")
    c.add_argument("measure", choices=reach.MEASURES + ("degeneracy", "nabla"))
    c.add_argument("--r", type=_radius, default=1)
    c.add_argument("--hops", type=int)
    c.add_argument("--exact", action="store_true")

    o = sub.add_parser("order", parents=[common], help="construct an order and report its profile")
    o.add_argument("method", choices=("degeneracy", "adm", "universal", "augmentation", "partition", "exact"))
    o.add_argument("--r", type=_radius, default=1)
    o.add_argument("--r-max", type=int, default=4)
    o.add_argument("--mode", choices=("exact", "approx", "auto"), default="auto")
    o.add_argument("--policy", choices=("diameter_path", "bfs_vertical"), default="diameter_path")
    o.add_argument("--exact-measure", choices=("col", "wcol", "adm"), default="wcol")

    col = sub.add_parser("color", parents=[common], help="centered, exact-distance or reach colourings")
    col.add_argument("kind", choices=("centered", "exact-distance", "reach"))
    col.add_argument("--p", type=int, default=2)
    col.add_argument("--r", type=_radius, default=1)
    col.add_argument("--order")

    pa = sub.add_parser("partition", parents=[common], help="isometric-path partition")
    pa.add_argument("--policy", choices=("diameter_path", "bfs_vertical"), default="diameter_path")

    d = sub.add_parser("decompose", parents=[common], help="order from a tree decomposition")
    d.add_argument("--td", required=True)
    d.add_argument("--r", type=int, default=2)

    pl = sub.add_parser("play", parents=[common], help="run a game, streaming JSON lines")
    pl.add_argument("game", choices=("splitter", "agile", "inert", "counter"))
    pl.add_argument("--r", type=_radius, default=1)
    pl.add_argument("--k", type=int)
    pl.add_argument("--order")
    rules = games.Strategy.RULES
    pl.add_argument("--splitter", choices=rules, default="order")
    pl.add_argument("--connector", choices=rules, default="greedy")
    pl.add_argument("--cops", choices=rules, default="order")
    pl.add_argument("--robber", choices=rules, default="random")
    pl.add_argument("--round-cap", type=int)

    cv = sub.add_parser("cover", parents=[common], help="r-neighbourhood cover")
    cv.add_argument("--r", type=int, default=1)
    cv.add_argument("--order")

    w = sub.add_parser("wideness", parents=[common], help="uniform quasi-wideness extraction")
    w.add_argument("--r", type=int, default=1)
    w.add_argument("--m", type=int, required=True)
    w.add_argument("--s-budget", type=int, default=0)
    w.add_argument("--set")
    w.add_argument("--traces", action="store_true")

    ce = sub.add_parser("certify", parents=[common], help="check witnesses")
    ce.add_argument("kind", choices=("fanset", "order", "coloring", "decomposition"))
    ce.add_argument("--set")
    ce.add_argument("--k", type=int, default=1)
    ce.add_argument("--r", type=_radius, default=1)
    ce.add_argument("--r-max", type=int, default=4)
    ce.add_argument("--order")
    ce.add_argument("--td")
    ce.add_argument("--coloring")
    ce.add_argument("--p", type=int, default=2)

    fs = sub.add_parser("certify-fanset", parents=[common], help="shorthand for 'certify fanset'")
    fs.add_argument("--set")
    fs.add_argument("--k", type=int, required=True)
    fs.add_argument("--r", type=_radius, default=1)
    return p


HANDLERS = {
    "compute": cmd_compute,
    "order": cmd_order,
    "color": cmd_color,
    "partition": cmd_partition,
    "decompose": cmd_decompose,
    "play": cmd_play,
    "cover": cmd_cover,
    "wideness": cmd_wideness,
    "certify": cmd_certify,
    "certify-fanset": cmd_certify,
}


def _render(result, fmt: str) -> str:
    if isinstance(result, tuple):
        t, verified = result
        text = t.to_jsonl()
        tail = {"verified": verified, "winner": t.winner, "rounds": t.length}
        if fmt == "json":
            return text + json.dumps(tail, sort_keys=True) + "\n"
        return text + "".join(f"{k}: {v}\n" for k, v in sorted(tail.items()))
    if fmt == "json":
        return json.dumps(result, sort_keys=True) + "\n"
    return "".join(f"{k}: {v}\n" for k, v in sorted(result.items()))


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    random.seed(args.seed)
    try:
        g = read_graph(args.graph)
        result = HANDLERS[args.command](args, g)
    except ContractError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except (GencolError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = _render(result, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    verified = result[1] if isinstance(result, tuple) else result.get("verified", True)
    return 0 if verified else 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
