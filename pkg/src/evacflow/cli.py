"""Command-line front end.

Commands: horizon, solve, theta, oracle (otA | feasible | tstar | verify),
gen-grid, bench, verify. All rational output is reduced "p/q"; repeated
runs with identical inputs and flags produce byte-identical output, also
with --jobs above one (parallel results are canonicalized). The default
job count comes from EVACFLOW_JOBS.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from .errors import EvacflowError
from .grid import (
    GridSpec,
    classify_areas,
    count_candidates,
    gen_grid,
    grid_horizon,
)
from .horizon import min_time_horizon
from .instances import load_instance, load_flow, save_flow, save_instance
from .network import Network
from .oracle import (
    oracle_feasible,
    oracle_max_outflow,
    oracle_t_star,
    verify_dynamic_flow,
)
from .polytope import (
    OutflowCache,
    assemble_quickest_flow,
    decompose_supply,
    lexmax_flow,
)
from .rational import format_rational, parse_rational
from .sssp import min_required_time, successive_shortest_paths


def _default_jobs() -> int:
    raw = os.environ.get("EVACFLOW_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parse_subset(net: Network, text: str) -> list[int]:
    tokens = [tok.strip() for tok in text.split(",") if tok.strip()]
    if not tokens:
        raise ValueError("empty subset")
    return [net.node_by_name(tok) for tok in tokens]


def _horizon_line(net: Network, t_star, a_star) -> str:
    return "T* = %s, A* = %s" % (format_rational(t_star), net.format_node_set(a_star))


def _order_text(net: Network, order) -> str:
    return "<".join(net.name(v) for v in order)


def _print_family(net: Network, family) -> None:
    for entry in family.entries:
        origins = ",".join(net.name(v) for v in entry.origins)
        print(
            "  (%s) -> %s, theta = %s"
            % (origins, net.format_node_set(entry.subset), format_rational(entry.theta))
        )


def _cmd_horizon(args) -> int:
    net, w, _meta = load_instance(args.instance)
    t_star, a_star, family = min_time_horizon(net, w, jobs=args.jobs)
    print(_horizon_line(net, t_star, a_star))
    print("admitted tuples: %d" % len(family))
    if args.family:
        _print_family(net, family)
    return 0


def _solve_instance(net, w, grid_mode: bool, jobs: int):
    if grid_mode:
        labels = classify_areas(net)
        return grid_horizon(net, w, jobs=jobs, labels=labels)
    return min_time_horizon(net, w, jobs=jobs)


def _cmd_solve(args) -> int:
    net, w, _meta = load_instance(args.instance)
    t_star, a_star, family = _solve_instance(net, w, args.grid, args.jobs)
    print(_horizon_line(net, t_star, a_star))
    print("admitted tuples: %d" % len(family))
    cache = OutflowCache(net, t_star, family)
    deco = decompose_supply(net, w, t_star, a_star, family, cache=cache)
    for term in deco.terms:
        totals = ", ".join(
            "%s=%s" % (net.name(v), format_rational(term.point[v]))
            for v in term.order
            if v != net.sink
        )
        print(
            "order %s: lambda = %s, totals %s"
            % (_order_text(net, term.order), format_rational(term.coefficient), totals)
        )
    if args.trace:
        print("chain: %s" % " < ".join(net.format_node_set(a) for a in deco.chain))
        for i, step in enumerate(deco.trace, start=1):
            point = ", ".join(
                "%s=%s" % (net.name(v), format_rational(x))
                for v, x in sorted(step["x"].items())
            )
            print(
                "step %d: x = (%s), alpha = %s, beta = %s, gamma = %s"
                % (
                    i,
                    point,
                    format_rational(step["alpha"]),
                    "-" if step["beta"] is None else format_rational(step["beta"]),
                    "-" if step["gamma"] is None else format_rational(step["gamma"]),
                )
            )
    failures: list[str] = []
    combined = None
    if args.out or args.cross_check:
        flows = [
            lexmax_flow(net, term.order, t_star, family, cache=cache)
            for term in deco.terms
        ]
        combined = assemble_quickest_flow(deco, flows)
    if args.out:
        save_flow(args.out, combined)
        print("wrote %s" % args.out)
    if args.cross_check:
        brute = oracle_t_star(net, w)
        if brute != t_star:
            failures.append(
                "oracle horizon %s differs from %s"
                % (format_rational(brute), format_rational(t_star))
            )
        report = verify_dynamic_flow(combined, w, t_star)
        for constraint, message in report.violations:
            failures.append("%s: %s" % (constraint, message))
        totals = combined.node_totals()
        for v in sorted(net.sources):
            if totals.get(v, 0) != w(v):
                failures.append(
                    "source %s ships %s, supply is %s"
                    % (net.name(v), format_rational(totals.get(v, 0)), format_rational(w(v)))
                )
        if args.grid:
            plain = min_time_horizon(net, w, jobs=args.jobs)
            if (plain[0], plain[1]) != (t_star, a_star) or set(
                plain[2].admitted_tuples
            ) != set(family.admitted_tuples):
                failures.append("banded search disagrees with the full search")
        if failures:
            for line in failures:
                print("cross-check failed: %s" % line, file=sys.stderr)
            return 1
        print("cross-check: ok")
    return 0


def _cmd_theta(args) -> int:
    net, w, _meta = load_instance(args.instance)
    subset = _parse_subset(net, args.subset)
    result = successive_shortest_paths(net, subset)
    print(format_rational(min_required_time(result, w.of(subset))))
    return 0


def _cmd_oracle_ota(args) -> int:
    net, _w, _meta = load_instance(args.instance)
    subset = _parse_subset(net, args.subset)
    value = oracle_max_outflow(
        net, subset, parse_rational(args.horizon),
        step=None if args.step is None else parse_rational(args.step),
    )
    print(format_rational(value))
    return 0


def _cmd_oracle_feasible(args) -> int:
    net, w, _meta = load_instance(args.instance)
    ok = oracle_feasible(
        net, w, parse_rational(args.horizon),
        step=None if args.step is None else parse_rational(args.step),
    )
    print("feasible" if ok else "infeasible")
    return 0


def _cmd_oracle_tstar(args) -> int:
    net, w, _meta = load_instance(args.instance)
    value = oracle_t_star(
        net, w,
        step=None if args.step is None else parse_rational(args.step),
        limit=args.limit,
    )
    print(format_rational(value))
    return 0


def _cmd_verify(args) -> int:
    net, w, _meta = load_instance(args.instance)
    flow = load_flow(args.flow, net)
    report = verify_dynamic_flow(flow, w, flow.tenet.horizon)
    if report.ok:
        print("flow verified: capacity, conservation, demand")
        return 0
    for constraint, message in report.violations:
        print("%s: %s" % (constraint, message), file=sys.stderr)
    return 1


def _parse_sink(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("sink position must be row,col")
    return int(parts[0]), int(parts[1])


def _cmd_gen_grid(args) -> int:
    spec = GridSpec(
        side=args.side,
        transit=parse_rational(args.tau),
        capacity=parse_rational(args.cap),
        sink=_parse_sink(args.sink),
        supply=parse_rational(args.supply),
    )
    net, w = gen_grid(spec)
    save_instance(args.out, net, w, grid=spec.metadata())
    print("wrote %s: %d nodes, %d edges, sink %d" % (args.out, net.n, net.m, net.sink))
    return 0


def _cmd_bench(args) -> int:
    sides = [int(tok) for tok in args.sides.split(",") if tok.strip()]
    print("side  nodes  candidates  admitted  T*        seconds")
    log_n = []
    log_c = []
    for side in sides:
        if args.sink_mode == "center":
            sink = (side // 2, side // 2)
        else:
            sink = (0, 0)
        spec = GridSpec(
            side=side,
            transit=parse_rational(args.tau),
            capacity=parse_rational(args.cap),
            sink=sink,
            supply=parse_rational(args.supply),
        )
        net, w = gen_grid(spec)
        labels = classify_areas(net)
        candidates = count_candidates(net, labels)
        begin = time.perf_counter()
        t_star, _a_star, family = grid_horizon(net, w, jobs=args.jobs, labels=labels)
        elapsed = time.perf_counter() - begin
        print(
            "%-5d %-6d %-11d %-9d %-9s %.2f"
            % (side, net.n, candidates, len(family), format_rational(t_star), elapsed)
        )
        log_n.append(np.log(net.n))
        log_c.append(np.log(max(candidates, 1)))
    if len(sides) >= 2:
        slope = float(np.polyfit(log_n, log_c, 1)[0])
        print("candidate growth slope: %.2f" % slope)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evacflow",
        description="Quickest-evacuation solver for uniform-capacity networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_jobs(p):
        p.add_argument("--jobs", type=int, default=_default_jobs(),
                       help="parallel workers for the tuple search")

    p = sub.add_parser("horizon", help="minimum feasible time horizon")
    p.add_argument("instance")
    p.add_argument("--family", action="store_true", help="list every admitted tuple")
    add_jobs(p)
    p.set_defaults(func=_cmd_horizon)

    p = sub.add_parser("solve", help="horizon plus convex decomposition and flow")
    p.add_argument("instance")
    p.add_argument("--grid", action="store_true", help="use the banded grid search")
    p.add_argument("--cross-check", action="store_true",
                   help="check the result against the brute-force oracle")
    p.add_argument("--out", help="write the combined time-expanded flow here")
    p.add_argument("--trace", action="store_true", help="print the facet walk")
    add_jobs(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("theta", help="least horizon for one source subset")
    p.add_argument("instance")
    p.add_argument("--subset", required=True, help="comma-separated node names or ids")
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("oracle", help="time-expanded brute force")
    osub = p.add_subparsers(dest="oracle_command", required=True)

    q = osub.add_parser("otA", help="max outflow of a subset by a horizon")
    q.add_argument("instance")
    q.add_argument("--subset", required=True)
    q.add_argument("--horizon", required=True)
    q.add_argument("--step")
    q.set_defaults(func=_cmd_oracle_ota)

    q = osub.add_parser("feasible", help="can all supply ship by a horizon")
    q.add_argument("instance")
    q.add_argument("--horizon", required=True)
    q.add_argument("--step")
    q.set_defaults(func=_cmd_oracle_feasible)

    q = osub.add_parser("tstar", help="brute-force minimum horizon")
    q.add_argument("instance")
    q.add_argument("--step")
    q.add_argument("--limit", type=int, default=20)
    q.set_defaults(func=_cmd_oracle_tstar)

    q = osub.add_parser("verify", help="check a flow file against its instance")
    q.add_argument("instance")
    q.add_argument("flow")
    q.set_defaults(func=_cmd_verify)

    p = sub.add_parser("verify", help="check a flow file against its instance")
    p.add_argument("instance")
    p.add_argument("flow")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen-grid", help="write a grid instance file")
    p.add_argument("out")
    p.add_argument("--side", type=int, required=True)
    p.add_argument("--sink", required=True, help="row,col of the sink cell")
    p.add_argument("--tau", default="1", help="uniform transit time")
    p.add_argument("--cap", default="1", help="uniform edge capacity")
    p.add_argument("--supply", default="1", help="supply per source cell")
    p.set_defaults(func=_cmd_gen_grid)

    p = sub.add_parser("bench", help="grid scaling table")
    p.add_argument("--sides", default="4,6,8", help="comma-separated grid sides")
    p.add_argument("--sink-mode", choices=("center", "corner"), default="center")
    p.add_argument("--tau", default="1")
    p.add_argument("--cap", default="1")
    p.add_argument("--supply", default="1")
    add_jobs(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EvacflowError, ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
