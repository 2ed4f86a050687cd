"""Time-expanded brute force: the ground truth the solver is checked against.

Time is cut into windows of a rational step. Each node gets one copy per
window boundary; an edge with transit tau becomes, for every window l with
l + tau/step <= T/step, an arc from tail@l to head@(l + tau/step) carrying
u*step, except that arcs whose arrival window would overrun the horizon
carry 0 (a unit departing inside window l arrives inside window l + shift,
which must still end by T). Holdover arcs of unbounded capacity model
waiting. Exactness for rational data: any continuous flow aligned to the
grid maps to a discrete one of the same value and vice versa, so the
discrete maximum equals the continuous one whenever the step divides the
horizon and every transit time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import (
    GridMismatchError,
    InstanceTooLargeError,
    StepMismatchError,
)
from .network import Network, SupplyFunction
from .rational import format_rational, parse_rational, rational_gcd
from .sssp import min_required_time, successive_shortest_paths


def default_step(net: Network, horizon) -> Fraction:
    """Coarsest step dividing the horizon and every positive transit time."""
    horizon = parse_rational(horizon)
    values = [e.transit for e in net.edges if e.transit > 0]
    return rational_gcd(Fraction(1, horizon.denominator), *values)


@dataclass(frozen=True)
class TimeExpandedNet:
    net: Network
    step: Fraction
    horizon: Fraction
    layers: int  # number of windows; copies per node = layers + 1

    @property
    def copies(self) -> int:
        return self.layers + 1

    def copy_id(self, v: int, layer: int) -> int:
        return v * self.copies + layer

    def shift(self, edge) -> int:
        return int(self.net.edges[edge].transit / self.step)

    def movement_arcs(self, capacities=None):
        """Yield (edge-id, layer, capacity); boundary arrivals carry 0."""
        u = self.net.capacity
        for e in self.net.edges:
            cap_e = u if capacities is None else parse_rational(capacities[e.id])
            s = int(e.transit / self.step)
            for l in range(self.layers - s + 1):
                cap = cap_e * self.step if l + s <= self.layers - 1 else Fraction(0)
                yield e.id, l, cap


def build_time_expanded(net: Network, horizon, step=None) -> TimeExpandedNet:
    horizon = parse_rational(horizon)
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    step = default_step(net, horizon) if step is None else parse_rational(step)
    if step <= 0:
        raise ValueError("step must be positive")
    if (horizon / step).denominator != 1:
        raise StepMismatchError(
            "step %s does not divide horizon %s"
            % (format_rational(step), format_rational(horizon))
        )
    for e in net.edges:
        if (e.transit / step).denominator != 1:
            raise StepMismatchError(
                "step %s does not divide transit %s of edge %d"
                % (format_rational(step), format_rational(e.transit), e.id)
            )
    return TimeExpandedNet(
        net=net, step=step, horizon=horizon, layers=int(horizon / step)
    )


@dataclass
class TimeExpandedFlow:
    """Sparse movement amounts keyed by (edge-id, departure layer)."""

    tenet: TimeExpandedNet
    amounts: dict = field(default_factory=dict)

    def amount(self, edge: int, layer: int) -> Fraction:
        return self.amounts.get((edge, layer), Fraction(0))

    def records(self):
        """Rows [edge, tail, head, departure time, amount], nonzero only."""
        net = self.tenet.net
        rows = []
        for (e, l), x in self.amounts.items():
            if x == 0:
                continue
            edge = net.edges[e]
            rows.append((e, edge.tail, edge.head, l * self.tenet.step, x))
        rows.sort(key=lambda r: (r[3], r[0]))
        return rows

    def node_totals(self) -> dict:
        """Net shipped amount per node: departures minus arrivals."""
        net = self.tenet.net
        out: dict[int, Fraction] = {}
        for (e, _l), x in self.amounts.items():
            if x == 0:
                continue
            edge = net.edges[e]
            out[edge.tail] = out.get(edge.tail, Fraction(0)) + x
            out[edge.head] = out.get(edge.head, Fraction(0)) - x
        return {v: x for v, x in out.items() if x != 0}


class _Dinic:
    """Deterministic integer max-flow (level graph + current-arc DFS)."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[int] = []
        self.nxt: list[int] = []
        self.cap: list[int] = []
        self.first = [-1] * n

    def add_edge(self, u: int, v: int, cap: int) -> int:
        idx = len(self.head)
        self.head.append(v)
        self.cap.append(cap)
        self.nxt.append(self.first[u])
        self.first[u] = idx
        self.head.append(u)
        self.cap.append(0)
        self.nxt.append(self.first[v])
        self.first[v] = idx + 1
        return idx

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                e = self.first[u]
                while e != -1:
                    v = self.head[e]
                    if self.cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
                    e = self.nxt[e]
            if level[t] < 0:
                return total
            it = list(self.first)
            # iterative blocking-flow DFS with current-arc memoization
            stack = [s]
            path: list[int] = []
            while stack:
                u = stack[-1]
                if u == t:
                    pushed = min(self.cap[e] for e in path)
                    for e in path:
                        self.cap[e] -= pushed
                        self.cap[e ^ 1] += pushed
                    total += pushed
                    # rewind to the lowest saturated arc on the path
                    cut = next(i for i, e in enumerate(path) if self.cap[e] == 0)
                    del stack[cut + 1 :]
                    del path[cut:]
                    continue
                e = it[u]
                while e != -1 and not (
                    self.cap[e] > 0 and level[self.head[e]] == level[u] + 1
                ):
                    e = self.nxt[e]
                it[u] = e
                if e == -1:
                    level[u] = -1
                    stack.pop()
                    if path:
                        path.pop()
                else:
                    stack.append(self.head[e])
                    path.append(e)
        return total


class _ExpandedSolver:
    """Shared scaffolding: build the layered graph, run max-flow, unscale."""

    def __init__(self, tenet: TimeExpandedNet, capacities=None):
        self.tenet = tenet
        net = tenet.net
        arcs = list(tenet.movement_arcs(capacities))
        dens = [c.denominator for (_e, _l, c) in arcs]
        self.scale = lcm(*dens) if dens else 1
        self.extra_dens: list[int] = []
        self.arcs = arcs

    def build(self, supply_caps=None):
        """supply_caps: map node -> Fraction bound on total shipped, or None
        for unbounded shipping from those nodes."""
        tenet = self.tenet
        net = tenet.net
        if supply_caps:
            self.scale = lcm(
                self.scale, *[parse_rational(x).denominator for x in supply_caps.values()]
            )
        ncopies = net.n * tenet.copies
        self.src = ncopies
        self.dst = ncopies + 1
        dinic = _Dinic(ncopies + 2)
        inf = 1 + sum(int(c * self.scale) for (_e, _l, c) in self.arcs)
        if supply_caps:
            inf += sum(int(parse_rational(x) * self.scale) for x in supply_caps.values())
        self.inf = inf
        self.arc_ids = []
        for e, l, cap in self.arcs:
            edge = net.edges[e]
            idx = dinic.add_edge(
                tenet.copy_id(edge.tail, l),
                tenet.copy_id(edge.head, l + tenet.shift(e)),
                int(cap * self.scale),
            )
            self.arc_ids.append((e, l, idx))
        for v in range(net.n):
            for l in range(tenet.layers):
                dinic.add_edge(tenet.copy_id(v, l), tenet.copy_id(v, l + 1), inf)
        for l in range(tenet.copies):
            dinic.add_edge(tenet.copy_id(net.sink, l), self.dst, inf)
        self.dinic = dinic
        return dinic

    def attach_shippers(self, caps: dict):
        """caps: node -> int-scaled bound (or None for unbounded)."""
        for v in sorted(caps):
            bound = caps[v]
            self.dinic.add_edge(
                self.src,
                self.tenet.copy_id(v, 0),
                self.inf if bound is None else bound,
            )

    def run(self) -> Fraction:
        value = self.dinic.max_flow(self.src, self.dst)
        return Fraction(value, self.scale)

    def extract_flow(self) -> TimeExpandedFlow:
        amounts = {}
        for e, l, idx in self.arc_ids:
            used = self.dinic.cap[idx ^ 1]
            if used:
                amounts[(e, l)] = Fraction(used, self.scale)
        return TimeExpandedFlow(tenet=self.tenet, amounts=amounts)


def oracle_max_outflow(net: Network, subset, horizon, step=None, capacities=None) -> Fraction:
    """Most flow the nodes of subset can push into the sink by the horizon.

    Supplies are uncapped; capacities may override the uniform u per edge.
    """
    tenet = build_time_expanded(net, horizon, step)
    solver = _ExpandedSolver(tenet, capacities)
    solver.build(supply_caps=None)
    solver.attach_shippers({int(v): None for v in subset})
    return solver.run()


def oracle_feasible(net: Network, w: SupplyFunction, horizon, step=None, capacities=None) -> bool:
    """Can every positive supply reach the sink by the horizon?"""
    tenet = build_time_expanded(net, horizon, step)
    shippers = {v: x for v, x in w.items() if x > 0}
    needed = sum(shippers.values(), Fraction(0))
    if needed == 0:
        return True
    solver = _ExpandedSolver(tenet, capacities)
    solver.build(supply_caps=shippers)
    solver.attach_shippers(
        {v: int(x * solver.scale) for v, x in shippers.items()}
    )
    return solver.run() == needed


def oracle_t_star(net: Network, w: SupplyFunction, step=None, limit: int = 20) -> Fraction:
    """Brute-force least feasible horizon over all 2^k source subsets.

    Maximizes the per-subset required time, then certifies the answer on
    the time grid: feasible at T*, infeasible one step earlier.
    """
    sources = sorted(net.sources)
    if len(sources) > limit:
        raise InstanceTooLargeError("instance too large")
    from itertools import combinations

    from .graphcore import ScaledGraph

    graph = ScaledGraph(net)
    best = Fraction(0)
    for size in range(1, len(sources) + 1):
        for combo in combinations(sources, size):
            result = successive_shortest_paths(net, combo, graph=graph)
            theta = min_required_time(result, w.of(combo))
            if theta > best:
                best = theta
    if best > 0:
        delta = default_step(net, best) if step is None else parse_rational(step)
        if not oracle_feasible(net, w, best, delta):
            raise AssertionError("subset bound infeasible on the time grid")
        if best - delta >= 0 and oracle_feasible(net, w, best - delta, delta):
            raise AssertionError("feasible strictly before the subset bound")
    return best


@dataclass
class VerificationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None

    def add(self, constraint: str, message: str):
        self.violations.append((constraint, message))


def verify_dynamic_flow(flow: TimeExpandedFlow, w: SupplyFunction, horizon) -> VerificationReport:
    """Check a time-expanded flow against (w, horizon).

    capacity: every window amount within its arc bound; conservation: no
    node ever ships more than it has received plus its own supply; demand:
    final net shipment equals the supply exactly, at every node.
    """
    horizon = parse_rational(horizon)
    tenet = flow.tenet
    if tenet.horizon != horizon:
        raise GridMismatchError(
            "flow horizon %s does not match %s"
            % (format_rational(tenet.horizon), format_rational(horizon))
        )
    report = VerificationReport()
    net = tenet.net
    caps = {(e, l): c for (e, l, c) in tenet.movement_arcs()}
    for (e, l), x in sorted(flow.amounts.items()):
        if x == 0:
            continue
        if x < 0:
            report.add("capacity", "negative amount on edge %d window %d" % (e, l))
            continue
        cap = caps.get((e, l))
        if cap is None:
            report.add(
                "capacity",
                "edge %d departs window %d but cannot arrive by the horizon" % (e, l),
            )
        elif x > cap:
            report.add(
                "capacity",
                "edge %d window %d carries %s over bound %s"
                % (e, l, format_rational(x), format_rational(cap)),
            )
    # cumulative departures minus arrivals per node per window
    dep: dict[tuple[int, int], Fraction] = {}
    arr: dict[tuple[int, int], Fraction] = {}
    for (e, l), x in flow.amounts.items():
        if x == 0:
            continue
        edge = net.edges[e]
        dep[(edge.tail, l)] = dep.get((edge.tail, l), Fraction(0)) + x
        la = l + tenet.shift(e)
        arr[(edge.head, la)] = arr.get((edge.head, la), Fraction(0)) + x
    touched = sorted({v for (v, _l) in list(dep) + list(arr)} | set(dict(w.items())))
    for v in touched:
        have = max(w(v), Fraction(0))
        balance = Fraction(0)
        for l in range(tenet.layers + 1):
            balance += dep.get((v, l), Fraction(0)) - arr.get((v, l), Fraction(0))
            if balance > have:
                report.add(
                    "conservation",
                    "node %d ships %s beyond its stock by window %d"
                    % (v, format_rational(balance - have), l),
                )
                break
        final = sum(
            (dep.get((v, l), Fraction(0)) - arr.get((v, l), Fraction(0)))
            for l in range(tenet.layers + 1)
        )
        if final != w(v):
            report.add(
                "demand",
                "node %d nets %s, supply is %s"
                % (v, format_rational(final), format_rational(w(v))),
            )
    return report
