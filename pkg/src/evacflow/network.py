"""Network model: directed graph, uniform capacity, supplies, static flows.

A network is a digraph on nodes ``0..n-1`` with a rational transit time per
edge, one uniform capacity ``u`` shared by all edges, a set of source nodes
and a single sink. A supply function is positive on sources, negative at the
sink, zero elsewhere, and sums to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError
from .rational import format_rational, parse_rational


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    transit: Fraction


class Network:
    """Immutable directed graph with uniform capacity and transit times."""

    def __init__(self, n, edges, capacity, sources, sink, names=None):
        self.n = int(n)
        built = []
        for idx, e in enumerate(edges):
            if isinstance(e, Edge):
                tail, head, transit = e.tail, e.head, e.transit
            else:
                tail, head, transit = e
            built.append(Edge(idx, int(tail), int(head), parse_rational(transit)))
        self.edges: tuple[Edge, ...] = tuple(built)
        self.m = len(built)
        self.capacity = parse_rational(capacity)
        self.sources = frozenset(int(v) for v in sources)
        self.sink = int(sink)
        self.names = tuple(str(s) for s in names) if names is not None else None

    @property
    def sink_in_degree(self) -> int:
        return sum(1 for e in self.edges if e.head == self.sink)

    def name(self, v: int) -> str:
        if self.names is not None and 0 <= v < len(self.names):
            return self.names[v]
        return str(v)

    def node_by_name(self, text: str) -> int:
        """Resolve a node given either its name or its numeric id."""
        if self.names is not None and text in self.names:
            return self.names.index(text)
        try:
            v = int(text)
        except ValueError:
            raise ValueError("unknown node %r" % (text,)) from None
        if not 0 <= v < self.n:
            raise ValueError("node id %d out of range" % v)
        return v

    def format_node_set(self, nodes) -> str:
        return "{" + ",".join(self.name(v) for v in sorted(nodes)) + "}"

    def __repr__(self):
        return "Network(n=%d, m=%d, u=%s, sources=%s, sink=%d)" % (
            self.n,
            self.m,
            format_rational(self.capacity),
            sorted(self.sources),
            self.sink,
        )


class SupplyFunction:
    """Map node -> rational supply; zero for nodes not listed."""

    def __init__(self, values):
        self._values = {int(v): parse_rational(x) for v, x in dict(values).items()}
        self._values = {v: x for v, x in self._values.items() if x != 0}

    def __call__(self, v: int) -> Fraction:
        return self._values.get(int(v), Fraction(0))

    def of(self, nodes) -> Fraction:
        return sum((self(v) for v in nodes), Fraction(0))

    def total(self) -> Fraction:
        return sum(self._values.values(), Fraction(0))

    def items(self):
        return sorted(self._values.items())

    def positive_nodes(self):
        return sorted(v for v, x in self._values.items() if x > 0)

    def __eq__(self, other):
        if not isinstance(other, SupplyFunction):
            return NotImplemented
        return self._values == other._values

    def __repr__(self):
        inner = ", ".join(
            "%d: %s" % (v, format_rational(x)) for v, x in self.items()
        )
        return "SupplyFunction({%s})" % inner


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str):
        self.violations.append(message)


def validate_network(net: Network, w: SupplyFunction) -> ValidationReport:
    """Structural and supply checks; returns a report, never raises."""
    rep = ValidationReport()
    if net.n < 1:
        rep.add("network has no nodes")
        return rep
    if not 0 <= net.sink < net.n:
        rep.add("sink id out of range")
        return rep
    for e in net.edges:
        if not (0 <= e.tail < net.n and 0 <= e.head < net.n):
            rep.add("edge %d endpoint out of range" % e.id)
        if e.transit < 0:
            rep.add("edge %d has negative transit time" % e.id)
        if e.tail == e.head == net.sink:
            rep.add("self-loop at the sink")
    if net.capacity <= 0:
        rep.add("capacity must be positive")
    if net.sink in net.sources:
        rep.add("sink listed as a source")
    for v in net.sources:
        if not 0 <= v < net.n:
            rep.add("source id %d out of range" % v)
        elif w(v) <= 0:
            rep.add("source with non-positive supply")
    for v, x in w.items():
        if v == net.sink or v in net.sources:
            continue
        if not 0 <= v < net.n:
            rep.add("supply on unknown node %d" % v)
        elif x != 0:
            rep.add("supply on a non-source node")
    if w.total() != 0:
        rep.add("supplies do not sum to zero")
    if net.sources and net.sink_in_degree == 0:
        rep.add("sink has no incoming edges")
    return rep


def require_valid(net: Network, w: SupplyFunction):
    rep = validate_network(net, w)
    if not rep.ok:
        raise ValidationError(rep)


def validate_static_flow(flow: "StaticFlow") -> ValidationReport:
    """Capacity bounds plus conservation at non-terminal nodes."""
    net = flow.net
    rep = ValidationReport()
    for e, x in flow.items():
        if not 0 <= e < len(net.edges):
            rep.add("flow on unknown edge %d" % e)
        elif x < 0 or x > net.capacity:
            rep.add("edge %d amount outside [0, u]" % e)
    terminals = set(net.sources) | {net.sink}
    for v in range(net.n):
        if v in terminals:
            continue
        if flow.value_into(v) != 0:
            rep.add("conservation violated at node %d" % v)
    return rep


@dataclass(frozen=True)
class PathArc:
    """One step of a residual path.

    ``backward`` means the step cancels existing flow on ``edge``, so it is
    traversed head-to-tail and contributes the negated transit time.
    """

    edge: int
    frm: int
    to: int
    backward: bool


@dataclass(frozen=True)
class ResidualArc:
    edge: int
    frm: int
    to: int
    cost: Fraction
    backward: bool


@dataclass(frozen=True)
class Path:
    arcs: tuple[PathArc, ...]
    cost: Fraction
    origin: int
    target: int

    @property
    def nodes(self) -> tuple[int, ...]:
        out = [self.origin]
        for a in self.arcs:
            out.append(a.to)
        return tuple(out)

    def __len__(self):
        return len(self.arcs)


class StaticFlow:
    """Sparse edge -> amount map; amounts are rationals in [0, u]."""

    def __init__(self, net: Network, amounts=None):
        self.net = net
        self._amounts = {}
        if amounts:
            for e, x in dict(amounts).items():
                x = parse_rational(x)
                if x != 0:
                    self._amounts[int(e)] = x

    def amount(self, edge: int) -> Fraction:
        return self._amounts.get(int(edge), Fraction(0))

    def items(self):
        return sorted(self._amounts.items())

    def value_into(self, node: int) -> Fraction:
        """Net inflow at ``node`` (arrivals minus departures)."""
        total = Fraction(0)
        for e in self.net.edges:
            x = self.amount(e.id)
            if x == 0:
                continue
            if e.head == node:
                total += x
            if e.tail == node:
                total -= x
        return total

    def __eq__(self, other):
        if not isinstance(other, StaticFlow):
            return NotImplemented
        return self.net is other.net and self._amounts == other._amounts

    def __repr__(self):
        inner = ", ".join(
            "%d: %s" % (e, format_rational(x)) for e, x in self.items()
        )
        return "StaticFlow({%s})" % inner


@dataclass(frozen=True)
class ResidualView:
    """Residual network of a static flow.

    Every edge below capacity contributes a forward arc at its transit
    cost; every edge with positive flow contributes a backward arc at the
    negated cost. A partially used edge contributes both.
    """

    base: Network
    flow: StaticFlow

    def arcs(self):
        u = self.base.capacity
        for e in self.base.edges:
            x = self.flow.amount(e.id)
            if x < u:
                yield ResidualArc(e.id, e.tail, e.head, e.transit, False)
            if x > 0:
                yield ResidualArc(e.id, e.head, e.tail, -e.transit, True)


def shortest_path(res: ResidualView, origins, target: int, graph=None):
    """Cheapest residual path from any node of ``origins`` to ``target``.

    Returns a Path or None when the target is unreachable. Deterministic:
    the cheapest origin wins with ties to the smallest node id, and among
    equal-cost paths the lexicographically smallest tight edge-id sequence
    is taken. Raises NegativeCycleError when a negative-cost cycle can
    reach the target.
    """
    from .graphcore import INF_CUTOFF, ScaledGraph

    net = res.base
    if graph is None:
        graph = ScaledGraph(net)
    arrays = graph.residual_from_flow(res.flow)
    labels = graph.bf_labels(arrays, target)
    best = None
    for v in sorted(int(v) for v in set(origins)):
        packed = int(labels[v])
        if packed >= INF_CUTOFF:
            continue
        cost = int(packed) // int(graph.hop_base)
        if best is None or cost < best[0]:
            best = (cost, v, packed)
    if best is None:
        return None
    _, origin, packed = best
    arc_idx = graph.canonical_path(arrays, labels, origin, target)
    arcs = tuple(
        PathArc(
            edge=int(arrays.eid[i]),
            frm=int(arrays.frm[i]),
            to=int(arrays.to[i]),
            backward=bool(arrays.backward[i]),
        )
        for i in arc_idx
    )
    return Path(
        arcs=arcs, cost=graph.cost_fraction(packed), origin=origin, target=target
    )


def has_negative_cycle(res: ResidualView, graph=None) -> bool:
    """Detector used to certify flow state after augmentations."""
    from .graphcore import ScaledGraph

    if graph is None:
        graph = ScaledGraph(res.base)
    return graph.has_negative_cycle(graph.residual_from_flow(res.flow))


def augment(flow: StaticFlow, path: Path, amount) -> StaticFlow:
    """Return a new flow with ``amount`` pushed along a residual path."""
    amount = parse_rational(amount)
    if amount < 0:
        raise ValueError("augmentation amount must be non-negative")
    u = flow.net.capacity
    amounts = dict(flow._amounts)
    for arc in path.arcs:
        cur = amounts.get(arc.edge, Fraction(0))
        if arc.backward:
            if cur < amount:
                raise ValueError(
                    "cannot cancel %s on edge %d carrying %s"
                    % (format_rational(amount), arc.edge, format_rational(cur))
                )
            nxt = cur - amount
        else:
            if cur + amount > u:
                raise ValueError(
                    "capacity exceeded on edge %d: %s + %s > %s"
                    % (
                        arc.edge,
                        format_rational(cur),
                        format_rational(amount),
                        format_rational(u),
                    )
                )
            nxt = cur + amount
        amounts[arc.edge] = nxt
    return StaticFlow(flow.net, amounts)
