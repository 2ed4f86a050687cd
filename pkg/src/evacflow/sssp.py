"""Successive shortest residual paths from a source set to the sink.

Starting from the zero flow, repeatedly find the cheapest residual path
from any member of the set to the sink and push a full capacity unit along
it. Ties are broken deterministically: origins by (cost, node id), paths by
the lexicographically smallest tight edge-id sequence. The procedure stops
when no member can reach the sink; the number of paths never exceeds the
sink in-degree and the path costs are non-decreasing.

The resulting path cost profile determines, for any horizon T, how much
supply the set can ship by T, and conversely the least horizon needed for a
given amount.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UnreachableSupplyError
from .graphcore import INF_CUTOFF, ScaledGraph
from .network import Network, Path, PathArc, StaticFlow
from .rational import parse_rational


@dataclass(frozen=True)
class SsspResult:
    subset: frozenset
    paths: tuple[Path, ...]
    final_flow: StaticFlow
    prefix_costs: tuple[Fraction, ...]

    @property
    def p(self) -> int:
        return len(self.paths)

    @property
    def origins(self) -> tuple[int, ...]:
        return tuple(p.origin for p in self.paths)

    @property
    def path_costs(self) -> tuple[Fraction, ...]:
        return tuple(p.cost for p in self.paths)


def _pick_origin(graph: ScaledGraph, labels: np.ndarray, members: np.ndarray):
    """Cheapest reachable member; ties to the smallest node id.

    Returns (node, packed label) or None when nothing is reachable.
    members must be sorted ascending.
    """
    packed = labels[members]
    reachable = packed < INF_CUTOFF
    if not bool(reachable.any()):
        return None
    costs = packed // graph.hop_base
    costs = np.where(reachable, costs, np.iinfo(np.int64).max)
    i = int(np.argmin(costs))
    return int(members[i]), int(packed[i])


def successive_shortest_paths(net: Network, subset, graph: ScaledGraph | None = None) -> SsspResult:
    members_set = frozenset(int(v) for v in subset)
    if not members_set:
        raise ValueError("source subset must be non-empty")
    if not members_set <= net.sources:
        raise ValueError("subset contains non-source nodes")
    if graph is None:
        graph = ScaledGraph(net)
    members = np.fromiter(sorted(members_set), dtype=np.int64, count=len(members_set))
    mask = np.zeros(net.m, dtype=bool)
    degree = net.sink_in_degree
    paths: list[Path] = []
    prefix: list[Fraction] = []
    running = Fraction(0)
    while True:
        res = graph.residual_from_mask(mask)
        labels = graph.bf_labels(res, net.sink)
        pick = _pick_origin(graph, labels, members)
        if pick is None:
            break
        origin, packed = pick
        if len(paths) >= degree:
            raise AssertionError(
                "found more residual paths than sink in-arcs (%d)" % degree
            )
        arc_idx = graph.canonical_path(res, labels, origin, net.sink)
        arcs = tuple(
            PathArc(
                edge=int(res.eid[i]),
                frm=int(res.frm[i]),
                to=int(res.to[i]),
                backward=bool(res.backward[i]),
            )
            for i in arc_idx
        )
        cost = graph.cost_fraction(packed)
        if paths and cost < paths[-1].cost:
            raise AssertionError("path costs decreased across augmentations")
        for i in arc_idx:
            e = int(res.eid[i])
            mask[e] = not mask[e]
        paths.append(Path(arcs=arcs, cost=cost, origin=origin, target=net.sink))
        running += cost
        prefix.append(running)
    u = net.capacity
    final = StaticFlow(net, {int(e): u for e in np.flatnonzero(mask)})
    return SsspResult(
        subset=members_set,
        paths=tuple(paths),
        final_flow=final,
        prefix_costs=tuple(prefix),
    )


def max_outflow(result: SsspResult, horizon) -> Fraction:
    """Largest amount the set can send into the sink by ``horizon``.

    Equals max over h of u * sum_{i<=h} (horizon - cost_i), clamped at 0.
    """
    horizon = parse_rational(horizon)
    u = result.final_flow.net.capacity
    best = Fraction(0)
    running = Fraction(0)
    for path in result.paths:
        running += horizon - path.cost
        if u * running > best:
            best = u * running
    return best


def min_required_time(result: SsspResult, supply) -> Fraction:
    """Least horizon at which the set can ship ``supply``.

    Zero supply needs zero time; positive supply with no path to the sink
    is unreachable.
    """
    supply = parse_rational(supply)
    if supply < 0:
        raise ValueError("supply must be non-negative")
    if supply == 0:
        return Fraction(0)
    if result.p == 0:
        raise UnreachableSupplyError("unreachable supply")
    u = result.final_flow.net.capacity
    theta = None
    for h in range(1, result.p + 1):
        cand = (result.prefix_costs[h - 1] + supply / u) / h
        if theta is None or cand < theta:
            theta = cand
    assert max_outflow(result, theta) == supply
    return theta
