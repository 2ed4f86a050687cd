"""N-by-N bidirected grid instances and the banded tuple enumeration.

Every cell of an N-by-N grid is joined to its orthogonal neighbours by a
pair of opposite arcs sharing one uniform transit time. On such networks
the admitted-tuple search can be narrowed by the first origin alone: run
the path procedure on {v1} by itself and read off its cost profile
l_1 <= ... <= l_t (t = number of edge-disjoint v1-to-sink paths). If a
subset admits (v1, ..., v_p) then

- p >= t: as long as fewer than t paths exist, v1 still reaches the sink
  in the residual, so the procedure cannot have stopped;
- the stage-i path of the subset costs at most l_2 + ... + l_i minus the
  (i-2)-fold first cost, because i units from v1 alone are a feasible
  comparison flow and the first stage always costs l_1; hence the i-th
  origin lies within that cost of the sink whenever i <= t, while stages
  beyond t admit no bound at all;
- when v1 has two disjoint shortest paths the second stage repeats v1
  outright (the tie-break keeps the cheapest node id, and v1 already won
  stage one at the same cost).

The bands never exclude an admitted tuple, so the banded search emits
the identical family while visiting far fewer prefixes; band widths stay
bounded as the grid grows, so the closed-form candidate count grows only
quadratically in the number of cells. Nodes still carry a coarse (s, t)
class label: C1 = (>=2, 4), C2 = (>=2, 3), C3 = (>=2, 2), X1 = (1, 4),
X2 = (1, <=3).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InstanceTooLargeError
from .graphcore import ScaledGraph
from .horizon import AdmittingFamily, enumerate_admitting_family
from .network import Edge, Network, SupplyFunction, require_valid
from .oracle import _Dinic
from .rational import parse_rational
from .sssp import successive_shortest_paths


@dataclass(frozen=True)
class GridSpec:
    side: int
    transit: Fraction
    capacity: Fraction
    sink: tuple[int, int]
    supply: Fraction

    def __post_init__(self):
        object.__setattr__(self, "transit", parse_rational(self.transit))
        object.__setattr__(self, "capacity", parse_rational(self.capacity))
        object.__setattr__(self, "supply", parse_rational(self.supply))
        if self.side < 2:
            raise ValueError("grid side must be at least 2")
        r, c = self.sink
        if not (0 <= r < self.side and 0 <= c < self.side):
            raise ValueError("sink position outside the grid")
        if self.transit <= 0 or self.capacity <= 0 or self.supply <= 0:
            raise ValueError("transit, capacity and supply must be positive")

    @property
    def sink_id(self) -> int:
        return self.sink[0] * self.side + self.sink[1]

    def metadata(self) -> dict:
        return {"side": self.side, "sink": list(self.sink)}


def gen_grid(spec: GridSpec) -> tuple[Network, SupplyFunction]:
    """Bidirected grid with uniform supply on every non-sink cell.

    Cell (r, c) gets id r*side + c; per cell the arc pair to the right
    neighbour precedes the pair to the lower one, fixing all edge ids.
    """
    n = spec.side * spec.side
    edges = []
    for r in range(spec.side):
        for c in range(spec.side):
            v = r * spec.side + c
            if c + 1 < spec.side:
                edges.append(Edge(len(edges), v, v + 1, spec.transit))
                edges.append(Edge(len(edges), v + 1, v, spec.transit))
            if r + 1 < spec.side:
                edges.append(Edge(len(edges), v, v + spec.side, spec.transit))
                edges.append(Edge(len(edges), v + spec.side, v, spec.transit))
    sink = spec.sink_id
    sources = [v for v in range(n) if v != sink]
    net = Network(n=n, edges=edges, capacity=spec.capacity, sources=sources, sink=sink)
    values = {v: spec.supply for v in sources}
    values[sink] = -spec.supply * (n - 1)
    return net, SupplyFunction(values)


@dataclass(frozen=True)
class AreaLabels:
    """Per-node hop counts and per-source path statistics with the class.

    detour_offsets[v] lists, in hops, how much longer each further
    edge-disjoint path from v alone is than its shortest one: the j-th
    entry is (l_{j+1} - l_1) / transit for j = 1..t-1.
    """

    hops: dict
    shortest_count: dict
    disjoint_count: dict
    label: dict
    detour_offsets: dict


def _hops_to_sink(net: Network) -> dict:
    into = [[] for _ in range(net.n)]
    for e in net.edges:
        into[e.head].append(e.tail)
    hops = {net.sink: 0}
    frontier = [net.sink]
    while frontier:
        nxt = []
        for v in frontier:
            for u in into[v]:
                if u not in hops:
                    hops[u] = hops[v] + 1
                    nxt.append(u)
        frontier = nxt
    return hops

def _unit_maxflow(net: Network, arcs, origin: int) -> int:
    dinic = _Dinic(net.n)
    for tail, head in arcs:
        dinic.add_edge(tail, head, 1)
    return dinic.max_flow(origin, net.sink)


def classify_areas(net: Network) -> AreaLabels:
    """Hop counts plus the (s, t) class of every source.

    Requires one uniform transit time (hops then measure distance) and a
    sink with at most four edge-disjoint paths from anywhere, which holds
    on grids.
    """
    transits = {e.transit for e in net.edges}
    if len(transits) > 1:
        raise ValueError("grid classification requires a uniform transit time")
    hops = _hops_to_sink(net)
    missing = [v for v in net.sources if v not in hops]
    if missing:
        raise ValueError("node %d cannot reach the sink" % missing[0])
    all_arcs = [(e.tail, e.head) for e in net.edges]
    tight_arcs = [
        (e.tail, e.head)
        for e in net.edges
        if e.tail in hops and e.head in hops and hops[e.tail] == hops[e.head] + 1
    ]
    transit = net.edges[0].transit
    graph = ScaledGraph(net)
    shortest_count = {}
    disjoint_count = {}
    label = {}
    detour_offsets = {}
    for v in sorted(net.sources):
        s = _unit_maxflow(net, tight_arcs, v)
        t = _unit_maxflow(net, all_arcs, v)
        if t > 4:
            raise ValueError("node %d has more than four edge-disjoint paths" % v)
        shortest_count[v] = s
        disjoint_count[v] = t
        if s >= 2:
            label[v] = {4: "C1", 3: "C2", 2: "C3"}[t]
        else:
            label[v] = "X1" if t == 4 else "X2"
        profile = successive_shortest_paths(net, (v,), graph=graph).path_costs
        assert len(profile) == t, "path procedure and max-flow disagree at %d" % v
        offsets = tuple(int((c - profile[0]) / transit) for c in profile[1:])
        detour_offsets[v] = offsets
    return AreaLabels(
        hops=hops,
        shortest_count=shortest_count,
        disjoint_count=disjoint_count,
        label=label,
        detour_offsets=detour_offsets,
    )


def _stage_bounds(labels: AreaLabels, root: int, d: int):
    """Band specs for stages 2..d of tuples rooted at root.

    Returns (t, bounds) where t is the root's disjoint-path count and
    each entry of bounds is "pin" (stage repeats the root), an integer c
    (stage hops within [h1, h1 + c]), or None (hops >= h1 only, for the
    stages past t that carry no bound).
    """
    offsets = labels.detour_offsets[root]
    t = len(offsets) + 1
    bounds = []
    reach = 0
    for i in range(2, d + 1):
        if i <= t:
            reach += offsets[i - 2]
        if i == 2 and labels.shortest_count[root] >= 2:
            bounds.append("pin")
        elif i <= t:
            bounds.append(reach)
        else:
            bounds.append(None)
    return t, bounds


def make_stage_filter(net: Network, labels: AreaLabels):
    """Per-root stage masks for the admitted-tuple search."""
    d = net.sink_in_degree
    if d > 4:
        raise ValueError("sink must have at most four incoming edges")
    sources = sorted(net.sources)
    src = np.fromiter(sources, dtype=np.int64, count=len(sources))
    hops = np.fromiter((labels.hops[v] for v in sources), dtype=np.int64, count=len(sources))

    def stage_filter(root: int):
        h1 = labels.hops[root]
        masks = []
        for c in _stage_bounds(labels, root, d)[1]:
            if c == "pin":
                masks.append(src == root)
            elif c is None:
                masks.append(hops >= h1)
            else:
                masks.append((hops >= h1) & (hops <= h1 + c))
        full = np.ones(src.size, dtype=bool)
        return [full, full] + masks

    return stage_filter


class CandidateSet:
    """Materialized candidate tuples, ordered by (length, tuple)."""

    def __init__(self, tuples):
        self.tuples = tuple(tuples)
        self._set = frozenset(self.tuples)

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, origins):
        return tuple(int(v) for v in origins) in self._set


def _band_members(sources, hops, h1, c, v1):
    if c == "pin":
        return [v1]
    if c is None:
        return [u for u in sources if hops[u] >= h1]
    return [u for u in sources if h1 <= hops[u] <= h1 + c]


def candidate_tuples(net: Network, labels: AreaLabels | None = None) -> CandidateSet:
    """Every tuple the per-root bands allow, for lengths from the root's
    disjoint-path count up to the sink in-degree. A superset of the
    admitted tuples of those lengths."""
    if labels is None:
        labels = classify_areas(net)
    if count_candidates(net, labels) > 2_000_000:
        raise InstanceTooLargeError("instance too large")
    d = net.sink_in_degree
    sources = sorted(net.sources)
    out = []
    for v1 in sources:
        h1 = labels.hops[v1]
        t, bounds = _stage_bounds(labels, v1, d)
        for p in range(t, d + 1):
            lists = [
                _band_members(sources, labels.hops, h1, c, v1)
                for c in bounds[: p - 1]
            ]
            for rest in itertools.product(*lists):
                out.append((v1,) + rest)
    out.sort(key=lambda t: (len(t), t))
    return CandidateSet(out)


def count_candidates(net: Network, labels: AreaLabels | None = None) -> int:
    """Closed-form size of candidate_tuples via sorted hop counts."""
    if labels is None:
        labels = classify_areas(net)
    d = net.sink_in_degree
    sources = sorted(net.sources)
    hops = np.sort(
        np.fromiter((labels.hops[v] for v in sources), dtype=np.int64, count=len(sources))
    )

    def band_size(h1, c):
        if c == "pin":
            return 1
        lo = int(np.searchsorted(hops, h1, side="left"))
        if c is None:
            return len(sources) - lo
        return int(np.searchsorted(hops, h1 + c, side="right")) - lo

    total = 0
    for v1 in sources:
        h1 = labels.hops[v1]
        t, bounds = _stage_bounds(labels, v1, d)
        for p in range(t, d + 1):
            prod = 1
            for c in bounds[: p - 1]:
                prod *= band_size(h1, c)
            total += prod
    return total


def grid_horizon(net: Network, w: SupplyFunction, jobs: int = 1, labels: AreaLabels | None = None):
    """Least feasible horizon via the banded search; same contract as the
    general horizon computation."""
    require_valid(net, w)
    if labels is None:
        labels = classify_areas(net)
    graph = ScaledGraph(net)
    family = enumerate_admitting_family(
        net, w, jobs=jobs, graph=graph, stage_filter=make_stage_filter(net, labels)
    )
    if not family.entries:
        return Fraction(0), frozenset(), family
    t_star = max(e.theta for e in family.entries)
    best = min(
        (e.subset for e in family.entries if e.theta == t_star),
        key=lambda s: tuple(sorted(s)),
    )
    return t_star, best, family


def grid_solve(spec: GridSpec, jobs: int = 1):
    """End to end on a generated grid: (T*, A*, family, decomposition)."""
    from .polytope import decompose_supply

    net, w = gen_grid(spec)
    t_star, a_star, family = grid_horizon(net, w, jobs=jobs)
    deco = decompose_supply(net, w, t_star, a_star, family)
    return net, w, t_star, a_star, family, deco
