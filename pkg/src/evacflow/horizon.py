"""Admitting tuples, their maximal admitting subsets, and the horizon T*.

A source set A admits the tuple (v1,...,vp) when the successive shortest
path procedure on A picks exactly the origins v1,...,vp in order and then
stops. Unions of admitting sets admit the same tuple, so each admitted
tuple has a unique maximal admitting subset; the horizon T* is the largest
required time over those subsets.

Enumeration does not rerun the path procedure per tuple. All tuples with a
common prefix share the same residual state, so a depth-first scan over
prefixes reuses one shortest-path tree per prefix:

- a prefix (v1,...,vi) is viable iff at every stage j <= i the origin vj
  beats every other prefix member under the (cost, node id) order;
- extending by v requires v to beat all current members at stage i+1 and
  to have lost to the stage winner at every earlier stage, which is the
  same condition that keeps a source inside the maximal subset;
- the prefix is admitted when every member is unreachable after its own
  augmentations (automatic once all sink in-arcs are saturated).

The per-tuple cost of the literal tuple loop collapses to one label pass
per viable prefix, while the emitted family is identical.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UnreachableSupplyError
from .graphcore import INF_CUTOFF, ScaledGraph
from .network import Network, Path, PathArc, StaticFlow, SupplyFunction, require_valid
from .sssp import SsspResult, min_required_time, successive_shortest_paths


@dataclass(frozen=True)
class AdmittingEntry:
    """One admitted tuple with its maximal admitting subset.

    ``theta`` is the least horizon at which the subset ships its supply;
    entries for tuples nothing admits carry the empty subset and theta 0.
    """

    origins: tuple[int, ...]
    subset: frozenset[int]
    sssp: SsspResult | None
    theta: Fraction | None

    @property
    def p(self) -> int:
        return len(self.origins)


def _empty_entry(origins) -> AdmittingEntry:
    return AdmittingEntry(
        origins=tuple(origins), subset=frozenset(), sssp=None, theta=Fraction(0)
    )


class AdmittingFamily:
    """All admitted tuples of a network with their subsets and thetas.

    ``entries`` holds one entry per admitted tuple, ordered by (p, tuple);
    distinct admitted tuples always produce distinct subsets because the
    origin sequence of a set is unique. ``lookup`` is total: tuples nothing
    admits resolve to a synthesized empty entry.
    """

    def __init__(self, entries, examined: int, k: int, d: int):
        self.entries: tuple[AdmittingEntry, ...] = tuple(entries)
        self.examined = int(examined)
        self.k = int(k)
        self.d = int(d)
        self._by_tuple = {e.origins: e for e in self.entries}
        if len({e.subset for e in self.entries}) != len(self.entries):
            raise AssertionError("two admitted tuples produced the same subset")

    @property
    def admitted_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(e.origins for e in self.entries)

    def subsets(self) -> tuple[frozenset, ...]:
        return tuple(e.subset for e in self.entries)

    def lookup(self, origins) -> AdmittingEntry:
        origins = tuple(int(v) for v in origins)
        found = self._by_tuple.get(origins)
        return found if found is not None else _empty_entry(origins)

    def __len__(self):
        return len(self.entries)


def origin_sequence(net: Network, subset, graph: ScaledGraph | None = None) -> tuple[int, ...]:
    """The deterministic origin order the path procedure picks for subset."""
    return successive_shortest_paths(net, subset, graph=graph).origins


def check_admits(net: Network, origins, graph: ScaledGraph | None = None) -> bool:
    """True iff {v1,...,vp} itself admits (v1,...,vp).

    This decides whether ANY subset admits the tuple: an admitting set
    must contain the origins, and dropping the rest preserves admission.
    """
    origins = tuple(int(v) for v in origins)
    if not origins:
        raise ValueError("tuple must be non-empty")
    if not set(origins) <= net.sources:
        raise ValueError("tuple contains non-source nodes")
    return origin_sequence(net, set(origins), graph=graph) == origins


class _StagedSearch:
    """Depth-first enumeration of viable prefixes over shared residuals."""

    def __init__(self, net: Network, graph: ScaledGraph, stage_filter=None):
        self.net = net
        self.graph = graph
        self.sink = net.sink
        self.d = net.sink_in_degree
        k = len(net.sources)
        self.sources = np.fromiter(sorted(net.sources), dtype=np.int64, count=k)
        self.pos_of = {int(v): i for i, v in enumerate(self.sources)}
        self.hb = int(graph.hop_base)
        self.stage_filter = stage_filter

    def roots(self) -> list[int]:
        if self.d == 0 or self.sources.size == 0:
            return []
        res = self.graph.residual_from_mask(np.zeros(self.net.m, dtype=bool))
        labels = self.graph.bf_labels(res, self.sink)
        return [int(v) for v in self.sources if labels[v] < INF_CUTOFF]

    def search_root(self, root: int) -> list[dict]:
        out: list[dict] = []
        mask = np.zeros(self.net.m, dtype=bool)
        kept = np.ones(self.sources.size, dtype=bool)
        bands = self.stage_filter(root) if self.stage_filter is not None else None
        res = self.graph.residual_from_mask(mask)
        labels = self.graph.bf_labels(res, self.sink)
        self._descend(
            [], mask, kept, [], [], res, labels, bands, only_child=root, out=out
        )
        return out

    def _descend(self, prefix, mask, kept, paths, pcosts, res, labels, bands, only_child, out):
        i = len(prefix)
        src_reach = labels[self.sources] < INF_CUTOFF
        src_costs = labels[self.sources] // self.hb
        members = sorted(set(prefix))
        mpos = [self.pos_of[v] for v in members]
        any_member_reachable = bool(members) and bool(src_reach[mpos].any())
        if i >= 1 and not any_member_reachable:
            out.append(self._emit(prefix, kept & ~src_reach, mask, paths, pcosts))
        if i >= self.d:
            return
        # children must still satisfy every earlier stage condition (kept),
        # be reachable now, and beat the cheapest current member
        cand = kept & src_reach
        dup = None
        if any_member_reachable:
            mcosts = np.where(src_reach[mpos], src_costs[mpos], np.iinfo(np.int64).max)
            b = int(np.argmin(mcosts))
            best_cost = int(mcosts[b])
            best_id = int(members[b])
            cand &= (src_costs < best_cost) | (
                (src_costs == best_cost) & (self.sources < best_id)
            )
            dup = best_id
        if bands is not None and i + 1 >= 2:
            cand &= bands[i + 1]
        children = [int(v) for v in self.sources[cand]]
        if dup is not None:
            if bands is None or bands[i + 1][self.pos_of[dup]]:
                children.append(dup)
        children.sort()
        if only_child is not None:
            children = [v for v in children if v == only_child]
        for v in children:
            vpos = self.pos_of[v]
            cost_int = int(src_costs[vpos])
            arc_idx = self.graph.canonical_path(res, labels, v, self.sink)
            arcs = tuple(
                PathArc(
                    edge=int(res.eid[j]),
                    frm=int(res.frm[j]),
                    to=int(res.to[j]),
                    backward=bool(res.backward[j]),
                )
                for j in arc_idx
            )
            cost = self.graph.cost_fraction(int(labels[v]))
            path = Path(arcs=arcs, cost=cost, origin=v, target=self.sink)
            new_kept = kept & (
                (self.sources == v)
                | (src_costs > cost_int)
                | ((src_costs == cost_int) & (self.sources > v))
            )
            eids = [int(res.eid[j]) for j in arc_idx]
            for e in eids:
                mask[e] = not mask[e]
            prefix.append(v)
            paths.append(path)
            pcosts.append((pcosts[-1] if pcosts else Fraction(0)) + cost)
            if len(prefix) >= self.d:
                # every sink in-arc is saturated now; no one reaches the sink
                out.append(self._emit(prefix, new_kept, mask, paths, pcosts))
            else:
                nres = self.graph.residual_from_mask(mask)
                nlabels = self.graph.bf_labels(nres, self.sink)
                self._descend(
                    prefix, mask, new_kept, paths, pcosts, nres, nlabels, bands,
                    None, out,
                )
            pcosts.pop()
            paths.pop()
            prefix.pop()
            for e in eids:
                mask[e] = not mask[e]

    def _emit(self, prefix, kept_final, mask, paths, pcosts) -> dict:
        subset = frozenset(int(v) for v in self.sources[kept_final])
        if not set(prefix) <= subset:
            raise AssertionError("an origin fell out of its own admitting subset")
        u = self.net.capacity
        amounts = {int(e): u for e in np.flatnonzero(mask)}
        return {
            "origins": tuple(prefix),
            "subset": subset,
            "paths": tuple(paths),
            "amounts": amounts,
            "prefix_costs": tuple(pcosts),
        }


def maximal_admitting_subset(
    net: Network, origins, w: SupplyFunction | None = None, graph: ScaledGraph | None = None
) -> AdmittingEntry:
    """Largest source set admitting the tuple (empty entry if none does).

    Runs the path procedure on {v1,...,vp} and keeps every source that
    never preempts a stage winner: at stage i any source beating vi under
    the (cost, node id) order is dropped, and after the last stage any
    source that still reaches the sink is dropped. The remainder is the
    union of all admitting sets.
    """
    origins = tuple(int(v) for v in origins)
    if not origins:
        raise ValueError("tuple must be non-empty")
    if not set(origins) <= net.sources:
        raise ValueError("tuple contains non-source nodes")
    if graph is None:
        graph = ScaledGraph(net)
    sources = np.fromiter(sorted(net.sources), dtype=np.int64, count=len(net.sources))
    pos_of = {int(v): i for i, v in enumerate(sources)}
    members = sorted(set(origins))
    mpos = [pos_of[v] for v in members]
    if len(origins) > net.sink_in_degree:
        return _empty_entry(origins)
    mask = np.zeros(net.m, dtype=bool)
    kept = np.ones(sources.size, dtype=bool)
    paths: list[Path] = []
    pcosts: list[Fraction] = []
    hb = int(graph.hop_base)
    for v in origins:
        res = graph.residual_from_mask(mask)
        labels = graph.bf_labels(res, net.sink)
        src_reach = labels[sources] < INF_CUTOFF
        src_costs = labels[sources] // hb
        if not src_reach[pos_of[v]]:
            return _empty_entry(origins)
        cost_int = int(src_costs[pos_of[v]])
        for m in members:
            if m == v:
                continue
            if not src_reach[pos_of[m]]:
                continue
            mc = int(src_costs[pos_of[m]])
            if mc < cost_int or (mc == cost_int and m < v):
                return _empty_entry(origins)
        kept &= (sources == v) | (src_costs > cost_int) | (
            (src_costs == cost_int) & (sources > v)
        )
        arc_idx = graph.canonical_path(res, labels, v, net.sink)
        arcs = tuple(
            PathArc(
                edge=int(res.eid[j]),
                frm=int(res.frm[j]),
                to=int(res.to[j]),
                backward=bool(res.backward[j]),
            )
            for j in arc_idx
        )
        cost = graph.cost_fraction(int(labels[v]))
        paths.append(Path(arcs=arcs, cost=cost, origin=v, target=net.sink))
        pcosts.append((pcosts[-1] if pcosts else Fraction(0)) + cost)
        for j in arc_idx:
            e = int(res.eid[j])
            mask[e] = not mask[e]
    res = graph.residual_from_mask(mask)
    labels = graph.bf_labels(res, net.sink)
    src_reach = labels[sources] < INF_CUTOFF
    if bool(src_reach[mpos].any()):
        # the set {v1..vp} yields more origins than the tuple lists
        return _empty_entry(origins)
    if bool((kept & src_reach)[mpos].any()):
        warnings.warn("reachability sweep removed a tuple origin")
    kept &= ~src_reach
    subset = frozenset(int(v) for v in sources[kept])
    u = net.capacity
    final = StaticFlow(net, {int(e): u for e in np.flatnonzero(mask)})
    result = SsspResult(
        subset=subset,
        paths=tuple(paths),
        final_flow=final,
        prefix_costs=tuple(pcosts),
    )
    theta = min_required_time(result, w.of(subset)) if w is not None else None
    return AdmittingEntry(
        origins=origins, subset=subset, sssp=result, theta=theta
    )


def enumerate_admitting_family(
    net: Network,
    w: SupplyFunction,
    jobs: int = 1,
    graph: ScaledGraph | None = None,
    stage_filter=None,
) -> AdmittingFamily:
    """Family of all admitted tuples for p = 1..d with subsets and thetas.

    ``examined`` counts the full tuple space sum(k^p); the search itself
    only visits viable prefixes. ``stage_filter(v1)`` may return per-
    position candidate masks to restrict tuples (see the grid module);
    filtered searches examine the same tuple space but emit only tuples
    inside the masks.
    """
    if graph is None:
        graph = ScaledGraph(net)
    search = _StagedSearch(net, graph, stage_filter=stage_filter)
    k = len(net.sources)
    d = net.sink_in_degree
    roots = search.roots()
    if jobs > 1 and len(roots) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=int(jobs)) as pool:
            chunks = list(pool.map(search.search_root, roots))
    else:
        chunks = [search.search_root(v) for v in roots]
    raw = [item for chunk in chunks for item in chunk]
    raw.sort(key=lambda r: (len(r["origins"]), r["origins"]))
    entries = []
    for r in raw:
        result = SsspResult(
            subset=r["subset"],
            paths=r["paths"],
            final_flow=StaticFlow(net, r["amounts"]),
            prefix_costs=r["prefix_costs"],
        )
        theta = min_required_time(result, w.of(r["subset"]))
        entries.append(
            AdmittingEntry(
                origins=r["origins"], subset=r["subset"], sssp=result, theta=theta
            )
        )
    examined = sum(k**p for p in range(1, d + 1))
    return AdmittingFamily(entries, examined=examined, k=k, d=d)


def min_time_horizon(net: Network, w: SupplyFunction, jobs: int = 1):
    """Least feasible horizon with an argmax subset and the full family.

    Returns (T*, A*, family); ties on theta resolve to the set whose
    sorted node ids are lexicographically smallest.
    """
    require_valid(net, w)
    graph = ScaledGraph(net)
    if net.sources:
        res = graph.residual_from_mask(np.zeros(net.m, dtype=bool))
        labels = graph.bf_labels(res, net.sink)
        for v in sorted(net.sources):
            if labels[v] >= INF_CUTOFF:
                raise UnreachableSupplyError("unreachable supply")
    family = enumerate_admitting_family(net, w, jobs=jobs, graph=graph)
    if not family.entries:
        return Fraction(0), frozenset(), family
    t_star = max(e.theta for e in family.entries)
    best = min(
        (e.subset for e in family.entries if e.theta == t_star),
        key=lambda s: tuple(sorted(s)),
    )
    return t_star, best, family
