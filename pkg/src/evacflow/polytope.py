"""Vertices of the shipping polytope and the convex decomposition of w.

The feasible supplies at the optimal horizon form a base polytope over the
ground set U = S+ ∪ {sink}: coordinates sum to zero, every source ships a
non-negative amount, and every admitted family set A is bounded by the
amount o(A) it can deliver in time. Greedy marginals along a total order
of U give a vertex; the decomposition walks from w to a vertex, shoots a
ray back through w until it leaves the polytope, records the convex split,
and recurses from the boundary point. Each step makes at least one new
constraint tight and tight constraints stay tight, so at most k terms
appear.

Orders are built from the tight structure of the current point: the
minimal tight set containing each terminal sorts terminals into a
preorder, refined by node id. Sources pinned at zero land after the sink,
everything else before it; with no zero sources this is exactly a
sink-last order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ChainViolationError,
    GridMismatchError,
    NoForwardIntersectionError,
    NonIntegralTransitError,
)
from .horizon import AdmittingFamily
from .network import Network, SupplyFunction
from .oracle import TimeExpandedFlow, _ExpandedSolver, build_time_expanded
from .rational import format_rational, parse_rational
from .sssp import max_outflow, successive_shortest_paths


class OutflowCache:
    """Memoized o^T(A) over source subsets at a fixed horizon."""

    def __init__(self, net: Network, horizon, family: AdmittingFamily | None = None):
        self.net = net
        self.horizon = parse_rational(horizon)
        self._graph = None
        self._cache: dict[frozenset, Fraction] = {frozenset(): Fraction(0)}
        if family is not None:
            for entry in family.entries:
                self._cache[entry.subset] = max_outflow(entry.sssp, self.horizon)

    def of(self, subset) -> Fraction:
        key = frozenset(int(v) for v in subset)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self._graph is None:
            from .graphcore import ScaledGraph

            self._graph = ScaledGraph(self.net)
        result = successive_shortest_paths(self.net, key, graph=self._graph)
        value = max_outflow(result, self.horizon)
        self._cache[key] = value
        return value


@dataclass(frozen=True)
class PolytopeVertex:
    order: tuple[int, ...]
    point: dict


def _validate_order(net: Network, order) -> tuple[int, ...]:
    order = tuple(int(v) for v in order)
    ground = set(net.sources) | {net.sink}
    if len(order) != len(ground) or set(order) != ground:
        raise ValueError("order must permute all sources plus the sink")
    return order


def _greedy_point(net: Network, cache: OutflowCache, order) -> dict:
    """Marginal gains along the order; prefixes containing the sink are
    already free to ship everything, so their value stays 0."""

    def g(prefix_sources, has_sink):
        return Fraction(0) if has_sink else cache.of(prefix_sources)

    point = {}
    prefix: list[int] = []
    has_sink = False
    prev = Fraction(0)
    for v in order:
        if v == net.sink:
            has_sink = True
        else:
            prefix.append(v)
        cur = g(prefix, has_sink)
        point[v] = cur - prev
        prev = cur
    return point


def vertex_from_order(net: Network, family: AdmittingFamily, horizon, order) -> PolytopeVertex:
    order = _validate_order(net, order)
    cache = OutflowCache(net, horizon, family)
    return PolytopeVertex(order=order, point=_greedy_point(net, cache, order))


def supply_vector(net: Network, w: SupplyFunction) -> dict:
    return {v: w(v) for v in sorted(net.sources)} | {net.sink: w(net.sink)}


def supply_feasible_at(net: Network, family: AdmittingFamily, w: SupplyFunction, horizon) -> bool:
    """Membership of w in the shipping polytope at the given horizon.

    Supplies ship by the horizon iff no family set is asked to send more
    than it can deliver. Path profiles are horizon-independent, so the
    admitted family serves any horizon.
    """
    horizon = parse_rational(horizon)
    for entry in family.entries:
        if w.of(entry.subset) > max_outflow(entry.sssp, horizon):
            return False
    return True


@dataclass(frozen=True)
class DecompositionTerm:
    order: tuple[int, ...]
    point: dict
    coefficient: Fraction


@dataclass(frozen=True)
class ConvexDecomposition:
    terms: tuple[DecompositionTerm, ...]
    chain: tuple[frozenset, ...]
    trace: tuple[dict, ...]

    @property
    def h(self) -> int:
        return len(self.terms)

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(t.coefficient for t in self.terms)

    def mixed_point(self) -> dict:
        keys = self.terms[0].point.keys()
        return {
            v: sum((t.coefficient * t.point[v] for t in self.terms), Fraction(0))
            for v in keys
        }


def _vector_of(point: dict, nodes) -> Fraction:
    return sum((point[v] for v in nodes), Fraction(0))


def _order_from_tight(net: Network, tight_sets, zero_sources, sources) -> tuple[int, ...]:
    """Total order refining containment in minimal tight sets.

    Every prefix of the result is a union of minimal tight sets, hence
    itself tight, which makes the greedy vertex tight wherever the current
    point is.
    """
    ground = frozenset(sources) | {net.sink}
    cands = [frozenset(a) for a in tight_sets]
    cands.extend(ground - {v} for v in zero_sources)
    cands.append(ground)
    minimal: dict[int, frozenset] = {}
    for v in ground:
        d = ground
        for c in cands:
            if v in c:
                d = d & c
        minimal[v] = d
    # elements sharing a minimal tight set must stay contiguous, so sort
    # whole groups, smaller tight sets first
    groups: dict[frozenset, list[int]] = {}
    for v in ground:
        groups.setdefault(minimal[v], []).append(v)
    order: list[int] = []
    for d in sorted(groups, key=lambda d: (len(d), sorted(d))):
        order.extend(sorted(groups[d]))
    return tuple(order)


def _insert_chain(chain: list, hit: frozenset, sources: frozenset) -> None:
    """Keep the reported chain nested; slot the hit set in, adjusted to its
    gap when it straddles existing links."""
    if hit in chain:
        return
    lower = frozenset()
    idx = 0
    for i, a in enumerate(chain):
        if a <= hit:
            lower = a
            idx = i + 1
    upper = chain[idx] if idx < len(chain) else frozenset(sources)
    fitted = (hit | lower) & upper
    if fitted == lower or fitted == upper or fitted in chain:
        return
    chain.insert(idx, fitted)
    for a, b in zip(chain, chain[1:]):
        if not a < b:
            raise ChainViolationError("chain violation")


def decompose_supply(
    net: Network,
    w: SupplyFunction,
    t_star,
    a_star,
    family: AdmittingFamily,
    cache: OutflowCache | None = None,
) -> ConvexDecomposition:
    """Write w as a convex combination of greedy vertices.

    Pre: t_star/a_star from the horizon computation, so w is tight on
    a_star. Walks at most k steps; every emitted coefficient is positive
    and they sum to one with the mixture reproducing w exactly.
    """
    t_star = parse_rational(t_star)
    a_star = frozenset(int(v) for v in a_star)
    if cache is None:
        cache = OutflowCache(net, t_star, family)
    sources = frozenset(net.sources)
    ground = sorted(sources | {net.sink})
    x = supply_vector(net, w)
    if _vector_of(x, a_star) != cache.of(a_star):
        raise ValueError("supply is not tight on the claimed optimal set")
    fam_sets = sorted({e.subset for e in family.entries}, key=lambda s: (len(s), sorted(s)))
    chain: list[frozenset] = [a_star]
    terms: list[DecompositionTerm] = []
    trace: list[dict] = []
    alpha = Fraction(1)
    for _round in range(len(sources) + 2):
        tight = [a for a in fam_sets if _vector_of(x, a) == cache.of(a)]
        zeros = [v for v in sorted(sources) if x[v] == 0]
        order = _order_from_tight(net, tight, zeros, sources)
        b = _greedy_point(net, cache, order)
        for a in tight:
            if _vector_of(b, a) != cache.of(a):
                raise AssertionError("greedy vertex lost a tight constraint")
        for v in zeros:
            if b[v] != 0:
                raise AssertionError("greedy vertex lost a zero coordinate")
        if b == x:
            terms.append(DecompositionTerm(order=order, point=b, coefficient=alpha))
            trace.append({"x": dict(x), "alpha": alpha, "beta": None, "gamma": None})
            break
        # ray x(s) = b + s (x - b), s >= 1: first exit through a family
        # facet or a source hitting zero
        s_best = None
        hits: list[frozenset] = []
        zero_hit = None
        for a in fam_sets:
            delta = _vector_of(x, a) - _vector_of(b, a)
            if delta <= 0:
                continue
            room = cache.of(a) - _vector_of(b, a)
            s_a = room / delta
            if s_best is None or s_a < s_best:
                s_best, hits, zero_hit = s_a, [a], None
            elif s_a == s_best:
                hits.append(a)
        for v in sorted(sources):
            delta = x[v] - b[v]
            if delta >= 0 or x[v] == 0:
                continue
            s_v = b[v] / -delta
            if s_best is None or s_v < s_best:
                s_best, hits, zero_hit = s_v, [], v
            elif s_v == s_best and not hits and zero_hit is None:
                zero_hit = v
        if s_best is None:
            raise NoForwardIntersectionError("no forward intersection")
        if not s_best > 1:
            raise AssertionError("ray exit parameter must exceed 1")
        if hits:
            chosen = _pick_hit(hits, chain, sources)
            _insert_chain(chain, chosen, sources)
        beta = 1 - 1 / s_best
        gamma = 1 / s_best
        terms.append(DecompositionTerm(order=order, point=b, coefficient=alpha * beta))
        trace.append({"x": dict(x), "alpha": alpha, "beta": beta, "gamma": gamma})
        alpha = alpha * gamma
        x = {v: b[v] + s_best * (x[v] - b[v]) for v in ground}
    else:
        raise AssertionError("facet walk did not terminate within k steps")
    deco = ConvexDecomposition(terms=tuple(terms), chain=tuple(chain), trace=tuple(trace))
    total = sum(deco.coefficients(), Fraction(0))
    if total != 1 or any(c <= 0 for c in deco.coefficients()):
        raise AssertionError("coefficients must be positive and sum to one")
    if deco.mixed_point() != supply_vector(net, w):
        raise AssertionError("mixture does not reproduce the supply")
    if deco.h > max(1, len(sources)):
        raise AssertionError("more terms than sources")
    return deco


def _pick_hit(hits: list, chain: list, sources: frozenset) -> frozenset:
    """Among simultaneously hit facets prefer one nesting into the chain,
    then smaller, then lexicographically first."""

    def nests(a: frozenset) -> bool:
        return all(c <= a or a <= c for c in chain)

    ranked = sorted(hits, key=lambda a: (not nests(a), len(a), sorted(a)))
    return ranked[0]


def lexmax_flow(
    net: Network,
    order,
    t_star,
    family: AdmittingFamily | None = None,
    cache: OutflowCache | None = None,
) -> TimeExpandedFlow:
    """Dynamic flow whose per-source totals are the greedy vertex of order.

    Earlier terminals ship as much as possible given their predecessors;
    the totals are exactly the vertex coordinates, and pinning them as
    budgets on a time-expanded run realizes all of them simultaneously.
    """
    t_star = parse_rational(t_star)
    order = _validate_order(net, order)
    for e in net.edges:
        if e.transit.denominator != 1:
            raise NonIntegralTransitError("non-integral transit")
    if cache is None:
        cache = OutflowCache(net, t_star, family)
    point = _greedy_point(net, cache, order)
    budgets = {v: point[v] for v in sorted(net.sources)}
    step = Fraction(1, t_star.denominator)
    tenet = build_time_expanded(net, t_star, step)
    solver = _ExpandedSolver(tenet)
    solver.build(supply_caps=budgets)
    solver.attach_shippers({v: int(x * solver.scale) for v, x in budgets.items()})
    value = solver.run()
    want = sum(budgets.values(), Fraction(0))
    if value != want:
        raise AssertionError(
            "vertex budgets not jointly routable: shipped %s of %s"
            % (format_rational(value), format_rational(want))
        )
    flow = solver.extract_flow()
    totals = flow.node_totals()
    for v, budget in budgets.items():
        if totals.get(v, Fraction(0)) != budget:
            raise AssertionError("per-source totals drifted from the vertex")
    return flow


def assemble_quickest_flow(deco: ConvexDecomposition, flows) -> TimeExpandedFlow:
    """Coefficient-weighted sum of the per-order flows, on one time grid."""
    flows = list(flows)
    if len(flows) != deco.h:
        raise ValueError("need exactly one flow per decomposition term")
    if not flows:
        raise ValueError("empty decomposition")
    base = flows[0].tenet
    for f in flows[1:]:
        if f.tenet.step != base.step or f.tenet.horizon != base.horizon:
            raise GridMismatchError("grid mismatch")
    amounts: dict = {}
    for term, f in zip(deco.terms, flows):
        for key, x in f.amounts.items():
            if x == 0:
                continue
            amounts[key] = amounts.get(key, Fraction(0)) + term.coefficient * x
    amounts = {k: v for k, v in amounts.items() if v != 0}
    return TimeExpandedFlow(tenet=base, amounts=amounts)
