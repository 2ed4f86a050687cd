"""Greedy vertices, the facet walk, and lexicographic flow construction."""

from fractions import Fraction

import pytest

from evacflow import (
    Edge,
    Network,
    NonIntegralTransitError,
    OutflowCache,
    SupplyFunction,
    assemble_quickest_flow,
    decompose_supply,
    enumerate_admitting_family,
    lexmax_flow,
    max_outflow,
    min_time_horizon,
    successive_shortest_paths,
    supply_feasible_at,
    supply_vector,
    verify_dynamic_flow,
    vertex_from_order,
)


def solve(net, w):
    t_star, a_star, family = min_time_horizon(net, w)
    deco = decompose_supply(net, w, t_star, a_star, family)
    return t_star, a_star, family, deco


def test_d1_greedy_vertices(d1):
    net, w = d1
    t_star, _, family = min_time_horizon(net, w)
    v = vertex_from_order(net, family, t_star, (0, 1, 2))
    assert v.point == {0: Fraction(4), 1: Fraction(1), 2: Fraction(-5)}
    v = vertex_from_order(net, family, t_star, (1, 0, 2))
    assert v.point == {1: Fraction(7, 2), 0: Fraction(3, 2), 2: Fraction(-5)}


def test_d1_decomposition_frozen(d1):
    net, w = d1
    t_star, a_star, family, deco = solve(net, w)
    assert [t.order for t in deco.terms] == [(0, 1, 2), (1, 0, 2)]
    assert [t.coefficient for t in deco.terms] == [Fraction(1, 5), Fraction(4, 5)]
    assert [sorted(c) for c in deco.chain] == [[1], [0, 1]]
    assert deco.mixed_point() == supply_vector(net, w)


def test_single_vertex_supply(d1):
    # the supply itself is a greedy vertex: one term, coefficient 1
    net, _ = d1
    w = SupplyFunction({0: Fraction(4), 1: Fraction(1), 2: Fraction(-5)})
    _, _, _, deco = solve(net, w)
    assert len(deco.terms) == 1
    assert deco.terms[0].coefficient == 1
    assert deco.terms[0].point == supply_vector(net, w)


def test_walk_uses_sink_mid_order_when_needed():
    # T* comes from a slow singleton; the second vertex needs the sink
    # before the slack source or the walk cannot reach the supply
    edges = [Edge(0, 0, 2, Fraction(1)), Edge(1, 1, 2, Fraction(10))]
    net = Network(3, edges, Fraction(1), [0, 1], 2)
    w = SupplyFunction({0: Fraction(5), 1: Fraction(1), 2: Fraction(-6)})
    t_star, a_star, family, deco = solve(net, w)
    assert t_star == 11 and a_star == {1}
    assert [t.coefficient for t in deco.terms] == [Fraction(1, 2), Fraction(1, 2)]
    assert deco.terms[0].point == {0: Fraction(10), 1: Fraction(1), 2: Fraction(-11)}
    assert deco.terms[1].point == {0: Fraction(0), 1: Fraction(1), 2: Fraction(-1)}
    assert deco.terms[1].order.index(2) < deco.terms[1].order.index(0)
    flows = [lexmax_flow(net, t.order, t_star, family=family) for t in deco.terms]
    combined = assemble_quickest_flow(deco, flows)
    assert verify_dynamic_flow(combined, w, t_star).ok


def test_supply_feasibility_threshold(d1):
    net, w = d1
    t_star, _, family = min_time_horizon(net, w)
    assert supply_feasible_at(net, family, w, t_star)
    assert not supply_feasible_at(net, family, w, t_star - Fraction(1, 100))
    assert supply_feasible_at(net, family, w, t_star + 1)


def test_vertices_respect_family_bounds(corpus):
    for net, w in corpus[:30]:
        t_star, a_star, family = min_time_horizon(net, w)
        cache = OutflowCache(net, t_star, family)
        deco = decompose_supply(net, w, t_star, a_star, family, cache=cache)
        for term in deco.terms:
            for entry in family.entries:
                total = sum((term.point[v] for v in entry.subset), Fraction(0))
                assert total <= cache.of(entry.subset)


def test_lexmax_totals_match_vertex(d1):
    net, w = d1
    t_star, _, family = min_time_horizon(net, w)
    for order in ((0, 1, 2), (1, 0, 2)):
        vertex = vertex_from_order(net, family, t_star, order)
        flow = lexmax_flow(net, order, t_star, family=family)
        totals = flow.node_totals()
        for v in net.sources:
            assert totals.get(v, Fraction(0)) == vertex.point[v]


def test_lexmax_requires_integer_transits():
    edges = [Edge(0, 0, 1, Fraction(1, 2))]
    net = Network(2, edges, Fraction(1), [0], 1)
    w = SupplyFunction({0: Fraction(1), 1: Fraction(-1)})
    t_star, _, family = min_time_horizon(net, w)
    with pytest.raises(NonIntegralTransitError):
        lexmax_flow(net, (0, 1), t_star, family=family)


def test_tightness_at_t_star(corpus):
    # the binding subset leaves zero slack and nothing goes negative
    for net, w in corpus[:30]:
        t_star, a_star, family = min_time_horizon(net, w)
        cache = OutflowCache(net, t_star, family)
        slacks = [cache.of(e.subset) - w.of(e.subset) for e in family.entries]
        assert min(slacks) == 0
        assert cache.of(a_star) == w.of(a_star)


def test_outflow_cache_agrees_with_formula(corpus):
    for net, w in corpus[:20]:
        t_star, _, family = min_time_horizon(net, w)
        cache = OutflowCache(net, t_star, family)
        for entry in family.entries:
            res = successive_shortest_paths(net, entry.subset)
            assert cache.of(entry.subset) == max_outflow(res, t_star)
