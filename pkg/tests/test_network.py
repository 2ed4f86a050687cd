from fractions import Fraction

import pytest

from evacflow import (
    Edge,
    Network,
    StaticFlow,
    SupplyFunction,
    ValidationError,
    require_valid,
    validate_network,
    validate_static_flow,
)
from evacflow.network import ResidualView, augment, has_negative_cycle, shortest_path


def two_node_net():
    # 0 -> 1 (tau 1), 1 -> 0 (tau 3), 1 -> 0 (tau 1); sink is node 1
    edges = [Edge(0, 0, 1, Fraction(1)), Edge(1, 1, 0, Fraction(3)),
             Edge(2, 1, 0, Fraction(1))]
    return Network(2, edges, Fraction(1), [0], 1)


def test_d1_shape(d1):
    net, w = d1
    assert net.n == 3
    assert net.sink == 2
    assert sorted(net.sources) == [0, 1]
    assert net.sink_in_degree == 2
    assert net.names == ("v1", "v2", "t")
    assert [e.transit for e in net.edges] == [1, 3, 1]
    assert validate_network(net, w).ok
    require_valid(net, w)


def test_validate_imbalance(d1):
    net, _ = d1
    bad = SupplyFunction({0: Fraction(2), 1: Fraction(3), 2: Fraction(-4)})
    report = validate_network(net, bad)
    assert not report.ok
    assert "supplies do not sum to zero" in report.violations
    with pytest.raises(ValidationError):
        require_valid(net, bad)


def test_validate_source_sign(d1):
    net, _ = d1
    bad = SupplyFunction({0: Fraction(-2), 1: Fraction(5), 2: Fraction(-3)})
    assert "source with non-positive supply" in validate_network(net, bad).violations


def test_supply_function(d1):
    _, w = d1
    assert w(0) == 2 and w(1) == 3 and w(2) == -5
    assert w.total() == 0
    assert sorted(w.positive_nodes()) == [0, 1]


def test_validate_static_flow():
    net = two_node_net()
    assert validate_static_flow(StaticFlow(net)).ok
    over = StaticFlow(net, {0: Fraction(2)})
    assert "edge 0 amount outside [0, u]" in validate_static_flow(over).violations
    # pushing 0 -> 1 -> 0 on a 2-cycle conserves at every node
    cyc = StaticFlow(net, {0: Fraction(1), 2: Fraction(1)})
    assert validate_static_flow(cyc).ok


def test_conservation_violation():
    edges = [Edge(0, 0, 1, Fraction(1)), Edge(1, 1, 2, Fraction(1))]
    net = Network(3, edges, Fraction(1), [0], 2)
    dangling = StaticFlow(net, {0: Fraction(1)})  # stops at node 1
    assert "conservation violated at node 1" in validate_static_flow(dangling).violations


def test_residual_arcs_and_augment():
    net = two_node_net()
    path = shortest_path(ResidualView(net, StaticFlow(net)), [0], 1)
    assert path.cost == 1
    assert [(a.edge, a.backward) for a in path.arcs] == [(0, False)]
    flow = augment(StaticFlow(net), path, Fraction(1))
    assert flow.amount(0) == 1
    # saturated forward edge leaves only its backward residual arc
    arcs = [(a.edge, a.backward) for a in ResidualView(net, flow).arcs()]
    assert (0, True) in arcs and (0, False) not in arcs
    back = next(a for a in ResidualView(net, flow).arcs() if a.backward)
    assert back.cost == -1 and back.frm == 1 and back.to == 0


def test_negative_cycle_detection():
    net = two_node_net()
    # flow on the tau=3 arc leaves a -3 backward arc; with the tau=1
    # forward arc that closes a negative cycle
    flow = StaticFlow(net, {1: Fraction(1)})
    assert has_negative_cycle(ResidualView(net, flow))
    assert not has_negative_cycle(ResidualView(net, StaticFlow(net)))


def test_shortest_path_none_when_unreachable():
    edges = [Edge(0, 0, 1, Fraction(1))]
    net = Network(3, edges, Fraction(1), [0, 2], 1)
    res = ResidualView(net, StaticFlow(net))
    assert shortest_path(res, [2], 1) is None
