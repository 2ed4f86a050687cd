from fractions import Fraction

from evacflow import Edge, Network, StaticFlow
from evacflow.graphcore import ScaledGraph


def test_fractional_transits_scale_exactly():
    edges = [Edge(0, 0, 1, Fraction(1, 3)), Edge(1, 1, 2, Fraction(1, 2))]
    net = Network(3, edges, Fraction(1), [0], 2)
    g = ScaledGraph(net)
    arrays = g.residual_from_flow(StaticFlow(net))
    labels = g.bf_labels(arrays, 2)
    assert g.cost_fraction(int(labels[0])) == Fraction(5, 6)


def test_canonical_path_prefers_small_edge_ids():
    # two equal-cost routes 0 -> 3; the tie goes to edge ids (0, 1)
    edges = [Edge(0, 0, 1, Fraction(1)), Edge(1, 1, 3, Fraction(1)),
             Edge(2, 0, 2, Fraction(1)), Edge(3, 2, 3, Fraction(1))]
    net = Network(4, edges, Fraction(1), [0], 3)
    g = ScaledGraph(net)
    arrays = g.residual_from_flow(StaticFlow(net))
    labels = g.bf_labels(arrays, 3)
    idx = g.canonical_path(arrays, labels, 0, 3)
    assert [int(arrays.eid[i]) for i in idx] == [0, 1]


def test_labels_break_cost_ties_by_hops():
    # both routes cost 2; the packed label keeps the one-hop route
    edges = [Edge(0, 0, 1, Fraction(1)), Edge(1, 1, 2, Fraction(1)),
             Edge(2, 0, 2, Fraction(2))]
    net = Network(3, edges, Fraction(1), [0], 2)
    g = ScaledGraph(net)
    arrays = g.residual_from_flow(StaticFlow(net))
    labels = g.bf_labels(arrays, 2)
    assert int(labels[0]) % int(g.hop_base) == 1
    assert g.cost_fraction(int(labels[0])) == 2
