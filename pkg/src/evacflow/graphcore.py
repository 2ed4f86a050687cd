"""Integer-scaled residual graph engine.

Transit times are scaled by the lcm of their denominators so all arc costs
are int64. A Bellman-Ford label packs (cost, hops) into a single integer,
``cost * hop_base + hops`` with ``hop_base > n``, so one numpy ``minimum``
relaxes both lexicographically at once. The hops component breaks cost ties
toward fewer arcs and keeps zero-cost residual cycles from causing churn.

Canonical paths are extracted by walking, from the origin, the tight arcs
(label[x] == arc shift + label[head]) and always taking the smallest edge
id. On the tight subgraph hops strictly decrease along every such arc, so
the walk is simple and terminates at the target; choosing the minimal edge
id at each step yields the lexicographically smallest tight arc sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import NegativeCycleError

INF = np.int64(2**62)
# labels at or above this are treated as unreachable; relaxations out of
# unreachable nodes can dip below INF but never anywhere near real labels
INF_CUTOFF = np.int64(2**61)


@dataclass
class ResidualArrays:
    """Flat arc table of a residual network."""

    frm: np.ndarray
    to: np.ndarray
    shift: np.ndarray  # packed relaxation delta: cost * hop_base + 1
    eid: np.ndarray
    backward: np.ndarray

    _order: np.ndarray | None = None
    _starts: np.ndarray | None = None

    def adjacency(self, n: int):
        """Arc indices grouped by tail node, ascending edge id within."""
        if self._order is None:
            self._order = np.lexsort((self.eid, self.frm))
            counts = np.bincount(self.frm, minlength=n)
            self._starts = np.concatenate(([0], np.cumsum(counts)))
        return self._order, self._starts


class ScaledGraph:
    """Per-network constants for building residual arc tables."""

    def __init__(self, net):
        self.net = net
        self.n = net.n
        self.m = net.m
        denoms = [e.transit.denominator for e in net.edges]
        self.scale = lcm(*denoms) if denoms else 1
        self.tails = np.fromiter(
            (e.tail for e in net.edges), dtype=np.int64, count=net.m
        )
        self.heads = np.fromiter(
            (e.head for e in net.edges), dtype=np.int64, count=net.m
        )
        self.costs = np.fromiter(
            (int(e.transit * self.scale) for e in net.edges),
            dtype=np.int64,
            count=net.m,
        )
        self.eids = np.arange(net.m, dtype=np.int64)
        self.hop_base = np.int64(self.n + 2)
        self.fwd_shift = self.costs * self.hop_base + 1
        self.bwd_shift = -self.costs * self.hop_base + 1

    def cost_fraction(self, packed: int) -> Fraction:
        """Unpack the cost part of a label into an exact rational."""
        hb = int(self.hop_base)
        return Fraction(int(packed) // hb, self.scale)

    def residual_from_mask(self, mask: np.ndarray) -> ResidualArrays:
        """Residual arcs when every edge carries either 0 or full capacity.

        ``mask[e]`` True means edge ``e`` is saturated: it contributes only
        its backward arc. Unsaturated edges contribute only the forward arc.
        """
        fwd = ~mask
        frm = np.concatenate((self.tails[fwd], self.heads[mask]))
        to = np.concatenate((self.heads[fwd], self.tails[mask]))
        shift = np.concatenate((self.fwd_shift[fwd], self.bwd_shift[mask]))
        eid = np.concatenate((self.eids[fwd], self.eids[mask]))
        backward = np.concatenate(
            (np.zeros(int(fwd.sum()), bool), np.ones(int(mask.sum()), bool))
        )
        return ResidualArrays(frm, to, shift, eid, backward)

    def residual_from_flow(self, flow) -> ResidualArrays:
        """Residual arcs for arbitrary rational amounts in [0, u].

        A partially used edge contributes both directions.
        """
        u = self.net.capacity
        fwd = np.fromiter(
            (flow.amount(e) < u for e in range(self.m)), dtype=bool, count=self.m
        )
        bwd = np.fromiter(
            (flow.amount(e) > 0 for e in range(self.m)), dtype=bool, count=self.m
        )
        frm = np.concatenate((self.tails[fwd], self.heads[bwd]))
        to = np.concatenate((self.heads[fwd], self.tails[bwd]))
        shift = np.concatenate((self.fwd_shift[fwd], self.bwd_shift[bwd]))
        eid = np.concatenate((self.eids[fwd], self.eids[bwd]))
        backward = np.concatenate(
            (np.zeros(int(fwd.sum()), bool), np.ones(int(bwd.sum()), bool))
        )
        return ResidualArrays(frm, to, shift, eid, backward)

    def bf_labels(self, res: ResidualArrays, target: int) -> np.ndarray:
        """Packed (cost, hops) labels of cheapest residual walks to target.

        Raises NegativeCycleError when labels on the reachable side keep
        improving past the pass bound.
        """
        label = np.full(self.n, INF, dtype=np.int64)
        label[target] = 0
        frm, to, shift = res.frm, res.to, res.shift
        converged = False
        for _ in range(self.n):
            prev = label.copy()
            cand = label[to] + shift
            np.minimum.at(label, frm, cand)
            label[label >= INF_CUTOFF] = INF
            if np.array_equal(label, prev):
                converged = True
                break
        if not converged:
            prev = label.copy()
            cand = label[to] + shift
            np.minimum.at(label, frm, cand)
            label[label >= INF_CUTOFF] = INF
            if not np.array_equal(label, prev):
                raise NegativeCycleError(
                    "negative-cost residual cycle reaches the target"
                )
        return label

    def has_negative_cycle(self, res: ResidualArrays) -> bool:
        """Detect a negative-cost cycle anywhere in the residual network."""
        if res.frm.size == 0:
            return False
        label = np.zeros(self.n, dtype=np.int64)
        frm, to, shift = res.frm, res.to, res.shift
        for _ in range(self.n):
            prev = label.copy()
            np.minimum.at(label, frm, label[to] + shift)
            if np.array_equal(label, prev):
                return False
        return True

    def canonical_path(
        self, res: ResidualArrays, label: np.ndarray, origin: int, target: int
    ) -> list[int]:
        """Arc indices of the canonical cheapest path origin -> target.

        Pre: label[origin] < INF_CUTOFF.
        """
        order, starts = res.adjacency(self.n)
        out = []
        x = origin
        for _ in range(self.n + 1):
            if x == target:
                return out
            chosen = -1
            for pos in range(starts[x], starts[x + 1]):
                idx = order[pos]
                head = res.to[idx]
                if label[head] >= INF_CUTOFF:
                    continue
                if label[x] == res.shift[idx] + label[head]:
                    chosen = idx
                    break
            if chosen < 0:
                raise AssertionError("label table admits no tight arc at %d" % x)
            out.append(int(chosen))
            x = int(res.to[chosen])
        raise AssertionError("tight-arc walk did not terminate")
