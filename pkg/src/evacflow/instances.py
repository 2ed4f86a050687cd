"""Instance and flow files: exact-rational JSON, no floats ever.

An instance document carries `nodes`, `edges` [[tail, head, transit]],
`capacity`, `sources`, `sink`, and `supply` (node id, as a string key, to
value). `names` (display names per node) and `grid` (side plus sink
position of a generated grid) are optional. Numbers may be integers,
"p/q" strings, or exact decimal strings; decimal literals inside the JSON
are parsed from their textual form, so nothing goes through binary
floating point.

A flow document carries `horizon`, `step`, and `records` rows
[edge, tail, head, departure time, amount] sorted by (time, edge id).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .network import Edge, Network, SupplyFunction
from .oracle import TimeExpandedFlow, build_time_expanded
from .rational import json_rational, parse_rational


def _read_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh, parse_float=parse_rational)


def _write_json(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")


def load_instance(path) -> tuple[Network, SupplyFunction, dict]:
    """Read (network, supply, metadata); metadata holds `grid` if present."""
    doc = _read_json(path)
    for field in ("nodes", "edges", "capacity", "sources", "sink", "supply"):
        if field not in doc:
            raise ValueError("instance file lacks the %r field" % field)
    edges = [
        Edge(i, int(tail), int(head), parse_rational(transit))
        for i, (tail, head, transit) in enumerate(doc["edges"])
    ]
    names = doc.get("names")
    net = Network(
        n=int(doc["nodes"]),
        edges=edges,
        capacity=parse_rational(doc["capacity"]),
        sources=[int(v) for v in doc["sources"]],
        sink=int(doc["sink"]),
        names=list(names) if names is not None else None,
    )
    w = SupplyFunction({int(v): parse_rational(x) for v, x in doc["supply"].items()})
    meta = {k: doc[k] for k in ("grid",) if k in doc}
    return net, w, meta


def save_instance(path, net: Network, w: SupplyFunction, grid: dict | None = None) -> None:
    doc = {
        "nodes": net.n,
        "edges": [[e.tail, e.head, json_rational(e.transit)] for e in net.edges],
        "capacity": json_rational(net.capacity),
        "sources": sorted(net.sources),
        "sink": net.sink,
        "supply": {str(v): json_rational(x) for v, x in w.items()},
    }
    if net.names is not None:
        doc["names"] = list(net.names)
    if grid is not None:
        doc["grid"] = grid
    _write_json(path, doc)


def save_flow(path, flow: TimeExpandedFlow) -> None:
    rows = [
        [e, tail, head, json_rational(time), json_rational(amount)]
        for (e, tail, head, time, amount) in flow.records()
    ]
    # one record per line keeps flow files diff-able
    with open(path, "w", encoding="utf-8") as fh:
        fh.write('{\n  "horizon": %s,\n' % json.dumps(json_rational(flow.tenet.horizon)))
        fh.write('  "step": %s,\n' % json.dumps(json_rational(flow.tenet.step)))
        if rows:
            fh.write('  "records": [\n')
            fh.write(",\n".join("    " + json.dumps(row) for row in rows))
            fh.write("\n  ]\n}\n")
        else:
            fh.write('  "records": []\n}\n')


def load_flow(path, net: Network) -> TimeExpandedFlow:
    doc = _read_json(path)
    for field in ("horizon", "step", "records"):
        if field not in doc:
            raise ValueError("flow file lacks the %r field" % field)
    step = parse_rational(doc["step"])
    tenet = build_time_expanded(net, parse_rational(doc["horizon"]), step)
    amounts: dict = {}
    for row in doc["records"]:
        e, tail, head, time, amount = row
        e = int(e)
        if not 0 <= e < net.m:
            raise ValueError("record names unknown edge %d" % e)
        edge = net.edges[e]
        if int(tail) != edge.tail or int(head) != edge.head:
            raise ValueError("record endpoints do not match edge %d" % e)
        layer = parse_rational(time) / step
        if layer.denominator != 1 or layer < 0:
            raise ValueError("record time %s is off the step grid" % time)
        key = (e, int(layer))
        amounts[key] = amounts.get(key, Fraction(0)) + parse_rational(amount)
    amounts = {k: x for k, x in amounts.items() if x != 0}
    return TimeExpandedFlow(tenet=tenet, amounts=amounts)
