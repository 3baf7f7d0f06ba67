"""Stable textual exports of a built aquarium: DOT, GraphML, CSV edge list.

All writers iterate vertices and edges in canonical id order and contain no
timestamps or environment data, so re-running a fixed configuration
reproduces identical bytes.  Vertex labels are the coefficient strings of the
two coordinates joined by a comma ("2,1+2*t"), which is unambiguous for any
modulus because coefficient strings never contain commas.
"""

from __future__ import annotations

import numpy as np

from .aquarium import Aquarium
from .fields import FieldCtx

__all__ = ["write_dot", "write_graphml", "write_csv", "read_csv_edges"]

_TYPE_COLORS = {
    "isolated": "gray",
    "fish": "steelblue",
    "jellyfish": "purple",
    "turtle": "darkgreen",
    "acyclic": "darkorange",
}


def _labels(aq: Aquarium):
    ids = np.arange(aq.n_vertices, dtype=np.int64)
    a, b = aq.decode(ids)
    es = aq.ctx.elem_str
    return [f"{es(int(x))},{es(int(y))}" for x, y in zip(a, b)]


def write_dot(aq: Aquarium, fh, color_components=False):
    """One node line per vertex, one edge line per AGM edge."""
    labels = _labels(aq)
    colors = None
    if color_components:
        from .taxonomy import census, weak_components
        census(aq)
        _, wlab = weak_components(aq)
        types = aq._labels["types"]
        code = {ord("i"): "isolated", ord("f"): "fish", ord("j"): "jellyfish",
                ord("t"): "turtle", ord("a"): "acyclic"}
        colors = [_TYPE_COLORS[code[int(types[wlab[i]])]]
                  for i in range(aq.n_vertices)]
    fh.write("digraph aquarium {\n")
    for i, lab in enumerate(labels):
        if colors:
            fh.write(f'  "{lab}" [color={colors[i]}];\n')
        else:
            fh.write(f'  "{lab}";\n')
    src, dst = aq.edge_arrays()
    for u, v in zip(src.tolist(), dst.tolist()):
        fh.write(f'  "{labels[u]}" -> "{labels[v]}";\n')
    fh.write("}\n")


def write_graphml(aq: Aquarium, fh):
    labels = _labels(aq)
    fh.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    fh.write('<graphml xmlns="http://graphml.graphdrawing.org/xmlns">\n')
    fh.write('  <key id="label" for="node" attr.name="label" attr.type="string"/>\n')
    fh.write('  <graph id="aquarium" edgedefault="directed">\n')
    for i, lab in enumerate(labels):
        fh.write(f'    <node id="v{i}"><data key="label">{lab}</data></node>\n')
    src, dst = aq.edge_arrays()
    for k, (u, v) in enumerate(zip(src.tolist(), dst.tolist())):
        fh.write(f'    <edge id="e{k}" source="v{u}" target="v{v}"/>\n')
    fh.write("  </graph>\n")
    fh.write("</graphml>\n")


def write_csv(aq: Aquarium, fh):
    """Edge list "a,b,a',b'" with coefficient-string coordinates."""
    es = aq.ctx.elem_str
    fh.write("a,b,a',b'\n")
    src, dst = aq.edge_arrays()
    sa, sb = aq.decode(src)
    da, db = aq.decode(dst)
    for r in range(src.size):
        fh.write(f"{es(int(sa[r]))},{es(int(sb[r]))},"
                 f"{es(int(da[r]))},{es(int(db[r]))}\n")


def read_csv_edges(ctx: FieldCtx, fh):
    """Re-ingest a CSV edge list as a set of rank 4-tuples (a,b,a',b')."""
    header = fh.readline()
    if header.strip() != "a,b,a',b'":
        raise ValueError(f"unexpected CSV header {header!r}")
    out = set()
    for line in fh:
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"malformed CSV row {line!r}")
        out.add(tuple(ctx.parse_elem_str(p) for p in parts))
    return out
