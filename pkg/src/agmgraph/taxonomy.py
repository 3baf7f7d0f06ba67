"""Component decomposition and classification of an AGM graph.

Weak components and strongly connected components come from
scipy.sparse.csgraph (C implementations of the standard O(V+E) algorithms);
labels are then renumbered by smallest contained vertex id so output ordering
is deterministic.  Everything else is vectorised over the label arrays, so a
census of a 25-million-vertex graph stays in numpy.

Component types:

  isolated  - a single vertex with no edges
  fish      - 4 vertices: two swapped sources (a,b),(b,a) over two shared
              sign-opposite sinks; the basic building block
  turtle    - a nontrivial component that is one strongly connected piece
  jellyfish - not strongly connected but containing a nontrivial SCC; each
              such SCC (a "head") must be a simple cycle, and a violation
              aborts the run because it would falsify the structure theory
  acyclic   - anything else with more than one vertex

Size-4 components that fail the fish pattern are classified acyclic and
flagged rather than assumed impossible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .aquarium import Aquarium

__all__ = [
    "ComponentType",
    "Component",
    "Census",
    "StructuralViolation",
    "weak_components",
    "strong_components",
    "census",
    "component_ids",
    "classify_component",
    "heads_of",
    "orbit_multiplicity",
]


class ComponentType(str, enum.Enum):
    ISOLATED = "isolated"
    FISH = "fish"
    JELLYFISH = "jellyfish"
    TURTLE = "turtle"
    ACYCLIC = "acyclic"

    def __str__(self):
        return self.value


class StructuralViolation(AssertionError):
    """A component shape that the structure theorems rule out."""


@dataclass
class Component:
    """One classified weak component."""

    ids: np.ndarray
    ctype: ComponentType
    sccs: list[np.ndarray]
    heads: list[list[int]] = field(default_factory=list)

    @property
    def size(self):
        return int(self.ids.size)


@dataclass
class Census:
    """Aggregate component statistics of one aquarium."""

    field_spec: str
    q: int
    n_vertices: int
    n_edges: int
    counts: dict
    jellyfish_count: int
    size_histogram: dict
    head_length_histogram: dict
    turtle_vertex_ids: np.ndarray
    flags: list

    @property
    def component_count(self):
        return sum(self.counts.values())

    def to_dict(self):
        return {
            "schema": 1,
            "field": self.field_spec,
            "q": self.q,
            "vertices": self.n_vertices,
            "edges": self.n_edges,
            "components": {str(k): int(v) for k, v in self.counts.items()},
            "component_count": int(self.component_count),
            "jellyfish": int(self.jellyfish_count),
            "size_histogram": {str(k): int(v)
                               for k, v in sorted(self.size_histogram.items())},
            "head_length_histogram": {str(k): int(v)
                                      for k, v in sorted(self.head_length_histogram.items())},
            "turtle_vertices": int(self.turtle_vertex_ids.size),
            "flags": list(self.flags),
        }


# ----------------------------------------------------------------------

def _csr(aq: Aquarium) -> csr_matrix:
    if aq._csr is None:
        has = aq.children[:, 0] >= 0
        outdeg = np.where(has, 2, 0).astype(np.int64)
        indptr = np.concatenate(([0], np.cumsum(outdeg)))
        indices = aq.children[has].ravel().astype(np.int32)
        data = np.ones(indices.size, dtype=np.int8)
        aq._csr = csr_matrix((data, indices, indptr),
                             shape=(aq.n_vertices, aq.n_vertices))
    return aq._csr


def _canonical_relabel(labels: np.ndarray, n: int):
    """Renumber component labels by smallest contained vertex id."""
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first, kind="stable")
    new_of_old = np.empty(n, dtype=labels.dtype)
    new_of_old[order] = np.arange(n, dtype=labels.dtype)
    return new_of_old[labels]


def weak_components(aq: Aquarium):
    """(count, labels): the undirected-component partition."""
    hit = aq._labels.get("weak")
    if hit is None:
        if aq.n_vertices == 0:
            hit = (0, np.empty(0, dtype=np.int32))
        else:
            n, labels = connected_components(_csr(aq), directed=True,
                                             connection="weak")
            hit = (n, _canonical_relabel(labels, n))
        aq._labels["weak"] = hit
    return hit


def strong_components(aq: Aquarium):
    """(count, labels): the SCC partition (trivial SCCs included)."""
    hit = aq._labels.get("strong")
    if hit is None:
        if aq.n_vertices == 0:
            hit = (0, np.empty(0, dtype=np.int32))
        else:
            n, labels = connected_components(_csr(aq), directed=True,
                                             connection="strong")
            hit = (n, _canonical_relabel(labels, n))
        aq._labels["strong"] = hit
    return hit


# ----------------------------------------------------------------------

def _fish_pattern_ok(aq: Aquarium, rows: np.ndarray) -> np.ndarray:
    """Vectorised fish check on (k, 4) arrays of component member ids.

    A fish has two sources (a,b), (b,a) with in-degree 0 sharing both
    children, and two sinks sharing their first coordinate with opposite
    second coordinates.
    """
    k = rows.shape[0]
    if k == 0:
        return np.zeros(0, dtype=bool)
    od = (aq.children[rows] >= 0).sum(axis=2)  # (k, 4) in {0, 2}
    ok = (od == 2).sum(axis=1) == 2
    ok &= (od == 0).sum(axis=1) == 2
    # order member ids: sources first, then sinks
    order = np.argsort(-od, axis=1, kind="stable")
    sorted_ids = np.take_along_axis(rows, order, axis=1)
    src = sorted_ids[:, :2]
    snk = sorted_ids[:, 2:]
    sa, sb = aq.decode(src.ravel())
    sa = sa.reshape(k, 2)
    sb = sb.reshape(k, 2)
    ok &= (sa[:, 0] == sb[:, 1]) & (sb[:, 0] == sa[:, 1])
    ka, kb = aq.decode(snk.ravel())
    ka = ka.reshape(k, 2)
    kb = kb.reshape(k, 2)
    ok &= (ka[:, 0] == ka[:, 1])
    ok &= kb[:, 0] == aq.ctx.neg_arr(kb[:, 1])
    # sources have in-degree 0, sinks in-degree 2, and children sets match
    ok &= (aq.parents[src][:, :, 0] < 0).all(axis=1)
    ok &= (aq.parents[snk][:, :, 0] >= 0).all(axis=1)
    kid0 = np.sort(aq.children[src[:, 0]], axis=1)
    kid1 = np.sort(aq.children[src[:, 1]], axis=1)
    both = np.sort(snk, axis=1)
    ok &= (kid0 == kid1).all(axis=1) & (kid0 == both).all(axis=1)
    return ok


def census(aq: Aquarium, check_heads=True) -> Census:
    """Classify every weak component and aggregate the statistics.

    With check_heads (the default), every nontrivial SCC inside a jellyfish
    is verified to be a simple cycle; a violation raises StructuralViolation
    with a witness vertex, because it would falsify the classification
    theorems this harness exists to test.
    """
    n = aq.n_vertices
    n_weak, wlab = weak_components(aq)
    n_scc, slab = strong_components(aq)

    comp_size = np.bincount(wlab, minlength=n_weak).astype(np.int64)
    scc_size = np.bincount(slab, minlength=n_scc).astype(np.int64)
    in_cycle = scc_size[slab] > 1 if n else np.empty(0, dtype=bool)

    comp_has_cycle = np.zeros(n_weak, dtype=bool)
    comp_has_cycle[wlab[in_cycle]] = True

    # a component is a turtle iff one of its SCCs covers it entirely
    scc_comp = np.empty(n_scc, dtype=wlab.dtype) if n_scc else np.empty(0, dtype=np.int32)
    scc_comp[slab] = wlab
    nontrivial = np.nonzero(scc_size > 1)[0]
    turtle_comp = np.zeros(n_weak, dtype=bool)
    covers = nontrivial[scc_size[nontrivial] == comp_size[scc_comp[nontrivial]]]
    turtle_comp[scc_comp[covers]] = True

    types = np.full(n_weak, ord("a"), dtype=np.uint8)  # acyclic default
    types[comp_size == 1] = ord("i")
    types[comp_has_cycle & turtle_comp] = ord("t")
    types[comp_has_cycle & ~turtle_comp] = ord("j")

    flags = []
    # fish detection among size-4 acyclic components
    cand = np.nonzero((comp_size == 4) & (types == ord("a")))[0]
    if cand.size:
        is_cand = np.zeros(n_weak, dtype=bool)
        is_cand[cand] = True
        member_mask = is_cand[wlab]
        members = np.nonzero(member_mask)[0]
        order = np.argsort(wlab[members], kind="stable")
        rows = members[order].reshape(-1, 4)
        ok = _fish_pattern_ok(aq, rows)
        comps_sorted = wlab[rows[:, 0]]
        types[comps_sorted[ok]] = ord("f")
        if (~ok).any():
            bad = comps_sorted[~ok]
            flags.append(
                f"{bad.size} size-4 component(s) fail the fish pattern "
                f"(kept acyclic); first witness component {int(bad[0])}")

    # jellyfish heads must be simple cycles
    if check_heads and n:
        jelly_vertex = (types[wlab] == ord("j")) & in_cycle
        if jelly_vertex.any():
            src, dst = aq.edge_arrays()
            same = slab[src] == slab[dst]
            keep = same & jelly_vertex[src]
            od_in = np.zeros(n, dtype=np.int64)
            id_in = np.zeros(n, dtype=np.int64)
            np.add.at(od_in, src[keep], 1)
            np.add.at(id_in, dst[keep], 1)
            bad = np.nonzero(jelly_vertex & ((od_in != 1) | (id_in != 1)))[0]
            if bad.size:
                w = aq.vertex(int(bad[0]))
                raise StructuralViolation(
                    f"jellyfish head is not a simple cycle at vertex {w} "
                    f"(id {int(bad[0])}, in-SCC degrees "
                    f"out={int(od_in[bad[0]])} in={int(id_in[bad[0]])})")

    # aggregate
    tcounts = {t: int((types == ord(c)).sum()) for t, c in
               ((ComponentType.ISOLATED, "i"), (ComponentType.FISH, "f"),
                (ComponentType.JELLYFISH, "j"), (ComponentType.TURTLE, "t"),
                (ComponentType.ACYCLIC, "a"))}
    sizes, counts = (np.unique(comp_size, return_counts=True)
                     if n_weak else (np.empty(0, int), np.empty(0, int)))
    size_hist = {int(s): int(c) for s, c in zip(sizes, counts)}

    jelly_sccs = nontrivial[types[scc_comp[nontrivial]] == ord("j")]
    hl, hc = np.unique(scc_size[jelly_sccs], return_counts=True)
    head_hist = {int(a): int(b) for a, b in zip(hl, hc)}

    turtle_ids = np.nonzero(types[wlab] == ord("t"))[0] if n else np.empty(0, int)

    acyc = np.nonzero(types == ord("a"))[0]
    odd_sizes = acyc[(comp_size[acyc] < 4) | (comp_size[acyc] % 4 != 0)]
    if odd_sizes.size:
        flags.append(
            f"{odd_sizes.size} acyclic component(s) with size not a positive "
            f"multiple of 4; sizes include "
            f"{sorted(set(int(s) for s in comp_size[odd_sizes][:8]))}")

    cen = Census(
        field_spec=aq.ctx.spec_str(),
        q=aq.ctx.q,
        n_vertices=n,
        n_edges=aq.edge_count,
        counts=tcounts,
        jellyfish_count=tcounts[ComponentType.JELLYFISH],
        size_histogram=size_hist,
        head_length_histogram=head_hist,
        turtle_vertex_ids=turtle_ids,
        flags=flags,
    )
    aq._labels["types"] = types
    assert sum(size_hist[s] * s for s in size_hist) == n
    return cen


# ----------------------------------------------------------------------

def component_ids(aq: Aquarium, vid: int) -> np.ndarray:
    _, wlab = weak_components(aq)
    return np.nonzero(wlab == wlab[vid])[0]


def classify_component(aq: Aquarium, vid: int) -> Component:
    """Materialise and classify the weak component containing vid."""
    if "types" not in aq._labels:
        census(aq)
    _, wlab = weak_components(aq)
    _, slab = strong_components(aq)
    types = aq._labels["types"]
    ids = np.nonzero(wlab == wlab[vid])[0]
    code = chr(types[wlab[vid]])
    ctype = {"i": ComponentType.ISOLATED, "f": ComponentType.FISH,
             "j": ComponentType.JELLYFISH, "t": ComponentType.TURTLE,
             "a": ComponentType.ACYCLIC}[code]
    sl = slab[ids]
    sccs = [ids[sl == s] for s in np.unique(sl)]
    comp = Component(ids=ids, ctype=ctype, sccs=sccs)
    if ctype is ComponentType.JELLYFISH:
        comp.heads = heads_of(aq, comp)
    return comp


def heads_of(aq: Aquarium, comp: Component) -> list[list[int]]:
    """The nontrivial SCCs of a jellyfish as ordered cycles.

    The successor of a head vertex is its unique child inside the SCC;
    cycles start at their smallest vertex id.
    """
    if comp.ctype is not ComponentType.JELLYFISH:
        raise ValueError("heads are defined for jellyfish components")
    _, slab = strong_components(aq)
    heads = []
    for scc in comp.sccs:
        if scc.size <= 1:
            continue
        members = set(int(x) for x in scc)
        start = int(scc.min())
        cycle = [start]
        cur = start
        while True:
            nxts = [c for c in aq.children_of(cur) if c in members]
            if len(nxts) != 1:
                raise StructuralViolation(
                    f"head vertex {aq.vertex(cur)} has {len(nxts)} successors "
                    f"inside its SCC (expected exactly 1)")
            cur = nxts[0]
            if cur == start:
                break
            cycle.append(cur)
            if len(cycle) > scc.size:
                raise StructuralViolation("head walk escaped its SCC")
        if len(cycle) != scc.size:
            raise StructuralViolation(
                f"head cycle length {len(cycle)} != SCC size {scc.size}")
        heads.append(cycle)
    heads.sort(key=lambda c: c[0])
    return heads


def orbit_multiplicity(aq: Aquarium, head: list[int]):
    """(M_H, n_gamma) for a head cycle.

    M_H counts the distinct images of the head's vertex set under the scalar
    action of the multiplicative group; n_gamma = (q-1)/M_H is the order of
    the stabilizer.
    """
    ctx = aq.ctx
    ids = np.asarray(head, dtype=np.int64)
    a, b = aq.decode(ids)
    images = set()
    for g in range(1, ctx.q):
        ga = ctx.mul_arr(a, np.int64(g))
        gb = ctx.mul_arr(b, np.int64(g))
        img = aq.encode(ga, gb)
        img.sort()
        images.add(img.tobytes())
    m = len(images)
    assert (ctx.q - 1) % m == 0
    return m, (ctx.q - 1) // m
