"""The AGM digraph over a finite field.

Vertices are pairs (a, b) with a, b != 0 and a != +-b; there is an edge
(a, b) -> ((a+b)/2, +-sqrt(ab)) whenever ab is a nonzero square, so
out-degrees are 0 or 2, and (a, b) has the two parents
(a + s, a - s), (a - s, a + s) with s = sqrt(a^2 - b^2) whenever that square
root exists, so in-degrees are 0 or 2 as well.

The builder is fully vectorised over dense vertex ids.  A vertex id encodes
(a, b) positionally: rows are the q-1 nonzero values of a in canonical
element order, columns the q-3 admissible b; adjacency lives in two flat
(n, 2) int32 arrays (children and parents, -1 for absent).  Backward
adjacency is computed independently from the parent formula and cross-checked
against the transpose of the forward edges on every build, which doubles as a
standing test of the parent criterion.

VertexExplorer walks the same graph without materialising it, which is how
component snapshots in big extension towers are taken.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .fields import FieldCtx, FieldElement, embed as _embed_elem

__all__ = [
    "Vertex",
    "Aquarium",
    "BuildBudgetError",
    "vertex_count",
    "vertices",
    "agm_children",
    "agm_parents",
    "scalar_act",
    "lift",
    "build",
    "VertexExplorer",
]

_CHUNK = 1 << 21
# a built aquarium costs ~16 bytes/vertex resident plus bounded chunk
# scratch; the default cap refuses anything that will not fit comfortably
# in 4 GB commodity memory.
DEFAULT_MEMORY_CAP = 4 * 10**9
_BYTES_PER_VERTEX = 40


class BuildBudgetError(RuntimeError):
    """The requested graph exceeds the configured memory budget."""


@dataclass(frozen=True)
class Vertex:
    """A point (a, b) of the vertex set; a, b != 0 and a != +-b."""

    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        a, b = self.a, self.b
        if a.ctx != b.ctx:
            raise ValueError("vertex coordinates from different fields")
        if a.rank == 0 or b.rank == 0 or a == b or a == -b:
            raise ValueError(f"({a}, {b}) violates a, b != 0, a != +-b")

    @property
    def ctx(self):
        return self.a.ctx

    def __iter__(self):
        return iter((self.a, self.b))

    def __str__(self):
        return f"({self.a},{self.b})"


def vertex_count(ctx: FieldCtx) -> int:
    return (ctx.q - 1) * (ctx.q - 3)


def vertices(ctx: FieldCtx):
    """All (q-1)(q-3) vertices exactly once, in canonical (id) order."""
    for ar in range(1, ctx.q):
        na = ctx.neg(ar)
        for br in range(1, ctx.q):
            if br == ar or br == na:
                continue
            yield Vertex(FieldElement(ctx, ar), FieldElement(ctx, br))


def agm_children(v: Vertex) -> set[Vertex]:
    """Both images ((a+b)/2, +-sqrt(ab)), or the empty set."""
    ctx = v.ctx
    ar, br = v.a.rank, v.b.rank
    s = ctx.sqrt(ctx.mul(ar, br))
    if s is None or s == 0:
        return set()
    a2 = ctx.half(ctx.add(ar, br))
    return {
        Vertex(FieldElement(ctx, a2), FieldElement(ctx, s)),
        Vertex(FieldElement(ctx, a2), FieldElement(ctx, ctx.neg(s))),
    }


def agm_parents(v: Vertex) -> set[Vertex]:
    """The two preimages (a+s, a-s), (a-s, a+s), s = sqrt(a^2-b^2), if any."""
    ctx = v.ctx
    ar, br = v.a.rank, v.b.rank
    d = ctx.sub(ctx.mul(ar, ar), ctx.mul(br, br))
    s = ctx.sqrt(d)
    if s is None:
        return set()
    p, m = ctx.add(ar, s), ctx.sub(ar, s)
    return {
        Vertex(FieldElement(ctx, p), FieldElement(ctx, m)),
        Vertex(FieldElement(ctx, m), FieldElement(ctx, p)),
    }


def scalar_act(gamma: FieldElement, v: Vertex) -> Vertex:
    """(a, b) -> (gamma*a, gamma*b); commutes with the AGM map."""
    if gamma.rank == 0:
        raise ValueError("scalar action requires gamma != 0")
    return Vertex(gamma * v.a, gamma * v.b)


def lift(v: Vertex, dst: FieldCtx) -> Vertex:
    """Image of a vertex under the canonical field embedding."""
    return Vertex(_embed_elem(v.a, dst), _embed_elem(v.b, dst))


class Aquarium:
    """The built AGM digraph with forward and backward adjacency."""

    def __init__(self, ctx, children, parents, edge_count):
        self.ctx = ctx
        self.n_vertices = children.shape[0]
        self.children = children      # (n, 2) int32, -1 for absent
        self.parents = parents        # (n, 2) int32, -1 for absent
        self.edge_count = edge_count
        self._csr = None
        self._labels = {}

    # -- id <-> coordinates ----------------------------------------------

    def decode(self, ids):
        """Vectorised id -> (a_rank, b_rank)."""
        ctx = self.ctx
        q = ctx.q
        ids = np.asarray(ids, dtype=np.int64)
        a = ids // (q - 3) + 1
        na = ctx.neg_arr(a)
        lo = np.minimum(a, na)
        hi = np.maximum(a, na)
        b = ids % (q - 3) + 1
        b = b + (b >= lo)
        b = b + (b >= hi)
        return a, b

    def encode(self, a, b):
        """Vectorised (a_rank, b_rank) -> id; coordinates must be valid."""
        ctx = self.ctx
        q = ctx.q
        na = ctx.neg_arr(a)
        lo = np.minimum(a, na)
        hi = np.maximum(a, na)
        col = b - 1 - (b > lo) - (b > hi)
        return (a - 1) * (q - 3) + col

    def vertex_id(self, v: Vertex) -> int:
        a = np.int64(v.a.rank)
        return int(self.encode(a, np.int64(v.b.rank)))

    def vertex(self, vid: int) -> Vertex:
        a, b = self.decode(np.int64(vid))
        return Vertex(FieldElement(self.ctx, int(a)), FieldElement(self.ctx, int(b)))

    # -- adjacency ---------------------------------------------------------

    def children_of(self, vid: int) -> list[int]:
        row = self.children[vid]
        return [int(c) for c in row if c >= 0]

    def parents_of(self, vid: int) -> list[int]:
        row = self.parents[vid]
        return [int(c) for c in row if c >= 0]

    def edge_arrays(self):
        """(src, dst) arrays of all edges, grouped by source id."""
        has = self.children[:, 0] >= 0
        src = np.repeat(np.arange(self.n_vertices, dtype=np.int64)[has], 2)
        dst = self.children[has].ravel().astype(np.int64)
        return src, dst

    def out_degrees(self):
        return np.where(self.children[:, 0] >= 0, 2, 0)

    def in_degrees(self):
        return np.where(self.parents[:, 0] >= 0, 2, 0)


def build(ctx: FieldCtx, memory_cap=None, validate=True) -> Aquarium:
    """Construct A(F_q); O(q^2) time and memory, guarded by memory_cap bytes.

    The AGM sign split is deterministic: child slot 0 carries the canonical
    square root, slot 1 its negative.  Parent slot 0 is (a+s, a-s).
    """
    if memory_cap is None:
        memory_cap = int(os.environ.get("AGM_MEMORY_CAP", DEFAULT_MEMORY_CAP))
    n = vertex_count(ctx)
    if n * _BYTES_PER_VERTEX > memory_cap:
        raise BuildBudgetError(
            f"A(F_{ctx.q}) needs ~{n * _BYTES_PER_VERTEX / 1e9:.1f} GB "
            f"({n} vertices), over the cap {memory_cap / 1e9:.1f} GB")
    if n >= 2**31:
        raise BuildBudgetError("vertex ids would overflow 32 bits")

    q = ctx.q
    children = np.full((n, 2), -1, dtype=np.int32)
    parents = np.full((n, 2), -1, dtype=np.int32)
    sqrt_t = ctx.sqrt_table
    aq = Aquarium(ctx, children, parents, 0)
    edge_count = 0

    for lo_id in range(0, n, _CHUNK):
        ids = np.arange(lo_id, min(lo_id + _CHUNK, n), dtype=np.int64)
        a, b = aq.decode(ids)

        prod = ctx.mul_arr(a, b)
        s = sqrt_t[prod]
        has = s >= 0
        if has.any():
            ah, bh, sh = a[has], b[has], s[has]
            a2 = ctx.half_arr(ctx.add_arr(ah, bh))
            kid0 = aq.encode(a2, sh)
            kid1 = aq.encode(a2, ctx.neg_arr(sh))
            rows = ids[has]
            children[rows, 0] = kid0
            children[rows, 1] = kid1
            edge_count += 2 * int(has.sum())

        diff = ctx.sub_arr(ctx.mul_arr(a, a), ctx.mul_arr(b, b))
        sp = sqrt_t[diff]
        hasp = sp >= 0
        if hasp.any():
            ap, spp = a[hasp], sp[hasp]
            pa = ctx.add_arr(ap, spp)
            pb = ctx.sub_arr(ap, spp)
            rows = ids[hasp]
            parents[rows, 0] = aq.encode(pa, pb)
            parents[rows, 1] = aq.encode(pb, pa)

    aq.edge_count = edge_count
    if validate:
        _cross_check(aq)
    return aq


def _cross_check(aq: Aquarium):
    """Backward adjacency must equal the transpose of forward adjacency."""
    src, dst = aq.edge_arrays()
    hasp = aq.parents[:, 0] >= 0
    p_dst = np.repeat(np.arange(aq.n_vertices, dtype=np.int64)[hasp], 2)
    p_src = aq.parents[hasp].ravel().astype(np.int64)
    if src.shape != p_src.shape:
        raise AssertionError(
            f"edge count mismatch: {src.size} forward vs {p_src.size} backward")
    fwd = np.lexsort((dst, src))
    bwd = np.lexsort((p_dst, p_src))
    if not (np.array_equal(src[fwd], p_src[bwd])
            and np.array_equal(dst[fwd], p_dst[bwd])):
        raise AssertionError("parent adjacency is not the transpose of child adjacency")
    if src.size and (src == dst).any():
        raise AssertionError("self-loop detected")


class VertexExplorer:
    """On-demand adjacency over (a, b) rank pairs; no graph materialised."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx

    def is_vertex(self, v) -> bool:
        a, b = v
        ctx = self.ctx
        return a != 0 and b != 0 and a != b and b != ctx.neg(a)

    def children(self, v):
        ctx = self.ctx
        a, b = v
        s = ctx.sqrt(ctx.mul(a, b))
        if s is None or s == 0:
            return []
        a2 = ctx.half(ctx.add(a, b))
        return [(a2, s), (a2, ctx.neg(s))]

    def parents(self, v):
        ctx = self.ctx
        a, b = v
        s = ctx.sqrt(ctx.sub(ctx.mul(a, a), ctx.mul(b, b)))
        if s is None:
            return []
        return [(ctx.add(a, s), ctx.sub(a, s)), (ctx.sub(a, s), ctx.add(a, s))]

    def component(self, v0, max_vertices=500_000):
        """Undirected BFS from v0.

        Returns (vertices, children_map, truncated): vertex set, the forward
        adjacency restricted to it, and whether the budget cut the walk short.
        """
        seen = {v0}
        frontier = [v0]
        kids = {}
        truncated = False
        while frontier:
            nxt = []
            for v in frontier:
                cs = self.children(v)
                kids[v] = cs
                for w in cs + self.parents(v):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            if len(seen) > max_vertices:
                truncated = True
                break
            frontier = nxt
        if not truncated:
            for v in list(seen):
                if v not in kids:
                    kids[v] = self.children(v)
        return seen, kids, truncated

    def ball(self, v0, radius):
        """Vertices within undirected distance <= radius of v0."""
        seen = {v0}
        frontier = [v0]
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for w in self.children(v) + self.parents(v):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen
