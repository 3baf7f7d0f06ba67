"""Elliptic curves in Legendre normal form y^2 = x(x-1)(x-lambda) over F_q.

Expanding the right side gives y^2 = x^3 - (1+lambda)x^2 + lambda*x, so the
chord-tangent law is the standard one for y^2 = x^3 + A x^2 + B x with
A = -(1+lambda), B = lambda.  Points are (x, y) pairs of element ranks, with
None for the point at infinity; methods accept FieldElements as well.

Invariants (j, point count, trace, group structure, supersingularity, the
Frobenius discriminant) are computed at construction so curve objects stay
immutable and freely shareable.  Point counting walks the quadratic character
over all of F_q, which is the honest O(q) choice at desk scale; the budget
guard documents the limit.  Use curve_for() to share curves per (field,
lambda) instead of re-counting.
"""

from __future__ import annotations

import math

import numpy as np

from .fields import FieldCtx, FieldElement
from .ntheory import factorint, fundamental_discriminant

__all__ = [
    "LegendreCurve",
    "BudgetError",
    "curve_for",
    "lambda_of",
    "j_invariant",
    "lambda_fiber",
    "agm_isogeny",
]

DEFAULT_POINT_BUDGET = 10**6
# full group-structure scans enumerate every point; cap the field size
DEFAULT_GROUP_BUDGET = 200_000


class BudgetError(RuntimeError):
    """An enumeration would exceed its configured budget."""


def _rank(ctx, v):
    if isinstance(v, FieldElement):
        if v.ctx != ctx:
            raise ValueError("element belongs to a different field context")
        return v.rank
    return int(v)


def lambda_of(a, b) -> FieldElement:
    """lambda(a, b) = b^2/a^2 for a vertex (a, b); never 0 or 1."""
    ctx = a.ctx if isinstance(a, FieldElement) else b.ctx
    ar, br = _rank(ctx, a), _rank(ctx, b)
    if ar == 0 or br == 0 or ar == br or br == ctx.neg(ar):
        raise ValueError("(a, b) is not a vertex: needs a, b != 0 and a != +-b")
    r = ctx.div(ctx.mul(br, br), ctx.mul(ar, ar))
    return FieldElement(ctx, r)


def j_invariant(ctx: FieldCtx, lam) -> FieldElement:
    """j(E_lambda) = 2^8 (lambda^2 - lambda + 1)^3 / (lambda^2 (lambda-1)^2)."""
    lr = _rank(ctx, lam)
    if lr in (0, ctx.one):
        raise ValueError("lambda must avoid 0 and 1")
    one = ctx.one
    l2 = ctx.mul(lr, lr)
    num = ctx.add(ctx.sub(l2, lr), one)
    num = ctx.pow_(num, 3)
    num = ctx.mul(ctx._int_rank(256), num)
    lm1 = ctx.sub(lr, one)
    den = ctx.mul(l2, ctx.mul(lm1, lm1))
    return FieldElement(ctx, ctx.div(num, den))


def lambda_fiber(ctx: FieldCtx, lam) -> set[FieldElement]:
    """The fiber of j through lambda; 6 values, fewer iff j is 0 or 1728."""
    lr = _rank(ctx, lam)
    if lr in (0, ctx.one):
        raise ValueError("lambda must avoid 0 and 1")
    one = ctx.one
    inv_l = ctx.inv(lr)
    om = ctx.sub(one, lr)                      # 1 - lambda
    vals = {
        lr,
        inv_l,
        om,
        ctx.inv(om),
        ctx.div(lr, ctx.neg(om)),              # lambda / (lambda - 1)
        ctx.mul(ctx.neg(om), inv_l),           # (lambda - 1) / lambda
    }
    return {FieldElement(ctx, v) for v in vals}


class LegendreCurve:
    """E_lambda with cached arithmetic invariants."""

    def __init__(self, ctx: FieldCtx, lam, point_budget=DEFAULT_POINT_BUDGET,
                 group_budget=DEFAULT_GROUP_BUDGET):
        self.ctx = ctx
        self.lam = _rank(ctx, lam)
        if self.lam in (0, ctx.one):
            raise ValueError("lambda must avoid 0 and 1")
        if ctx.q > point_budget:
            raise BudgetError(
                f"point counting over q={ctx.q} exceeds the budget {point_budget}")
        self.j = j_invariant(ctx, self.lam).rank
        self.point_count = self._count_points()
        self.trace = ctx.q + 1 - self.point_count
        self.is_supersingular = self.trace % ctx.p == 0
        if self.is_supersingular:
            self.frobenius_disc = None
        else:
            self.frobenius_disc = fundamental_discriminant(
                self.trace * self.trace - 4 * ctx.q)
        self._points = None
        self._group_budget = group_budget
        # eager for small fields per the construction contract; larger fields
        # compute on first access (idempotent, so benign under concurrency)
        self._group = self._group_structure() if ctx.q <= 2000 else None

    # -- counting -------------------------------------------------------

    def _curve_rhs_arr(self, xs):
        ctx = self.ctx
        t1 = ctx.sub_arr(xs, np.int64(ctx.one))
        t2 = ctx.sub_arr(xs, np.int64(self.lam))
        return ctx.mul_arr(ctx.mul_arr(xs, t1), t2)

    def _count_points(self):
        ctx = self.ctx
        xs = np.arange(ctx.q, dtype=np.int64)
        f = self._curve_rhs_arr(xs)
        return int(ctx.q + 1 + ctx.chi_table[f].sum(dtype=np.int64))

    def points(self):
        """All rational points, canonical order; cached after first call."""
        if self._points is None:
            ctx = self.ctx
            xs = np.arange(ctx.q, dtype=np.int64)
            f = self._curve_rhs_arr(xs)
            roots = ctx.sqrt_table[f]
            pts = [None]
            for x, r in zip(xs.tolist(), roots.tolist()):
                if r < 0:
                    continue
                pts.append((x, r))
                if r:
                    pts.append((x, ctx.neg(r)))
            assert len(pts) == self.point_count
            self._points = pts
        return self._points

    # -- group law ------------------------------------------------------

    def rhs(self, x):
        ctx = self.ctx
        x = _rank(ctx, x)
        return ctx.mul(ctx.mul(x, ctx.sub(x, ctx.one)), ctx.sub(x, self.lam))

    def contains(self, pt) -> bool:
        if pt is None:
            return True
        x, y = (_rank(self.ctx, pt[0]), _rank(self.ctx, pt[1]))
        return self.ctx.mul(y, y) == self.rhs(x)

    def point(self, x, y):
        """Validated affine point as a rank pair."""
        pt = (_rank(self.ctx, x), _rank(self.ctx, y))
        if not self.contains(pt):
            raise ValueError(f"({x}, {y}) is not on E_lambda")
        return pt

    def neg_point(self, pt):
        if pt is None:
            return None
        return (pt[0], self.ctx.neg(pt[1]))

    def add(self, p1, p2):
        """Chord-tangent addition; doubling slope (3x^2-2(1+l)x+l)/(2y)."""
        if p1 is None:
            return p2
        if p2 is None:
            return p1
        ctx = self.ctx
        x1, y1 = p1
        x2, y2 = p2
        if x1 == x2:
            if y1 == ctx.neg(y2):
                return None
            num = ctx.add(ctx.sub(ctx.mul(ctx._int_rank(3), ctx.mul(x1, x1)),
                                  ctx.mul(ctx.mul(ctx._int_rank(2),
                                                  ctx.add(ctx.one, self.lam)), x1)),
                          self.lam)
            m = ctx.div(num, ctx.mul(ctx._int_rank(2), y1))
        else:
            m = ctx.div(ctx.sub(y2, y1), ctx.sub(x2, x1))
        # x3 = m^2 + 1 + lambda - x1 - x2
        x3 = ctx.sub(ctx.sub(ctx.add(ctx.mul(m, m),
                                     ctx.add(ctx.one, self.lam)), x1), x2)
        y3 = ctx.sub(ctx.mul(m, ctx.sub(x1, x3)), y1)
        return (x3, y3)

    def smul(self, k, pt):
        if k < 0:
            return self.smul(-k, self.neg_point(pt))
        out = None
        base = pt
        while k:
            if k & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            k >>= 1
        return out

    def order_of(self, pt) -> int:
        """Order of a rational point, via the factored group order."""
        if pt is None:
            return 1
        m = self.point_count
        for ell, e in factorint(m).items():
            for _ in range(e):
                if self.smul(m // ell, pt) is None:
                    m //= ell
                else:
                    break
        return m

    @property
    def group_structure(self):
        """(n1, n2) with E(F_q) = Z/n1 x Z/n2 and n1 | n2."""
        if self._group is None:
            if self.ctx.q > self._group_budget:
                raise BudgetError(
                    f"group structure over q={self.ctx.q} exceeds the scan "
                    f"budget {self._group_budget}")
            self._group = self._group_structure()
        return self._group

    def _group_structure(self):
        """Scan points in canonical order, accumulating the lcm of orders.

        Once the lcm L satisfies 4L > #E the cofactor n1 = #E/n2 <= #E/L < 4
        is even, hence 2, so the scan exits early; otherwise the full scan
        pins the exponent n2 exactly.
        """
        n = self.point_count
        ctx = self.ctx
        lcm = 1
        xs = np.arange(ctx.q, dtype=np.int64)
        roots = ctx.sqrt_table[self._curve_rhs_arr(xs)]
        for x, r in zip(xs.tolist(), roots.tolist()):
            if r < 0:
                continue
            o = self.order_of((x, r))
            lcm = lcm * o // math.gcd(lcm, o)
            if 4 * lcm > n:
                return (2, n // 2)
        return (n // lcm, lcm)

    # -- descent and torsion ---------------------------------------------

    def two_descent(self, pt) -> bool:
        """P in 2E(F_q) iff x, x-1, x-lambda are all squares (0 is square)."""
        if pt is None:
            return True
        ctx = self.ctx
        x = _rank(ctx, pt[0])
        return (ctx.is_square(x)
                and ctx.is_square(ctx.sub(x, ctx.one))
                and ctx.is_square(ctx.sub(x, self.lam)))

    def four_torsion_x(self):
        """x-coordinates of the exact-order-4 points, tagged by field.

        Three rows keyed by the doubled 2-torsion point: above (0,0) the
        x-values are +-sqrt(lambda); above (1,0) they are 1 +- sqrt(1-lambda);
        above (lambda,0) they are lambda +- sqrt(lambda^2-lambda).  Radicands
        that are non-squares get their roots in the canonical quadratic
        extension, never symbolically.
        """
        ctx = self.ctx
        one = ctx.one
        lam = self.lam
        rows = []
        specs = [
            (0, 0, lam),                                  # base x=0 offset
            (one, one, ctx.sub(one, lam)),                # 1 +- sqrt(1-lambda)
            (lam, lam, ctx.sub(ctx.mul(lam, lam), lam)),  # lambda +- sqrt(l^2-l)
        ]
        ext = None
        emb = None
        for tt_x, base, radicand in specs:
            r = ctx.sqrt(radicand)
            if r is not None:
                field = ctx
                xs = (ctx.add(base, r), ctx.sub(base, r))
            else:
                if ext is None:
                    ext = ctx.quadratic_extension()
                    emb = ctx.embedding(ext)
                rr = ext.sqrt(int(emb[radicand]))
                b2 = int(emb[base])
                field = ext
                xs = (ext.add(b2, rr), ext.sub(b2, rr))
            rows.append({
                "two_torsion_x": tt_x,
                "rational": field is ctx,
                "field": field,
                "x_values": xs,
            })
        return rows


def trace_table(ctx: FieldCtx, budget=3000) -> np.ndarray:
    """Frobenius traces for every lambda, as an array indexed by rank.

    Entries at rank 0 and 1 (invalid lambdas) hold q+2 as a sentinel.  This
    is the O(q^2) all-curves character sum, cached per field; guarded because
    it is only meant for small-field sweeps.
    """
    cached = getattr(ctx, "_trace_table", None)
    if cached is not None:
        return cached
    q = ctx.q
    if q > budget:
        raise BudgetError(f"trace table over q={q} exceeds the budget {budget}")
    xs = np.arange(q, dtype=np.int64)
    u = ctx.mul_arr(xs, ctx.sub_arr(xs, np.int64(ctx.one)))  # x(x-1)
    chi = ctx.chi_table
    traces = np.full(q, q + 2, dtype=np.int64)
    lams = np.arange(q, dtype=np.int64)
    step = max(1, (1 << 22) // q)
    for lo in range(0, q, step):
        blk = lams[lo:lo + step]
        f = ctx.mul_arr(u[None, :], ctx.sub_arr(xs[None, :], blk[:, None]))
        traces[lo:lo + step] = -chi[f].sum(axis=1, dtype=np.int64)
    traces[0] = q + 2
    traces[ctx.one] = q + 2
    ctx._trace_table = traces
    return traces


def supersingular_lambdas(ctx: FieldCtx, budget=3000) -> np.ndarray:
    """Ranks of all lambda with E_lambda supersingular (p divides the trace)."""
    tr = trace_table(ctx, budget)
    ok = (tr % ctx.p == 0) & (tr != ctx.q + 2)
    return np.nonzero(ok)[0]


def curve_for(ctx: FieldCtx, lam, **kw) -> LegendreCurve:
    """Shared LegendreCurve per (field, lambda); avoids recounting points."""
    cache = getattr(ctx, "_curve_cache", None)
    if cache is None:
        cache = {}
        ctx._curve_cache = cache
    lr = _rank(ctx, lam)
    cur = cache.get(lr)
    if cur is None:
        cur = LegendreCurve(ctx, lr, **kw)
        cache[lr] = cur
    return cur


def agm_isogeny(ctx: FieldCtx, a, b, pt):
    """The degree-2 isogeny E_{lambda(a,b)} -> E_{lambda(a',b')} on an edge.

    phi(x,y) = ((ax+b)^2 / (x(a+b)^2), -a y (ax-b)(ax+b) / (x^2 (a+b)^3));
    infinity and (0,0) (the kernel) map to infinity.  Requires ab to be a
    nonzero square so the edge actually exists, and pt to be on the domain
    curve.
    """
    ar, br = _rank(ctx, a), _rank(ctx, b)
    lam = lambda_of(FieldElement(ctx, ar), FieldElement(ctx, br)).rank
    if not ctx.is_square(ctx.mul(ar, br)):
        raise ValueError("(a, b) has no children: ab is not a square")
    if pt is None:
        return None
    x, y = _rank(ctx, pt[0]), _rank(ctx, pt[1])
    lhs = ctx.mul(y, y)
    rhs = ctx.mul(ctx.mul(x, ctx.sub(x, ctx.one)), ctx.sub(x, lam))
    if lhs != rhs:
        raise ValueError("point is not on the domain curve")
    if x == 0:
        return None
    apb = ctx.add(ar, br)
    axb = ctx.add(ctx.mul(ar, x), br)
    axmb = ctx.sub(ctx.mul(ar, x), br)
    apb2 = ctx.mul(apb, apb)
    x_img = ctx.div(ctx.mul(axb, axb), ctx.mul(x, apb2))
    num = ctx.mul(ctx.mul(ar, y), ctx.mul(axmb, axb))
    den = ctx.mul(ctx.mul(x, x), ctx.mul(apb2, apb))
    y_img = ctx.neg(ctx.div(num, den))
    return (x_img, y_img)
