"""Exact arithmetic in odd finite fields F_{p^n}.

A field is presented by an odd prime p, an extension degree n >= 1, and a
monic irreducible modulus of degree n over Z/p.  Elements are residue classes
written against the generator t: coefficient sequences (c0, c1, ..., c_{n-1})
with every coefficient reduced mod p.

Internally each element is identified with its *rank*, the position of its
coefficient sequence in lexicographic order:

    rank = c0 * p^(n-1) + c1 * p^(n-2) + ... + c_{n-1}

Integer order on ranks therefore coincides with the canonical element order,
which is what fixes canonical square roots and reproducible embeddings.  For
prime fields the rank is the residue itself.

FieldCtx exposes the arithmetic twice: scalar operations on ranks, and numpy
array operations over rank vectors.  The array form is what the graph builder
uses; per-element lookup tables (discrete log/exp for extension
multiplication, square roots, the quadratic character) keep it allocation-flat
over millions of elements.  FieldElement is a small operator-overloading
wrapper around (ctx, rank) for scalar work.  Both are immutable.

Field specification strings: "13" is the prime field, "5^3" an extension with
the default modulus, "3^2;modulus=1,0,1" pins the modulus (coefficients
c0,...,cn listed low degree first, leading coefficient 1).
"""

from __future__ import annotations

import numpy as np

from .ntheory import factorint, is_prime

__all__ = [
    "FieldCtx",
    "FieldElement",
    "FieldError",
    "field_new",
    "parse_field_spec",
    "embed",
]

# Extension fields precompute O(q) lookup tables; refuse sizes where that
# stops being a desk-scale object.  Prime fields only ever build the O(q)
# square-root table, lazily.
DEFAULT_MAX_TABLE_Q = 1 << 23

_LOG_ZERO = 0  # _log[0] is unused; multiplication masks zero operands


class FieldError(ValueError):
    """Invalid field construction or misuse of field arithmetic."""


# ----------------------------------------------------------------------
# polynomial helpers over Z/p (dense little-endian coefficient tuples)

def _poly_trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _poly_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_modred(out, mod, p)


def _poly_modred(a, mod, p):
    a = list(a)
    n = len(mod) - 1
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i] % p
        if c:
            for j in range(n + 1):
                a[i - n + j] = (a[i - n + j] - c * mod[j]) % p
    return _poly_trim(tuple(c % p for c in a[:n] + [0] * (n - len(a))))[:n] or (0,)


def _poly_powmod(a, e, mod, p):
    result = (1,)
    base = _poly_modred(list(a), mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(tuple(a)), _poly_trim(tuple(b))
    while b:
        # a mod b with b made monic on the fly
        inv_lead = pow(b[-1], p - 2, p)
        r = list(a)
        for i in range(len(r) - 1, len(b) - 2, -1):
            c = r[i] * inv_lead % p
            if c:
                for j in range(len(b)):
                    r[i - len(b) + 1 + j] = (r[i - len(b) + 1 + j] - c * b[j]) % p
        a, b = b, _poly_trim(tuple(r[: len(b) - 1]))
    return a


def _poly_sub_x(a, p):
    """a(X) - X as a coefficient list."""
    out = list(a) + [0, 0]
    out[1] = (out[1] - 1) % p
    return out


def _is_irreducible(mod, p):
    """Monic mod of degree n is irreducible over Z/p."""
    n = len(mod) - 1
    if n == 1:
        return True
    # x^(p^n) == x mod f, and gcd(x^(p^(n/l)) - x, f) = 1 for primes l | n
    powers = [(0, 1)]  # powers[k] = x^(p^k) mod f
    for _ in range(n):
        powers.append(_poly_powmod(powers[-1], p, mod, p))
    if _poly_trim(tuple(_poly_sub_x(powers[n], p))):
        return False
    for ell in factorint(n):
        if len(_poly_gcd(_poly_sub_x(powers[n // ell], p), mod, p)) > 1:
            return False
    return True


_default_modulus_cache: dict[tuple[int, int], tuple[int, ...]] = {}


def _default_modulus(p, n):
    """Lexicographically smallest monic irreducible of degree n over Z/p."""
    key = (p, n)
    hit = _default_modulus_cache.get(key)
    if hit is not None:
        return hit
    if n == 1:
        mod = (0, 1)
    else:
        mod = None
        # coefficient sequences (c0, ..., c_{n-1}) in lexicographic order
        for code in range(p**n):
            coeffs = []
            rem = code
            for k in range(n - 1, -1, -1):
                coeffs.append(rem // p**k)
                rem %= p**k
            cand = tuple(coeffs) + (1,)
            if cand[0] and _is_irreducible(cand, p):
                mod = cand
                break
        if mod is None:  # pragma: no cover - irreducibles always exist
            raise FieldError(f"no irreducible modulus found for p={p}, n={n}")
    _default_modulus_cache[key] = mod
    return mod


# ----------------------------------------------------------------------

class FieldCtx:
    """An odd finite field F_{p^n} with flat lookup tables.

    Immutable after construction; all operations are pure, so contexts and
    their tables can be shared freely across threads.
    """

    def __init__(self, p, n=1, modulus=None, max_table_q=DEFAULT_MAX_TABLE_Q):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"p={p} is not prime")
        if p == 2:
            raise FieldError("characteristic 2 is not supported (p must be odd)")
        if not isinstance(n, int) or n < 1:
            raise FieldError(f"extension degree n={n} must be a positive integer")
        q = p**n
        if q >= 1 << 62:
            raise FieldError(f"q = p^n = {q} does not fit the 64-bit working width")
        self.p = p
        self.n = n
        self.q = q
        self.half_exponent = (q - 1) // 2
        if modulus is None:
            modulus = _default_modulus(p, n)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree n")
            if not _is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over Z/{p}")
        self.modulus = modulus
        # rank of the multiplicative identity: coefficients (1, 0, ..., 0)
        self.one = p ** (n - 1)
        self._embeddings: dict[tuple, np.ndarray] = {}
        self._sqrt = None
        self._issq = None
        self._chi = None
        if n > 1:
            if q > max_table_q:
                raise FieldError(
                    f"extension field with q={q} exceeds the table budget "
                    f"({max_table_q}); raise max_table_q explicitly if intended")
            self._build_ext_tables()

    # -- construction helpers ------------------------------------------

    def _build_ext_tables(self):
        p, n, q = self.p, self.n, self.q
        dt = np.min_scalar_type(p)
        digits = np.empty((q, n), dtype=dt)
        ranks = np.arange(q, dtype=np.int64)
        for i in range(n):
            digits[:, i] = (ranks // p ** (n - 1 - i)) % p
        self._digits = digits
        self._pw = np.array([p ** (n - 1 - i) for i in range(n)], dtype=np.int64)

        g = self._find_generator()
        exp = np.empty(2 * (q - 1), dtype=np.int64)
        exp[0] = self.one
        exp[1] = g
        filled = 2
        while filled < q - 1:
            step = min(filled, q - 1 - filled)
            # exp[filled + k] = y * exp[k] with y = g^filled, applied as the
            # linear map on coefficient vectors (one matmul per doubling)
            y = self._poly_rank_mul(int(exp[filled - 1]), g)
            m = self._mul_matrix(y)
            nd = (self._digits[exp[:step]].astype(np.int64) @ m.T) % p
            exp[filled:filled + step] = nd @ self._pw
            filled += step
        exp[q - 1:] = exp[: q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1, dtype=np.int64)
        self._exp = exp
        self._log = log

        h = self.half_exponent
        neg = exp[log + h]
        neg[0] = 0
        self._neg = neg
        inv2 = exp[(q - 1) - log[self._int_rank(2)]]
        half = exp[log + log[inv2]]
        half[0] = 0
        self._half = half

        sqrt = np.full(q, -1, dtype=np.int64)
        sqrt[0] = 0
        evens = np.arange(0, q - 1, 2, dtype=np.int64)
        roots = exp[evens >> 1]
        sqrt[exp[evens]] = np.minimum(roots, neg[roots])
        self._sqrt = sqrt
        issq = np.zeros(q, dtype=bool)
        issq[exp[evens]] = True
        issq[0] = True
        self._issq = issq
        chi = np.where(issq, np.int8(1), np.int8(-1))
        chi[0] = 0
        self._chi = chi

    def _poly_rank_mul(self, i, j):
        a = self.coeffs(i)
        b = self.coeffs(j)
        return self.rank(_poly_mulmod(a, b, self.modulus, self.p))

    def _mul_matrix(self, y):
        """Matrix of x -> y*x on coefficient columns (for table doubling)."""
        n, p = self.n, self.p
        yc = self.coeffs(y)
        m = np.empty((n, n), dtype=np.int64)
        for j in range(n):
            basis = tuple(1 if k == j else 0 for k in range(n))
            col = _poly_mulmod(yc, basis, self.modulus, p)
            col = tuple(col) + (0,) * (n - len(col))
            m[:, j] = col
        return m

    def _find_generator(self):
        q = self.q
        ell_list = list(factorint(q - 1))
        for cand in range(1, q):
            if all(self._rank_pow_poly(cand, (q - 1) // ell) != self.one
                   for ell in ell_list):
                return cand
        raise FieldError("no multiplicative generator found")  # pragma: no cover

    def _rank_pow_poly(self, i, e):
        a = self.coeffs(i)
        return self.rank(_poly_powmod(a, e, self.modulus, self.p))

    def _int_rank(self, c):
        """Rank of the prime-subfield element c (an integer mod p)."""
        return (c % self.p) * self.p ** (self.n - 1)

    # -- rank <-> coefficients -----------------------------------------

    def coeffs(self, rank):
        p, n = self.p, self.n
        out = []
        for i in range(n - 1, -1, -1):
            out.append((rank // p**i) % p)
        return tuple(out)

    def rank(self, coeffs):
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) > self.n and any(coeffs[self.n:]):
            raise FieldError("coefficient sequence longer than the degree")
        coeffs = coeffs[: self.n] + (0,) * (self.n - len(coeffs))
        r = 0
        for c in coeffs:
            r = r * self.p + c
        return r

    def element(self, value) -> FieldElement:
        """Make a FieldElement from an int (prime-subfield value) or coeffs."""
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, self._int_rank(int(value)))
        return FieldElement(self, self.rank(value))

    def from_rank(self, rank) -> FieldElement:
        rank = int(rank)
        if not 0 <= rank < self.q:
            raise FieldError(f"rank {rank} out of range for q={self.q}")
        return FieldElement(self, rank)

    def elements(self):
        """All q elements exactly once, in canonical order."""
        for r in range(self.q):
            yield FieldElement(self, r)

    # -- scalar arithmetic on ranks ------------------------------------

    def add(self, i, j):
        if self.n == 1:
            return (i + j) % self.q
        return int(((self._digits[i].astype(np.int64)
                     + self._digits[j]) % self.p) @ self._pw)

    def sub(self, i, j):
        return self.add(i, self.neg(j))

    def neg(self, i):
        if self.n == 1:
            return (-i) % self.q
        return int(self._neg[i])

    def mul(self, i, j):
        if self.n == 1:
            return i * j % self.q
        if i == 0 or j == 0:
            return 0
        return int(self._exp[self._log[i] + self._log[j]])

    def inv(self, i):
        if i == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self.n == 1:
            return pow(i, self.q - 2, self.q)
        return int(self._exp[(self.q - 1) - self._log[i]])

    def div(self, i, j):
        return self.mul(i, self.inv(j))

    def pow_(self, i, k):
        k = int(k)
        if k < 0:
            return self.pow_(self.inv(i), -k)
        if self.n == 1:
            return pow(i, k, self.q)
        if i == 0:
            return self.one if k == 0 else 0
        return int(self._exp[(self._log[i] * k) % (self.q - 1)])

    def half(self, i):
        """i / 2 (division by two is everywhere defined in odd characteristic)."""
        if self.n == 1:
            return i * ((self.q + 1) // 2) % self.q
        return int(self._half[i])

    def is_square(self, i):
        """Zero counts as a square (so 2-descent on 2-torsion works)."""
        if i == 0:
            return True
        if self.n == 1:
            return pow(i, self.half_exponent, self.q) == 1
        return bool(self._issq[i])

    def sqrt(self, i):
        """Canonical root: the smaller of the two in element order, or None."""
        t = self.sqrt_table
        r = int(t[i])
        return None if r < 0 else r

    # -- table properties (built lazily for prime fields) --------------

    @property
    def sqrt_table(self):
        if self._sqrt is None:
            q = self.q
            t = np.full(q, -1, dtype=np.int64)
            t[0] = 0
            r = np.arange(1, q // 2 + 1, dtype=np.int64)
            t[r * r % q] = r  # r <= (q-1)/2 < q-r, so this is the smaller root
            self._sqrt = t
        return self._sqrt

    @property
    def issq_table(self):
        if self._issq is None:
            self._issq = self.sqrt_table >= 0
        return self._issq

    @property
    def chi_table(self):
        """Quadratic character with chi(0) = 0, as int8."""
        if self._chi is None:
            chi = np.where(self.issq_table, np.int8(1), np.int8(-1))
            chi[0] = 0
            self._chi = chi
        return self._chi

    @property
    def inv_table(self):
        """Multiplicative inverses by rank (0 maps to 0); built lazily."""
        t = getattr(self, "_inv", None)
        if t is None:
            q = self.q
            if self.n == 1:
                t = np.zeros(q, dtype=np.int64)
                t[1:] = [pow(x, q - 2, q) for x in range(1, q)]
            else:
                t = self._exp[(q - 1) - self._log]
                t[0] = 0
            self._inv = t
        return t

    # -- vectorised arithmetic on rank arrays --------------------------

    def add_arr(self, a, b):
        if self.n == 1:
            return (a + b) % self.q
        d = (self._digits[a].astype(np.int64) + self._digits[b]) % self.p
        return d @ self._pw

    def sub_arr(self, a, b):
        if self.n == 1:
            return (a - b) % self.q
        return self.add_arr(a, self._neg[b])

    def neg_arr(self, a):
        if self.n == 1:
            return (-a) % self.q
        return self._neg[a]

    def mul_arr(self, a, b):
        if self.n == 1:
            return a * b % self.q
        out = self._exp[self._log[a] + self._log[b]]
        zero = (a == 0) | (b == 0)
        if zero.any():
            out = np.where(zero, 0, out)
        return out

    def half_arr(self, a):
        if self.n == 1:
            return a * ((self.q + 1) // 2) % self.q
        return self._half[a]

    # -- embeddings -----------------------------------------------------

    def embedding(self, dst: "FieldCtx") -> np.ndarray:
        """Rank table of the canonical embedding of this field into dst.

        Computed once per (src, dst) pair: the image of the generator is the
        smallest root of this field's modulus in dst, which makes the
        embedding a ring homomorphism, injective, and the identity on the
        prime field.
        """
        if dst.p != self.p:
            raise FieldError("embedding requires equal characteristic")
        if dst.n % self.n:
            raise FieldError(
                f"degree {self.n} does not divide target degree {dst.n}")
        key = (dst.p, dst.n, dst.modulus)
        table = self._embeddings.get(key)
        if table is not None:
            return table
        if self == dst:
            table = np.arange(self.q, dtype=np.int64)
            self._embeddings[key] = table
            return table
        # smallest root of our modulus among all dst elements
        cands = np.arange(dst.q, dtype=np.int64)
        acc = np.zeros(dst.q, dtype=np.int64)
        for c in reversed(self.modulus):
            acc = dst.add_arr(dst.mul_arr(acc, cands),
                              np.int64(dst._int_rank(c)))
        roots = np.nonzero(acc == 0)[0]
        if roots.size == 0:  # pragma: no cover - splitting field always works
            raise FieldError("modulus has no root in the target field")
        r = np.int64(roots.min())
        # Horner over source coefficients, highest polynomial degree first
        table = None
        src_ranks = np.arange(self.q, dtype=np.int64)
        for k in range(self.n - 1, -1, -1):
            digit = (src_ranks // self.p ** (self.n - 1 - k)) % self.p
            coeff = digit * (dst.p ** (dst.n - 1))  # prime-subfield ranks in dst
            if table is None:
                table = coeff.astype(np.int64)
            else:
                table = dst.add_arr(dst.mul_arr(table, r), coeff)
        self._embeddings[key] = table
        return table

    def quadratic_extension(self) -> "FieldCtx":
        """The canonical degree-2 extension (default modulus), cached."""
        ext = getattr(self, "_quad_ext", None)
        if ext is None:
            ext = FieldCtx(self.p, 2 * self.n)
            self._quad_ext = ext
        return ext

    # -- rendering ------------------------------------------------------

    def elem_str(self, rank):
        """Coefficient string "c0+c1*t+..." (just "c0" for prime fields)."""
        cs = self.coeffs(rank)
        if self.n == 1:
            return str(cs[0])
        parts = [str(cs[0])]
        for i, c in enumerate(cs[1:], start=1):
            parts.append(f"{c}*t" if i == 1 else f"{c}*t^{i}")
        return "+".join(parts)

    def parse_elem_str(self, s):
        """Inverse of elem_str; also accepts bare integers for any field."""
        s = s.strip()
        coeffs = [0] * self.n
        for term in s.split("+"):
            term = term.strip()
            if "*" in term:
                c, power = term.split("*")
                i = 1 if power == "t" else int(power.split("^")[1])
            else:
                c, i = term, 0
            if i >= self.n:
                raise FieldError(f"term degree {i} too large for degree {self.n}")
            coeffs[i] = (coeffs[i] + int(c)) % self.p
        return self.rank(coeffs)

    def spec_str(self):
        base = str(self.p) if self.n == 1 else f"{self.p}^{self.n}"
        if self.n > 1 and self.modulus != _default_modulus(self.p, self.n):
            base += ";modulus=" + ",".join(str(c) for c in self.modulus)
        return base

    # -- identity -------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldCtx)
                and (self.p, self.n, self.modulus)
                == (other.p, other.n, other.modulus))

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"FieldCtx({self.spec_str()!r})"


class FieldElement:
    """An element of a FieldCtx; immutable, totally ordered within its field."""

    __slots__ = ("ctx", "rank")

    def __init__(self, ctx, rank):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "rank", int(rank))

    def __setattr__(self, *a):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self):
        return self.ctx.coeffs(self.rank)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldError("operands belong to different field contexts")
            return other.rank
        if isinstance(other, (int, np.integer)):
            return self.ctx._int_rank(int(other))
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented \
            else FieldElement(self.ctx, self.ctx.add(self.rank, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented \
            else FieldElement(self.ctx, self.ctx.sub(self.rank, r))

    def __rsub__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented \
            else FieldElement(self.ctx, self.ctx.sub(r, self.rank))

    def __mul__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented \
            else FieldElement(self.ctx, self.ctx.mul(self.rank, r))

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented \
            else FieldElement(self.ctx, self.ctx.div(self.rank, r))

    def __rtruediv__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented \
            else FieldElement(self.ctx, self.ctx.div(r, self.rank))

    def __pow__(self, k):
        return FieldElement(self.ctx, self.ctx.pow_(self.rank, k))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.rank))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.rank == other.rank
        if isinstance(other, (int, np.integer)):
            return self.rank == self.ctx._int_rank(int(other))
        return NotImplemented

    def __lt__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented else self.rank < r

    def __le__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented else self.rank <= r

    def __gt__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented else self.rank > r

    def __ge__(self, other):
        r = self._coerce(other)
        return NotImplemented if r is NotImplemented else self.rank >= r

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.n, self.ctx.modulus, self.rank))

    def __bool__(self):
        return self.rank != 0

    def is_square(self):
        return self.ctx.is_square(self.rank)

    def sqrt(self):
        r = self.ctx.sqrt(self.rank)
        return None if r is None else FieldElement(self.ctx, r)

    def __str__(self):
        return self.ctx.elem_str(self.rank)

    def __repr__(self):
        return f"<{self} in {self.ctx.spec_str()}>"


# ----------------------------------------------------------------------

def field_new(p, n=1, modulus=None, max_table_q=DEFAULT_MAX_TABLE_Q) -> FieldCtx:
    """Construct F_{p^n}; with no modulus the default (lexicographically
    smallest monic irreducible) is used, so repeated builds are identical."""
    return FieldCtx(p, n, modulus, max_table_q=max_table_q)


def parse_field_spec(spec: str, max_table_q=DEFAULT_MAX_TABLE_Q) -> FieldCtx:
    """Parse "p", "p^n", or "p^n;modulus=c0,c1,...,1"."""
    spec = spec.strip()
    modulus = None
    if ";" in spec:
        spec, _, tail = spec.partition(";")
        key, _, val = tail.partition("=")
        if key.strip() != "modulus":
            raise FieldError(f"unknown field option {key!r}")
        modulus = tuple(int(c) for c in val.split(","))
    if "^" in spec:
        ps, _, ns = spec.partition("^")
        p, n = int(ps), int(ns)
    else:
        p, n = int(spec), 1
    return FieldCtx(p, n, modulus, max_table_q=max_table_q)


def embed(x: FieldElement, dst: FieldCtx) -> FieldElement:
    """Image of x under the canonical embedding of its field into dst."""
    table = x.ctx.embedding(dst)
    return FieldElement(dst, int(table[x.rank]))
