"""Imaginary quadratic orders via primitive binary quadratic forms.

Forms (a, b, c) with a > 0, D = b^2 - 4ac < 0, gcd(a, b, c) = 1 represent
ideal classes of the order of discriminant D; Gauss composition of reduced
representatives realizes the class group exactly, which is all the theorems
downstream need (no ideal arithmetic, no floating point).

The Hurwitz class number H is kept as an exact Fraction; its denominator only
ever carries the extra units at discriminants -3 and -4.  Caches are plain
functools caches: results are value-type and deterministic, and the GIL makes
the memo tables safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ntheory import fundamental_discriminant, solve_linear_mod

__all__ = [
    "QuadForm",
    "ImagQuadOrder",
    "reduced_forms",
    "class_number",
    "compose_reduce",
    "principal_form",
    "h2_order",
    "hurwitz",
    "kronecker_2",
    "trace_congruence_46",
]


@dataclass(frozen=True)
class QuadForm:
    """A primitive integral binary quadratic form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("form must have a > 0 (positive definite)")
        if self.discriminant >= 0:
            raise ValueError("form must have negative discriminant")
        if math.gcd(math.gcd(self.a, self.b), self.c) != 1:
            raise ValueError(f"form {(self.a, self.b, self.c)} is imprimitive")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return abs(b) <= a <= c and (b >= 0 if (abs(b) == a or a == c) else True)

    def normalized(self) -> "QuadForm":
        a, b, c = self.a, self.b, self.c
        if -a < b <= a:
            return self
        r = (a - b) // (2 * a)
        return QuadForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced(self) -> "QuadForm":
        f = self.normalized()
        a, b, c = f.a, f.b, f.c
        while a > c or (a == c and b < 0):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return QuadForm(a, b, c).normalized()

    def inverse(self) -> "QuadForm":
        return QuadForm(self.a, -self.b, self.c).reduced()

    def __mul__(self, other) -> "QuadForm":
        return compose_reduce(self, other)

    def __pow__(self, k: int) -> "QuadForm":
        if k < 0:
            return self.inverse() ** (-k)
        out = principal_form(self.discriminant)
        base = self.reduced()
        while k:
            if k & 1:
                out = compose_reduce(out, base)
            base = compose_reduce(base, base)
            k >>= 1
        return out


def principal_form(d: int) -> QuadForm:
    """The identity class of discriminant d."""
    _check_disc(d)
    k = d & 1
    return QuadForm(1, k, (k * k - d) // 4)


def _check_disc(d: int):
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative discriminant")


def compose_reduce(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """Gauss composition of classes; returns the reduced representative."""
    if f1.discriminant != f2.discriminant:
        raise ValueError("cannot compose forms of different discriminants")
    f1, f2 = f1.reduced(), f2.reduced()
    a1, b1, c1 = f1.a, f1.b, f1.c
    a2, b2, c2 = f2.a, f2.b, f2.c
    g = (b1 + b2) // 2
    h = (b2 - b1) // 2
    w = math.gcd(math.gcd(a1, a2), g)
    s = a1 // w
    t = a2 // w
    u = g // w
    mu, step = solve_linear_mod(t * u, h * u + s * c1, s * t)
    lam, _ = solve_linear_mod(t * step, h - t * mu, s)
    k = mu + step * lam
    ell = (k * t - h) // s
    m = (t * u * k - h * u - c1 * s) // (s * t)
    a3 = s * t
    b3 = w * u - (k * t + ell * s)
    c3 = k * ell - w * m
    return QuadForm(a3, b3, c3).reduced()


@lru_cache(maxsize=None)
def reduced_forms(d: int) -> tuple[QuadForm, ...]:
    """All primitive reduced forms of discriminant d, b-then-a scan."""
    _check_disc(d)
    out = []
    for b in range(d & 1, math.isqrt(-d // 3) + 1, 2):
        m = (b * b - d) // 4
        for a in range(max(b, 1), math.isqrt(m) + 1):
            if m % a:
                continue
            c = m // a
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(QuadForm(a, b, c))
            if 0 < b < a < c:
                out.append(QuadForm(a, -b, c))
    return tuple(sorted(out, key=lambda f: (f.a, -f.b, f.c)))


def class_number(d: int) -> int:
    return len(reduced_forms(d))


@dataclass(frozen=True)
class ImagQuadOrder:
    """The order of conductor f in the field of fundamental discriminant d_K."""

    d_K: int
    f: int = 1

    def __post_init__(self):
        if self.f < 1:
            raise ValueError("conductor must be >= 1")
        dk, cond = fundamental_discriminant(self.d_K)
        if cond != 1 or dk != self.d_K:
            raise ValueError(f"{self.d_K} is not a fundamental discriminant")

    @property
    def discriminant(self) -> int:
        return self.f * self.f * self.d_K

    @property
    def class_number(self) -> int:
        return class_number(self.discriminant)


def h2_order(order) -> int:
    """Order of the class of a prime ideal above 2 in cl(O).

    Accepts an ImagQuadOrder or a discriminant.  Requires 2 split, i.e.
    D = 1 mod 8; then (2, 1, (1-D)/8) represents the ideal.  The conjugate
    choice (2, -1, c) is the inverse class, so the order is well-defined.
    """
    d = order.discriminant if isinstance(order, ImagQuadOrder) else int(order)
    _check_disc(d)
    if d % 8 != 1:
        raise ValueError(f"2 does not split in the order of discriminant {d}")
    p2 = QuadForm(2, 1, (1 - d) // 8).reduced()
    ident = principal_form(d).reduced()
    acc = p2
    k = 1
    while acc != ident:
        acc = compose_reduce(acc, p2)
        k += 1
        if k > 4 * abs(d):  # pragma: no cover - safety net
            raise RuntimeError("class of (2,1,c) failed to terminate")
    return k


@lru_cache(maxsize=None)
def hurwitz(n: int) -> Fraction:
    """Hurwitz-Kronecker class number H(n), exact.

    H(n) sums h(-n/g^2) over square divisors g^2 | n with -n/g^2 a
    discriminant, weighting discriminants -3 and -4 by 1/3 and 1/2.  Values
    off the support (-n not 0 or 1 mod 4) are 0 by convention.
    """
    if n <= 0:
        raise ValueError("hurwitz expects a positive integer")
    total = Fraction(0)
    for g in range(1, math.isqrt(n) + 1):
        if n % (g * g):
            continue
        m = n // (g * g)
        if (-m) % 4 not in (0, 1):
            continue
        if m == 3:
            w = Fraction(1, 3)
        elif m == 4:
            w = Fraction(1, 2)
        else:
            w = Fraction(1)
        total += w * class_number(-m)
    return total


def kronecker_sum(n: int) -> int:
    """Unweighted companion of hurwitz(): sum of h over the same orders."""
    if n <= 0:
        raise ValueError("kronecker_sum expects a positive integer")
    total = 0
    for g in range(1, math.isqrt(n) + 1):
        if n % (g * g):
            continue
        m = n // (g * g)
        if (-m) % 4 in (0, 1):
            total += class_number(-m)
    return total


def kronecker_2(d: int) -> int:
    """The Kronecker symbol (d/2): 0 for even d, +1 for d = +-1 mod 8."""
    if d % 2 == 0:
        return 0
    return 1 if d % 8 in (1, 7) else -1


def trace_congruence_46(q: int) -> tuple[int, tuple[int, int]]:
    """2-adic data behind the split-at-2 trace classes for q = 1 mod 8.

    Returns (root, traces): root is the square root of q mod 128 picked in
    the residue class 1 mod 8 when q = 1 mod 16 and 3 mod 8 when q = 9 mod
    16; traces is the pair {+-46*root} mod 128.  Both lifts of the root
    (root and root+64) give the same trace pair since 46*64 = 0 mod 128.
    """
    if q % 8 != 1:
        raise ValueError(f"q = {q} is not 1 mod 8")
    want = 1 if q % 16 == 1 else 3
    root = None
    for r in range(want, 128, 8):
        if r * r % 128 == q % 128:
            root = r
            break
    if root is None:  # pragma: no cover - a root always exists for q = 1 mod 8
        raise RuntimeError(f"no 2-adic square root of {q} mod 128")
    t = 46 * root % 128
    return root, tuple(sorted((t, (-t) % 128)))
