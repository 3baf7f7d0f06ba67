"""Small exact-integer helpers shared by the field and class-group code.

Everything here is deliberately plain Python int arithmetic; the inputs are
desk-scale (factorizations of group orders and Frobenius discriminants, a few
million at most), so trial division is the right tool.
"""

from __future__ import annotations

import math

# Deterministic Miller-Rabin witnesses for n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorint(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine for n up to ~10^12."""
    if n <= 0:
        raise ValueError("factorint expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorint(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def solve_linear_mod(a: int, b: int, m: int) -> tuple[int, int]:
    """Solve a*x = b (mod m); return (x0, step) describing x = x0 + k*step.

    Raises ValueError when gcd(a, m) does not divide b.
    """
    g, u, _ = xgcd(a, m)
    if b % g:
        raise ValueError("congruence has no solution")
    step = m // g
    return (b // g * u) % step if step else 0, step


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n > 0 as s * f^2 with s squarefree; return (s, f)."""
    s, f = 1, 1
    for p, e in factorint(n).items():
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, f


def fundamental_discriminant(d: int) -> tuple[int, int]:
    """Split a discriminant d < 0 as f^2 * d_K with d_K fundamental.

    d must be 0 or 1 mod 4.  Returns (d_K, f).
    """
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError("not a negative discriminant")
    s, f = squarefree_decompose(-d)
    s = -s
    if s % 4 == 1:
        return s, f
    # s = 2,3 mod 4: the fundamental discriminant is 4s and f must shed a 2.
    if f % 2:
        raise ValueError("not a discriminant")  # cannot happen for valid d
    return 4 * s, f // 2
