"""Small integer helpers: valuations, factoring, roots modulo p."""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

from sympy import Poly, factorint, primerange, symbols

_X = symbols("x")


def valuation(n, p: int) -> int:
    """p-adic valuation of a nonzero integer or Fraction."""
    if n == 0:
        raise ValueError("valuation of zero")
    num = getattr(n, "numerator", n)
    den = getattr(n, "denominator", 1)
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def val_or_inf(n, p: int, cap: int = 10**9) -> int:
    return cap if n == 0 else valuation(n, p)


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(abs(n)))


def factor(n: int) -> dict[int, int]:
    return dict(factorint(abs(n)))


@lru_cache(maxsize=64)
def primes_upto(n: int) -> tuple[int, ...]:
    return tuple(primerange(2, n + 1))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def roots_mod_p(coeffs: list[int], p: int) -> dict[int, int]:
    """Roots in F_p with multiplicity of the polynomial with the given
    coefficients (highest degree first). The zero polynomial raises."""
    coeffs = [c % p for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        raise ValueError("zero polynomial mod p")
    if len(coeffs) == 1:
        return {}
    if p < 5000:
        out = {}
        for r in range(p):
            # multiplicity by repeated synthetic division
            c = list(coeffs)
            m = 0
            while len(c) > 1:
                q = [c[0]]
                for a in c[1:]:
                    q.append((q[-1] * r + a) % p)
                if q[-1] != 0:
                    break
                m += 1
                c = q[:-1]
            if m:
                out[r] = m
        return out
    roots = Poly(coeffs, _X, modulus=p).ground_roots()
    return {int(r) % p: int(m) for r, m in roots.items()}


def integer_roots_monic_cubic(b: int, c: int, d: int) -> list[int]:
    """Integer roots of x^3 + b x^2 + c x + d by exact bisection."""
    return _integer_roots(b, c, d)


def _cubic(b, c, d, x):
    return ((x + b) * x + c) * x + d


def _integer_roots(b, c, d):
    # split into monotone pieces at integers bracketing the critical points
    disc = b * b - 3 * c
    bound = 1 + max(abs(b), abs(c), abs(d))
    edges = {-bound, bound}
    if disc >= 0:
        s = isqrt(disc)
        k1 = (-b - s - 1) // 3
        k2 = (-b + s) // 3
        # each critical point lies inside [k1, k1+2] or [k2, k2+1]
        edges.update(k for k in (k1, k1 + 2, k2, k2 + 1) if -bound < k < bound)
    edges = sorted(edges)
    found = set()
    for lo, hi in zip(edges, edges[1:]):
        found.update(_integer_roots_between(b, c, d, lo, hi))
    return sorted(found)


def _integer_roots_between(b, c, d, lo, hi):
    if hi - lo <= 8:
        return [x for x in range(lo, hi + 1) if _cubic(b, c, d, x) == 0]
    flo, fhi = _cubic(b, c, d, lo), _cubic(b, c, d, hi)
    out = [x for x in (lo, hi) if _cubic(b, c, d, x) == 0]
    if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
        return out
    a, z = lo, hi
    while z - a > 1:
        m = (a + z) // 2
        fm = _cubic(b, c, d, m)
        if fm == 0:
            return out + [m]
        if (fm > 0) == (flo > 0):
            a = m
        else:
            z = m
    return out
