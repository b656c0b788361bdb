"""Local arithmetic: Tate's algorithm, conductor, and Frobenius traces."""

from __future__ import annotations

import hashlib
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, prod
from pathlib import Path
from typing import Optional

import numpy as np

from .arith import factor, primes_upto, roots_mod_p, valuation
from .curve import Transform, WeierstrassModel, transform_ainvs
from .errors import BadPrime

GOOD = "good"
SPLIT = "multiplicative-split"
NONSPLIT = "multiplicative-nonsplit"
ADDITIVE = "additive"

BRUTE_FORCE_LIMIT = 10_000


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: str
    f_p: int
    c_p: int
    reduction: str
    disc_valuation: int = 0

    @property
    def is_good(self) -> bool:
        return self.reduction == GOOD


@dataclass(frozen=True)
class ConductorData:
    N: int
    factorization: tuple[tuple[int, int], ...]


# -- Tate's algorithm ------------------------------------------------------


def _v(n: int, p: int) -> int:
    return 10**6 if n == 0 else valuation(n, p)


def _shifted(a, r=0, s=0, t=0, u=1):
    T = Transform(Fraction(u), Fraction(r), Fraction(s), Fraction(t))
    out = transform_ainvs(a, T)
    assert all(x.denominator == 1 for x in out), (a, T)
    return tuple(int(x) for x in out), T


def _binvs(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, disc


def _double_root(coeffs, p):
    for r, m in roots_mod_p(coeffs, p).items():
        if m >= 2:
            return r
    raise AssertionError(f"expected a repeated root of {coeffs} mod {p}")


def _singular_point(a, p):
    a1, a2, a3, a4, a6 = a
    if p == 2:
        for x in range(2):
            for y in range(2):
                F = y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6
                Fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
                Fy = 2 * y + a1 * x + a3
                if F % 2 == 0 and Fx % 2 == 0 and Fy % 2 == 0:
                    return x, y
        raise AssertionError("no singular point mod 2")
    b2, b4, b6, _, _ = _binvs(a)
    x0 = _double_root([4, b2, 2 * b4, b6], p)
    inv2 = pow(2, -1, p)
    y0 = (-(a1 * x0 + a3) * inv2) % p
    return x0, y0


def _n_roots(coeffs, p) -> tuple[int, int]:
    """(number of distinct roots in F_p, largest multiplicity)."""
    roots = roots_mod_p(coeffs, p)
    return len(roots), max(roots.values(), default=0)


def _tate(ainvs, p: int):
    """Run Tate's algorithm at p.

    Returns the local data and the transform taking the input model to a
    model minimal at p (integral at every prime).
    """
    a = tuple(int(x) for x in ainvs)
    total = Transform()

    def move(**kw):
        nonlocal a, total
        a, T = _shifted(a, **kw)
        total = total.then(T)

    while True:
        _, _, _, _, disc = _binvs(a)
        n = _v(disc, p)
        if n == 0:
            return LocalData(p, "I0", 0, 1, GOOD, 0), total

        x0, y0 = _singular_point(a, p)
        move(r=x0, t=y0)
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8, _ = _binvs(a)

        if b2 % p:
            nroots, _ = _n_roots([1, a1, -a2], p)
            if nroots == 2:
                return LocalData(p, f"I{n}", 1, n, SPLIT, n), total
            return LocalData(p, f"I{n}", 1, 2 if n % 2 == 0 else 1, NONSPLIT, n), total
        if _v(a6, p) < 2:
            return LocalData(p, "II", n, 1, ADDITIVE, n), total
        if _v(b8, p) < 3:
            return LocalData(p, "III", n - 1, 2, ADDITIVE, n), total
        if _v(b6, p) < 3:
            nroots, _ = _n_roots([1, a3 // p, -(a6 // p ** 2)], p)
            return LocalData(p, "IV", n - 2, 3 if nroots else 1, ADDITIVE, n), total

        # p | a1, a2; p^2 | a3, a4; p^3 | a6
        s = _double_root([1, a1, -a2], p)
        move(s=s)
        a1, a2, a3, a4, a6 = a
        t = p * _double_root([1, a3 // p, -(a6 // p ** 2)], p)
        move(t=t)
        a1, a2, a3, a4, a6 = a
        assert a1 % p == 0 and a2 % p == 0 and a3 % p**2 == 0
        assert a4 % p**2 == 0 and a6 % p**3 == 0

        cubic = [1, a2 // p, a4 // p ** 2, a6 // p ** 3]
        nroots, mult = _n_roots(cubic, p)
        if mult <= 1:
            return LocalData(p, "I0*", n - 4, 1 + nroots, ADDITIVE, n), total

        if mult == 2:
            alpha = _double_root(cubic, p)
            move(r=alpha * p)
            m, mx, my = 1, p * p, p * p
            while True:
                a1, a2, a3, a4, a6 = a
                if m % 2:
                    quad = [1, a3 // my, -(a6 // (my * my))]
                else:
                    quad = [a2 // p, a4 // (p * mx), a6 // (p * mx * mx)]
                nroots, qmult = _n_roots(quad, p)
                if qmult < 2:
                    c = 4 if nroots else 2
                    return LocalData(p, f"I{m}*", n - 4 - m, c, ADDITIVE, n), total
                root = _double_root(quad, p)
                if m % 2:
                    move(t=my * root)
                    my *= p
                else:
                    move(r=mx * root)
                    mx *= p
                m += 1

        alpha = _double_root(cubic, p)
        move(r=alpha * p)
        a1, a2, a3, a4, a6 = a
        quad = [1, a3 // p ** 2, -(a6 // p ** 4)]
        nroots, qmult = _n_roots(quad, p)
        if qmult < 2:
            return LocalData(p, "IV*", n - 6, 3 if nroots else 1, ADDITIVE, n), total
        move(t=p * p * _double_root(quad, p))
        a1, a2, a3, a4, a6 = a
        if a4 % p ** 4:
            return LocalData(p, "III*", n - 7, 2, ADDITIVE, n), total
        if a6 % p ** 6:
            return LocalData(p, "II*", n - 8, 1, ADDITIVE, n), total
        move(u=p)


def _minimise_at(E: WeierstrassModel, p: int) -> Transform:
    _, T = _tate(E.ainvs, p)
    return T if T.u != 1 else Transform()


def tate_local(E: WeierstrassModel, p: int) -> LocalData:
    """Reduction type, conductor exponent and Tamagawa number at p."""
    if E.disc % p:
        return LocalData(p, "I0", 0, 1, GOOD, 0)
    data, T = _tate(E.ainvs, p)
    if T.u != 1:
        raise ValueError(f"model {E} is not minimal at {p}")
    return data


def bad_primes(E: WeierstrassModel) -> list[int]:
    return sorted(factor(E.disc))


def local_data(E: WeierstrassModel) -> dict[int, LocalData]:
    return {p: tate_local(E, p) for p in bad_primes(E)}


def conductor(E: WeierstrassModel, local: Optional[dict] = None) -> ConductorData:
    local = local if local is not None else local_data(E)
    fac = tuple((p, ld.f_p) for p, ld in sorted(local.items()) if ld.f_p)
    return ConductorData(prod(p ** f for p, f in fac), fac)


def tamagawa_product(local: dict[int, LocalData]) -> int:
    return prod(ld.c_p for ld in local.values())


# -- point counting --------------------------------------------------------


def _count_brute(E: WeierstrassModel, p: int) -> int:
    if p == 2:
        a1, a2, a3, a4, a6 = E.ainvs
        return 1 + sum(
            1
            for x in range(2)
            for y in range(2)
            if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0
        )
    x = np.arange(p, dtype=np.int64)
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    v = np.full(p, 4 % p, dtype=np.int64)
    for c in (E.b2, 2 * E.b4, E.b6):
        v = (v * x + c % p) % p
    squares = np.zeros(p, dtype=np.int8)
    squares[(x * x) % p] = 1
    chi = np.where(v == 0, 0, np.where(squares[v] == 1, 1, -1))
    return int(1 + p + chi.sum())


def count_points_naive(E: WeierstrassModel, p: int) -> int:
    """Enumerate every (x, y) in F_p^2; an oracle for small p."""
    a1, a2, a3, a4, a6 = (c % p for c in E.ainvs)
    total = 1
    for x in range(p):
        rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                total += 1
    return total


class _ShortCurve:
    """y^2 = x^3 + A x + B over F_p, affine points as tuples, None = O."""

    def __init__(self, A, B, p):
        self.A, self.B, self.p = A % p, B % p, p

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            lam = (3 * x1 * x1 + self.A) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return x3, (lam * (x1 - x3) - y1) % p

    def mul(self, n, P):
        R = None
        if n < 0:
            n, P = -n, (P[0], -P[1] % self.p)
        while n:
            if n & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            n >>= 1
        return R

    def random_point(self, rng):
        p = self.p
        while True:
            x = rng.randrange(p)
            rhs = (x ** 3 + self.A * x + self.B) % p
            if rhs == 0:
                continue
            if pow(rhs, (p - 1) // 2, p) == 1:
                return x, _sqrt_mod(rhs, p)


def _sqrt_mod(a, p):
    from sympy.ntheory import sqrt_mod

    return sqrt_mod(a, p)


def _orders_in_interval(curve: _ShortCurve, P, lo, hi):
    """All k in [lo, hi] with kP = O, by baby-step giant-step."""
    width = hi - lo
    m = isqrt(width) + 1
    baby = {}
    R = None
    for j in range(m + 1):
        key = None if R is None else R[0]
        baby.setdefault(key, j)
        R = curve.add(R, P)
    step = curve.mul(m, P)
    Q = curve.mul(lo, P)
    found = set()
    for i in range(m + 2):
        key = None if Q is None else Q[0]
        if key in baby:
            j = baby[key]
            for k in (lo + i * m - j, lo + i * m + j):
                if lo <= k <= hi and curve.mul(k, P) is None:
                    found.add(k)
        Q = curve.add(Q, step)
    return found


def _count_bsgs(E: WeierstrassModel, p: int, seed: int = 0) -> int:
    rng = random.Random(p * 1_000_003 + seed)
    A, B = -27 * E.c4, -54 * E.c6
    # a quadratic non-residue gives the twist d^2 A, d^3 B
    d = 2
    while pow(d, (p - 1) // 2, p) != p - 1:
        d += 1
    curves = (_ShortCurve(A, B, p), _ShortCurve(A * d * d, B * d ** 3, p))
    half = 2 * isqrt(p) + 2
    lo, hi = p + 1 - half, p + 1 + half
    candidates = [set(range(lo, hi + 1)), set(range(lo, hi + 1))]
    for attempt in range(60):
        which = attempt % 2
        P = curves[which].random_point(rng)
        ks = _orders_in_interval(curves[which], P, lo, hi)
        candidates[which] &= ks
        other = {2 * p + 2 - k for k in candidates[which]}
        candidates[1 - which] &= other
        if len(candidates[0]) == 1:
            return candidates[0].pop()
    raise RuntimeError(f"point count at p={p} did not resolve")


def count_points(E: WeierstrassModel, p: int) -> int:
    """#E(F_p) including the point at infinity, for p of good reduction."""
    if E.disc % p == 0:
        raise BadPrime(f"{p} divides the discriminant of {E}")
    if p < BRUTE_FORCE_LIMIT or p <= 3:
        return _count_brute(E, p)
    return _count_bsgs(E, p)


def ap_good(E: WeierstrassModel, p: int) -> int:
    return p + 1 - count_points(E, p)


def ap_bad(local: LocalData) -> int:
    return {SPLIT: 1, NONSPLIT: -1, ADDITIVE: 0}[local.reduction]


# -- Dirichlet coefficient table -------------------------------------------


@dataclass(frozen=True)
class ApTable:
    n_max: int
    a: tuple[int, ...]  # a[0] unused, a[n] for 1 <= n <= n_max

    def __getitem__(self, n: int) -> int:
        return self.a[n]

    def primes(self) -> dict[int, int]:
        return {p: self.a[p] for p in primes_upto(self.n_max)}


def ap_values(E: WeierstrassModel, n_max: int, local: Optional[dict] = None,
              jobs: int = 1) -> dict[int, int]:
    local = local if local is not None else local_data(E)
    primes = primes_upto(n_max)
    good = [p for p in primes if p not in local]
    if jobs > 1 and len(good) > 2000:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            traces = list(ex.map(ap_good, [E] * len(good), good, chunksize=64))
    else:
        traces = [ap_good(E, p) for p in good]
    out = dict(zip(good, traces))
    for p, ld in local.items():
        if p <= n_max:
            out[p] = ap_bad(ld)
    return dict(sorted(out.items()))


def an_table(E: WeierstrassModel, n_max: int, local: Optional[dict] = None,
             ap: Optional[dict] = None, jobs: int = 1) -> ApTable:
    """a_n for n <= n_max from a_p by the Hecke recursion and multiplicativity."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    local = local if local is not None else local_data(E)
    if ap is None:
        ap = ap_values(E, n_max, local, jobs)
    a = [0] * (n_max + 1)
    a[1] = 1
    # smallest prime factor sieve
    spf = list(range(n_max + 1))
    for p in primes_upto(isqrt(n_max)):
        for k in range(p * p, n_max + 1, p):
            if spf[k] == k:
                spf[k] = p
    for n in range(2, n_max + 1):
        p = spf[n]
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        if m > 1:
            a[n] = a[p ** e] * a[m]
            continue
        # n = p^e
        if e == 1:
            a[n] = ap[p]
        elif p in local:
            a[n] = ap[p] * a[n // p]
        else:
            a[n] = ap[p] * a[n // p] - p * a[n // (p * p)]
    return ApTable(n_max, tuple(a))


# -- on-disk cache of a_p --------------------------------------------------


def model_hash(E: WeierstrassModel) -> str:
    return hashlib.sha256(str(list(E.ainvs)).encode()).hexdigest()[:16]


def cache_path(cache_dir, label: str) -> Path:
    safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in label)
    return Path(cache_dir) / f"{safe}.ap"


def write_ap_cache(cache_dir, label: str, E: WeierstrassModel, n_max: int,
                   ap: dict[int, int]) -> Path:
    """One header line ``#<TAB>label<TAB>hash<TAB>n_max``, then ``p<TAB>a_p``."""
    path = cache_path(cache_dir, label)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"#\t{label}\t{model_hash(E)}\t{n_max}"]
    lines += [f"{p}\t{ap[p]}" for p in sorted(ap) if p <= n_max]
    tmp = path.with_suffix(f".tmp{os.getpid()}")
    tmp.write_text("\n".join(lines) + "\n")
    os.replace(tmp, path)
    return path


def read_ap_cache(cache_dir, label: str, E: WeierstrassModel,
                  n_max: int) -> Optional[dict[int, int]]:
    """Cached a_p up to n_max, or None if absent, stale or too short."""
    path = cache_path(cache_dir, label)
    try:
        lines = path.read_text().splitlines()
    except OSError:
        return None
    if not lines:
        return None
    head = lines[0].split("\t")
    if len(head) != 4 or head[0] != "#" or head[2] != model_hash(E):
        return None
    if int(head[3]) < n_max:
        return None
    out = {}
    for line in lines[1:]:
        p, v = line.split("\t")
        if int(p) <= n_max:
            out[int(p)] = int(v)
    return out


def cached_ap_values(E, n_max, label=None, cache_dir=None, local=None, jobs=1):
    if cache_dir and label:
        hit = read_ap_cache(cache_dir, label, E, n_max)
        if hit is not None:
            return hit
    ap = ap_values(E, n_max, local, jobs)
    if cache_dir and label:
        write_ap_cache(cache_dir, label, E, n_max, ap)
    return ap

