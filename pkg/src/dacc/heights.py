"""Néron–Tate canonical heights, the height pairing and the regulator.

The normalisation is the one in which the height is asymptotic to the
logarithmic naive height of the x-coordinate, h(x(nP)) / n^2, i.e. twice
the "sum of local heights" normalisation of older texts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mp, mpf

from .arith import valuation
from .curve import Point, WeierstrassModel, _add, on_curve, order_of
from .errors import DependentGenerators, PointNotOnCurve
from .local import LocalData, local_data
from .periods import real_roots

DEFAULT_PRECISION = 1e-12


@dataclass(frozen=True)
class HeightValue:
    value: mpf
    precision_bound: float

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class RegulatorResult:
    regulator: mpf
    matrix: mpmath.matrix

    @property
    def dim(self) -> int:
        return self.matrix.rows


def _v(n, p):
    return math.inf if n == 0 else valuation(n, p)


def _finite_correction(P: Point, E: WeierstrassModel, ld: LocalData) -> Fraction:
    """Correction at a bad prime, in units of log p (zero unless P reduces
    to the singular point)."""
    p = ld.p
    x, y = P.x, P.y
    if _v(x, p) < 0:
        return Fraction(0)
    a1, a2, a3, a4, a6 = E.ainvs
    A = _v(3 * x * x + 2 * a2 * x + a4 - a1 * y, p)
    B = _v(2 * y + a1 * x + a3, p)
    if A <= 0 or B <= 0:
        return Fraction(0)
    N = valuation(E.disc, p)
    if _v(E.c4, p) == 0:
        M = min(Fraction(B), Fraction(N, 2))
        return M * (M - N) / N
    C = _v(3 * x ** 4 + E.b2 * x ** 3 + 3 * E.b4 * x * x + 3 * E.b6 * x + E.b8, p)
    if C >= 3 * B:
        return Fraction(-2 * B, 3)
    return Fraction(-C, 4)


def _archimedean(P: Point, E: WeierstrassModel, roots, tol: float):
    """Tate's series on a model translated so that x >= 1 on E(R).

    Returns (local height, error bound) in the sum-of-local-heights scale.
    """
    r = mpmath.floor(min(roots)) - 1
    b2, b4, b6, b8 = (mpf(E.b2), mpf(E.b4), mpf(E.b6), mpf(E.b8))
    b8 = b8 + 3 * r * b6 + 3 * r * r * b4 + r ** 3 * b2 + 3 * r ** 4
    b6 = b6 + 2 * r * b4 + r * r * b2 + 4 * r ** 3
    b4 = b4 + r * b2 + 6 * r * r
    b2 = b2 + 12 * r
    x = mpf(P.x.numerator) / P.x.denominator - r
    t = 1 / x
    lam = mpmath.log(abs(x)) / 2
    weight = mpf(1) / 8
    biggest = mpf(0)
    n = 0
    while True:
        t2 = t * t
        z = 1 - b4 * t2 - 2 * b6 * t2 * t - b8 * t2 * t2
        w = 4 * t + b2 * t2 + 2 * b4 * t2 * t + b6 * t2 * t2
        term = mpmath.log(abs(z))
        biggest = max(biggest, abs(term))
        lam += weight * term
        t = w / z
        n += 1
        weight /= 4
        # remaining weights sum to weight * 4/3
        bound = weight * mpf(4) / 3 * max(biggest, 1)
        if bound < tol / 10 or n > 200:
            return lam, float(bound)


def canonical_height(P: Point, E: WeierstrassModel, precision: float = DEFAULT_PRECISION,
                     local: Optional[dict] = None) -> HeightValue:
    """Canonical height of P on the minimal model E."""
    if not on_curve(P, E):
        raise PointNotOnCurve(f"{P} is not on {E}")
    if P.is_identity or order_of(P, E):
        return HeightValue(mpf(0), 0.0)
    local = local if local is not None else local_data(E)
    digits = max(20, int(-math.log10(precision)) + 12)
    with mp.workdps(digits):
        roots = real_roots(E, digits)
        lam, err = _archimedean(P, E, roots, precision)
        finite = mpmath.log(P.x.denominator)
        for p, ld in local.items():
            corr = _finite_correction(P, E, ld)
            if corr:
                finite += mpf(corr.numerator) / corr.denominator * mpmath.log(p)
        h = 2 * lam + finite
    return HeightValue(+h, 2 * err)


def height_pairing(P: Point, Q: Point, E: WeierstrassModel,
                   precision: float = DEFAULT_PRECISION, local=None) -> mpf:
    """<P, Q> = (h(P + Q) - h(P) - h(Q)) / 2."""
    local = local if local is not None else local_data(E)
    for R in (P, Q):
        if not on_curve(R, E):
            raise PointNotOnCurve(f"{R} is not on {E}")
    h = lambda R: canonical_height(R, E, precision, local).value
    return (h(_add(P, Q, E)) - h(P) - h(Q)) / 2


def gram_matrix(points: Sequence[Point], E: WeierstrassModel,
                precision: float = DEFAULT_PRECISION, local=None) -> mpmath.matrix:
    local = local if local is not None else local_data(E)
    r = len(points)
    G = mpmath.matrix(r, r)
    heights = [canonical_height(P, E, precision, local).value for P in points]
    for i in range(r):
        G[i, i] = heights[i]
        for j in range(i + 1, r):
            s = canonical_height(_add(points[i], points[j], E), E, precision, local).value
            G[i, j] = G[j, i] = (s - heights[i] - heights[j]) / 2
    return G


def regulator(points: Sequence[Point], E: WeierstrassModel,
              precision: float = DEFAULT_PRECISION, local=None,
              tolerance: float = 1e-8) -> RegulatorResult:
    """det of the height pairing matrix; 1 for the empty list."""
    if not points:
        return RegulatorResult(mpf(1), mpmath.matrix(0, 0))
    digits = max(20, int(-math.log10(precision)) + 12)
    with mp.workdps(digits):
        G = gram_matrix(points, E, precision, local)
        det = mpmath.det(G)
        if det <= tolerance:
            raise DependentGenerators(f"regulator {mpmath.nstr(det, 6)} is not positive")
        mpmath.cholesky(G)
    return RegulatorResult(+det, G)


def naive_height(x: Fraction) -> float:
    """log max(|num|, |den|) of a rational x."""
    x = Fraction(x)
    return math.log(max(abs(x.numerator), x.denominator))


def height_by_duplication(P: Point, E: WeierstrassModel, doublings: int = 8) -> float:
    """h(x(2^k P)) / 4^k; converges to the canonical height like O(4^-k).

    Slow and crude; kept as an independent check on :func:`canonical_height`.
    """
    Q = P
    for _ in range(doublings):
        Q = _add(Q, Q, E)
        if Q.is_identity:
            return 0.0
    num, den = Q.x.numerator, Q.x.denominator
    bits = max(abs(num), den).bit_length()
    shift = max(0, bits - 60)
    log_max = math.log(max(abs(num), den) >> shift) + shift * math.log(2)
    return log_max / 4 ** doublings
