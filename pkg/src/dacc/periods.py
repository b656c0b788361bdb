"""Real period of the Néron differential via the arithmetic-geometric mean."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath
from mpmath import mp, mpf

from .curve import WeierstrassModel
from .errors import PrecisionUnachievable

DEFAULT_DIGITS = 40


@dataclass(frozen=True)
class ArchimedeanData:
    omega: mpf
    components: int
    roots: tuple
    agm_iterations: int


def real_components(E: WeierstrassModel) -> int:
    return 2 if E.disc > 0 else 1


def agm(a, b, digits: int):
    """Real AGM of positive a, b; returns (value, iterations)."""
    budget = int(mpmath.log(digits + 1, 2)) + 8
    eps = mpf(10) ** (-digits - 5)
    for k in range(1, budget + 1):
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
        if abs(a - b) <= eps * abs(a):
            return a, k
    raise PrecisionUnachievable(f"AGM did not converge in {budget} steps")


def _cubic_coeffs(E):
    return (4, E.b2, 2 * E.b4, E.b6)


def _eval(coeffs, x):
    v = 0
    for c in coeffs:
        v = v * x + c
    return v


def _bisect(coeffs, lo, hi, digits):
    """Root of the cubic in [lo, hi] where it changes sign; exact rational
    bisection to an integer bracket, then high precision refinement."""
    flo = _eval(coeffs, lo)
    if flo == 0:
        return mpf(lo.numerator) / lo.denominator
    lo_m, hi_m = mpf(lo.numerator) / lo.denominator, mpf(hi.numerator) / hi.denominator
    f = lambda x: _eval(coeffs, x)
    sign_lo = flo > 0
    for _ in range(mp.prec + 20):
        mid = (lo_m + hi_m) / 2
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == sign_lo:
            lo_m = mid
        else:
            hi_m = mid
        if hi_m - lo_m < mpf(2) ** (-mp.prec) * max(1, abs(mid)):
            break
    x = (lo_m + hi_m) / 2
    fp = lambda x: (3 * coeffs[0] * x + 2 * coeffs[1]) * x + coeffs[2]
    for _ in range(3):
        d = fp(x)
        if d == 0:
            break
        x -= f(x) / d
    return x


def real_roots(E: WeierstrassModel, digits: int = DEFAULT_DIGITS) -> list:
    """Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6, in decreasing order."""
    coeffs = _cubic_coeffs(E)
    # critical points of the cubic split the line into monotone pieces
    a, b, c = 12, 2 * E.b2, 2 * E.b4  # derivative 12x^2 + 2 b2 x + 2 b4
    disc = b * b - 4 * a * c
    bound = Fraction(1 + max(abs(x) for x in coeffs[1:]))
    cuts = []
    if disc > 0:
        s = isqrt(disc)
        # integer-rounded brackets around (-b -+ sqrt(disc)) / (2a)
        cuts = [Fraction(-b - s - 1, 2 * a), Fraction(-b - s, 2 * a),
                Fraction(-b + s, 2 * a), Fraction(-b + s + 1, 2 * a)]
    edges = sorted({-bound, bound, *cuts})
    roots = []
    with mp.workdps(digits + 15):
        for lo, hi in zip(edges, edges[1:]):
            flo, fhi = _eval(coeffs, lo), _eval(coeffs, hi)
            if flo == 0:
                roots.append(mpf(lo.numerator) / lo.denominator)
            elif fhi != 0 and (flo > 0) != (fhi > 0):
                roots.append(_bisect(coeffs, lo, hi, digits))
        if _eval(coeffs, edges[-1]) == 0:
            roots.append(mpf(edges[-1].numerator) / edges[-1].denominator)
        roots = sorted(set(roots), reverse=True)
    # the thin bracket between cuts may hide a pair of close roots; the
    # discriminant sign decides how many real roots there must be
    expected = 3 if E.disc > 0 else 1
    if len(roots) != expected:
        with mp.workdps(digits + 15):
            cand = mpmath.polyroots([mpf(x) for x in coeffs], maxsteps=200,
                                    extraprec=4 * digits)
            roots = sorted((r.real for r in cand if abs(r.imag) < mpf(10) ** (-digits)),
                           reverse=True)
    if len(roots) != expected:
        raise PrecisionUnachievable("could not isolate the real roots of the cubic")
    return roots


def real_period(E: WeierstrassModel, digits: int = DEFAULT_DIGITS) -> ArchimedeanData:
    """Omega_E: least positive real period times the number of components.

    ``E`` should be a minimal model so that the invariant differential is
    the Néron differential.
    """
    if digits > 60:
        raise PrecisionUnachievable("precision above 60 digits is not supported")
    with mp.workdps(digits + 10):
        roots = real_roots(E, digits)
        if E.disc > 0:
            e1, e2, e3 = roots
            m, iters = agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2), digits)
            omega = 2 * mpmath.pi / m
            components = 2
        else:
            (e1,) = roots
            b2 = mpf(E.b2) / 4
            # z^2 = f'(e1) / 4 = |e1 - e2|^2 for the complex pair e2, e3
            z = mpmath.sqrt((12 * e1 * e1 + 2 * E.b2 * e1 + 2 * E.b4) / 4)
            m, iters = agm(2 * mpmath.sqrt(z), mpmath.sqrt(2 * z + 3 * e1 + b2), digits)
            omega = 2 * mpmath.pi / m
            components = 1
        omega = +omega
    with mp.workdps(digits):
        return ArchimedeanData(+omega, components, tuple(+r for r in roots), iters)
