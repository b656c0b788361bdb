"""L(E, s) near s = 1: root number, Taylor coefficients, analytic rank.

Taylor coefficients come from the rapidly convergent series

    L^(r)(E, 1) / r! = 2 * sum_{n >= 1} (a_n / n) * G_r(2 pi n / sqrt(N))

valid when (-1)^r equals the root number; the other parity vanishes
identically by the functional equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import mpmath
from mpmath import mp, mpf

from .curve import WeierstrassModel
from .errors import AmbiguousSign, DomainError, Inconclusive, ParityMismatch
from .local import ApTable, an_table, cached_ap_values, conductor, local_data

MAX_ORDER = 5
TRUNCATION_MARGIN = 5
DEFAULT_RANK_TOL = 1e-3


def truncation_length(N: int, precision: float) -> int:
    """Number of terms so that the series tail falls below ``precision``."""
    if N < 11:
        raise ValueError("conductor of an elliptic curve over Q is at least 11")
    return math.ceil(math.sqrt(N) / (2 * math.pi) * (math.log(1 / precision) + TRUNCATION_MARGIN))


# -- the kernels G_r -------------------------------------------------------


@lru_cache(maxsize=32)
def _gamma_taylor(r: int, dps: int) -> tuple:
    with mp.workdps(dps):
        return tuple(mpmath.taylor(lambda s: mpmath.gamma(1 + s), 0, r))


@lru_cache(maxsize=32)
def _asymptotic_coeffs(r: int, dps: int, count: int = 160) -> tuple:
    # Taylor coefficients of log(1+u)^(r-1) / ((r-1)! (1+u)) at u = 0
    with mp.workdps(dps):
        coeffs = [mpf(0)] * count
        # log(1+u)^(r-1) by repeated multiplication of series
        log_series = [mpf(0)] + [mpf((-1) ** (k + 1)) / k for k in range(1, count)]
        power = [mpf(1)] + [mpf(0)] * (count - 1)
        for _ in range(r - 1):
            power = [mpmath.fsum(power[i] * log_series[k - i] for i in range(k + 1))
                     for k in range(count)]
        inv = [mpf((-1) ** k) for k in range(count)]  # 1 / (1 + u)
        fact = mpmath.factorial(r - 1)
        coeffs = [mpmath.fsum(power[i] * inv[k - i] for i in range(k + 1)) / fact
                  for k in range(count)]
        return tuple(coeffs)


def _g_series(r: int, x, digits: int):
    # terms grow to about e^x while the sum decays like e^-x
    extra = int(2 * float(x) / 2.302585) + 10
    dps = digits + extra
    with mp.workdps(dps):
        x = mpf(x)
        L = -mpmath.log(x)
        gt = _gamma_taylor(r, dps)
        poly = mpmath.fsum(gt[j] * L ** (r - j) / mpmath.factorial(r - j) for j in range(r + 1))
        total = mpf(0)
        term = mpf(1)
        n = 1
        eps = mpf(10) ** (-dps)
        sign = -1 if r % 2 == 0 else 1  # (-1)^(n - r) at n = 1
        while True:
            term = term * x / n
            contrib = sign * term / mpf(n) ** r
            total += contrib
            if n > x and abs(contrib) < eps:
                break
            sign = -sign
            n += 1
        return poly + total


def _g_asymptotic(r: int, x, digits: int):
    dps = digits + 10
    with mp.workdps(dps):
        x = mpf(x)
        coeffs = _asymptotic_coeffs(r, dps)
        total = mpf(0)
        term_scale = 1 / x
        last = None
        for k, f in enumerate(coeffs):
            contrib = f * term_scale
            if last is not None and abs(contrib) > abs(last) and k > 2:
                break
            total += contrib
            last = contrib
            if abs(contrib) < mpf(10) ** (-dps) * abs(total):
                break
            term_scale = term_scale * (k + 1) / x
        return mpmath.exp(-x) * total


def _asymptotic_ok(x, digits: int) -> bool:
    # the optimally truncated expansion has relative error about e^-x
    return float(x) > 2.302585 * (digits + 3)


def g_function(r: int, x, digits: int = 20):
    """G_r(x): G_0(x) = e^-x and G_r(x) = int_x^oo G_{r-1}(t) dt / t."""
    if x <= 0:
        raise DomainError("G_r needs x > 0")
    if not 0 <= r <= MAX_ORDER:
        raise DomainError(f"order {r} outside 0..{MAX_ORDER}")
    if r == 0:
        with mp.workdps(digits + 5):
            return mpmath.exp(-mpf(x))
    if _asymptotic_ok(x, digits):
        return _g_asymptotic(r, x, digits)
    return _g_series(r, x, digits)


def g_function_quadrature(r: int, x, digits: int = 20):
    """G_r by direct numerical integration of its defining integral.

    Uses G_r(x) = 1/(r-1)! * int_1^oo e^{-xy} log(y)^(r-1) dy / y with
    y = 1 + u/x, an independent route kept for cross-checking.
    """
    with mp.workdps(digits + 10):
        x = mpf(x)
        if r == 0:
            return mpmath.exp(-x)
        f = lambda u: mpmath.exp(-u) * mpmath.log1p(u / x) ** (r - 1) / (x + u)
        val = mpmath.quad(f, [0, 1, 10, 50, mpmath.inf])
        return mpmath.exp(-x) * val / mpmath.factorial(r - 1)


# -- L-series context ------------------------------------------------------


@dataclass
class LSeriesData:
    N: int
    epsilon: int
    n_max: int
    coefficients: ApTable
    digits: int = 30
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TaylorCoefficient:
    r: int
    value: mpf
    error_bound: float


def _chunks(n_max: int, size: int = 512):
    return [(lo, min(lo + size - 1, n_max)) for lo in range(1, n_max + 1, size)]


def _theta(table: ApTable, N: int, y, n_max: int, digits: int):
    with mp.workdps(digits + 10):
        step = 2 * mpmath.pi * mpf(y) / mpmath.sqrt(N)
        q = mpmath.exp(-step)
        parts = []
        for lo, hi in _chunks(n_max):
            qn = q ** lo
            acc = []
            for n in range(lo, hi + 1):
                a = table[n]
                if a:
                    acc.append(a * qn)
                qn *= q
            parts.append(mpmath.fsum(acc))
        return mpmath.fsum(parts)


def build_lseries(E: WeierstrassModel, precision: float = 1e-20, digits: int = 30,
                  n_max: Optional[int] = None, local=None, label=None,
                  cache_dir=None, jobs: int = 1) -> LSeriesData:
    """Conductor, a_n table and root number for E (a minimal model).

    The table is long enough for the root-number test, which needs the
    theta series at 1/y as well as at y.
    """
    local = local if local is not None else local_data(E)
    N = conductor(E, local).N
    n_auto = truncation_length(N, precision)
    n_max = n_max or n_auto
    n_table = max(n_max, int(math.ceil(1.5 * n_auto)))
    ap = cached_ap_values(E, n_table, label, cache_dir, local, jobs)
    table = an_table(E, n_table, local, ap)
    data = LSeriesData(N, 0, n_max, table, digits)
    data.epsilon = root_number(data, precision)
    return data


def root_number(data: LSeriesData, precision: float = 1e-20, retries: int = 4) -> int:
    """Sign of the functional equation.

    The theta series g(y) = sum a_n exp(-2 pi n y / sqrt(N)) satisfies
    g(1/y) = eps * y^2 * g(y); both signs are tried and the consistent one
    kept.
    """
    N, table = data.N, data.coefficients
    n_max = table.n_max
    tol = max(precision, 1e-30) * 1e4
    for y in ("1.2", "1.1", "1.3", "1.05", "1.4")[: retries + 1]:
        with mp.workdps(data.digits + 10):
            y = mpf(y)
            g_y = _theta(table, N, y, n_max, data.digits)
            g_inv = _theta(table, N, 1 / y, n_max, data.digits)
            res = {eps: abs(g_inv - eps * y * y * g_y) for eps in (1, -1)}
        good = [eps for eps, v in res.items() if v < tol]
        if len(good) == 1:
            return good[0]
    raise AmbiguousSign(f"root number undetermined for conductor {N}")


def leading_coefficient(data: LSeriesData, r: int, require_nonzero: bool = False,
                        n_max: Optional[int] = None, jobs: int = 1) -> TaylorCoefficient:
    """c_r = L^(r)(E, 1) / r!."""
    if not 0 <= r <= MAX_ORDER:
        raise DomainError(f"order {r} outside 0..{MAX_ORDER}")
    if (-1) ** r != data.epsilon:
        if require_nonzero:
            raise ParityMismatch(f"order {r} has the wrong parity for root number {data.epsilon}")
        return TaylorCoefficient(r, mpf(0), 0.0)
    n_max = n_max or data.n_max
    if n_max > data.coefficients.n_max:
        raise ValueError("coefficient table shorter than requested truncation")
    digits = data.digits
    table = data.coefficients
    chunks = _chunks(n_max)
    args = [(table.a[lo:hi + 1], lo, data.N, r, digits) for lo, hi in chunks]
    if jobs > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_chunk_sum, args))
    else:
        parts = [_chunk_sum(a) for a in args]
    with mp.workdps(digits + 10):
        value = 2 * mpmath.fsum(mpf(p) for p in parts)
        step = 2 * math.pi / math.sqrt(data.N)
        x0 = step * (n_max + 1)
        tail = 2 * math.exp(-x0) / (1 - math.exp(-step)) * max(1.0, 1 / x0)
        bound = tail + 10.0 ** (-digits + 2)
    return TaylorCoefficient(r, +value, bound)


def _chunk_sum(args):
    coeffs, lo, N, r, digits = args
    with mp.workdps(digits + 10):
        step = 2 * mpmath.pi / mpmath.sqrt(N)
        acc = []
        for i, a in enumerate(coeffs):
            if a:
                n = lo + i
                acc.append(mpf(a) / n * g_function(r, step * n, digits))
        # string form keeps full precision across process boundaries
        return mpmath.nstr(mpmath.fsum(acc), digits + 8, strip_zeros=False)


def taylor_coefficients(data: LSeriesData, k: int, jobs: int = 1) -> list[TaylorCoefficient]:
    return [leading_coefficient(data, r, jobs=jobs) for r in range(k + 1)]


@dataclass(frozen=True)
class AnalyticRank:
    rank: int
    leading: TaylorCoefficient
    checked: tuple[TaylorCoefficient, ...]


def analytic_rank(data: LSeriesData, tol: float = DEFAULT_RANK_TOL, jobs: int = 1) -> AnalyticRank:
    """Smallest r of the root number's parity with |c_r| > tol."""
    start = 0 if data.epsilon == 1 else 1
    checked = []
    for r in range(start, MAX_ORDER + 1, 2):
        c = leading_coefficient(data, r, jobs=jobs)
        checked.append(c)
        if abs(c.value) > tol:
            return AnalyticRank(r, c, tuple(checked))
    raise Inconclusive(f"all Taylor coefficients up to order {MAX_ORDER} are below {tol}")
