"""Spectral certificate and determinant ledger.

Nothing here computes cohomology.  The certificate records, page by page,
which differentials of the rank spectral sequence are forced to vanish by
the dimension count and which one carries the regulator; the ledger
assembles the determinant of that differential from the classical
invariants, one factor per place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from math import comb, isqrt
from typing import Mapping, Optional, Union

from .errors import Inconclusive, NonPositiveRatio, ZeroRegulator

DIMENSION_ARGUMENT = "dimension-argument"
REGULATOR_NONZERO = "regulator-nonzero"
RANK_ZERO_ACYCLIC = "rank-zero-acyclic"

DEFAULT_TOL = 1e-3
SHA_DEVIATION_WARN = 1e-2


@dataclass(frozen=True)
class DifferentialStatus:
    page: int
    source: tuple[int, int]
    target: tuple[int, int]
    source_dim: int
    target_dim_lower_bound: int
    forced_zero: bool
    reason: str


@dataclass(frozen=True)
class SpectralCertificate:
    rank: int
    selmer_dim: int
    pages: tuple[DifferentialStatus, ...]
    asi: int
    b0: int
    b1: int
    reason: Optional[str] = None
    duality_ok: Optional[bool] = None
    epsilon_parity_ok: Optional[bool] = None
    dual_positions: tuple = ()

    @property
    def first_nonzero_page(self) -> Optional[int]:
        for st in self.pages:
            if not st.forced_zero:
                return st.page
        return None


def binomial_vanishing(s: int, selmer_dim: int) -> tuple[bool, int]:
    """Forcing criterion for d_s: target bound C(selmer_dim, s) exceeding 1."""
    if s < 1 or selmer_dim < 0:
        raise ValueError("need s >= 1 and selmer_dim >= 0")
    bound = comb(selmer_dim, s)
    return bound > 1, bound


def _target(s: int, source=(0, 0)) -> tuple[int, int]:
    p, q = source
    return (p + s, q - s + 1)


def build_certificate(r: int, regulator: float = 1.0, L0: Optional[float] = None,
                      selmer_dim: Optional[int] = None,
                      tol: float = DEFAULT_TOL) -> SpectralCertificate:
    if r < 0:
        raise ValueError("rank must be non-negative")
    selmer_dim = r if selmer_dim is None else selmer_dim
    if selmer_dim < r:
        raise ValueError(f"Selmer dimension {selmer_dim} below rank {r}")
    if r == 0:
        if L0 is None or abs(L0) <= tol:
            raise Inconclusive("rank 0 requires L(E,1) above tolerance")
        return SpectralCertificate(0, selmer_dim, (), 0, 0, 0, RANK_ZERO_ACYCLIC)
    if regulator <= tol:
        raise ZeroRegulator(f"regulator {regulator} vanishes for rank {r}")
    pages = []
    for s in range(1, r):
        forced, bound = binomial_vanishing(s, selmer_dim)
        if not forced:
            raise AssertionError(f"page {s} not forced below the rank")
        pages.append(DifferentialStatus(s, (0, 0), _target(s), 1, bound, True,
                                        DIMENSION_ARGUMENT))
    pages.append(DifferentialStatus(r, (0, 0), _target(r), 1, comb(selmer_dim, r), False,
                                    REGULATOR_NONZERO))
    return SpectralCertificate(r, selmer_dim, tuple(pages), r, 0, r)


def dual_index(p: int, q: int, r: int) -> tuple[int, int]:
    return (-p - r, -q + r - 1)


def duality_check(cert: SpectralCertificate, epsilon: int) -> SpectralCertificate:
    """Record the parity test and register the dual of every page position."""
    parity = epsilon == (-1) ** cert.rank
    registered = []
    for st in cert.pages:
        for pos in (st.source, st.target):
            registered.append((st.page, pos, dual_index(*pos, st.page)))
    ok = all(dual_index(*dual, page) == pos for page, pos, dual in registered)
    return replace(cert, duality_ok=ok, epsilon_parity_ok=parity,
                   dual_positions=tuple(registered))


@dataclass(frozen=True)
class DeterminantLedger:
    omega: float
    regulator: float
    tamagawa: tuple[tuple[int, int], ...]
    tamagawa_product: int
    torsion_order: int
    sha: int
    det_dr: float  # Omega * R * prod c_p / Sha
    det_dr_torsion: float  # the same divided by torsion^2
    bsd_leading: float  # Omega * R * prod c_p * Sha / torsion^2


def assemble_determinant(omega, regulator,
                         tamagawa: Union[int, Mapping[int, int]],
                         torsion: int = 1, sha: int = 1) -> DeterminantLedger:
    if isinstance(tamagawa, Mapping):
        breakdown = tuple(sorted((int(p), int(c)) for p, c in tamagawa.items()))
        tam = math.prod(c for _, c in breakdown)
    else:
        breakdown = ()
        tam = int(tamagawa)
    for name, v in (("omega", omega), ("regulator", regulator), ("tamagawa", tam),
                    ("torsion", torsion), ("sha", sha)):
        if v <= 0:
            raise ValueError(f"{name} must be positive, got {v}")
    base = omega * regulator * tam
    return DeterminantLedger(
        omega, regulator, breakdown, tam, torsion, sha,
        det_dr=base / sha,
        det_dr_torsion=base / (sha * torsion * torsion),
        bsd_leading=base * sha / (torsion * torsion),
    )


@dataclass(frozen=True)
class ShaInference:
    raw_ratio: float
    rounded: int
    is_square: bool
    deviation: float
    warnings: tuple[str, ...] = ()


def infer_sha(leading, omega, regulator, tamagawa, torsion) -> ShaInference:
    """Analytic order of Sha: c_r * torsion^2 / (Omega * R * prod c_p)."""
    denom = omega * regulator * tamagawa
    if leading <= 0 or denom <= 0:
        raise NonPositiveRatio(f"cannot infer Sha from leading={leading}, denominator={denom}")
    raw = leading * torsion * torsion / denom
    rounded = max(1, int(round(float(raw))))
    deviation = abs(float(raw) - rounded) / rounded
    square = isqrt(rounded) ** 2 == rounded
    warnings = []
    if not square:
        warnings.append(f"implied Sha {rounded} is not a perfect square")
    if deviation > SHA_DEVIATION_WARN:
        warnings.append(f"raw ratio {float(raw):.6f} is {deviation:.2e} from an integer")
    return ShaInference(raw, rounded, square, deviation, tuple(warnings))


def bsd_error(det_dr, c_r) -> float:
    """|det_dr - c_r| / c_r."""
    if c_r == 0:
        raise ZeroDivisionError("reference coefficient is zero")
    return abs(float(det_dr) - float(c_r)) / abs(float(c_r))


@dataclass(frozen=True)
class RankAgreement:
    algebraic_analytic: bool
    algebraic_asi: bool
    analytic_asi: bool

    @property
    def ok(self) -> bool:
        return self.algebraic_analytic and self.algebraic_asi and self.analytic_asi


def verify_rank_equality(r_algebraic: int, r_analytic: int, asi: int) -> RankAgreement:
    return RankAgreement(r_algebraic == r_analytic, r_algebraic == asi, r_analytic == asi)
