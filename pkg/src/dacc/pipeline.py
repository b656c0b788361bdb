"""Per-curve and batch verification."""

from __future__ import annotations

import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional, Union

import mpmath

from . import certificate as cert_mod
from .curve import minimal_model, torsion_subgroup, validate_generators
from .fixtures import CurveInputRecord
from .heights import canonical_height, regulator
from .local import conductor, local_data, tamagawa_product
from .lseries import analytic_rank, build_lseries, truncation_length
from .periods import real_period

REL_TOL_TABLE = 5e-4


@dataclass(frozen=True)
class Config:
    precision: int = 40
    terms: Union[int, str] = "auto"
    tol_rank: float = 1e-3
    tol_bsd: float = 1e-3
    jobs: int = 1
    cache_dir: Optional[str] = None
    height_precision: float = 1e-12

    @property
    def lseries_precision(self) -> float:
        return 10.0 ** (-(self.precision // 2))

    @property
    def lseries_digits(self) -> int:
        return self.precision // 2 + 5


@dataclass(frozen=True)
class Predicate:
    name: str
    passed: bool
    computed: str
    expected: str
    tolerance: str


@dataclass
class VerificationReport:
    label: str
    ainvs: tuple = ()
    minimal_ainvs: tuple = ()
    conductor: Optional[int] = None
    conductor_factorization: tuple = ()
    local: tuple = ()  # (p, kodaira, f_p, c_p, reduction)
    tamagawa_product: Optional[int] = None
    torsion_order: Optional[int] = None
    torsion_structure: tuple = ()
    omega: Optional[mpmath.mpf] = None
    components: Optional[int] = None
    generators: tuple = ()
    heights: tuple = ()
    regulator: Optional[mpmath.mpf] = None
    epsilon: Optional[int] = None
    n_max: Optional[int] = None
    an_stats: dict = field(default_factory=dict)
    rank_algebraic: Optional[int] = None
    rank_analytic: Optional[int] = None
    leading: Optional[mpmath.mpf] = None
    leading_error: Optional[float] = None
    lower_coefficients: tuple = ()
    asi: Optional[int] = None
    pages: tuple = ()
    duality_ok: Optional[bool] = None
    parity_ok: Optional[bool] = None
    ledger: Optional[cert_mod.DeterminantLedger] = None
    sha: Optional[cert_mod.ShaInference] = None
    bsd_error: Optional[float] = None
    lvalue_match: Optional[str] = None
    predicates: list = field(default_factory=list)
    stage_errors: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.stage_errors and all(p.passed for p in self.predicates)


class SkippedStage(Exception):
    pass


def _need(report: VerificationReport, *names: str):
    missing = [n for n in names if getattr(report, n) is None]
    if missing:
        raise SkippedStage(f"needs {', '.join(missing)}")


def _rel(a, b) -> float:
    return abs(float(a) - float(b)) / abs(float(b))


class _Stages:
    def __init__(self, report: VerificationReport):
        self.report = report
        self.failed = False

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        except Exception as exc:  # isolated per stage, recorded in the report
            self.report.stage_errors[name] = f"{type(exc).__name__}: {exc}"
            self.failed = True
        finally:
            self.report.timings[name] = time.perf_counter() - start


def verify_curve(rec: CurveInputRecord, config: Config = Config()) -> VerificationReport:
    report = VerificationReport(rec.label, tuple(rec.coefficients))
    st = _Stages(report)
    ctx = {}

    with st.stage("model"):
        record = rec.to_record()
        E, T = minimal_model(record.model)
        ctx["E"] = E
        report.minimal_ainvs = E.ainvs
        if not T.is_identity:
            report.caveats.append("input model was not minimal; invariants refer to the minimal model")
    if st.failed:
        return report

    with st.stage("local"):
        local = local_data(E)
        ctx["local"] = local
        cond = conductor(E, local)
        report.conductor = cond.N
        report.conductor_factorization = cond.factorization
        report.local = tuple((p, ld.kodaira, ld.f_p, ld.c_p, ld.reduction) for p, ld in local.items())
        report.tamagawa_product = tamagawa_product(local)

    with st.stage("torsion"):
        tors = torsion_subgroup(E)
        report.torsion_order = tors.order
        report.torsion_structure = tors.structure

    with st.stage("period"):
        arch = real_period(E, config.precision)
        report.omega = arch.omega
        report.components = arch.components

    with st.stage("heights"):
        gens = validate_generators(record)
        report.generators = tuple(str(P) for P in gens)
        report.rank_algebraic = len(gens)
        report.heights = tuple(canonical_height(P, E, config.height_precision, ctx["local"]).value
                               for P in gens)
        report.regulator = regulator(gens, E, config.height_precision, ctx["local"]).regulator
        if gens:
            report.caveats.append("generators are trusted input; saturation is not checked")

    with st.stage("lseries"):
        terms = None if config.terms == "auto" else int(config.terms)
        data = build_lseries(E, config.lseries_precision, config.lseries_digits, terms,
                             ctx.get("local"), rec.label, config.cache_dir)
        report.epsilon = data.epsilon
        report.n_max = data.n_max
        primes = [p for p in data.coefficients.primes() if p <= data.n_max]
        report.an_stats = {
            "primes": len(primes),
            "max_abs_ap_over_2sqrtp": max(
                (abs(data.coefficients[p]) / (2 * p ** 0.5) for p in primes), default=0.0),
        }
        ar = analytic_rank(data, config.tol_rank)
        report.rank_analytic = ar.rank
        report.leading = ar.leading.value
        report.leading_error = ar.leading.error_bound
        report.lower_coefficients = tuple((c.r, c.value) for c in ar.checked[:-1])

    with st.stage("certificate"):
        _need(report, "rank_algebraic", "regulator")
        r = report.rank_algebraic
        L0 = None
        if r == 0:
            _need(report, "leading")
            L0 = float(report.leading) if report.rank_analytic == 0 else 0.0
        c = cert_mod.build_certificate(r, float(report.regulator), L0,
                                       record.selmer_dim, config.tol_rank)
        if report.epsilon is not None:
            c = cert_mod.duality_check(c, report.epsilon)
        report.asi = c.asi
        report.pages = tuple((p.page, p.forced_zero, p.target_dim_lower_bound, p.reason)
                             for p in c.pages)
        report.duality_ok = c.duality_ok
        report.parity_ok = c.epsilon_parity_ok

    with st.stage("ledger"):
        _need(report, "leading", "omega", "regulator", "tamagawa_product", "torsion_order")
        omega, reg = report.omega, report.regulator
        sha = cert_mod.infer_sha(report.leading, omega, reg, report.tamagawa_product,
                                 report.torsion_order)
        report.sha = sha
        report.caveats.extend(sha.warnings)
        sha_used = sha.rounded
        ledger = cert_mod.assemble_determinant(
            omega, reg, {p: c for p, _, _, c, _ in report.local}, report.torsion_order, sha_used)
        report.ledger = ledger
        report.bsd_error = cert_mod.bsd_error(ledger.bsd_leading, report.leading)

    _predicates(report, rec, config)
    return report


def _predicates(report: VerificationReport, rec: CurveInputRecord, config: Config):
    P = report.predicates

    def add(name, passed, computed, expected, tol):
        P.append(Predicate(name, bool(passed), str(computed), str(expected), str(tol)))

    if None not in (report.rank_algebraic, report.rank_analytic, report.asi):
        agree = cert_mod.verify_rank_equality(report.rank_algebraic, report.rank_analytic, report.asi)
        add("rank_equality", agree.ok,
            f"{report.rank_algebraic}/{report.rank_analytic}/{report.asi}", "all equal", 0)
    if report.epsilon is not None and report.rank_analytic is not None:
        add("root_number_parity", report.epsilon == (-1) ** report.rank_analytic,
            report.epsilon, (-1) ** report.rank_analytic, 0)
    if report.duality_ok is not None:
        add("duality_indices", report.duality_ok, report.duality_ok, True, 0)
    if report.bsd_error is not None:
        add("leading_coefficient", report.bsd_error < config.tol_bsd,
            _num(report.ledger.bsd_leading), _num(report.leading), config.tol_bsd)
    if report.sha is not None:
        add("sha_integrality", report.sha.deviation < 1e-2,
            _num(report.sha.raw_ratio), report.sha.rounded, 1e-2)

    exp = dict(rec.expected)
    checks = [
        ("omega", report.omega, REL_TOL_TABLE),
        ("reg", report.regulator, REL_TOL_TABLE),
        ("det", report.ledger.det_dr if report.ledger else None, config.tol_bsd),
    ]
    for key, value, tol in checks:
        if key in exp and value is not None:
            add(f"expected_{key}", _rel(value, exp[key]) < tol, _num(value), exp[key], tol)
    for key, value in (("tam", report.tamagawa_product), ("tors", report.torsion_order),
                       ("rank", report.rank_analytic),
                       ("sha", report.sha.rounded if report.sha else None)):
        if key in exp and value is not None:
            add(f"expected_{key}", value == exp[key], value, exp[key], 0)
    if "lval" in exp and report.leading is not None and report.rank_analytic == 0:
        cands = exp["lval"]
        hits = [c for c in cands if _rel(report.leading, c) < config.tol_bsd]
        misses = [c for c in cands if c not in hits]
        if hits:
            report.lvalue_match = f"matches printed {hits[0]}" + (
                f"; disagrees with printed {', '.join(map(str, misses))}" if misses else "")
        else:
            report.lvalue_match = "matches none of the printed values"
        add("expected_lval", bool(hits), _num(report.leading),
            "|".join(map(str, cands)), config.tol_bsd)


def _num(x, digits: int = 10) -> str:
    return mpmath.nstr(mpmath.mpf(x), digits)


# -- batch -----------------------------------------------------------------


@dataclass
class BatchSummary:
    total: int
    by_rank: dict  # rank (or None) -> {"curves", "agree", "disagree"}
    max_bsd_error: Optional[float]
    mean_bsd_error: Optional[float]
    failures: list


def _verify_indexed(args):
    rec, config = args
    return verify_curve(rec, config)


def batch_verify(records: list[CurveInputRecord], config: Config = Config()):
    """Verify every record; returns (summary, reports in input order)."""
    jobs = config.jobs or os.cpu_count() or 1
    inner = Config(**{**config.__dict__, "jobs": 1})
    if jobs > 1 and len(records) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(min(jobs, len(records))) as ex:
            reports = list(ex.map(_verify_indexed, [(r, inner) for r in records]))
    else:
        reports = [verify_curve(r, inner) for r in records]
    return summarise(reports), reports


def summarise(reports) -> BatchSummary:
    by_rank: dict = {}
    errors = []
    failures = []
    for rep in reports:
        row = by_rank.setdefault(rep.rank_algebraic, {"curves": 0, "agree": 0, "disagree": 0})
        row["curves"] += 1
        if rep.asi is not None and rep.asi == rep.rank_algebraic:
            row["agree"] += 1
        else:
            row["disagree"] += 1
        if rep.bsd_error is not None:
            errors.append(rep.bsd_error)
        if not rep.passed:
            failures.append(rep.label)
    return BatchSummary(
        len(reports), by_rank,
        max(errors) if errors else None,
        sum(errors) / len(errors) if errors else None,
        failures,
    )


def auto_terms(N: int, config: Config = Config()) -> int:
    return truncation_length(N, config.lseries_precision)
