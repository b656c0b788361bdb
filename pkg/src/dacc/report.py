"""Tables from verification reports.

``table1``, ``table2`` and ``sha_ratios`` print numbers at four decimals;
``full`` prints every numeric field in scientific notation at full working
precision and leaves out timings, so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

import mpmath

from .pipeline import VerificationReport, summarise

FORMATS = ("csv", "tsv", "markdown")
TABLES = ("table1", "table2", "sha_ratios", "full")
DASH = "–"
FULL_DIGITS = 20


def _f4(x) -> str:
    return "" if x is None else f"{float(x):.4f}"


def _sci(x) -> str:
    if x is None:
        return ""
    return mpmath.nstr(mpmath.mpf(x), FULL_DIGITS, min_fixed=1, max_fixed=0)


def _table1(reports):
    header = ["Curve", "Rank", "Omega_E", "R_E", "prod c_p", "Sha", "det(d_r)"]
    rows = []
    for r in reports:
        rank = r.rank_algebraic
        det = r.ledger.det_dr if r.ledger else None
        rows.append([
            r.label,
            "" if rank is None else str(rank),
            _f4(r.omega),
            _f4(r.regulator),
            "" if r.tamagawa_product is None else str(r.tamagawa_product),
            "" if r.sha is None else str(r.sha.rounded),
            DASH if rank == 0 else _f4(det),
        ])
    return header, rows


def _table2(reports):
    header = ["Rank", "Curves", "ASI = Rank", "ASI != Rank", "Agreement"]
    summary = summarise(reports)
    keys = sorted((k for k in summary.by_rank if k is not None))
    if None in summary.by_rank:
        keys.append(None)
    rows = []
    total = agree = 0
    for k in keys:
        row = summary.by_rank[k]
        total += row["curves"]
        agree += row["agree"]
        rows.append(["?" if k is None else str(k), str(row["curves"]), str(row["agree"]),
                     str(row["disagree"]), f"{100 * row['agree'] / row['curves']:.0f}%"])
    if reports:
        rows.append(["All", str(total), str(agree), str(total - agree),
                     f"{100 * agree / total:.0f}%"])
    return header, rows


def _table_sha(reports):
    header = ["Curve", "L-value", "Period", "Tamagawa", "Torsion", "BSD Ratio",
              "Implied Sha", "Note"]
    rows = []
    for r in reports:
        rows.append([
            r.label,
            _f4(r.leading),
            _f4(r.omega),
            "" if r.tamagawa_product is None else str(r.tamagawa_product),
            "" if r.torsion_order is None else str(r.torsion_order),
            _f4(r.sha.raw_ratio) if r.sha else "",
            f"{r.sha.rounded:.1f}" if r.sha else "",
            r.lvalue_match or "",
        ])
    return header, rows


FULL_COLUMNS = (
    "label", "conductor", "rank_algebraic", "rank_analytic", "asi", "epsilon", "n_max",
    "omega", "regulator", "tamagawa_product", "torsion_order", "leading", "leading_error",
    "sha_raw", "sha", "det_dr", "bsd_leading", "bsd_error", "lvalue_match", "passed",
    "failed_predicates", "stage_errors",
)


def _table_full(reports):
    rows = []
    for r in reports:
        led = r.ledger
        failed = [p.name for p in r.predicates if not p.passed]
        values = {
            "label": r.label,
            "conductor": r.conductor,
            "rank_algebraic": r.rank_algebraic,
            "rank_analytic": r.rank_analytic,
            "asi": r.asi,
            "epsilon": r.epsilon,
            "n_max": r.n_max,
            "omega": _sci(r.omega),
            "regulator": _sci(r.regulator),
            "tamagawa_product": r.tamagawa_product,
            "torsion_order": r.torsion_order,
            "leading": _sci(r.leading),
            "leading_error": _sci(r.leading_error),
            "sha_raw": _sci(r.sha.raw_ratio) if r.sha else None,
            "sha": r.sha.rounded if r.sha else None,
            "det_dr": _sci(led.det_dr) if led else None,
            "bsd_leading": _sci(led.bsd_leading) if led else None,
            "bsd_error": _sci(r.bsd_error),
            "lvalue_match": r.lvalue_match,
            "passed": r.passed,
            "failed_predicates": " ".join(failed),
            "stage_errors": " | ".join(f"{k}: {v}" for k, v in sorted(r.stage_errors.items())),
        }
        rows.append(["" if values[c] is None else str(values[c]) for c in FULL_COLUMNS])
    return list(FULL_COLUMNS), rows


_BUILDERS = {"table1": _table1, "table2": _table2, "sha_ratios": _table_sha, "full": _table_full}


def _render(header: Sequence[str], rows, fmt: str) -> str:
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    out = io.StringIO()
    writer = csv.writer(out, delimiter="\t" if fmt == "tsv" else ",", lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def emit_report(reports: Iterable[VerificationReport], format: str = "csv",
                which: str = "full") -> str:
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    if which not in TABLES:
        raise ValueError(f"table must be one of {TABLES}")
    header, rows = _BUILDERS[which](list(reports))
    return _render(header, rows, format)
