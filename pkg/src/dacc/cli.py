"""Command line entry point: ``dacc <subcommand> ...``.

A curve argument is either five comma-separated coefficients
(``0,0,1,-1,0``) or a label looked up in ``--fixtures`` (default: the
bundled fixture files).
"""

from __future__ import annotations

import argparse
import os
import sys

import mpmath

from . import certificate as cert_mod
from .curve import minimal_model, torsion_subgroup, validate_generators
from .errors import DaccError
from .fixtures import CurveInputRecord, bundled, parse_fixtures, parse_line
from .heights import regulator
from .local import conductor, local_data, tamagawa_product
from .lseries import analytic_rank, build_lseries
from .periods import real_period
from .pipeline import Config, batch_verify, verify_curve
from .report import FORMATS, TABLES, emit_report

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
BUNDLED = ("reference_curves.txt", "extended_curves.txt")


def _terms(text: str):
    if text == "auto":
        return text
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("--terms must be positive or 'auto'")
    return n


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--precision", type=int, default=40, help="working digits (default 40)")
    p.add_argument("--terms", type=_terms, default="auto", help="L-series terms, or 'auto'")
    p.add_argument("--tol-rank", type=float, default=1e-3)
    p.add_argument("--tol-bsd", type=float, default=1e-3)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--cache-dir", default=None, help="directory for cached a_p tables")
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--fixtures", action="append", default=None,
                   help="fixture file(s) for label lookup or batch input")


def _add_curve(p: argparse.ArgumentParser):
    p.add_argument("curve", help="label or a1,a2,a3,a4,a6")
    p.add_argument("--gens", default="", help="generators, e.g. '(-1:1)|(0:0)'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dacc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("invariants", "minimal model, local data, conductor, torsion, period"),
        ("lseries", "root number, Taylor coefficients at s=1, analytic rank"),
        ("certificate", "spectral certificate and determinant ledger"),
        ("verify", "full pipeline and predicates for one curve"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_curve(p)
        _add_common(p)
    p = sub.add_parser("batch", help="verify every curve of fixture files; per-rank summary")
    p.add_argument("files", nargs="*", help="fixture files (default: bundled)")
    _add_common(p)
    p = sub.add_parser("report", help="verify fixture files and print one table")
    p.add_argument("files", nargs="*", help="fixture files (default: bundled)")
    p.add_argument("--table", choices=TABLES, default="table1")
    p.add_argument("--output", default=None, help="write the table here instead of stdout")
    _add_common(p)
    return parser


def _config(args) -> Config:
    return Config(args.precision, args.terms, args.tol_rank, args.tol_bsd, args.jobs,
                  args.cache_dir)


def _load(files) -> list[CurveInputRecord]:
    if files:
        records = []
        for f in files:
            records.extend(parse_fixtures(f))
        return records
    return [r for name in BUNDLED for r in bundled(name)]


def _resolve(args) -> CurveInputRecord:
    text = args.curve.strip()
    if "," in text:
        line = f"input;{text}" + (f";gens={args.gens}" if args.gens else "")
        return parse_line(line, 1)
    for rec in _load(args.fixtures):
        if rec.label == text:
            if args.gens:
                return parse_line(f"{rec.label};{','.join(map(str, rec.coefficients))};gens={args.gens}", 1)
            return rec
    raise DaccError(f"unknown curve label {text!r}")


def _print_kv(rows):
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")


def _num(x, digits=15):
    return mpmath.nstr(mpmath.mpf(x), digits)


def cmd_invariants(args) -> int:
    rec = _resolve(args)
    E, _ = minimal_model(rec.to_record().model)
    local = local_data(E)
    N = conductor(E, local)
    tors = torsion_subgroup(E)
    arch = real_period(E, args.precision)
    rows = [
        ("minimal model", list(map(int, E.ainvs))),
        ("discriminant", E.disc),
        ("conductor", f"{N.N} = " + " * ".join(f"{p}^{e}" for p, e in N.factorization)),
    ]
    for p, ld in local.items():
        rows.append((f"p = {p}", f"{ld.kodaira}  f_p={ld.f_p}  c_p={ld.c_p}  {ld.reduction}"))
    rows += [
        ("tamagawa product", tamagawa_product(local)),
        ("torsion", f"{tors.order} {tors.structure} " + " ".join(map(str, tors.points))),
        ("real components", arch.components),
        ("real period", _num(arch.omega, args.precision)),
    ]
    _print_kv(rows)
    return EXIT_OK


def cmd_lseries(args) -> int:
    rec = _resolve(args)
    cfg = _config(args)
    E, _ = minimal_model(rec.to_record().model)
    terms = None if cfg.terms == "auto" else cfg.terms
    data = build_lseries(E, cfg.lseries_precision, cfg.lseries_digits, terms, label=rec.label,
                         cache_dir=cfg.cache_dir, jobs=cfg.jobs)
    ar = analytic_rank(data, cfg.tol_rank, cfg.jobs)
    rows = [("conductor", data.N), ("root number", data.epsilon), ("terms", data.n_max)]
    for c in ar.checked:
        rows.append((f"L^({c.r})(E,1)/{c.r}!", f"{_num(c.value)}  (+/- {c.error_bound:.1e})"))
    rows.append(("analytic rank", ar.rank))
    _print_kv(rows)
    return EXIT_OK


def cmd_certificate(args) -> int:
    rec = _resolve(args)
    cfg = _config(args)
    record = rec.to_record()
    E, _ = minimal_model(record.model)
    local = local_data(E)
    gens = validate_generators(record)
    reg = regulator(gens, E, cfg.height_precision, local).regulator
    r = len(gens)
    L0 = None
    data = build_lseries(E, cfg.lseries_precision, cfg.lseries_digits,
                         None if cfg.terms == "auto" else cfg.terms, local, rec.label, cfg.cache_dir)
    ar = analytic_rank(data, cfg.tol_rank)
    if r == 0:
        L0 = float(ar.leading.value) if ar.rank == 0 else 0.0
    cert = cert_mod.duality_check(
        cert_mod.build_certificate(r, float(reg), L0, record.selmer_dim, cfg.tol_rank), data.epsilon)
    rows = [("rank (generators)", r), ("regulator", _num(reg)), ("ASI", cert.asi)]
    if cert.reason:
        rows.append(("reason", cert.reason))
    for st in cert.pages:
        state = "forced zero" if st.forced_zero else "non-zero"
        rows.append((f"d_{st.page}: {st.source} -> {st.target}",
                     f"{state}  target dim >= {st.target_dim_lower_bound}  ({st.reason})"))
    rows += [("duality", cert.duality_ok), ("root number parity", cert.epsilon_parity_ok)]
    omega = real_period(E, args.precision).omega
    tors = torsion_subgroup(E).order
    sha = cert_mod.infer_sha(ar.leading.value, omega, reg, tamagawa_product(local), tors)
    led = cert_mod.assemble_determinant(omega, reg, {p: ld.c_p for p, ld in local.items()},
                                        tors, sha.rounded)
    rows += [
        ("Omega", _num(omega)),
        ("tamagawa", " ".join(f"c_{p}={c}" for p, c in led.tamagawa) or "1"),
        ("torsion", tors),
        ("Sha (inferred)", f"{sha.rounded}  raw {float(sha.raw_ratio):.6f}"),
        ("det(d_r)", _num(led.det_dr)),
        ("Omega R prod c Sha / t^2", _num(led.bsd_leading)),
        (f"c_{ar.rank}", _num(ar.leading.value)),
    ]
    _print_kv(rows)
    return EXIT_OK


def _print_report(rep):
    rows = [("curve", rep.label), ("conductor", rep.conductor),
            ("ranks alg/an/ASI", f"{rep.rank_algebraic}/{rep.rank_analytic}/{rep.asi}")]
    if rep.leading is not None:
        rows.append(("leading coefficient", _num(rep.leading)))
    if rep.ledger is not None:
        rows.append(("det(d_r)", _num(rep.ledger.det_dr)))
    if rep.sha is not None:
        rows.append(("implied Sha", f"{rep.sha.rounded} (raw {float(rep.sha.raw_ratio):.6f})"))
    if rep.lvalue_match:
        rows.append(("printed L-value", rep.lvalue_match))
    for p in rep.predicates:
        rows.append((("PASS " if p.passed else "FAIL ") + p.name,
                     f"computed {p.computed}  expected {p.expected}  tol {p.tolerance}"))
    for stage, err in rep.stage_errors.items():
        rows.append((f"ERROR {stage}", err))
    for c in rep.caveats:
        rows.append(("note", c))
    _print_kv(rows)


def cmd_verify(args) -> int:
    rep = verify_curve(_resolve(args), _config(args))
    _print_report(rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_batch(args) -> int:
    records = _load(args.files or args.fixtures)
    summary, reports = batch_verify(records, _config(args))
    sys.stdout.write(emit_report(reports, args.format, "table2"))
    if summary.max_bsd_error is not None:
        print(f"\nleading-coefficient error: max {summary.max_bsd_error:.2e}, "
              f"mean {summary.mean_bsd_error:.2e}")
    for rep in reports:
        if not rep.passed:
            bad = [p.name for p in rep.predicates if not p.passed] + list(rep.stage_errors)
            print(f"FAILED {rep.label}: {', '.join(bad)}")
    return EXIT_OK if not summary.failures else EXIT_FAIL


def cmd_report(args) -> int:
    records = _load(args.files or args.fixtures)
    summary, reports = batch_verify(records, _config(args))
    text = emit_report(reports, args.format, args.table)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if not summary.failures else EXIT_FAIL


COMMANDS = {
    "invariants": cmd_invariants,
    "lseries": cmd_lseries,
    "certificate": cmd_certificate,
    "verify": cmd_verify,
    "batch": cmd_batch,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except (DaccError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
