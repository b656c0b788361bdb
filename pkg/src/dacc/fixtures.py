"""Fixture files: one curve per line.

    label;a1,a2,a3,a4,a6;gens=(x:y)|(x:y);rank=R;sha=S;omega=..;reg=..;tam=..;lval=..

Fields after the coefficients are optional and may come in any order.
Coordinates are integers or fractions ``n/d``.  ``lval`` may list several
printed candidates separated by ``|``; the report says which one the
computed value matches.  ``det``, ``tors`` and ``selmer`` are also
accepted.  ``#`` starts a comment.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Union

from .curve import CurveRecord, Point, compute_model
from .errors import DuplicateLabel, ParseError

INT_FIELDS = ("rank", "sha", "tam", "tors", "selmer")
DECIMAL_FIELDS = ("omega", "reg", "det")
MULTI_DECIMAL_FIELDS = ("lval",)
KNOWN_FIELDS = ("gens",) + INT_FIELDS + DECIMAL_FIELDS + MULTI_DECIMAL_FIELDS


@dataclass(frozen=True)
class CurveInputRecord:
    label: str
    coefficients: tuple[int, int, int, int, int]
    generators: tuple[tuple[Fraction, Fraction], ...] = ()
    expected: tuple = ()  # sorted (key, value) pairs
    line: int = 0

    def get(self, key, default=None):
        return dict(self.expected).get(key, default)

    def to_record(self) -> CurveRecord:
        model = compute_model(*self.coefficients)
        gens = [Point(x, y) for x, y in self.generators]
        return CurveRecord(self.label, model, gens, dict(self.expected), self.get("selmer"))

    def same_content(self, other: "CurveInputRecord") -> bool:
        return (self.label, self.coefficients, self.generators, self.expected) == (
            other.label, other.coefficients, other.generators, other.expected)


def _fraction(text: str, lineno: int, col: int) -> Fraction:
    try:
        if "/" in text:
            n, d = text.split("/")
            return Fraction(int(n), int(d))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {text!r}", lineno, col) from None


def _parse_gens(text: str, lineno: int, col: int):
    gens = []
    if not text:
        return ()
    for part in text.split("|"):
        part = part.strip()
        if not (part.startswith("(") and part.endswith(")")) or part.count(":") != 1:
            raise ParseError(f"bad point {part!r}, expected (x:y)", lineno, col)
        xs, ys = part[1:-1].split(":")
        gens.append((_fraction(xs.strip(), lineno, col), _fraction(ys.strip(), lineno, col)))
    return tuple(gens)


def parse_line(line: str, lineno: int = 0):
    """Parse one line; returns None for blank or comment lines."""
    text = line.split("#", 1)[0].rstrip()
    if not text.strip():
        return None
    fields = text.split(";")
    offsets = []
    pos = 0
    for f in fields:
        offsets.append(pos + 1)
        pos += len(f) + 1
    label = fields[0].strip()
    if not label:
        raise ParseError("empty label", lineno, 1)
    if len(fields) < 2:
        raise ParseError("missing coefficients", lineno, len(text) + 1)
    coeff_text = fields[1].split(",")
    if len(coeff_text) != 5:
        raise ParseError(f"expected 5 coefficients, got {len(coeff_text)}", lineno, offsets[1])
    try:
        coeffs = tuple(int(c.strip()) for c in coeff_text)
    except ValueError:
        raise ParseError("coefficients must be integers", lineno, offsets[1]) from None
    gens = ()
    expected = {}
    for f, col in zip(fields[2:], offsets[2:]):
        if not f.strip():
            continue
        if "=" not in f:
            raise ParseError(f"expected key=value, got {f.strip()!r}", lineno, col)
        key, value = (s.strip() for s in f.split("=", 1))
        if key not in KNOWN_FIELDS:
            raise ParseError(f"unknown field {key!r}", lineno, col)
        if key == "gens" and "gens" in expected or key in expected:
            raise ParseError(f"repeated field {key!r}", lineno, col)
        try:
            if key == "gens":
                gens = _parse_gens(value, lineno, col)
                expected["gens"] = None
            elif key in INT_FIELDS:
                expected[key] = int(value)
            elif key in DECIMAL_FIELDS:
                expected[key] = Decimal(value)
            else:
                expected[key] = tuple(Decimal(v) for v in value.split("|"))
        except (ValueError, InvalidOperation):
            raise ParseError(f"bad value for {key!r}: {value!r}", lineno, col) from None
    expected.pop("gens", None)
    return CurveInputRecord(label, coeffs, gens, tuple(sorted(expected.items())), lineno)


def parse_fixtures(source: Union[str, Path, Iterable[str], io.TextIOBase]) -> list[CurveInputRecord]:
    """Parse a fixture file (path) or any iterable of lines."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return parse_fixtures(fh.readlines())
    records = []
    seen = {}
    for lineno, line in enumerate(source, start=1):
        rec = parse_line(line, lineno)
        if rec is None:
            continue
        if rec.label in seen:
            raise DuplicateLabel(f"line {lineno}: label {rec.label!r} already used on line {seen[rec.label]}")
        seen[rec.label] = lineno
        records.append(rec)
    return records


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_record(rec: CurveInputRecord) -> str:
    parts = [rec.label, ",".join(str(c) for c in rec.coefficients)]
    if rec.generators:
        parts.append("gens=" + "|".join(f"({_fmt_q(x)}:{_fmt_q(y)})" for x, y in rec.generators))
    for key, value in rec.expected:
        if isinstance(value, tuple):
            value = "|".join(str(v) for v in value)
        parts.append(f"{key}={value}")
    return ";".join(parts)


def format_fixtures(records: Iterable[CurveInputRecord]) -> str:
    return "".join(format_record(r) + "\n" for r in records)


def bundled(name: str = "reference_curves.txt") -> list[CurveInputRecord]:
    """Fixture files shipped with the package (``reference_curves.txt``,
    ``extended_curves.txt``)."""
    text = resources.files("dacc").joinpath("data").joinpath(name).read_text(encoding="utf-8")
    return parse_fixtures(text.splitlines())


def bundled_path(name: str = "reference_curves.txt") -> Path:
    return Path(str(resources.files("dacc").joinpath("data").joinpath(name)))
