import io
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dacc.errors import DuplicateLabel, ParseError
from dacc.fixtures import (CurveInputRecord, bundled, bundled_path, format_fixtures,
                           parse_fixtures, parse_line)


def test_single_generator_record():
    (rec,) = parse_fixtures(["37a1;0,0,1,-1,0;gens=(0:0);rank=1"])
    assert rec.label == "37a1"
    assert rec.coefficients == (0, 0, 1, -1, 0)
    assert rec.generators == ((Fraction(0), Fraction(0)),)
    assert rec.get("rank") == 1


def test_empty_and_comments():
    assert parse_fixtures([]) == []
    assert parse_fixtures(io.StringIO("# nothing\n\n   \n")) == []


def test_wrong_arity():
    with pytest.raises(ParseError) as exc:
        parse_fixtures(["x;1,2;rank=0"])
    assert exc.value.line == 1 and exc.value.column == 3


@pytest.mark.parametrize("line, column", [
    ("a;0,0,1,-1,0;rank=one", 14),
    ("a;0,0,1,-1,0;colour=red", 14),
    ("a;0,0,1,-1,0;gens=(0,0)", 14),
    ("a;0,0,1,-1,0;rank=1;rank=1", 21),
    ("a;0,0,x,-1,0", 3),
    (";0,0,1,-1,0", 1),
])
def test_errors_carry_columns(line, column):
    with pytest.raises(ParseError) as exc:
        parse_line(line, 7)
    assert exc.value.line == 7 and exc.value.column == column


def test_duplicate_labels():
    with pytest.raises(DuplicateLabel):
        parse_fixtures(["a;0,0,1,-1,0", "b;0,1,1,-2,0", "a;0,0,1,-1,0"])


def test_fields_are_typed_and_order_free():
    rec = parse_line("c;1,1,0,-2369,20862;lval=1.8442|1.9;sha=9;tam=4;omega=0.8199;gens=(1/4:-5/8)")
    assert rec.get("sha") == 9
    assert rec.get("omega") == Decimal("0.8199")
    assert rec.get("lval") == (Decimal("1.8442"), Decimal("1.9"))
    assert rec.generators == ((Fraction(1, 4), Fraction(-5, 8)),)


def test_bundled_files():
    ref = bundled("reference_curves.txt")
    assert [r.label for r in ref] == ["11a1", "37a1", "389a1", "5077a1", "234446a1",
                                         "571a1", "681b1", "1058d1", "19a3"]
    ext = bundled("extended_curves.txt")
    assert {r.get("rank") for r in ext} == {0, 1, 2, 3}
    assert all(len(r.generators) == r.get("rank") for r in ext)
    assert bundled_path().exists()


def test_round_trip_bundled():
    for name in ("reference_curves.txt", "extended_curves.txt"):
        recs = bundled(name)
        again = parse_fixtures(format_fixtures(recs).splitlines())
        assert all(a.same_content(b) for a, b in zip(recs, again)) and len(recs) == len(again)


rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**6)
records = st.builds(
    lambda label, coeffs, gens, rank, omega: CurveInputRecord(
        label, coeffs, tuple(gens),
        tuple(sorted({"rank": rank, "omega": Decimal(omega)}.items()))),
    st.from_regex(r"[a-z0-9]{1,8}", fullmatch=True),
    st.tuples(*[st.integers(-10**9, 10**9)] * 5),
    st.lists(st.tuples(rationals, rationals), max_size=3),
    st.integers(0, 5),
    st.decimals(min_value=0, max_value=100, places=4, allow_nan=False),
)


@given(st.lists(records, max_size=5, unique_by=lambda r: r.label))
def test_round_trip_property(recs):
    text = format_fixtures(recs)
    parsed = parse_fixtures(text.splitlines())
    assert len(parsed) == len(recs)
    assert all(a.same_content(b) for a, b in zip(recs, parsed))
    assert format_fixtures(parsed) == text
