from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dacc.curve import (IDENTITY, CurveRecord, Point, Transform, add, compute_model,
                        is_minimal, minimal_model, mul, neg, on_curve, order_of, sub,
                        torsion_subgroup, transform_model, transform_point,
                        validate_generators)
from dacc.errors import PointNotOnCurve, SingularCurve, TorsionGenerator
from dacc.local import conductor

E5077 = compute_model(0, 0, 1, -7, 6)
G5077 = [Point(-2, 3), Point(-1, 3), Point(0, 2)]


def combo(a, b, c):
    P = IDENTITY
    for n, G in zip((a, b, c), G5077):
        P = add(P, mul(n, G, E5077), E5077)
    return P


small = st.integers(-3, 3)
points = st.builds(combo, small, small, small)


def test_invariants_37a1():
    E = compute_model(0, 0, 1, -1, 0)
    assert (E.b2, E.b4, E.b6, E.b8) == (0, -2, 1, -1)
    assert (E.c4, E.c6, E.disc) == (48, -216, 37)
    assert E.j_invariant == Fraction(110592, 37)


def test_singular_and_types():
    with pytest.raises(SingularCurve):
        compute_model(0, 0, 0, 0, 0)
    with pytest.raises(SingularCurve):
        compute_model(0, 0, 0, -3, 2)  # node at (1, 0)
    with pytest.raises(TypeError):
        compute_model(0, 0, 1, -1, 0.5)


def test_add_rejects_points_off_curve():
    E = compute_model(0, 0, 1, -1, 0)
    with pytest.raises(PointNotOnCurve):
        add(Point(1, 1), Point(0, 0), E)


def test_37a1_multiples():
    # the first multiples of (0,0) on y^2 + y = x^3 - x
    E = compute_model(0, 0, 1, -1, 0)
    P = Point(0, 0)
    assert mul(2, P, E) == Point(1, 0)
    assert mul(3, P, E) == Point(-1, -1)
    assert mul(4, P, E) == Point(2, -3)
    assert mul(5, P, E) == Point(Fraction(1, 4), Fraction(-5, 8))


@settings(max_examples=40, deadline=None)
@given(points, points, points)
def test_group_law_axioms(P, Q, R):
    E = E5077
    assert on_curve(P, E)
    assert add(P, Q, E) == add(Q, P, E)
    assert add(add(P, Q, E), R, E) == add(P, add(Q, R, E), E)
    assert add(P, IDENTITY, E) == P
    assert add(P, neg(P, E), E) == IDENTITY
    assert sub(add(P, Q, E), Q, E) == P


@settings(max_examples=25, deadline=None)
@given(points, st.integers(-6, 6), st.integers(-6, 6))
def test_scalar_multiplication_is_linear(P, m, n):
    E = E5077
    assert mul(m + n, P, E) == add(mul(m, P, E), mul(n, P, E), E)
    assert mul(m * n, P, E) == mul(m, mul(n, P, E), E)


@settings(max_examples=30, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 3))
def test_transforms_preserve_points_and_j(r, s, t, u):
    E = compute_model(0, 1, 1, -2, 0)
    T = Transform(Fraction(1, u), Fraction(r), Fraction(s), Fraction(t))
    F = transform_model(E, T)
    assert F.j_invariant == E.j_invariant
    for P in (Point(-1, 1), Point(0, 0), mul(3, Point(-1, 1), E)):
        assert on_curve(transform_point(P, T), F)
    # composition
    T2 = Transform(Fraction(1), Fraction(1), Fraction(0), Fraction(-1))
    G = transform_model(F, T2)
    assert transform_model(E, T.then(T2)).ainvs == G.ainvs


@pytest.mark.parametrize("u", [2, 3, 5])
def test_minimal_model_undoes_scaling(u):
    E = compute_model(0, 0, 1, -1, 0)
    big = transform_model(E, Transform(Fraction(1, u), Fraction(u), Fraction(1), Fraction(-u)))
    big = compute_model(*(int(a) for a in big.ainvs))
    assert not is_minimal(big)
    M, T = minimal_model(big)
    assert M.ainvs == E.ainvs
    assert abs(M.disc) == 37
    assert conductor(M).N == 37
    with pytest.raises(ValueError):
        conductor(big)
    # points follow the transform
    Q = transform_point(Point(0, 0), Transform(Fraction(1, u), Fraction(u), Fraction(1), Fraction(-u)))
    assert on_curve(transform_point(Q, T), M)


@pytest.mark.parametrize("ainvs, order, structure", [
    ((0, -1, 1, -10, -20), 5, (5,)),      # 11a1
    ((0, 1, 1, 1, 0), 3, (3,)),           # 19a3
    ((0, 0, 1, -1, 0), 1, ()),            # 37a1
    ((0, 0, 0, 0, 1), 6, (6,)),           # y^2 = x^3 + 1
    ((0, 0, 0, -1, 0), 4, (2, 2)),        # y^2 = x^3 - x
    ((0, 0, 0, 4, 0), 4, (4,)),           # y^2 = x^3 + 4x
    ((0, 0, 0, 1, 0), 2, (2,)),           # y^2 = x^3 + x
    ((1, -1, 0, -332311, -73733731), 1, ()),
])
def test_torsion_subgroup(ainvs, order, structure):
    T = torsion_subgroup(compute_model(*ainvs))
    assert T.order == order
    assert T.structure == structure
    E = compute_model(*ainvs)
    assert all(order_of(P, E) for P in T.points)


def test_validate_generators():
    E = compute_model(0, -1, 1, -10, -20)
    with pytest.raises(TorsionGenerator):
        validate_generators(CurveRecord("11a1", E, [Point(5, 5)]))
    with pytest.raises(PointNotOnCurve):
        validate_generators(CurveRecord("11a1", E, [Point(1, 1)]))
    E37 = compute_model(0, 0, 1, -1, 0)
    assert validate_generators(CurveRecord("37a1", E37, [Point(0, 0)])) == [Point(0, 0)]
