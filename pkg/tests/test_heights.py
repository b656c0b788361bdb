import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from dacc.curve import IDENTITY, Point, add, compute_model, mul, neg, sub
from dacc.errors import DependentGenerators, PointNotOnCurve
from dacc.heights import (canonical_height, gram_matrix, height_by_duplication,
                          height_pairing, naive_height, regulator)
from dacc.local import local_data

E37 = compute_model(0, 0, 1, -1, 0)
E389 = compute_model(0, 1, 1, -2, 0)
E5077 = compute_model(0, 0, 1, -7, 6)
G5077 = [Point(-2, 3), Point(-1, 3), Point(0, 2)]
L5077 = local_data(E5077)


def h(P, E=E5077, local=None):
    return canonical_height(P, E, 1e-12, local if local is not None else L5077).value


def test_37a1_generator_height():
    assert abs(h(Point(0, 0), E37, local_data(E37)) - 0.0511) < 1e-4


@pytest.mark.parametrize("E, P", [
    (E37, Point(0, 0)),
    (E389, Point(-1, 1)),
    (E5077, Point(0, 2)),
    (compute_model(1, -1, 0, -79, 289), Point(6, -5)),
])
def test_duplication_oracle(E, P):
    assert abs(float(canonical_height(P, E)) - height_by_duplication(P, E, 9)) < 2e-4


@pytest.mark.parametrize("n", [2, 3, 5])
def test_quadraticity(n):
    for E, P in ((E37, Point(0, 0)), (E5077, Point(-1, 3)), (E389, Point(0, 0))):
        local = local_data(E)
        lhs = canonical_height(mul(n, P, E), E, 1e-12, local).value
        rhs = n * n * canonical_height(P, E, 1e-12, local).value
        assert abs(lhs - rhs) < 1e-9


def test_torsion_has_zero_height():
    E11 = compute_model(0, -1, 1, -10, -20)
    for P in (Point(5, 5), Point(5, -6), Point(16, 60), Point(16, -61), IDENTITY):
        assert canonical_height(P, E11).value < 1e-12
    E19 = compute_model(0, 1, 1, 1, 0)
    assert canonical_height(Point(0, 0), E19).value < 1e-12


coeffs = st.integers(-2, 2)


@settings(max_examples=15, deadline=None)
@given(coeffs, coeffs, coeffs, coeffs, coeffs, coeffs)
def test_parallelogram_law(a, b, c, d, e, f):
    P = add(add(mul(a, G5077[0], E5077), mul(b, G5077[1], E5077), E5077), mul(c, G5077[2], E5077), E5077)
    Q = add(add(mul(d, G5077[0], E5077), mul(e, G5077[1], E5077), E5077), mul(f, G5077[2], E5077), E5077)
    lhs = h(add(P, Q, E5077)) + h(sub(P, Q, E5077))
    rhs = 2 * h(P) + 2 * h(Q)
    assert abs(lhs - rhs) < 1e-9


def test_height_is_even():
    P = add(G5077[0], G5077[2], E5077)
    assert abs(h(P) - h(neg(P, E5077))) < 1e-12


def test_pairing_is_bilinear():
    P, Q, R = G5077
    lhs = height_pairing(add(P, Q, E5077), R, E5077, local=L5077)
    rhs = height_pairing(P, R, E5077, local=L5077) + height_pairing(Q, R, E5077, local=L5077)
    assert abs(lhs - rhs) < 1e-9


def test_regulators():
    assert abs(regulator([Point(0, 0)], E37).regulator - 0.0511114082) < 1e-9
    assert abs(regulator([Point(-1, 1), Point(0, 0)], E389).regulator - 0.152460177943) < 1e-9
    assert abs(regulator(G5077, E5077).regulator - 0.417143558758) < 1e-9
    assert regulator([], E37).regulator == 1


@settings(max_examples=10, deadline=None)
@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
def test_regulator_basis_invariance(a, b, c):
    # (P, Q, R) -> (P + aQ + bR, Q + cR, R) is unimodular
    P, Q, R = G5077
    P2 = add(P, add(mul(a, Q, E5077), mul(b, R, E5077), E5077), E5077)
    Q2 = add(Q, mul(c, R, E5077), E5077)
    base = regulator(G5077, E5077, local=L5077).regulator
    moved = regulator([Q2, R, P2], E5077, local=L5077).regulator
    assert abs(base - moved) < 1e-9


def test_regulator_rejects_dependent_points():
    P, Q, _ = G5077
    with pytest.raises(DependentGenerators):
        regulator([P, Q, add(P, Q, E5077)], E5077)


def test_gram_matrix_is_symmetric_positive():
    G = gram_matrix(G5077, E5077, local=L5077)
    for i in range(3):
        for j in range(3):
            assert G[i, j] == G[j, i]
    assert min(mpmath.eigsy(G)[0]) > 0


def test_misc():
    assert naive_height(-7) == pytest.approx(1.9459101090932196)
    with pytest.raises(PointNotOnCurve):
        canonical_height(Point(1, 1), E37)
