import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dacc.arith import (factor, integer_roots_monic_cubic, is_square, prime_divisors,
                        primes_upto, roots_mod_p, valuation)


def test_valuation_integers_and_fractions():
    assert valuation(48, 2) == 4
    assert valuation(Fraction(9, 16), 2) == -4
    assert valuation(Fraction(9, 16), 3) == 2
    with pytest.raises(ValueError):
        valuation(0, 2)


def test_factor_and_primes():
    assert factor(234446) == {2: 1, 117223: 1}
    assert prime_divisors(-1058) == [2, 23]
    assert primes_upto(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


@given(st.integers(min_value=0, max_value=10**12))
def test_is_square(n):
    assert is_square(n * n)
    assert is_square(n * n + 1) == (n == 0)


@pytest.mark.parametrize("p", [5, 7, 101, 7919, 10007])
def test_roots_mod_p_matches_brute_force(p):
    rng = random.Random(p)
    for _ in range(5):
        roots = [rng.randrange(p) for _ in range(2)]
        # (x - r0)^2 (x - r1) expanded
        r0, r1 = roots
        coeffs = [1, -(2 * r0 + r1), r0 * r0 + 2 * r0 * r1, -r0 * r0 * r1]
        found = roots_mod_p(coeffs, p)
        if r0 == r1:
            assert found == {r0: 3}
        else:
            assert found == {r0: 2, r1: 1}


def test_roots_mod_p_degenerate():
    assert roots_mod_p([7, 3], 7) == {}
    with pytest.raises(ValueError):
        roots_mod_p([7, 14], 7)


@given(st.integers(-300, 300), st.integers(-300, 300), st.integers(-300, 300))
def test_integer_roots_of_products(r1, r2, r3):
    b = -(r1 + r2 + r3)
    c = r1 * r2 + r1 * r3 + r2 * r3
    d = -r1 * r2 * r3
    assert integer_roots_monic_cubic(b, c, d) == sorted({r1, r2, r3})


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(-10**9, 10**9))
def test_integer_roots_are_exact(b, c, d):
    roots = integer_roots_monic_cubic(b, c, d)
    for x in roots:
        assert x ** 3 + b * x * x + c * x + d == 0
    # every root divides d (or d = 0 allows zero)
    for x in range(-50, 51):
        if x ** 3 + b * x * x + c * x + d == 0:
            assert x in roots
