import math

import mpmath
import pytest

from dacc.curve import compute_model
from dacc.errors import DomainError, ParityMismatch
from dacc.local import cache_path
from dacc.lseries import (analytic_rank, build_lseries, g_function, g_function_quadrature,
                          leading_coefficient, root_number, taylor_coefficients,
                          truncation_length)

E11 = compute_model(0, -1, 1, -10, -20)
E37 = compute_model(0, 0, 1, -1, 0)
E389 = compute_model(0, 1, 1, -2, 0)
E5077 = compute_model(0, 0, 1, -7, 6)


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("x", [0.05, 0.5, 1.0, 2.0, 7.5, 20.0, 40.0])
def test_g_against_quadrature(r, x):
    a = g_function(r, x, 25)
    b = g_function_quadrature(r, x, 25)
    assert abs(a - b) < 1e-8 * abs(b)


def test_g_branches_agree_at_switch():
    # either side of the series/asymptotic crossover
    for x in (52.0, 53.0, 60.0, 75.0):
        assert abs(g_function(1, x, 20) - g_function_quadrature(1, x, 20)) < 1e-8 * g_function_quadrature(1, x, 20)


def test_g_zero_and_one():
    assert abs(g_function(0, 2.0) - math.exp(-2)) < 1e-15
    assert abs(g_function(1, 1.0) - mpmath.e1(1)) < 1e-15


def test_g_domain():
    with pytest.raises(DomainError):
        g_function(1, 0)
    with pytest.raises(DomainError):
        g_function(7, 1.0)


def test_truncation_length():
    N = 5077
    expected = math.ceil(math.sqrt(N) / (2 * math.pi) * (math.log(1e20) + 5))
    assert truncation_length(N, 1e-20) == expected
    assert truncation_length(N, 1e-30) > truncation_length(N, 1e-20)
    with pytest.raises(ValueError):
        truncation_length(5, 1e-10)


@pytest.mark.parametrize("E, eps, rank, value", [
    (E11, 1, 0, 0.253841860855911),
    (E37, -1, 1, 0.305999773834052),
    (E389, 1, 2, 0.759316500288427),
    (E5077, -1, 3, 1.73184990011930),
])
def test_leading_coefficients(E, eps, rank, value):
    data = build_lseries(E, 1e-20, 25)
    assert data.epsilon == eps
    ar = analytic_rank(data)
    assert ar.rank == rank
    assert abs(ar.leading.value - value) < 1e-12
    assert ar.leading.error_bound < 1e-15
    for c in ar.checked[:-1]:
        assert abs(c.value) < 1e-10


def test_parity_rules():
    data = build_lseries(E37, 1e-15, 20)
    assert leading_coefficient(data, 0).value == 0
    with pytest.raises(ParityMismatch):
        leading_coefficient(data, 2, require_nonzero=True)
    coeffs = taylor_coefficients(data, 3)
    assert [c.r for c in coeffs] == [0, 1, 2, 3]
    assert coeffs[2].value == 0


def test_root_number_is_retried_consistently():
    data = build_lseries(E389, 1e-15, 20)
    assert root_number(data, 1e-15, retries=0) == 1


def test_parallel_sum_matches_serial():
    data = build_lseries(E5077, 1e-20, 25)
    a = leading_coefficient(data, 3, jobs=1).value
    b = leading_coefficient(data, 3, jobs=2).value
    assert a == b


def test_cache_is_used(tmp_path):
    build_lseries(E37, 1e-15, 20, label="37a1", cache_dir=tmp_path)
    path = cache_path(tmp_path, "37a1")
    assert path.exists()
    first = path.read_text()
    data = build_lseries(E37, 1e-15, 20, label="37a1", cache_dir=tmp_path)
    assert path.read_text() == first
    assert data.epsilon == -1
