import mpmath
import pytest
from mpmath import mp, mpf

from dacc.curve import compute_model
from dacc.errors import PrecisionUnachievable
from dacc.periods import agm, real_components, real_period, real_roots

CURVES = {
    "11a1": (0, -1, 1, -10, -20),
    "37a1": (0, 0, 1, -1, 0),
    "389a1": (0, 1, 1, -2, 0),
    "5077a1": (0, 0, 1, -7, 6),
    "234446a1": (1, -1, 0, -79, 289),
    "571a1": (0, -1, 1, -929, -10595),
    "681b1": (1, 1, 0, -2369, 20862),
    "1058d1": (1, -1, 0, -332311, -73733731),
    "19a3": (0, 1, 1, 1, 0),
}


def period_by_quadrature(E, dps=40):
    """Components times 2 * int_{e1}^oo dx / sqrt(4x^3 + b2 x^2 + 2 b4 x + b6)."""
    with mp.workdps(dps):
        e1 = max(r.real for r in mpmath.polyroots([4, E.b2, 2 * E.b4, E.b6], extraprec=200)
                 if abs(r.imag) < mpf(10) ** -25)
        # x = e1 + t^2, with the factor (x - e1) divided out of the cubic
        c1 = E.b2 + 4 * e1
        c0 = 2 * E.b4 + e1 * c1
        G = lambda x: (4 * x + c1) * x + c0
        val = mpmath.quad(lambda t: 2 / mpmath.sqrt(G(e1 + t * t)), [0, 1, 10, mpmath.inf])
        return (2 if E.disc > 0 else 1) * 2 * val


def test_agm_gauss_constant():
    with mp.workdps(40):
        val, iters = agm(mpf(1), mpmath.sqrt(2), 35)
        assert abs(val - mpmath.agm(1, mpmath.sqrt(2))) < mpf(10) ** -35
        assert iters < 10


@pytest.mark.parametrize("label", sorted(CURVES))
def test_period_matches_quadrature(label):
    E = compute_model(*CURVES[label])
    omega = real_period(E, 30).omega
    assert abs(omega - period_by_quadrature(E)) < 1e-15 * omega


def test_components_and_roots():
    E = compute_model(0, 0, 1, -1, 0)
    assert real_components(E) == 2
    roots = real_roots(E, 30)
    assert len(roots) == 3 and roots[0] > roots[1] > roots[2]
    F = lambda x: ((4 * x + E.b2) * x + 2 * E.b4) * x + E.b6
    with mp.workdps(40):
        assert all(abs(F(r)) < mpf(10) ** -28 for r in roots)
    assert real_components(compute_model(0, -1, 1, -10, -20)) == 1


def test_period_is_stable_in_precision():
    E = compute_model(0, 0, 1, -7, 6)
    lo = real_period(E, 20).omega
    hi = real_period(E, 50).omega
    assert abs(lo - hi) < 1e-19


def test_precision_limit():
    with pytest.raises(PrecisionUnachievable):
        real_period(compute_model(0, 0, 1, -1, 0), 80)
