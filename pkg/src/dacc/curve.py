"""Exact arithmetic on elliptic curves over Q.

Everything here works with Python integers and ``fractions.Fraction``;
floating point never enters.  Models are immutable, points are immutable,
and all operations are pure, so values can be shared freely between
worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .arith import integer_roots_monic_cubic, primes_upto
from .errors import PointNotOnCurve, SingularCurve, TorsionGenerator


@dataclass(frozen=True)
class WeierstrassModel:
    """Long Weierstrass model y^2 + a1xy + a3y = x^3 + a2x^2 + a4x + a6.

    Use :func:`compute_model` to build one; it fills in the derived
    invariants and rejects singular models.
    """

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int = field(init=False)
    b4: int = field(init=False)
    b6: int = field(init=False)
    b8: int = field(init=False)
    c4: int = field(init=False)
    c6: int = field(init=False)
    disc: int = field(init=False)
    j_num: int = field(init=False)
    j_den: int = field(init=False)

    def __post_init__(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = a1 * a3 + 2 * a4
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc == 0:
            raise SingularCurve(f"singular model {self.ainvs}")
        j = Fraction(c4 ** 3, disc)
        for name, value in (("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8),
                            ("c4", c4), ("c6", c6), ("disc", disc),
                            ("j_num", j.numerator), ("j_den", j.denominator)):
            object.__setattr__(self, name, value)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def j_invariant(self) -> Fraction:
        return Fraction(self.j_num, self.j_den)

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


def compute_model(a1: int, a2: int, a3: int, a4: int, a6: int) -> WeierstrassModel:
    for a in (a1, a2, a3, a4, a6):
        if isinstance(a, bool) or not isinstance(a, int):
            raise TypeError(f"Weierstrass coefficients must be integers, got {a!r}")
    return WeierstrassModel(a1, a2, a3, a4, a6)


@dataclass(frozen=True)
class Point:
    """A rational point; ``x is None`` encodes the point at infinity."""

    x: Optional[Fraction] = None
    y: Optional[Fraction] = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __str__(self):
        if self.is_identity:
            return "O"
        return f"({self.x}:{self.y})"


IDENTITY = Point()


def on_curve(P: Point, E: WeierstrassModel) -> bool:
    if P.is_identity:
        return True
    x, y = P.x, P.y
    return y * y + E.a1 * x * y + E.a3 * y == x ** 3 + E.a2 * x * x + E.a4 * x + E.a6


def _check(P: Point, E: WeierstrassModel):
    if not on_curve(P, E):
        raise PointNotOnCurve(f"{P} is not on {E}")


def neg(P: Point, E: WeierstrassModel) -> Point:
    if P.is_identity:
        return P
    return Point(P.x, -P.y - E.a1 * P.x - E.a3)


def _add(P: Point, Q: Point, E: WeierstrassModel) -> Point:
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    a1, a2, a3, a4, a6 = E.ainvs
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return IDENTITY
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return Point(x3, y3)


def add(P: Point, Q: Point, E: WeierstrassModel) -> Point:
    _check(P, E)
    _check(Q, E)
    return _add(P, Q, E)


def sub(P: Point, Q: Point, E: WeierstrassModel) -> Point:
    return add(P, neg(Q, E), E)


def mul(n: int, P: Point, E: WeierstrassModel) -> Point:
    _check(P, E)
    if n < 0:
        return neg(mul(-n, P, E), E)
    result, base = IDENTITY, P
    while n:
        if n & 1:
            result = _add(result, base, E)
        base = _add(base, base, E)
        n >>= 1
    return result


# -- coordinate changes --------------------------------------------------


@dataclass(frozen=True)
class Transform:
    """x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction = Fraction(1)
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def then(self, other: "Transform") -> "Transform":
        """Apply ``self`` first, then ``other`` to the resulting model."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return Transform(
            u1 * u2,
            r1 + u1 * u1 * r2,
            s1 + u1 * s2,
            t1 + u1 * u1 * s1 * r2 + u1 ** 3 * t2,
        )

    @property
    def is_identity(self) -> bool:
        return (self.u, self.r, self.s, self.t) == (1, 0, 0, 0)


def transform_ainvs(ainvs: Sequence, T: Transform) -> tuple[Fraction, ...]:
    a1, a2, a3, a4, a6 = (Fraction(a) for a in ainvs)
    u, r, s, t = T.u, T.r, T.s, T.t
    b1 = (a1 + 2 * s) / u
    b2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
    b3 = (a3 + r * a1 + 2 * t) / u ** 3
    b4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u ** 4
    b6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1) / u ** 6
    return (b1, b2, b3, b4, b6)


def transform_model(E: WeierstrassModel, T: Transform) -> WeierstrassModel:
    out = transform_ainvs(E.ainvs, T)
    if any(a.denominator != 1 for a in out):
        raise ValueError(f"transform {T} does not give an integral model")
    return compute_model(*(int(a) for a in out))


def transform_point(P: Point, T: Transform) -> Point:
    """Map a point on the source model to the transformed model."""
    if P.is_identity:
        return P
    xp = (P.x - T.r) / T.u ** 2
    yp = (P.y - T.s * (P.x - T.r) - T.t) / T.u ** 3
    return Point(xp, yp)


def _reduce_normalisation(ainvs) -> Transform:
    """Translation putting a1, a3 in {0,1} and a2 in {-1,0,1}."""
    a1, a2, a3, _, _ = (int(a) for a in ainvs)
    s = -(a1 - a1 % 2) // 2
    A2 = a2 - s * a1 - s * s
    r = -((A2 + 1) // 3)
    A3 = a3 + r * a1
    t = -(A3 - A3 % 2) // 2
    return Transform(Fraction(1), Fraction(r), Fraction(s), Fraction(t))


def minimal_model(E: WeierstrassModel) -> tuple[WeierstrassModel, Transform]:
    """Globally minimal, reduced model together with the transform from ``E``.

    Minimality is established prime by prime with Tate's algorithm, which
    rescales whenever it detects a non-minimal equation.
    """
    from .local import _minimise_at

    T = Transform()
    current = E
    for p in _candidate_primes(E):
        step = _minimise_at(current, p)
        if not step.is_identity:
            current = transform_model(current, step)
            T = T.then(step)
    norm = _reduce_normalisation(current.ainvs)
    current = transform_model(current, norm)
    return current, T.then(norm)


def _candidate_primes(E: WeierstrassModel) -> list[int]:
    # only p with p^12 | disc can be non-minimal; avoid factoring disc fully
    g = gcd(gcd(abs(E.c4), abs(E.c6)), abs(E.disc))
    out = []
    if g == 1:
        return out
    from .arith import factor

    for p, e in factor(g).items():
        if E.disc % p ** 12 == 0:
            out.append(p)
    return out


def is_minimal(E: WeierstrassModel) -> bool:
    return minimal_model(E)[1].u == 1


# -- torsion -------------------------------------------------------------


MAZUR_CYCLIC = frozenset(range(1, 11)) | {12}
MAZUR_NONCYCLIC = frozenset({2, 4, 6, 8})  # Z/2 x Z/2m with the given 2m


@dataclass(frozen=True)
class TorsionData:
    order: int
    structure: tuple[int, ...]
    points: tuple[Point, ...]


def order_of(P: Point, E: WeierstrassModel, bound: int = 12) -> int:
    """Order of P if it is at most ``bound``, else 0."""
    Q = P
    for n in range(1, bound + 1):
        if Q.is_identity:
            return n
        Q = _add(Q, P, E)
    return 0


def _torsion_bound(E: WeierstrassModel, nprimes: int = 12) -> int:
    # #E(Q)_tors divides #E(F_p) for good odd p
    from .local import count_points

    g = 0
    used = 0
    for p in primes_upto(400):
        if p == 2 or E.disc % p == 0:
            continue
        g = gcd(g, count_points(E, p))
        used += 1
        if g == 1 or used >= nprimes:
            break
    return g


def torsion_subgroup(E: WeierstrassModel) -> TorsionData:
    """Torsion subgroup by Lutz–Nagell on the integral short model."""
    bound = _torsion_bound(E)
    if bound == 1:
        return TorsionData(1, (), (IDENTITY,))
    # short model Y^2 = X^3 - 27 c4 X - 54 c6 with X = 36x + 3b2,
    # Y = 108(2y + a1 x + a3)
    A, B = -27 * E.c4, -54 * E.c6
    D = 4 * A ** 3 + 27 * B ** 2
    candidates = {IDENTITY}
    for Y in _lutz_nagell_ys(D):
        for X in integer_roots_monic_cubic(0, A, B - Y * Y):
            x = Fraction(X - 3 * E.b2, 36)
            for sign in ((1, -1) if Y else (1,)):
                y = (Fraction(sign * Y, 108) - E.a1 * x - E.a3) / 2
                P = Point(x, y)
                if on_curve(P, E) and order_of(P, E) and P not in candidates:
                    candidates.add(P)
    pts = sorted(candidates, key=_point_key)
    order = len(pts)
    if bound % order:
        raise AssertionError("torsion order does not divide the reduction bound")
    orders = [order_of(P, E) for P in pts]
    if order in orders:
        structure = (order,) if order > 1 else ()
    else:
        structure = (2, order // 2)
    return TorsionData(order, structure, tuple(pts))


def _point_key(P: Point):
    if P.is_identity:
        return (0, Fraction(0), Fraction(0))
    return (1, P.x, P.y)


def _lutz_nagell_ys(D: int):
    """Y >= 0 with Y = 0 or Y^2 | D."""
    from .arith import factor

    yield 0
    fac = factor(D)
    ys = [1]
    for p, e in fac.items():
        ys = [y * p ** k for y in ys for k in range(e // 2 + 1)]
    yield from sorted(ys)


# -- fixture records -----------------------------------------------------


@dataclass
class CurveRecord:
    label: str
    model: WeierstrassModel
    generators: list[Point] = field(default_factory=list)
    expected: dict = field(default_factory=dict)
    selmer_dim: Optional[int] = None


def validate_generators(record: CurveRecord, tol: float = 1e-8) -> list[Point]:
    """Check the listed generators: on the curve and of infinite order.

    Returns the generators mapped onto the minimal model; their count is the
    working algebraic rank.
    """
    from .heights import canonical_height

    E = record.model
    for P in record.generators:
        if P.is_identity or not on_curve(P, E):
            raise PointNotOnCurve(f"{record.label}: generator {P} not on {E}")
    Emin, T = minimal_model(E)
    out = []
    for P in record.generators:
        Q = transform_point(P, T)
        if order_of(Q, Emin):
            raise TorsionGenerator(f"{record.label}: generator {P} is torsion")
        h = canonical_height(Q, Emin)
        if h.value < tol:
            raise TorsionGenerator(f"{record.label}: generator {P} has height {h.value}")
        out.append(Q)
    return out
