import math

import numpy as np
import pytest

from ellinv.arith import (I, NEG, ZETA3, ZETABAR3, AutoKind, IDENTITY, CurvePoint,
                          all_points, auto_apply, count_points_exhaustive,
                          curve_new, field_sqrt, group_order, hasse_interval,
                          is_prime, make_field, mu_six_power, point_add,
                          random_point, scalar_mul, torsion_points)
from ellinv.errors import (DegreeZero, IncompatibleJ, NotPrime,
                           PointNotOnCurve, RootOfUnityMissing, SingularCurve,
                           TorsionNotRational)


def test_is_prime_small():
    primes = [n for n in range(60) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7


def test_make_field_moduli():
    assert make_field(5, 1).modulus == (1, 0)
    # monic quadratics over F_5 in lex order: t^2, t^2+1 (=(t-2)(t-3)), t^2+2
    assert make_field(5, 2).modulus == (1, 0, 2)
    with pytest.raises(NotPrime):
        make_field(4, 1)
    with pytest.raises(DegreeZero):
        make_field(5, 0)


@pytest.mark.parametrize("p,k", [(7, 1), (5, 2), (3, 3), (1009, 2)])
def test_field_axioms(p, k):
    F = make_field(p, k)
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b, c = (F.random(rng) for _ in range(3))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        if a:
            assert F.mul(a, F.inv(a)) == 1
    # the multiplicative group is cyclic of order q-1
    g = next(x for x in range(2, F.q) if all(F.pow(x, (F.q - 1) // r) != 1
                                             for r in (2, 3, 5, 7, 1009)
                                             if (F.q - 1) % r == 0))
    assert F.pow(g, F.q - 1) == 1


def test_field_sqrt_examples():
    F = make_field(13)
    assert field_sqrt(F, 4) == 2
    assert field_sqrt(F, 2) is None
    assert field_sqrt(F, 0) == 0
    squares = sorted({x * x % 13 for x in range(1, 13)})
    assert squares == [1, 3, 4, 9, 10, 12]


def test_field_sqrt_extension():
    F = make_field(1009, 2)
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = F.random(rng)
        r = int(field_sqrt(F, F.elem(F.mul(a, a))))
        assert F.mul(r, r) == F.mul(a, a)
        assert r <= F.neg(r)  # smaller encoding = lex-smaller, high coefficient first


def test_curve_new_j():
    F7, F13 = make_field(7), make_field(13)
    assert curve_new(F7, a6=1).j == 0
    assert curve_new(F13, a4=1).j == F13.coerce(1728)
    with pytest.raises(SingularCurve):
        curve_new(F7)


def test_group_law_examples():
    F = make_field(7)
    E = curve_new(F, a6=1)
    P = E.point(0, 1)
    assert point_add(E, P, IDENTITY) == P
    assert point_add(E, P, E.neg(P)) == IDENTITY
    assert scalar_mul(E, 2, P) == CurvePoint(0, F.neg(1))
    assert scalar_mul(E, 3, P) == IDENTITY
    with pytest.raises(PointNotOnCurve):
        point_add(E, CurvePoint(1, 1), P)


def test_group_order_examples():
    assert group_order(curve_new(make_field(7), a6=1)) == 12
    assert group_order(curve_new(make_field(5), a4=1)) == 4


@pytest.mark.parametrize("p,k,a4,a6", [(1009, 1, 1, 1), (10007, 1, 2, 3),
                                       (1000003, 1, 5, 7), (101, 2, 1, 1)])
def test_group_order_hasse_and_kills_points(p, k, a4, a6):
    F = make_field(p, k)
    E = curve_new(F, a4=a4, a6=a6)
    N = group_order(E)
    lo, hi = hasse_interval(F.q)
    assert lo <= N <= hi
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert E.mul(N, random_point(E, rng)) == IDENTITY
    if F.q < 10 ** 4:
        assert N == count_points_exhaustive(E)


def test_associativity_random():
    F = make_field(1009)
    E = curve_new(F, a4=1, a6=1)
    rng = np.random.default_rng(2)
    for _ in range(30):
        P, Q, R = (random_point(E, rng) for _ in range(3))
        assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))


def test_random_point_deterministic_and_on_curve():
    F = make_field(1009)
    E = curve_new(F, a6=1)
    a = [random_point(E, np.random.default_rng(5)) for _ in range(3)]
    b = [random_point(E, np.random.default_rng(5)) for _ in range(3)]
    assert a == b
    assert all(E.contains(P) and P.x is not None for P in a)


def test_random_point_x_uniform():
    """Chi-square over the valid x-coordinates of y^2 = x^3 + 1 / F_1009."""
    F = make_field(1009)
    E = curve_new(F, a6=1)
    valid = sorted({P.x for P in all_points(E) if P.x is not None})
    rng = np.random.default_rng(11)
    counts = dict.fromkeys(valid, 0)
    draws = 10 ** 4
    for _ in range(draws):
        counts[random_point(E, rng).x] += 1
    exp = draws / len(valid)
    chi2 = sum((c - exp) ** 2 / exp for c in counts.values())
    dof = len(valid) - 1
    assert chi2 < dof + 5 * math.sqrt(2 * dof)


def test_torsion_examples():
    F = make_field(5)
    E = curve_new(F, a2=F.neg(3), a4=2)  # x(x-1)(x-2) = x^3 - 3x^2 + 2x
    pts = torsion_points(E, 2)
    assert pts == [IDENTITY, CurvePoint(0, 0), CurvePoint(1, 0), CurvePoint(2, 0)]
    E7 = curve_new(make_field(7), a6=1)
    with pytest.raises(TorsionNotRational):
        torsion_points(E7, 3, full=True)
    assert torsion_points(E7, 1) == [IDENTITY]


def test_torsion_large_field_random_search():
    F = make_field(10007)
    E = curve_new(F, a2=F.neg(4), a4=3)  # x(x-1)(x-3): full 2-torsion
    pts = torsion_points(E, 2, full=True, rng=np.random.default_rng(0))
    assert len(pts) == 4
    assert all(E.mul(2, P) == IDENTITY for P in pts)


def test_auto_examples():
    F7 = make_field(7)
    E = curve_new(F7, a6=1)
    assert auto_apply(NEG, E, IDENTITY) == IDENTITY
    assert F7.root_of_unity(3) == 2
    P = E.point(2, 3)  # 8 + 1 = 9 = 3^2
    Q = auto_apply(ZETA3, E, P)
    assert E.contains(Q) and Q.y == P.y
    F13 = make_field(13)
    E2 = curve_new(F13, a4=1)
    assert F13.root_of_unity(4) == 5
    P = next(P for P in all_points(E2) if P.x)
    Q = auto_apply(I, E2, P)
    assert E2.contains(Q) and Q.x == F13.neg(P.x)
    assert Q.y in (F13.mul(5, P.y), F13.mul(8, P.y))


def test_auto_errors():
    E = curve_new(make_field(7), a4=1, a6=1)
    with pytest.raises(IncompatibleJ):
        auto_apply(ZETA3, E, E.point(0, 1))
    E3 = curve_new(make_field(7), a4=1)
    with pytest.raises(RootOfUnityMissing):
        auto_apply(I, E3, next(P for P in all_points(E3) if P.x))


@pytest.mark.parametrize("kind,a4,a6", [(NEG, 1, 1), (ZETA3, 0, 1), (ZETABAR3, 0, 1),
                                        (I, 1, 0), (mu_six_power(1), 0, 1)])
def test_auto_order(kind, a4, a6):
    E = curve_new(make_field(37), a4=a4, a6=a6)
    rng = np.random.default_rng(4)
    for _ in range(100):
        P = random_point(E, rng)
        Q = P
        for _ in range(kind.order):
            Q = auto_apply(kind, E, Q)
        assert Q == P


def test_autokind_tags():
    assert {AutoKind(t).tag for t in (6, 4, 8, 3, 9)} == {
        "Neg", "Zeta3", "ZetaBar3", "I", "NegI"}
    assert mu_six_power(1).order == 6
    assert (ZETA3 * ZETA3 * ZETA3).t == 0
