"""Finite fields F_{p^k} and elliptic curves over them.

Field elements are encoded internally as integers ``sum(c_i * p**i)`` where
``c_i`` are the coordinates in the power basis of the defining modulus.  The
``FieldCtx`` methods work on these integers; ``FieldElement`` is a small value
wrapper for user code.
"""
from __future__ import annotations

import itertools
import math
from math import gcd
from typing import NamedTuple

import numpy as np

from .errors import (AmbiguousOrder, DegreeZero, IncompatibleJ, NotPrime,
                     PointNotOnCurve, RootOfUnityMissing, SingularCurve,
                     TorsionNotRational, UnsupportedCharacteristic)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of a positive integer."""
    from sympy import factorint
    return sorted(factorint(n))


# -- polynomials over F_p as low-to-high coefficient lists ------------------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a, b, m, p):
    """a*b mod m over F_p; m monic, low-to-high."""
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _pmod(prod, m, p)


def _pmod(a, m, p):
    a = [c % p for c in a]
    k = len(m) - 1
    for i in range(len(a) - 1, k - 1, -1):
        c = a[i]
        if c:
            for j in range(k + 1):
                a[i - k + j] = (a[i - k + j] - c * m[j]) % p
    return _ptrim(a[:k] if len(a) > k else a)


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(list(a), m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        b = [c * inv % p for c in b]
        a = _pmod(a, b, p) if len(a) >= len(b) else a
        a, b = b, a
    return a


def _is_irreducible(m, p):
    """Rabin's test for a monic polynomial (low-to-high)."""
    k = len(m) - 1
    t = [0, 1]
    if _ppowmod(t, p ** k, m, p) != _pmod(t, m, p):
        return False
    for r in prime_factors(k) if k > 1 else []:
        h = _ppowmod(t, p ** (k // r), m, p)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_pgcd(m, _ptrim(h), p)) != 1:
            return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple:
    """Lex-smallest monic irreducible of degree k, coefficients high-to-low."""
    if k == 1:
        return (1, 0)
    for tail in itertools.product(range(p), repeat=k):
        if tail[-1] == 0:
            continue
        low = list(reversed(tail)) + [1]
        if _is_irreducible(low, p):
            return (1,) + tail
    raise AssertionError("no irreducible polynomial found")


class FieldCtx:
    """The field F_q, q = p^k, with a fixed defining modulus."""

    __slots__ = ("p", "k", "q", "modulus", "_low", "_c0", "_c1", "_nonres",
                 "_roots")

    def __init__(self, p: int, k: int, modulus: tuple):
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = tuple(modulus)
        self._low = list(reversed(modulus))
        if k == 2:
            self._c0, self._c1 = self._low[0], self._low[1]
        self._nonres = None
        self._roots = {}

    def __repr__(self):
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={self.modulus})"

    def __eq__(self, other):
        return (isinstance(other, FieldCtx) and self.p == other.p
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    # -- encoding
    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def from_coeffs(self, cs) -> int:
        v = 0
        for c in reversed(list(cs)):
            v = v * self.p + int(c) % self.p
        return v

    def __call__(self, v) -> "FieldElement":
        return FieldElement(self, self.coerce(v))

    def coerce(self, v) -> int:
        """Integer n maps to n*1; FieldElement maps to its encoding."""
        if isinstance(v, FieldElement):
            return v.v
        return int(v) % self.p

    def elem(self, v: int) -> "FieldElement":
        return FieldElement(self, v)

    # -- arithmetic on encodings
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            a, x = divmod(a, p)
            out += (-x % p) * scale
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return a * b % p
        if self.k == 2:
            a1, a0 = divmod(a, p)
            b1, b0 = divmod(b, p)
            hi = a1 * b1
            lo = a0 * b0 - hi * self._c0
            mid = a0 * b1 + a1 * b0 - hi * self._c1
            return (lo % p) + (mid % p) * p
        r = _pmulmod(self.coeffs(a), self.coeffs(b), self._low, p)
        return self.from_coeffs(r)

    def smul(self, c: int, a: int) -> int:
        """Multiply by an integer scalar."""
        return self.mul(self.coerce(c), a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.k == 1:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- squares and roots of unity
    def is_square(self, a: int) -> bool:
        return a == 0 or self.pow(a, (self.q - 1) // 2) == 1

    def _nonresidue(self) -> int:
        if self._nonres is None:
            z = 2
            while self.is_square(z):
                z += 1
            self._nonres = z
        return self._nonres

    def sqrt(self, a: int):
        """Square root with the smaller encoding, or None for non-squares."""
        if a == 0:
            return 0
        q = self.q
        if q % 2 == 0:
            r = self.pow(a, q // 2)
            return r
        if not self.is_square(a):
            return None
        if q % 4 == 3:
            r = self.pow(a, (q + 1) // 4)
        else:
            s, t = 0, q - 1
            while t % 2 == 0:
                t //= 2
                s += 1
            z = self._nonresidue()
            m, c = s, self.pow(z, t)
            x, b = self.pow(a, (t + 1) // 2), self.pow(a, t)
            while b != 1:
                i, bb = 0, b
                while bb != 1:
                    bb = self.mul(bb, bb)
                    i += 1
                g = self.pow(c, 1 << (m - i - 1))
                x = self.mul(x, g)
                c = self.mul(g, g)
                b = self.mul(b, c)
                m = i
            r = x
        return min(r, self.neg(r))

    def root_of_unity(self, d: int) -> int:
        """Smallest-encoding primitive d-th root of unity."""
        if d in self._roots:
            return self._roots[d]
        if (self.q - 1) % d:
            raise RootOfUnityMissing(f"mu_{d} is not rational over F_{self.q}")
        if d == 1:
            return 1
        primes = prime_factors(d)
        e = (self.q - 1) // d
        z, x = None, 2
        while z is None:
            c = self.pow(x, e)
            if all(self.pow(c, d // r) != 1 for r in primes):
                z = c
            x += 1
        prim = [self.pow(z, j) for j in range(1, d) if gcd(j, d) == 1]
        self._roots[d] = min(prim)
        return self._roots[d]

    def random(self, rng) -> int:
        return int(rng.integers(0, self.q))


class FieldElement:
    """Value wrapper around an encoded element of a FieldCtx."""

    __slots__ = ("ctx", "v")

    def __init__(self, ctx: FieldCtx, v: int):
        self.ctx = ctx
        self.v = v

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.coeffs(self.v)

    def _o(self, other) -> int:
        return self.ctx.coerce(other)

    def __add__(self, o):
        return FieldElement(self.ctx, self.ctx.add(self.v, self._o(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.ctx, self.ctx.sub(self.v, self._o(o)))

    def __rsub__(self, o):
        return FieldElement(self.ctx, self.ctx.sub(self._o(o), self.v))

    def __mul__(self, o):
        return FieldElement(self.ctx, self.ctx.mul(self.v, self._o(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FieldElement(self.ctx, self.ctx.div(self.v, self._o(o)))

    def __rtruediv__(self, o):
        return FieldElement(self.ctx, self.ctx.div(self._o(o), self.v))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.v))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.v, e))

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv(self.v))

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return self.ctx == o.ctx and self.v == o.v
        if isinstance(o, int):
            return self.v == self.ctx.coerce(o)
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __int__(self):
        return self.v

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        if self.ctx.k == 1:
            return str(self.v)
        return f"F{self.ctx.q}{tuple(self.coeffs)}"


def make_field(p: int, k: int = 1) -> FieldCtx:
    """Build F_{p^k} with the lex-smallest monic irreducible modulus."""
    if k < 1:
        raise DegreeZero("extension degree must be >= 1")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return FieldCtx(p, k, smallest_irreducible(p, k))


def field_sqrt(ctx: FieldCtx, a):
    """Square root of a as a FieldElement, or None when a is a non-square."""
    r = ctx.sqrt(ctx.coerce(a))
    return None if r is None else ctx.elem(r)


# -- elliptic curves ---------------------------------------------------------

class CurvePoint(NamedTuple):
    """Affine point (x, y) as encoded field elements; (None, None) is O."""
    x: int | None
    y: int | None

    @property
    def is_identity(self) -> bool:
        return self.x is None


IDENTITY = CurvePoint(None, None)


class Curve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over ctx (odd char)."""

    __slots__ = ("ctx", "a1", "a2", "a3", "a4", "a6", "b2", "b4", "b6",
                 "disc", "j", "_order")

    def __init__(self, ctx, a1, a2, a3, a4, a6):
        F = ctx
        self.ctx = ctx
        self.a1, self.a2, self.a3, self.a4, self.a6 = (
            F.coerce(a) for a in (a1, a2, a3, a4, a6))
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        m, ad, sm = F.mul, F.add, F.smul
        b2 = ad(m(a1, a1), sm(4, a2))
        b4 = ad(m(a1, a3), sm(2, a4))
        b6 = ad(m(a3, a3), sm(4, a6))
        b8 = F.sub(ad(ad(m(m(a1, a1), a6), sm(4, m(a2, a6))),
                      F.sub(m(a2, m(a3, a3)), m(a1, m(a3, a4)))), m(a4, a4))
        disc = F.sub(F.sub(F.neg(m(m(b2, b2), b8)), sm(8, m(b4, m(b4, b4)))),
                     F.sub(sm(27, m(b6, b6)), sm(9, m(b2, m(b4, b6)))))
        if disc == 0:
            raise SingularCurve("discriminant vanishes")
        c4 = F.sub(m(b2, b2), sm(24, b4))
        self.b2, self.b4, self.b6, self.disc = b2, b4, b6, disc
        self.j = F.div(m(c4, m(c4, c4)), disc)
        self._order = None

    def __repr__(self):
        return (f"Curve([{self.a1},{self.a2},{self.a3},{self.a4},{self.a6}]"
                f" over F_{self.ctx.q})")

    @property
    def cached_order(self):
        return self._order

    @property
    def is_short(self) -> bool:
        return self.a1 == 0 and self.a2 == 0 and self.a3 == 0

    def rhs(self, x: int) -> int:
        F = self.ctx
        return F.add(F.mul(F.add(F.mul(F.add(x, self.a2), x), self.a4), x),
                     self.a6)

    def contains(self, P: CurvePoint) -> bool:
        if P.x is None:
            return True
        F = self.ctx
        lhs = F.mul(P.y, F.add(P.y, F.add(F.mul(self.a1, P.x), self.a3)))
        return lhs == self.rhs(P.x)

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint(self.ctx.coerce(x), self.ctx.coerce(y))
        if not self.contains(P):
            raise PointNotOnCurve(f"{P} is not on {self}")
        return P

    def neg(self, P: CurvePoint) -> CurvePoint:
        if P.x is None:
            return P
        F = self.ctx
        return CurvePoint(P.x, F.neg(F.add(P.y, F.add(F.mul(self.a1, P.x),
                                                        self.a3))))

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        """Group law without on-curve validation."""
        if P.x is None:
            return Q
        if Q.x is None:
            return P
        F = self.ctx
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            den = F.add(F.add(y1, y2), F.add(F.mul(self.a1, x2), self.a3))
            if den == 0:
                return IDENTITY
            num = F.add(F.add(F.smul(3, F.mul(x1, x1)),
                              F.smul(2, F.mul(self.a2, x1))),
                        F.sub(self.a4, F.mul(self.a1, y1)))
            den = F.add(F.smul(2, y1), F.add(F.mul(self.a1, x1), self.a3))
            lam = F.div(num, den)
        else:
            lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
        x3 = F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(self.a1, lam)),
                         self.a2), F.add(x1, x2))
        y3 = F.sub(F.neg(F.mul(lam, F.sub(x3, x1))),
                   F.add(y1, F.add(F.mul(self.a1, x3), self.a3)))
        return CurvePoint(x3, y3)

    def mul(self, m: int, P: CurvePoint) -> CurvePoint:
        """Scalar multiple without on-curve validation."""
        if m < 0:
            m, P = -m, self.neg(P)
        R = IDENTITY
        while m:
            if m & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            m >>= 1
        return R

    def sub(self, P, Q):
        return self.add(P, self.neg(Q))


def curve_new(ctx: FieldCtx, a1=0, a2=0, a3=0, a4=0, a6=0) -> Curve:
    if ctx.p == 2:
        raise UnsupportedCharacteristic("characteristic 2 curves unsupported")
    return Curve(ctx, a1, a2, a3, a4, a6)


def _check(E: Curve, *pts):
    for P in pts:
        if not E.contains(P):
            raise PointNotOnCurve(f"{P} is not on {E}")


def point_add(E: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    _check(E, P, Q)
    return E.add(P, Q)


def scalar_mul(E: Curve, m: int, P: CurvePoint) -> CurvePoint:
    _check(E, P)
    return E.mul(m, P)


def _ydisc(E: Curve, x: int) -> int:
    """Discriminant of the quadratic in y over a fixed x."""
    F = E.ctx
    s = F.add(F.mul(E.a1, x), E.a3)
    return F.add(F.mul(s, s), F.smul(4, E.rhs(x)))


def hasse_interval(q: int) -> tuple[int, int]:
    r = math.isqrt(4 * q)
    lo = q + 1 - r
    hi = q + 1 + r
    return lo, hi


def count_points_exhaustive(E: Curve) -> int:
    F = E.ctx
    total = 1
    e = (F.q - 1) // 2
    for x in range(F.q):
        D = _ydisc(E, x)
        if D == 0:
            total += 1
        elif F.pow(D, e) == 1:
            total += 2
    return total


def _point_order(E: Curve, P: CurvePoint, N: int) -> int:
    """Exact order of P given that N*P = O."""
    for r in prime_factors(N):
        while N % r == 0 and E.mul(N // r, P).x is None:
            N //= r
    return N


def _bsgs_multiple(E: Curve, P: CurvePoint, lo: int, hi: int):
    """Some N in [lo, hi] with N*P = O, or None."""
    m = math.isqrt(hi - lo + 1) + 1
    baby = {}
    R = IDENTITY
    for j in range(m + 1):
        baby.setdefault(R, j)
        R = E.add(R, P)
    step = E.mul(m, P)
    G = E.mul(lo, P)
    for i in range(m + 2):
        j = baby.get(G)
        if j is not None:
            N = lo + i * m - j
            if lo <= N <= hi and N > 0:
                return N
        G = E.add(G, step)
    return None


def group_order(E: Curve, rng=None, attempts: int = 40) -> int:
    """|E(F_q)|, cached on the curve."""
    if E._order is not None:
        return E._order
    F = E.ctx
    coeffs = (E.a1, E.a2, E.a3, E.a4, E.a6)
    if F.k > 1 and all(c < F.p for c in coeffs):
        # defined over F_p: lift the Frobenius trace
        base = Curve(FieldCtx(F.p, 1, (1, 0)), *coeffs)
        t = F.p + 1 - group_order(base, rng, attempts)
        s_prev, s_cur = 2, t
        for _ in range(F.k - 1):
            s_prev, s_cur = s_cur, t * s_cur - F.p * s_prev
        E._order = F.q + 1 - s_cur
    elif F.q < 10 ** 4:
        E._order = count_points_exhaustive(E)
    else:
        E._order = group_order_bsgs(E, rng, attempts)
    return E._order


def group_order_bsgs(E: Curve, rng=None, attempts: int = 40) -> int:
    if rng is None:
        rng = np.random.default_rng(0)
    lo, hi = hasse_interval(E.ctx.q)
    L = 1
    for _ in range(attempts):
        P = random_point(E, rng)
        N = _bsgs_multiple(E, P, lo, hi)
        if N is None:
            continue
        L = L * _point_order(E, P, N) // gcd(L, _point_order(E, P, N))
        mults = [c for c in range(-(-lo // L) * L, hi + 1, L)]
        if len(mults) == 1:
            return mults[0]
    raise AmbiguousOrder("point orders did not determine |E| in the Hasse "
                         "interval")


def random_point(E: Curve, rng) -> CurvePoint:
    """Uniform x among x-coordinates with a root, then a uniform root."""
    F = E.ctx
    inv2 = F.inv(2)
    while True:
        x = F.random(rng)
        D = _ydisc(E, x)
        r = F.sqrt(D)
        if r is None:
            continue
        if r and rng.integers(0, 2):
            r = F.neg(r)
        s = F.add(F.mul(E.a1, x), E.a3)
        return CurvePoint(x, F.mul(F.sub(r, s), inv2))


def all_points(E: Curve) -> list[CurvePoint]:
    """Every rational point, identity first (small fields only)."""
    F = E.ctx
    inv2 = F.inv(2)
    pts = [IDENTITY]
    for x in range(F.q):
        r = F.sqrt(_ydisc(E, x))
        if r is None:
            continue
        s = F.add(F.mul(E.a1, x), E.a3)
        for rr in ([r] if r == 0 else [r, F.neg(r)]):
            pts.append(CurvePoint(x, F.mul(F.sub(rr, s), inv2)))
    return pts


def torsion_points(E: Curve, N: int, full: bool = False, rng=None,
                   budget: int | None = None) -> list[CurvePoint]:
    """Rational points killed by N, sorted with the identity first."""
    if N < 1:
        raise ValueError("N must be positive")
    if gcd(N, E.ctx.p) != 1:
        raise UnsupportedCharacteristic("only etale torsion is supported")
    if N == 1:
        return [IDENTITY]
    n = group_order(E)
    if full and ((E.ctx.q - 1) % N or n % (N * N)):
        raise TorsionNotRational(f"E[{N}] is not rational over F_{E.ctx.q}")
    if E.ctx.q < 10 ** 4:
        found = {P for P in all_points(E) if E.mul(N, P).x is None}
    else:
        found = _torsion_random(E, N, n, rng, budget)
    if full and len(found) != N * N:
        raise TorsionNotRational(f"found only {len(found)} points of E[{N}]")
    return sorted(found, key=lambda P: (P.x is not None, P.x or 0, P.y or 0))


def _torsion_random(E, N, n, rng, budget):
    if rng is None:
        rng = np.random.default_rng(0)
    if budget is None:
        budget = 64 * N * N
    M = 1
    for r in prime_factors(N):
        while n % (M * r) == 0:
            M *= r
    h = n // M
    S = {IDENTITY}
    stale = 0
    for _ in range(budget):
        Q = E.mul(h, random_point(E, rng))
        o = _point_order(E, Q, M) if Q.x is not None else 1
        g = gcd(o, N)
        R = E.mul(o // g, Q)
        grown = False
        if R not in S:
            new = set(S)
            T = R
            while T not in S:
                new |= {E.add(s, T) for s in S}
                T = E.add(T, R)
            S = new
            grown = True
        stale = 0 if grown else stale + 1
        if len(S) == N * N or stale >= 8 * N * N:
            break
    return S


# -- automorphisms -----------------------------------------------------------

_BASE_EXP = {1: 0, 2: 6, 3: 4, 4: 3, 6: 10}


class AutoKind(NamedTuple):
    """Automorphism [omega] acting on the invariant differential by omega.

    ``t`` is the exponent of an abstract primitive 12th root z with
    [-1] = z^6, [zeta3] = z^4, [i] = z^3 and [-zeta3] = z^10.
    """
    t: int

    @staticmethod
    def from_root(d: int, e: int) -> "AutoKind":
        """The e-th power of the canonical generator of mu_d."""
        return AutoKind(_BASE_EXP[d] * e % 12)

    @property
    def order(self) -> int:
        return 12 // gcd(self.t, 12)

    @property
    def required_j(self):
        """None for any curve, else the required j-invariant."""
        return {1: None, 2: None, 3: 0, 6: 0, 4: 1728}[self.order]

    @property
    def tag(self) -> str:
        return {0: "Id", 6: "Neg", 4: "Zeta3", 8: "ZetaBar3", 3: "I",
                9: "NegI", 10: "MuSixPower(1)",
                2: "MuSixPower(5)"}[self.t]

    def __mul__(self, other):
        return AutoKind((self.t + other.t) % 12)

    def inverse(self):
        return AutoKind(-self.t % 12)

    def exponent_in(self, d: int) -> int:
        """e with self = (generator of mu_d)^e."""
        base = _BASE_EXP[d]
        for e in range(d):
            if base * e % 12 == self.t:
                return e
        raise ValueError(f"{self.tag} is not in mu_{d}")

    def root(self, ctx: FieldCtx) -> int:
        """The root of unity omega in ctx."""
        t = self.t
        if t == 0:
            return 1
        if t == 6:
            return ctx.neg(1)
        if t % 3 == 0:
            return ctx.pow(ctx.root_of_unity(4), t // 3)
        if t % 4 == 0:
            return ctx.pow(ctx.root_of_unity(3), t // 4)
        mz = ctx.neg(ctx.root_of_unity(3))
        return ctx.pow(mz, (5 * t // 2) % 6)


ID = AutoKind(0)
NEG = AutoKind(6)
ZETA3 = AutoKind(4)
ZETABAR3 = AutoKind(8)
I = AutoKind(3)
NEG_I = AutoKind(9)


def mu_six_power(e: int) -> AutoKind:
    """[-zeta3]^e."""
    return AutoKind(10 * e % 12)


def check_auto(kind: AutoKind, E: Curve):
    j = kind.required_j
    if j is None:
        return
    F = E.ctx
    if E.j != F.coerce(j) or not E.is_short:
        raise IncompatibleJ(f"{kind.tag} needs a short model with j={j}")
    if j == 0 and E.a4 != 0 or j == 1728 and E.a6 != 0:
        raise IncompatibleJ(f"{kind.tag} needs the normal form for j={j}")


def auto_map(kind: AutoKind, E: Curve):
    """Return a fast callable P -> [omega]P after validating once."""
    if kind.t == 0:
        return lambda P: P
    if kind.t == 6:
        return E.neg
    check_auto(kind, E)
    F = E.ctx
    w = kind.root(F)
    cx, cy = F.pow(w, -2), F.pow(w, -3)

    def f(P):
        if P.x is None:
            return P
        return CurvePoint(F.mul(cx, P.x), F.mul(cy, P.y))
    return f


def auto_apply(kind: AutoKind, E: Curve, P: CurvePoint) -> CurvePoint:
    """Apply [omega]: (x, y) -> (omega^-2 x, omega^-3 y) on normal forms."""
    _check(E, P)
    return auto_map(kind, E)(P)
