"""Monomial-affine symmetry groups of E^n and their reductions mod l."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import NamedTuple

import numpy as np

from . import linalg
from .arith import (ID, IDENTITY, AutoKind, Curve, CurvePoint, FieldCtx,
                    auto_map, check_auto, is_prime, make_field)
from .errors import (CapExceeded, NoSplitEmbedding, NotNormal, NotPrime,
                     OrderDividesL, OrderMismatch, PointNotOnCurve)


class MonomialSymmetry(NamedTuple):
    """(g.x)_i = scalar_i * autos_i(x_{perm^-1(i)}) + shifts_i.

    ``perm[i]`` is the image of i.  ``scalars`` are roots of unity acting on
    the fibre of the polarization; a degree-d section is multiplied by
    prod(scalars)^d.  They never move points.
    """
    perm: tuple
    autos: tuple
    shifts: tuple
    scalars: tuple

    @property
    def n(self) -> int:
        return len(self.perm)


def identity_element(n: int) -> MonomialSymmetry:
    return MonomialSymmetry(tuple(range(n)), (ID,) * n, (IDENTITY,) * n,
                            (ID,) * n)


def rank1(auto: AutoKind = ID, shift: CurvePoint = IDENTITY,
          scalar: AutoKind = ID) -> MonomialSymmetry:
    """Element of Aut(E) x E x mu acting on a single coordinate."""
    return MonomialSymmetry((0,), (auto,), (shift,), (scalar,))


def transposition(n: int, i: int, j: int) -> MonomialSymmetry:
    perm = list(range(n))
    perm[i], perm[j] = j, i
    e = identity_element(n)
    return e._replace(perm=tuple(perm))


def embed(h: MonomialSymmetry, n: int, at: int) -> MonomialSymmetry:
    """Place a rank-1 element on coordinate ``at`` of E^n."""
    e = identity_element(n)
    autos, shifts, scalars = list(e.autos), list(e.shifts), list(e.scalars)
    autos[at], shifts[at], scalars[at] = h.autos[0], h.shifts[0], h.scalars[0]
    return e._replace(autos=tuple(autos), shifts=tuple(shifts),
                      scalars=tuple(scalars))


def pair(g: MonomialSymmetry, E: Curve, n: int, i: int = 0,
         j: int = 1) -> MonomialSymmetry:
    """The reflection (x_i, x_j) -> (g x_j, g^-1 x_i)."""
    a = embed(g, n, i)
    b = embed(inverse(g, E), n, j)
    return compose(compose(a, b, E), transposition(n, i, j), E)


@lru_cache(maxsize=None)
def _amap(E: Curve, kind: AutoKind):
    return auto_map(kind, E)


def _inv_perm(perm):
    inv = [0] * len(perm)
    for i, s in enumerate(perm):
        inv[s] = i
    return tuple(inv)


def compose(g: MonomialSymmetry, h: MonomialSymmetry,
            E: Curve) -> MonomialSymmetry:
    """g*h, acting as x -> g.(h.x)."""
    ginv = _inv_perm(g.perm)
    perm = tuple(g.perm[h.perm[i]] for i in range(g.n))
    autos, shifts, scalars = [], [], []
    for i in range(g.n):
        k = ginv[i]
        autos.append(g.autos[i] * h.autos[k])
        scalars.append(g.scalars[i] * h.scalars[k])
        shifts.append(E.add(_amap(E, g.autos[i])(h.shifts[k]), g.shifts[i]))
    return MonomialSymmetry(perm, tuple(autos), tuple(shifts), tuple(scalars))


def inverse(g: MonomialSymmetry, E: Curve) -> MonomialSymmetry:
    perm = _inv_perm(g.perm)
    autos, shifts, scalars = [], [], []
    for j in range(g.n):
        k = g.perm[j]
        a = g.autos[k].inverse()
        autos.append(a)
        scalars.append(g.scalars[k].inverse())
        shifts.append(E.neg(_amap(E, a)(g.shifts[k])))
    return MonomialSymmetry(perm, tuple(autos), tuple(shifts), tuple(scalars))


def apply(g: MonomialSymmetry, xs, E: Curve, check: bool = False) -> tuple:
    if check:
        for P in xs:
            if not E.contains(P):
                raise PointNotOnCurve(f"{P} is not on {E}")
    ginv = _inv_perm(g.perm)
    return tuple(E.add(_amap(E, g.autos[i])(xs[ginv[i]]), g.shifts[i])
                 for i in range(g.n))


def total_scalar(g: MonomialSymmetry) -> AutoKind:
    out = ID
    for s in g.scalars:
        out = out * s
    return out


def closure(gens, E: Curve, n: int, cap: int = 10 ** 6) -> list:
    """All products of the generators, in breadth-first order."""
    e = identity_element(n)
    seen = {e: None}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x, E)
                if y not in seen:
                    seen[y] = None
                    if len(seen) > cap:
                        raise CapExceeded(f"group larger than cap={cap}")
                    nxt.append(y)
        frontier = nxt
    return list(seen)


def generating_subset(elements, E: Curve, n: int = 1) -> list:
    """Greedy small generating set, deterministic in the input order."""
    gens = []
    span = {identity_element(n)}
    for h in elements:
        if h not in span:
            gens.append(h)
            span = set(closure(gens, E, n))
    return gens


@dataclass
class GroupSpec:
    """G_n(G1, H1) inside (mu x Aut(E) x E)^n x| S_n."""
    n: int
    curve: Curve
    G1: list
    H1: list
    generators: list = field(default_factory=list)
    declared_order: int = 0
    aut_order: int = 1

    def __post_init__(self):
        for h in self.G1:
            for a in h.autos:
                check_auto(a, self.curve)


def make_imprimitive(n: int, G1, H1, E: Curve) -> GroupSpec:
    """G1, H1: lists of rank-1 elements (H1 a subgroup of G1)."""
    G1 = list(dict.fromkeys(G1))
    H1 = list(dict.fromkeys(H1))
    g1set = set(G1)
    for a in G1:
        for b in G1:
            if compose(a, b, E) not in g1set:
                raise NotNormal("G1 is not closed under composition")
    h1set = set(H1)
    if not h1set <= g1set:
        raise NotNormal("H1 is not contained in G1")
    for a in G1:
        for b in G1:
            c = compose(compose(a, b, E), inverse(compose(b, a, E), E), E)
            if c not in h1set:
                raise NotNormal("H1 does not contain the commutator subgroup")
    aut_order = 1
    for h in G1:
        check_auto(h.autos[0], E)
        aut_order = max(aut_order, h.autos[0].order)
    gens = [transposition(n, i, i + 1) for i in range(n - 1)]
    gens += [embed(h, n, 0) for h in generating_subset(H1, E)]
    if n >= 2:
        gens += [pair(g, E, n) for g in generating_subset(G1, E)]
    order = factorial(n) * len(G1) ** (n - 1) * len(H1)
    return GroupSpec(n, E, G1, H1, gens, order, aut_order)


def automorphism_group(E: Curve, d: int, translations=(IDENTITY,),
                       scalar_order: int = 1) -> list:
    """mu_scalar x mu_d x translations as rank-1 elements."""
    autos = [AutoKind.from_root(d, e) for e in range(d)]
    scal = [AutoKind.from_root(scalar_order, e) for e in range(scalar_order)]
    return [rank1(a, t, s) for s in scal for a in autos for t in translations]


def enumerate_group(spec: GroupSpec, cap: int = 10 ** 5) -> list:
    if spec.declared_order > cap:
        raise CapExceeded(f"declared order {spec.declared_order} > cap {cap}")
    elems = closure(spec.generators, spec.curve, spec.n, cap)
    if len(elems) != spec.declared_order:
        raise OrderMismatch(f"closure has {len(elems)} elements, declared "
                            f"{spec.declared_order}")
    return elems


# -- matrix groups -----------------------------------------------------------

def _key(M) -> bytes:
    return np.asarray(M, dtype=np.int64).tobytes()


@dataclass
class MatrixGroup:
    """Invertible n x n matrices over F; elements filled by enumerate()."""
    F: FieldCtx
    n: int
    generators: list
    elements: list | None = None

    def enumerate(self, cap: int = 10 ** 6) -> list:
        if self.elements is not None:
            return self.elements
        I = linalg.identity(self.n, self.F)
        seen = {_key(I): I}
        frontier = [I]
        while frontier:
            nxt = []
            for X in frontier:
                for g in self.generators:
                    Y = linalg.matmul(g, X, self.F)
                    k = _key(Y)
                    if k not in seen:
                        seen[k] = Y
                        if len(seen) > cap:
                            raise CapExceeded(f"group larger than cap={cap}")
                        nxt.append(Y)
            frontier = nxt
        self.elements = list(seen.values())
        return self.elements

    @property
    def order(self) -> int:
        return len(self.enumerate())


def is_reflection_matrix(M, n: int | None = None,
                         F: FieldCtx | None = None) -> bool:
    """rank(M - 1) == 1."""
    M = np.asarray(M)
    n = M.shape[0] if n is None else n
    if F is None:
        F = make_field(2 ** 31 - 1)
    D = linalg.sub(M, linalg.identity(n, F), F)
    return linalg.rank(D, F) == 1


def linear_part(g: MonomialSymmetry, l: int, d: int, r: int) -> np.ndarray:
    """Matrix of the linear part over F_l, mu_d generator -> r."""
    n = g.n
    M = np.zeros((n, n), dtype=np.int64)
    ginv = _inv_perm(g.perm)
    for i in range(n):
        M[i, ginv[i]] = pow(r, g.autos[i].exponent_in(d), l)
    return M


def reduce_mod_split_prime(spec, l: int, n: int | None = None,
                           d: int | None = None) -> MatrixGroup:
    """Linear parts of a GroupSpec (or of a list of MonomialSymmetry) as
    matrices over F_l.  Translations are dropped."""
    if not is_prime(l):
        raise NotPrime(f"{l} is not prime")
    if isinstance(spec, GroupSpec):
        gens, n, order = spec.generators, spec.n, spec.declared_order
    else:
        gens, order = list(spec), None
        n = n if n is not None else gens[0].n
    if order is not None and order % l == 0:
        raise OrderDividesL(f"l={l} divides |G|={order}")
    if d is None:
        d = math.lcm(*[a.order for g in gens for a in g.autos])
    if (l - 1) % d:
        raise NoSplitEmbedding(f"mu_{d} does not embed in F_{l}^*")
    F = make_field(l)
    r = F.root_of_unity(d)
    mats = [linear_part(g, l, d, r) for g in gens]
    for g, Mg in zip(gens, mats):
        for h, Mh in zip(gens, mats):
            gh = _linear_compose(g, h)
            if not np.array_equal(linalg.matmul(Mg, Mh, F),
                                  linear_part(gh, l, d, r)):
                raise AssertionError("reduction is not a homomorphism")
    return MatrixGroup(F, n, mats)


def _linear_compose(g, h):
    ginv = _inv_perm(g.perm)
    perm = tuple(g.perm[h.perm[i]] for i in range(g.n))
    autos = tuple(g.autos[i] * h.autos[ginv[i]] for i in range(g.n))
    return MonomialSymmetry(perm, autos, (IDENTITY,) * g.n, (ID,) * g.n)


def weyl_a(n: int, l: int) -> MatrixGroup:
    """W(A_n) = S_{n+1} on the root lattice, simple-root basis, over F_l."""
    F = make_field(l)
    gens = []
    for j in range(n):
        M = np.eye(n, dtype=np.int64)
        # s_j(a_j) = -a_j, s_j(a_k) = a_k + a_j for |j-k| = 1
        M[j, j] = l - 1
        for k in (j - 1, j + 1):
            if 0 <= k < n:
                M[j, k] = 1
        gens.append(M % l)
    return MatrixGroup(F, n, gens)


def read_generator_file(path, l: int) -> MatrixGroup:
    """Plain text: one matrix per block (blank-line separated), integer
    entries reduced mod l, '#' comments ignored."""
    blocks, cur = [], []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                if cur:
                    blocks.append(cur)
                    cur = []
                continue
            cur.append([int(v) for v in line.replace(",", " ").split()])
    if cur:
        blocks.append(cur)
    F = make_field(l)
    mats = [np.array(b, dtype=np.int64) % l for b in blocks]
    return MatrixGroup(F, mats[0].shape[0], mats)

