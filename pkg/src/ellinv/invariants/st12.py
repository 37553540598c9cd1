"""The ST_12 Kummer quartic in P^3 and its S_4-invariants.

The Kummer of the principally polarized surface, embedded by twice the
polarization, is x1^4+x2^4+x3^4+x4^4 + 4i x1x2x3x4 = 0.  Rescaling x1 by
i (fixed-point lift) or by -i (torsor lift) makes the residual S_4 act by
permuting coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product
from math import factorial

import numpy as np

from .. import linalg
from ..arith import FieldCtx, make_field
from ..errors import BadCharacteristic, RootOfUnityMissing
from ..poly import (MultiPoly, cone_common_zero_only_origin, elementary_symmetric,
                    grevlex, hilbert_from_degrees, lex, normal_form, partial,
                    symmetric_to_elementary)

LIFTS = ("fixed", "torsor")


@dataclass
class ST12Lift:
    name: str
    scale: int
    quartic: MultiPoly
    relation: MultiPoly
    degrees: tuple
    polarization: str
    generators: list
    zero_set: list


@dataclass
class ST12Kummer:
    F: FieldCtx
    i: int
    quartic: MultiPoly
    lifts: dict

    def lift(self, name: str) -> ST12Lift:
        return self.lifts[name]


def _check_p(p: int):
    if p == 2:
        raise BadCharacteristic("p=2: the polarization splits and the quartic "
                                "is not a Kummer", code="st12_char2_split")
    if p == 5:
        raise BadCharacteristic("p=5: the quartic has extra 2.S_5 symmetry",
                                code="st12_char5_sporadic")
    if p % 4 != 1:
        raise RootOfUnityMissing(f"i is not rational over F_{p}")


def st12_kummer(p: int) -> ST12Kummer:
    _check_p(p)
    F = make_field(p)
    i = F.sqrt(F.neg(1))
    x = MultiPoly.gens(F, 4)
    e = elementary_symmetric(x)
    s4 = x[0] ** 4 + x[1] ** 4 + x[2] ** 4 + x[3] ** 4
    quartic = s4 + e[4] * F.elem(F.smul(4, i))
    lifts = {}
    for name, c in (("fixed", i), ("torsor", F.neg(i))):
        Q = quartic.subs([x[0] * F.elem(c), x[1], x[2], x[3]])
        rel = symmetric_to_elementary(Q)
        if name == "fixed":
            gens = [e[1], e[2], e[3]]
            zero = [Q, e[1], e[2], e[3]]
            degrees, pol = (1, 2, 3), "2Theta"
        else:
            gens = [e[1], e[2], e[3], e[4]]
            zero = [Q, e[1], e[3], e[4]]
            degrees, pol = (1, 3, 8), "Theta"
        lifts[name] = ST12Lift(name, c, Q, rel, degrees, pol, gens, zero)
    return ST12Kummer(F, i, quartic, lifts)


# -- stated forms -----------------------------------------------------------

def stated_relation(K: ST12Kummer, name: str) -> MultiPoly:
    """e1^4 - 4e1^2e2 + 4e1e3 + 2e2^2 (- 8e4 for the fixed lift)."""
    F = K.F
    e1, e2, e3, e4 = MultiPoly.gens(F, 4, (1, 2, 3, 4))
    f = e1 ** 4 - e1 ** 2 * e2 * 4 + e1 * e3 * 4 + e2 ** 2 * 2
    return f - e4 * 8 if name == "fixed" else f


def torsor_solved_form(K: ST12Kummer) -> MultiPoly:
    """e2^2 - e1(-2e3 + 2e1e2 - e1^3/2)."""
    F = K.F
    e1, e2, e3, _ = MultiPoly.gens(F, 4, (1, 2, 3, 4))
    half = F.elem(F.inv(2))
    return e2 ** 2 - e1 * (e3 * (-2) + e1 * e2 * 2 - e1 ** 3 * half)


def relation_identity(K: ST12Kummer, name: str) -> bool:
    """The lifted quartic equals the stated e-form as polynomials in x."""
    L = K.lift(name)
    x = MultiPoly.gens(K.F, 4)
    es = elementary_symmetric(x)[1:]
    return (L.relation == stated_relation(K, name)
            and stated_relation(K, name).subs(es) == L.quartic)


def torsor_relation_identity(K: ST12Kummer) -> bool:
    return stated_relation(K, "torsor") == torsor_solved_form(K) * 2


def fixed_forces_e4(K: ST12Kummer) -> bool:
    """Setting e1 = e2 = e3 = 0 leaves a nonzero multiple of e4."""
    F = K.F
    z = MultiPoly.const(F, 4, 0, (1, 2, 3, 4))
    e4 = MultiPoly.var(F, 4, 3, (1, 2, 3, 4))
    r = K.lift("fixed").relation.subs([z, z, z, e4])
    return set(r.terms) == {(0, 0, 0, 1)}


# -- singular points ------------------------------------------------------------

def singular_points(K: ST12Kummer) -> list:
    """Orbit of (i:1:1:1) under even sign changes and double transpositions,
    normalized so the last nonzero coordinate is 1."""
    F = K.F
    base = (K.i, 1, 1, 1)
    perms = [(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]
    out = set()
    for perm in perms:
        for signs in product((1, -1), repeat=4):
            if signs.count(-1) % 2:
                continue
            v = [F.smul(s, base[j]) for s, j in zip(signs, perm)]
            out.add(_projective(F, v))
    return sorted(out)


def _projective(F, v):
    last = next(c for c in reversed(v) if c)
    inv = F.inv(last)
    return tuple(F.mul(c, inv) for c in v)


def is_singular_point(K: ST12Kummer, pt) -> bool:
    Q = K.quartic
    return Q.eval(pt) == 0 and all(partial(Q, j).eval(pt) == 0 for j in range(4))


# -- invariants of S_4 on the coordinate ring ---------------------------------------

def common_zero_check(K: ST12Kummer, name: str) -> bool:
    L = K.lift(name)
    return cone_common_zero_only_origin(L.zero_set, grevlex())


def _ring_basis(k: int) -> list:
    """Monomials of degree k with x1-exponent < 4: a basis of R_k."""
    out = []
    for c in combinations_with_replacement(range(4), k):
        e = tuple(c.count(j) for j in range(4))
        if e[0] < 4:
            out.append(e)
    return out


def _vector(f: MultiPoly, index: dict, F) -> np.ndarray:
    v = linalg.zeros(len(index), F)
    for e, c in f.terms.items():
        v[index[e]] = c
    return v


def invariant_dims(K: ST12Kummer, name: str, D: int) -> list:
    """dim R_k^{S_4} for k = 1..D by exact Reynolds on normal forms."""
    F = K.F
    L = K.lift(name)
    order = lex()
    inv24 = F.inv(F.coerce(factorial(4)))
    out = []
    for k in range(1, D + 1):
        basis = _ring_basis(k)
        index = {e: j for j, e in enumerate(basis)}
        rows = []
        for e in basis:
            acc = linalg.zeros(len(basis), F)
            for s in permutations(range(4)):
                pe = tuple(e[s[j]] for j in range(4))
                nf = normal_form(MultiPoly(F, 4, {pe: 1}), [L.quartic], order)
                acc = linalg.add(acc, _vector(nf, index, F), F)
            rows.append(linalg.scale(acc, inv24, F))
        out.append(linalg.rank(np.array(rows), F))
    return out


def generated_dims(K: ST12Kummer, name: str, D: int) -> list:
    """Rank in R_k of monomials in the lift's generators (e_j has degree j)."""
    F = K.F
    L = K.lift(name)
    order = lex()
    gens = L.generators
    out = []
    for k in range(1, D + 1):
        basis = _ring_basis(k)
        index = {e: j for j, e in enumerate(basis)}
        rows = []
        for expo in _exponents(len(gens), k):
            f = MultiPoly.const(F, 4, 1)
            for j, a in enumerate(expo):
                if a:
                    f = f * gens[j] ** a
            rows.append(_vector(normal_form(f, [L.quartic], order), index, F))
        out.append(linalg.rank(np.array(rows), F) if rows else 0)
    return out


def _exponents(m: int, k: int, j: int = 0):
    """Exponent vectors with sum (i+1) a_i = k over m generators."""
    if j == m:
        if k == 0:
            yield ()
        return
    for a in range(k // (j + 1) + 1):
        for rest in _exponents(m, k - a * (j + 1), j + 1):
            yield (a,) + rest


def expected_dims(name: str, D: int) -> list:
    """Hilbert function of the claimed degrees in the 2Theta grading."""
    if name == "fixed":
        h = hilbert_from_degrees([1, 2, 3], D)
        return [h[k] for k in range(1, D + 1)]
    h = hilbert_from_degrees([1, 3, 8], 2 * D)
    return [h[2 * k] for k in range(1, D + 1)]
