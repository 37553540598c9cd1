"""Linear-system quotients: the A_n sum-zero variety mapping to P^n, and
the two G_2 lattices as residual linear actions on P^2."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .. import linalg
from ..arith import Curve, CurvePoint, FieldCtx, random_point
from ..errors import DegeneratePoints, InvalidInput, WrongModel
from ..groups import MatrixGroup
from ..poly import MultiPoly, hilbert_from_degrees
from ..sections import an_divisor_coords, rr_basis
from .engine import PolySpace, reynolds_invariants, sample_rng


# -- A_n -----------------------------------------------------------------------

def sum_zero_tuple(E: Curve, n: int, rng) -> tuple:
    """n+1 distinct affine points with sum zero."""
    while True:
        pts = [random_point(E, rng) for _ in range(n)]
        total = pts[0]
        for P in pts[1:]:
            total = E.add(total, P)
        last = E.neg(total)
        allp = pts + [last]
        if last.x is not None and len(set(allp)) == n + 1:
            return tuple(allp)


def an_coords(E: Curve, pts) -> tuple:
    return tuple(int(c) for c in an_divisor_coords(E, pts))


def an_invariance_check(E: Curve, n: int, trials: int = 100, seed: int = 0) -> bool:
    """Coordinates agree exactly after every adjacent transposition and one
    random permutation of each sampled tuple."""
    for t in range(trials):
        rng = sample_rng(seed, 60 + n, t)
        pts = sum_zero_tuple(E, n, rng)
        v = an_coords(E, pts)
        perms = []
        for i in range(n):
            s = list(range(n + 1))
            s[i], s[i + 1] = s[i + 1], s[i]
            perms.append(s)
        perms.append(list(rng.permutation(n + 1)))
        for s in perms:
            if an_coords(E, [pts[j] for j in s]) != v:
                return False
    return True


def _monomials(nvars: int, d: int) -> list:
    out = []
    for c in combinations_with_replacement(range(nvars), d):
        out.append(tuple(c.count(j) for j in range(nvars)))
    return out


def _mono_values(F, v, monos) -> list:
    out = []
    for e in monos:
        acc = 1
        for c, a in zip(v, e):
            if a:
                acc = F.mul(acc, F.pow(c, a))
        out.append(acc)
    return out


def an_pushforward_dims(E: Curve, n: int, D: int, seed: int = 0,
                        excess: int = 16) -> list:
    """Rank of degree-d forms pulled back along the sum-zero tuples, d=1..D.

    These are the S_{n+1}-invariant sections of degree d; the expected
    value is C(n+d, n).
    """
    F = E.ctx
    out = []
    for d in range(1, D + 1):
        monos = _monomials(n + 1, d)
        rows = []
        idx = 0
        while len(rows) < len(monos) + excess:
            rng = sample_rng(seed, 70 + n, d * 10 ** 6 + idx)
            idx += 1
            try:
                v = an_coords(E, sum_zero_tuple(E, n, rng))
            except DegeneratePoints:
                continue
            rows.append(_mono_values(F, v, monos))
        out.append(linalg.rank(np.array(rows), F))
    return out


def an_expected_dims(n: int, D: int) -> list:
    return [comb(n + d, n) for d in range(1, D + 1)]


# -- polynomial invariants of a finite matrix group --------------------------

def sym_power_matrix(A, k: int, F: FieldCtx) -> np.ndarray:
    """Matrix of f -> f(A x) on degree-k forms (rows: input monomials)."""
    n = A.shape[0]
    monos = _monomials(n, k)
    index = {e: j for j, e in enumerate(monos)}
    x = MultiPoly.gens(F, n)
    images = []
    for i in range(n):
        acc = x[0] * 0
        for j in range(n):
            if A[i, j]:
                acc = acc + x[j] * F.elem(int(A[i, j]))
        images.append(acc)
    M = linalg.zeros((len(monos), len(monos)), F)
    for r, e in enumerate(monos):
        f = MultiPoly(F, n, {e: 1}).subs(images)
        for ee, c in f.terms.items():
            M[r, index[ee]] = c
    return M


@dataclass
class LinearQuotient:
    """Invariants of a matrix group on polynomial forms up to degree D."""
    F: FieldCtx
    group: MatrixGroup
    D: int
    dims: list
    generators: list
    gen_degrees: tuple
    generated: list

    def hilbert(self, degrees) -> list:
        h = hilbert_from_degrees(list(degrees), self.D)
        return [h[k] for k in range(1, self.D + 1)]


def linear_invariants(group: MatrixGroup, D: int) -> LinearQuotient:
    """Reynolds dims per degree and a minimal generating set found degree
    by degree (new invariants outside the span of products of old ones)."""
    F = group.F
    n = group.n
    elems = group.enumerate()
    dims, gens, gdeg, generated = [], [], [], []
    for k in range(1, D + 1):
        monos = _monomials(n, k)
        index = {e: j for j, e in enumerate(monos)}
        mats = [sym_power_matrix(g, k, F) for g in elems]
        V = PolySpace(F, len(monos), lambda M: M.T)
        inv = reynolds_invariants(mats, V, k)
        dims.append(inv.dim)
        prods = [_poly_vector(f, index, F) for f in _products(gens, gdeg, k, F, n)]
        span = np.array(prods) if prods else linalg.zeros((0, len(monos)), F)
        r = linalg.rank(span, F) if prods else 0
        for row in inv.basis:
            trial = np.vstack([span, row.reshape(1, -1)])
            if linalg.rank(trial, F) > r:
                span, r = trial, r + 1
                gens.append(MultiPoly(F, n, {monos[j]: int(c)
                                             for j, c in enumerate(row) if c}))
                gdeg.append(k)
        generated.append(r)
    return LinearQuotient(F, group, D, dims, gens, tuple(gdeg), generated)


def _products(gens, degs, k, F, n, start=0):
    if k == 0:
        yield MultiPoly.const(F, n, 1)
        return
    for j in range(start, len(gens)):
        if degs[j] <= k:
            for rest in _products(gens, degs, k - degs[j], F, n, j):
                yield gens[j] * rest


def _poly_vector(f: MultiPoly, index: dict, F) -> np.ndarray:
    v = linalg.zeros(len(index), F)
    for e, c in f.terms.items():
        v[index[e]] = c
    return v


# -- G_2 -----------------------------------------------------------------------

def evaluation_matrix(values, maps, E: Curve, b: int, seed: int = 0,
                      stream: int = 0) -> list:
    """For each map g, the matrix A with values(g P) = A values(P)."""
    F = E.ctx
    out = []
    for gi, g in enumerate(maps):
        rows, rows_g = [], []
        idx = 0
        while len(rows) < b + 8:
            P = random_point(E, sample_rng(seed, stream + gi, idx))
            idx += 1
            try:
                v, vg = values(P), values(g(P))
            except (ZeroDivisionError, DegeneratePoints):
                continue
            rows.append(v)
            rows_g.append(vg)
        Ev = linalg.asmat(rows, F)
        if linalg.rank(Ev, F) < b:
            raise WrongModel("basis not separated by samples")
        out.append(linalg.solve(Ev, linalg.asmat(rows_g, F), F).T)
    return out


def _dual(A, F):
    return linalg.inverse(A, F).T.copy()


def g2_degree3(E: Curve) -> MatrixGroup:
    """[-1] on L(3[0]) = <1, x, y>, dual action on P^2."""
    F = E.ctx
    basis = rr_basis(E, 3)

    def values(P):
        if P.x is None:
            raise ZeroDivisionError("identity")
        return basis.values(P)
    (A,) = evaluation_matrix(values, [E.neg], E, 3, stream=310)
    return MatrixGroup(F, 3, [_dual(A, F)])


def g2_isogeny(E: Curve, T0: CurvePoint) -> MatrixGroup:
    """K x| [mu_2] on L(K) for K = <T0> of order 3, dual action on P^2."""
    F = E.ctx
    if T0.x is None or E.mul(3, T0).x is not None:
        raise InvalidInput("T0 must have order 3")
    x0 = T0.x

    def values(P):
        if P.x is None:
            raise ZeroDivisionError("identity")
        h = F.sub(P.x, x0)
        hi = F.inv(h)
        return [hi, F.mul(P.x, hi), F.mul(P.y, hi)]
    maps = [lambda P: E.add(P, T0), E.neg]
    mats = evaluation_matrix(values, maps, E, 3, stream=320)
    return MatrixGroup(F, 3, [_dual(A, F) for A in mats])


def three_torsion_point(E: Curve, seed: int = 0) -> CurvePoint:
    """A rational point of order 3 (searched by cofactor multiplication)."""
    from ..arith import group_order
    N = group_order(E)
    if N % 3:
        raise WrongModel("no rational 3-torsion")
    for idx in range(200):
        P = E.mul(N // 3, random_point(E, sample_rng(seed, 330, idx)))
        if P.x is not None:
            return P
    raise WrongModel("3-torsion search failed")
