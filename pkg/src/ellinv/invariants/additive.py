"""Invariants of G_n(T, 1) on (P^[1,d])^n for an additive subgroup T.

Coordinates are w_1..w_n (degree 1) and x_1..x_n (degree d); T acts by
x_i -> x_i + t_i w_i^d with sum t_i = 0, and S_n permutes the factors.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .. import linalg
from ..arith import FieldCtx
from ..errors import InvalidInput
from ..poly import MultiPoly, hilbert_from_degrees, linearized_poly


@dataclass
class AdditiveQuotient:
    F: FieldCtx
    T: tuple
    d: int
    n: int
    q: MultiPoly
    degrees: tuple
    generators: list

    @property
    def pl(self) -> int:
        return len(self.T)

    def hilbert(self, D: int):
        return hilbert_from_degrees(list(self.degrees), D)


def _vars(F, n, d):
    weights = (1,) * n + (d,) * n
    gens = MultiPoly.gens(F, 2 * n, weights)
    return gens[:n], gens[n:]


def _homogenize_q(q: MultiPoly, x, w, d: int):
    """w^{deg q * d} q(x / w^d)."""
    top = q.degree()
    acc = x * 0
    for (e,), c in q.terms.items():
        acc = acc + (x ** e) * (w ** (d * (top - e))) * q.ctx.elem(c)
    return acc


def additive_quotient_invariants(T, d: int, n: int,
                                 ctx: FieldCtx | None = None) -> AdditiveQuotient:
    """Generators of degrees 1, d and n-1 of degree |T| d."""
    if d < 1 or n < 1:
        raise InvalidInput("need d >= 1 and n >= 1")
    q = linearized_poly(T, ctx)
    F = q.ctx
    Tset = tuple(sorted({F.coerce(c) for c in T}))
    w, x = _vars(F, n, d)
    one = MultiPoly.const(F, 2 * n, 1, w[0].weights)
    W = one
    for wi in w:
        W = W * wi
    S = x[0] * 0
    for i in range(n):
        t = x[i]
        for j in range(n):
            if j != i:
                t = t * w[j] ** d
        S = S + t
    gens = [W, S]
    degrees = [1, d]
    if n >= 2:
        D = len(Tset) * d
        Q = [_homogenize_q(q, x[i], w[i], d) for i in range(n)]
        # e_k(q(x_i / w_i^d)) * prod w_i^D for k = 2..n
        es = _esym_homog(Q, [wi ** D for wi in w])
        gens += es[2:]
        degrees += [D] * (n - 1)
    return AdditiveQuotient(F, Tset, d, n, q, tuple(degrees), gens)


def _esym_homog(Q, Wd):
    """Coefficients of prod_i (Wd_i + t Q_i)."""
    c = [Wd[0] ** 0]
    for a, b in zip(Wd, Q):
        nxt = [a * c[0]]
        for k in range(1, len(c)):
            nxt.append(a * c[k] + b * c[k - 1])
        nxt.append(b * c[-1])
        c = nxt
    return c


def group_generators(A: AdditiveQuotient) -> list:
    """Substitutions (lists of images of the 2n variables) generating the
    group: adjacent transpositions and t on x_1, -t on x_2 for t in a
    basis of T."""
    F, n, d = A.F, A.n, A.d
    w, x = _vars(F, n, d)
    out = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        out.append([w[j] for j in perm] + [x[j] for j in perm])
    if n >= 2:
        for t in _additive_basis(F, A.T):
            img = list(w) + list(x)
            img[n] = x[0] + w[0] ** d * F.elem(t)
            img[n + 1] = x[1] - w[1] ** d * F.elem(t)
            out.append(img)
    return out


def _additive_basis(F, T) -> list:
    span = {0}
    basis = []
    for t in T:
        if t not in span:
            basis.append(t)
            span = {F.add(a, F.smul(k, t)) for a in span for k in range(F.p)}
    return basis


def multidegree_monomials(n: int, d: int, k: int) -> list:
    """Exponents of w_i^{k - d a_i} x_i^{a_i}: the multidegree (k,..,k) part."""
    per = [(k - d * a, a) for a in range(k // d + 1)]
    out = []
    for choice in product(per, repeat=n):
        out.append(tuple(c[0] for c in choice) + tuple(c[1] for c in choice))
    return out


def _coeff_vector(f: MultiPoly, index: dict, F) -> np.ndarray:
    v = linalg.zeros(len(index), F)
    for e, c in f.terms.items():
        if e not in index:
            raise InvalidInput("polynomial leaves the multidegree piece")
        v[index[e]] = c
    return v


def invariant_dim(A: AdditiveQuotient, k: int) -> int:
    """Exact dimension of invariants in multidegree (k,..,k): nullspace of
    (g - 1) over all group generators."""
    F = A.F
    monos = multidegree_monomials(A.n, A.d, k)
    index = {m: i for i, m in enumerate(monos)}
    weights = (1,) * A.n + (A.d,) * A.n
    rows = []
    for img in group_generators(A):
        for m in monos:
            f = MultiPoly(F, 2 * A.n, {m: 1}, weights)
            g = f.subs(img) - f
            rows.append(_coeff_vector(g, index, F))
    if not rows:
        return len(monos)
    # columns of the stacked (g - 1) are indexed by monomials of the input
    M = np.array(rows).reshape(-1, len(monos), len(monos))
    M = np.concatenate(list(M), axis=1)
    return len(monos) - linalg.rank(M, F)


def generated_dim(A: AdditiveQuotient, k: int) -> int:
    """Dimension spanned by generator monomials of total degree k."""
    F = A.F
    monos = multidegree_monomials(A.n, A.d, k)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for expo in _degree_exponents(A.degrees, k):
        f = MultiPoly.const(F, 2 * A.n, 1, A.generators[0].weights)
        for g, a in zip(A.generators, expo):
            if a:
                f = f * g ** a
        rows.append(_coeff_vector(f, index, F))
    return linalg.rank(np.array(rows), F) if rows else 0


def _degree_exponents(degrees, k, start=0):
    if start == len(degrees):
        if k == 0:
            yield ()
        return
    for a in range(k // degrees[start] + 1):
        for rest in _degree_exponents(degrees, k - a * degrees[start], start + 1):
            yield (a,) + rest


def is_invariant(A: AdditiveQuotient, f: MultiPoly) -> bool:
    return all(f.subs(img) == f for img in group_generators(A))
