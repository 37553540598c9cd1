"""Invariant section spaces: Reynolds projection and random-point
bootstrapping, plus the sampling helpers they share."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import comb

import numpy as np

from .. import linalg
from ..arith import AutoKind, Curve, FieldCtx, auto_map
from ..errors import (BadCharacteristic, EnumerationMissing, NonIntegralEndomorphism,
                     PoleHit, RankDeficientSampling, TooManyPoleRetries)
from ..groups import MonomialSymmetry, apply, inverse, total_scalar


def sample_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    """Independent generator for one sample; reproducible per index."""
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(stream, index)))


@dataclass
class SampleBudget:
    excess: int = 16
    q: int = 0
    max_pole_retries: int = 100
    max_rounds: int = 64

    def failure_bound(self) -> float:
        """Heuristic chance that excess rows still miss a constraint."""
        if self.q < 2:
            return 1.0
        return float(self.q) ** (-self.excess) / (self.q - 1)


@dataclass
class InvariantSpace:
    degree: int
    ambient: object
    basis: np.ndarray
    method: str
    samples_used: int = 0
    certified: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])


# -- group elements as actions on samples ------------------------------------

class Action:
    """A group element seen through its effect on samples.

    ``fwd(x)`` is g.x, ``inv(x)`` is g^-1.x and ``scalar`` is the encoded
    root of unity by which g multiplies the fibre of the degree-1 bundle.
    """

    __slots__ = ("fwd", "inv", "scalar", "label")

    def __init__(self, fwd, inv=None, scalar: int = 1, label: str = ""):
        self.fwd = fwd
        self.inv = inv
        self.scalar = scalar
        self.label = label


def curve_action(g: MonomialSymmetry, E: Curve) -> Action:
    gi = inverse(g, E)
    s = total_scalar(g).root(E.ctx)
    return Action(lambda xs: apply(g, xs, E), lambda xs: apply(gi, xs, E), s,
                  label=repr(g.perm))


# -- ambient function spaces -------------------------------------------------

class FunctionSpace:
    """Finite list of functions on a sample space, evaluated together."""

    def __init__(self, F: FieldCtx, dim: int, values, labels=None):
        self.F = F
        self.dim = dim
        self._values = values
        self.labels = labels

    def values(self, x) -> np.ndarray:
        return linalg.asmat(self._values(x), self.F)


class SymTensorSpace(FunctionSpace):
    """S_n-symmetrized tensors of a per-coordinate basis of size b.

    Basis element for a multiset a_1 <= ... <= a_n is the sum over all
    permutations of f_{a_1}(x_{s(1)}) ... f_{a_n}(x_{s(n)}).
    """

    def __init__(self, F: FieldCtx, coord_values, b: int, n: int):
        self.F = F
        self.b = b
        self.n = n
        self.coord_values = coord_values
        self.multisets = list(combinations_with_replacement(range(b), n))
        self.dim = len(self.multisets)
        self.labels = self.multisets
        shape = (b,) * n
        self._flat = np.array([np.ravel_multi_index(m, shape)
                               for m in self.multisets], dtype=np.int64)
        self._perms = list(permutations(range(n)))

    def coordinate_values(self, xs) -> list:
        return [np.asarray(self.coord_values(P), dtype=np.int64) for P in xs]

    def values(self, xs) -> np.ndarray:
        F = self.F
        vs = self.coordinate_values(xs)
        if F.k == 1:
            p = F.p
            T = vs[0]
            for v in vs[1:]:
                T = np.multiply.outer(T, v) % p
            S = np.zeros_like(T)
            for s in self._perms:
                S += np.transpose(T, s)
            return S.reshape(-1)[self._flat] % p
        out = []
        for ms in self.multisets:
            acc = 0
            for s in set(permutations(ms)):
                t = 1
                for i, a in enumerate(s):
                    t = F.mul(t, int(vs[i][a]))
                acc = F.add(acc, t)
            # every distinct arrangement counted |stabilizer| times
            out.append(F.smul(_stab(ms), acc))
        return linalg.asmat(out, F)


def _stab(ms) -> int:
    from collections import Counter
    from math import factorial
    out = 1
    for c in Counter(ms).values():
        out *= factorial(c)
    return out


class PolySpace:
    """Ambient space with an exact linear action: action_matrix(g)."""

    def __init__(self, F: FieldCtx, dim: int, action_matrix, labels=None):
        self.F = F
        self.dim = dim
        self.action_matrix = action_matrix
        self.labels = labels


# -- sampling ------------------------------------------------------------------

def _pole_safe(fn, sampler, rng, budget: SampleBudget):
    for _ in range(budget.max_pole_retries):
        x = sampler(rng)
        try:
            return fn(x)
        except (PoleHit, ZeroDivisionError):
            continue
    raise TooManyPoleRetries(f"{budget.max_pole_retries} consecutive pole hits")


def _constraint_row(V, act: Action, degree: int, x):
    F = V.F
    c = F.pow(act.scalar, degree)
    a = V.values(act.fwd(x))
    b = V.values(x)
    if F.k == 1:
        return (a - c * b) % F.p
    return linalg.sub(a, linalg.scale(b, c, F), F)


def _pair_row(V, pair, degree, x):
    """Row for a quasi-isogeny move returning (Nx, Ngx)."""
    u, v = pair(x)
    return linalg.sub(V.values(u), V.values(v), V.F)


def bootstrap_invariants(V, moves, sampler, budget: SampleBudget | None = None,
                         degree: int = 1, expected: int | None = None,
                         seed: int = 0, stream: int = 0,
                         workers: int = 1) -> InvariantSpace:
    """Functions in V satisfying f(g.x) = c(g)^degree f(x) for every move.

    ``moves`` holds Action objects or callables x -> (x1, x2) for which
    f(x1) = f(x2) is required.  Rows are added until the rank is stable
    for one extra batch of ``excess`` samples.
    """
    F = V.F
    if budget is None:
        budget = SampleBudget(q=F.q)
    if not moves:
        return InvariantSpace(degree, V, linalg.identity(V.dim, F),
                              "bootstrap", 0)
    target = V.dim - (expected if expected is not None else 0) + budget.excess
    target = max(target, budget.excess)

    def row(idx):
        rng = sample_rng(seed, stream, idx)
        mv = moves[idx % len(moves)]
        if isinstance(mv, Action):
            fn = lambda x: _constraint_row(V, mv, degree, x)  # noqa: E731
        else:
            fn = lambda x: _pair_row(V, mv, degree, x)  # noqa: E731
        return _pole_safe(fn, sampler, rng, budget)

    def batch(start, count):
        idxs = range(start, start + count)
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                return list(pool.map(row, idxs))
        return [row(i) for i in idxs]

    rows = batch(0, target)
    used = target
    R, piv = linalg.rref(np.array(rows), F)
    rank_prev = len(piv)
    goal = V.dim - expected if expected is not None else 0
    for _ in range(budget.max_rounds):
        extra = budget.excess + max(0, goal - rank_prev)
        rows = list(R[:rank_prev]) + batch(used, extra)
        used += extra
        R, piv = linalg.rref(np.array(rows), F)
        if len(piv) == rank_prev:
            break
        rank_prev = len(piv)
    else:
        raise RankDeficientSampling("constraint rank did not stabilize")
    N = linalg.nullspace(R[:len(piv)], F) if piv else linalg.identity(V.dim, F)
    return InvariantSpace(degree, V, N, "bootstrap", used)


def reynolds_invariants(elements, V, degree: int = 1, sampler=None,
                        seed: int = 0, stream: int = 1,
                        budget: SampleBudget | None = None) -> InvariantSpace:
    """Image of the averaging operator (1/|G|) sum_g g.

    ``elements`` lists every group element (Action objects for evaluation
    spaces, or matrices understood by V.action_matrix for PolySpace).
    """
    F = V.F
    if not elements:
        raise EnumerationMissing("reynolds_invariants needs the full group")
    order = len(elements)
    if order % F.p == 0:
        raise BadCharacteristic(f"|G|={order} is divisible by p={F.p}")
    inv_order = F.inv(F.coerce(order))
    if isinstance(V, PolySpace):
        R = linalg.zeros((V.dim, V.dim), F)
        for g in elements:
            R = linalg.add(R, V.action_matrix(g), F)
        R = linalg.scale(R, inv_order, F)
        basis = linalg.row_basis(R.T, F)
        return InvariantSpace(degree, V, basis, "reynolds", 0, certified=True)
    if budget is None:
        budget = SampleBudget(q=F.q)
    m = V.dim + budget.excess
    pts, evs, avg = [], [], []
    idx = 0
    while len(pts) < m:
        rng = sample_rng(seed, stream, idx)
        idx += 1

        def both(x):
            ev = V.values(x)
            acc = linalg.zeros(V.dim, F)
            for g in elements:
                c = F.pow(g.scalar, degree)
                acc = linalg.add(acc, linalg.scale(V.values(g.inv(x)), c, F),
                                 F)
            return x, ev, acc
        x, ev, acc = _pole_safe(both, sampler, rng, budget)
        pts.append(x)
        evs.append(ev)
        avg.append(acc)
    Ev = np.array(evs)
    if linalg.rank(Ev, F) < V.dim:
        raise RankDeficientSampling("evaluation points do not separate V")
    RV = linalg.scale(np.array(avg), inv_order, F)
    C = linalg.solve(Ev, RV, F)
    basis = linalg.row_basis(C.T, F)
    return InvariantSpace(degree, V, basis, "reynolds", idx, certified=True)


def evaluate_basis(space: InvariantSpace, x) -> np.ndarray:
    """Values at x of the invariant basis vectors."""
    F = space.ambient.F
    v = space.ambient.values(x)
    return linalg.matmul(space.basis, v.reshape(-1, 1), F).reshape(-1)


# -- quasi-inverse isogeny samples ----------------------------------------------

@dataclass(frozen=True)
class RationalEndo:
    """n x n matrix with entries a + b*omega, a, b rational, omega = [gen].

    ``entries[i][j] = (a, b)``.  ``gen`` is the automorphism playing the
    role of omega (for example ZETA3 or I).
    """
    entries: tuple
    gen: AutoKind


def quasi_isogeny_sample(x, g, N: int, E: Curve) -> tuple:
    """(N x, N g x) for a rational endomorphism g with N g integral."""
    if isinstance(g, MonomialSymmetry):
        if N != 1:
            xs = tuple(E.mul(N, P) for P in x)
            return xs, apply(g, xs, E)
        return tuple(x), apply(g, x, E)
    n = len(x)
    omega = auto_map(g.gen, E)
    out = []
    for i in range(n):
        acc = E.mul(0, x[0])
        for j in range(n):
            a, b = (Fraction(v) * N for v in g.entries[i][j])
            if a.denominator != 1 or b.denominator != 1:
                raise NonIntegralEndomorphism(f"entry ({i},{j}) of N*g is "
                                              "not integral")
            acc = E.add(acc, E.mul(int(a), x[j]))
            acc = E.add(acc, E.mul(int(b), omega(x[j])))
        out.append(acc)
    return tuple(E.mul(N, P) for P in x), tuple(out)


def endo_from_monomial(g: MonomialSymmetry, gen: AutoKind, d: int) -> RationalEndo:
    """Linear part of g as a RationalEndo, when autos lie in mu_2 or in
    Z[omega] with omega of order 3, 4 or 6 given by gen."""
    n = g.n
    ent = [[(0, 0)] * n for _ in range(n)]
    ginv = [0] * n
    for i, s in enumerate(g.perm):
        ginv[s] = i
    for i in range(n):
        a = g.autos[i]
        if a.t == 0:
            val = (1, 0)
        elif a.t == 6:
            val = (-1, 0)
        elif a == gen:
            val = (0, 1)
        elif a == gen.inverse() and gen.order == 4:
            val = (0, -1)
        else:
            raise ValueError(f"{a.tag} not expressible in this basis")
        ent[i][ginv[i]] = val
    return RationalEndo(tuple(tuple(r) for r in ent), gen)


# -- the random span lemma -----------------------------------------------------

def span_failure_frequency(q: int, m: int, n: int, trials: int,
                           seed: int = 0) -> float:
    """Fraction of trials in which m+n uniform vectors of F_q^m fail to span."""
    rng = np.random.default_rng(seed)
    A = rng.integers(0, q, size=(trials, m + n, m), dtype=np.int64)
    return float(np.mean(batched_rank(A, q) < m))


def span_failure_bound(q: int, n: int) -> float:
    return q ** (-n) / (q - 1)


def batched_rank(A: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices over F_p (p prime), vectorized."""
    A = A.copy() % p
    T, rows, cols = A.shape
    rank = np.zeros(T, dtype=np.int64)
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    ar = np.arange(T)
    for c in range(cols):
        # pivot: first row at index >= rank with nonzero entry in column c
        mask = (A[:, :, c] != 0) & (np.arange(rows)[None, :] >= rank[:, None])
        has = mask.any(axis=1)
        piv = np.argmax(mask, axis=1)
        t = ar[has]
        if t.size == 0:
            continue
        r = rank[has]
        pr = piv[has]
        top = A[t, r].copy()
        A[t, r] = A[t, pr]
        A[t, pr] = top
        prow = A[t, r] * inv[A[t, r, c]][:, None] % p
        A[t, r] = prow
        f = A[t, :, c].copy()
        f[np.arange(t.size), r] = 0
        A[t] = (A[t] - f[:, :, None] * prow[:, None, :]) % p
        rank[has] += 1
    return rank


def binomial_tolerance(prob: float, trials: int, sigmas: float = 3.0) -> float:
    return prob + sigmas * np.sqrt(max(prob * (1 - prob), 0.0) / trials)


def sym_dim(b: int, n: int) -> int:
    return comb(b + n - 1, n)
