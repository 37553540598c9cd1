"""Imprimitive families G_n(G1^, H1^) on E^n and rank-1 quotients.

Each family fixes a curve in normal form, a divisor D on E stable under
G1^ = mu_m x Aut x E^{G1} and eigen-sections u_j of L(w_j D).  The closed
form invariants are X_j = prod_i u_j(x_i) together with the symmetric
coordinates e_k(U, T) of Sym^n(P^1), where U = u_1^{e_1}, T = u_2^{e_2}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial, lcm

import numpy as np

from .. import linalg
from ..arith import (I, IDENTITY, NEG, ZETA3, AutoKind, Curve, CurvePoint,
                     curve_new, make_field, mu_six_power, random_point)
from ..errors import (PoleAtIdentity, PoleHit, RootOfUnityMissing, WrongModel)
from ..groups import GroupSpec, apply, closure, make_imprimitive, rank1
from ..poly import esym_pair, hilbert_from_degrees
from ..sections import monomials_up_to, rr_basis
from .engine import (InvariantSpace, PolySpace, SampleBudget,
                     SymTensorSpace, bootstrap_invariants, curve_action,
                     reynolds_invariants, sample_rng)

FAMILIES = ("mu2", "mu3", "mu4", "mu6")

_DEFAULT_LAMBDA = 3


@dataclass
class FamilyModel:
    name: str
    E: Curve
    m: int
    D: tuple
    weights: tuple
    ghat_gens: list
    ghat: list
    params: dict = field(default_factory=dict)
    u: list = field(default_factory=list)
    e: tuple = ()
    relations: tuple = ()

    @property
    def F(self):
        return self.E.ctx

    @property
    def deg_D(self) -> int:
        return len(self.D)

    def basis_dim(self, k: int) -> int:
        return k * self.deg_D

    def basis_values(self, P: CurvePoint, k: int) -> list:
        """Values at P of the fixed basis of L(kD)."""
        return _BASIS[self.name](self, P, k)

    def u_value(self, j: int, P: CurvePoint) -> int:
        w, c = self.u[j]
        F = self.F
        acc = 0
        for a, b in zip(c, self.basis_values(P, w)):
            if a:
                acc = F.add(acc, F.mul(int(a), b))
        return acc


def _rr_vals(E, P, d):
    if P.x is None:
        raise PoleHit("identity")
    return rr_basis(E, d).values(P)


def _divide(F, vals, h, k):
    if h == 0:
        raise PoleHit("sample on the polar divisor")
    inv = F.pow(F.inv(h), k)
    return [F.mul(v, inv) for v in vals]


def _basis_mu2(M, P, k):
    return _divide(M.F, _rr_vals(M.E, P, 4 * k), P.y if P.x is not None else 0, k)


def _basis_mu3(M, P, k):
    return _divide(M.F, _rr_vals(M.E, P, 3 * k), P.x if P.x is not None else 0, k)


def _basis_mu4(M, P, k):
    # x has divisor 2[T] - 2[0] with T = (0, 0)
    F = M.F
    if k % 2 == 0:
        return _divide(F, _rr_vals(M.E, P, 2 * k), P.x or 0, k // 2)
    vals = _rr_vals(M.E, P, 2 * k + 1)[1:]
    return _divide(F, vals, P.x or 0, (k + 1) // 2)


def _basis_mu6(M, P, k):
    return _rr_vals(M.E, P, k)


_BASIS = {"mu2": _basis_mu2, "mu3": _basis_mu3, "mu4": _basis_mu4,
          "mu6": _basis_mu6}


# -- construction ---------------------------------------------------------------

def family_field(name: str, p: int):
    """Smallest extension of F_p containing the roots of unity needed."""
    need = {"mu2": 2, "mu3": 3, "mu4": 4, "mu6": 6}[name]
    k = 1
    while (p ** k - 1) % need:
        k += 1
    return make_field(p, k)


def family_model(name: str, p: int = 1009, k: int | None = None,
                 lam: int | None = None, coeff: int = 1) -> FamilyModel:
    """Normal-form model of one family over F_{p^k}.

    mu2: y^2 = x(x-1)(x-lam); mu3, mu6: y^2 = x^3 + coeff;
    mu4: y^2 = x^3 + coeff*x.
    """
    if name not in FAMILIES:
        raise WrongModel(f"unknown family {name!r}")
    F = family_field(name, p) if k is None else make_field(p, k)
    if name == "mu2":
        lam = _DEFAULT_LAMBDA if lam is None else lam
        E = curve_new(F, a2=F.neg(F.coerce(1 + lam)), a4=F.coerce(lam))
        T = [CurvePoint(0, 0), CurvePoint(1, 0), CurvePoint(F.coerce(lam), 0)]
        D = (IDENTITY, *T)
        gens = [rank1(scalar=NEG), rank1(NEG)] + [rank1(shift=t) for t in T]
        m, weights = 2, (1, 1, 1, 1)
        params = {"lambda": lam}
    elif name == "mu3":
        E = curve_new(F, a6=F.coerce(coeff))
        r = F.sqrt(F.coerce(coeff))
        if r is None:
            raise WrongModel("mu3 needs b to be a square")
        T0 = CurvePoint(0, r)
        D = (IDENTITY, T0, E.neg(T0))
        gens = [rank1(scalar=ZETA3), rank1(ZETA3), rank1(shift=T0)]
        m, weights = 3, (1, 1, 1)
        params = {"b": coeff}
    elif name == "mu4":
        E = curve_new(F, a4=F.coerce(coeff))
        T = CurvePoint(0, 0)
        D = (IDENTITY, T)
        gens = [rank1(scalar=I), rank1(I), rank1(shift=T)]
        m, weights = 4, (1, 1, 2)
        params = {"a": coeff}
    else:
        E = curve_new(F, a6=F.coerce(coeff))
        D = (IDENTITY,)
        w = mu_six_power(1)
        gens = [rank1(scalar=w), rank1(w)]
        m, weights = 6, (1, 2, 3)
        params = {"b": coeff}
    for g in gens:
        for a in (g.autos[0], g.scalars[0]):
            a.root(F)
    ghat = closure(gens, E, 1)
    M = FamilyModel(name, E, m, D, weights, gens, ghat, params)
    _find_eigensections(M)
    return M


# -- eigen-sections -----------------------------------------------------------

def _sample_points(M: FamilyModel, count: int, seed: int, stream: int):
    out = []
    idx = 0
    while len(out) < count:
        rng = sample_rng(seed, stream, idx)
        idx += 1
        P = random_point(M.E, rng)
        out.append(P)
    return out


def _values_or_none(M, P, k):
    try:
        return M.basis_values(P, k)
    except (PoleHit, PoleAtIdentity):
        return None


def action_matrix(M: FamilyModel, h, k: int, seed: int = 0) -> np.ndarray:
    """A with B(g.P) = A B(P) for the geometric part g of h on L(kD)."""
    F = M.F
    b = M.basis_dim(k)
    rows, rows_g = [], []
    idx = 0
    while len(rows) < b + 8:
        P = random_point(M.E, sample_rng(seed, 900 + k, idx))
        idx += 1
        gP = apply(h, (P,), M.E)[0]
        v, vg = _values_or_none(M, P, k), _values_or_none(M, gP, k)
        if v is None or vg is None:
            continue
        rows.append(v)
        rows_g.append(vg)
    Ev = linalg.asmat(rows, F)
    X = linalg.solve(Ev, linalg.asmat(rows_g, F), F)
    if X is None or linalg.rank(Ev, F) < b:
        raise WrongModel("basis of L(kD) is not separated by samples")
    return X.T


def _roots_of_unity(F) -> list:
    out = {1}
    for d in (2, 3, 4, 6, 12):
        try:
            z = F.root_of_unity(d)
        except RootOfUnityMissing:
            continue
        out |= {F.pow(z, i) for i in range(d)}
    return sorted(out)


def eigen_decomposition(M: FamilyModel, k: int, gens=None) -> dict:
    """Joint eigenspaces of G1^ on L(kD).

    Keys are tuples of twisted character values psi(h) = lambda * s^-k on
    the generators; values are coefficient rows spanning the eigenspace.
    """
    F = M.F
    gens = M.ghat_gens if gens is None else gens
    b = M.basis_dim(k)
    roots = _roots_of_unity(F)
    spaces = {(): linalg.identity(b, F)}
    for h in gens:
        A = action_matrix(M, h, k)
        s = F.pow(F.inv(h.scalars[0].root(F)), k)
        nxt = {}
        for key, S in spaces.items():
            for lam in roots:
                X = linalg.matmul(S, linalg.sub(A, linalg.scale(
                    linalg.identity(b, F), lam, F), F), F)
                N = linalg.nullspace(X.T, F)
                if N.shape[0]:
                    nxt[key + (F.mul(lam, s),)] = linalg.row_basis(
                        linalg.matmul(N, S, F), F)
        spaces = nxt
    if sum(S.shape[0] for S in spaces.values()) != b:
        raise WrongModel("action on L(kD) is not diagonalizable over F")
    return spaces


def _char_order(F, key) -> int:
    o = 1
    for v in key:
        j = 1
        acc = v
        while acc != 1:
            acc = F.mul(acc, v)
            j += 1
        o = lcm(o, j)
    return o


def _normalize(F, c):
    c = [int(v) for v in c]
    lead = next(v for v in c if v)
    inv = F.inv(lead)
    return tuple(F.mul(v, inv) for v in c)


def _mu2_explicit(M):
    """u_1 = 1 and (x^2 - c x + lam) / 2y type sections on the lambda-curve."""
    F = M.F
    lam = F.coerce(M.params["lambda"])
    h = F.inv(2)
    # basis of L(D): 1/y, x/y, 1, x^2/y
    return [(0, 0, 1, 0),
            (F.neg(F.mul(lam, h)), 0, 0, h),
            (F.mul(lam, h), F.neg(1), 0, h),
            (F.mul(lam, h), F.neg(lam), 0, h)]


def _find_eigensections(M: FamilyModel):
    F = M.F
    chars = []
    found = []
    for w in sorted(set(M.weights)):
        spaces = eigen_decomposition(M, w)
        want = M.weights.count(w)
        # products of earlier sections whose weights sum to w
        old = set()
        for combo in _weight_multisets([f[0] for f in found], w):
            key = tuple(prod_f(F, [chars[j][i] for j in combo])
                        for i in range(len(M.ghat_gens)))
            old.add(key)
        new = [key for key in spaces if key not in old]
        const = tuple(F.pow(F.inv(h.scalars[0].root(F)), w)
                      for h in M.ghat_gens)
        new.sort(key=lambda kk: (kk != const, _normalize(F, spaces[kk][0])))
        if len(new) != want:
            raise WrongModel(f"{M.name}: {len(new)} new characters in weight "
                             f"{w}, expected {want}")
        for key in new:
            S = spaces[key]
            if S.shape[0] != 1:
                raise WrongModel("eigen-section is not unique")
            found.append((w, _normalize(F, S[0])))
            chars.append(key)
    if M.name == "mu2":
        explicit = _mu2_explicit(M)
        order = []
        for c in explicit:
            nc = _normalize(F, c)
            j = next((j for j, (_, f) in enumerate(found) if f == nc), None)
            if j is None:
                raise WrongModel("explicit lambda-curve sections are not "
                                 "eigen-sections")
            order.append(j)
        found = [(1, tuple(int(v) for v in c)) for c in explicit]
        chars = [chars[j] for j in order]
    M.u = found
    M.e = tuple(_char_order(F, key) for key in chars)
    M.params["characters"] = chars
    for w, e in zip(M.weights, M.e):
        if w * e != M.m:
            raise WrongModel(f"{M.name}: weight {w} with character order {e}")
    M.relations = _relations(M)


def _weight_multisets(ws, target, start=0):
    """Index multisets of earlier sections whose weights sum to target."""
    if target == 0:
        yield ()
        return
    for j in range(start, len(ws)):
        if ws[j] <= target:
            for rest in _weight_multisets(ws, target - ws[j], j):
                yield (j,) + rest


def prod_f(F, vals):
    out = 1
    for v in vals:
        out = F.mul(out, v)
    return out


def _relations(M: FamilyModel):
    """(alpha_j, beta_j) with u_j^{e_j} = alpha_j T + beta_j U."""
    F = M.F
    pts = []
    for P in _sample_points(M, 40, 0, 777):
        try:
            vals = [F.pow(M.u_value(j, P), M.e[j]) for j in range(len(M.u))]
        except PoleHit:
            continue
        pts.append(vals)
    rel = []
    A = linalg.asmat([[v[1], v[0]] for v in pts], F)
    if linalg.rank(A, F) < 2:
        raise WrongModel("U and T are dependent")
    for j in range(len(M.u)):
        sol = linalg.solve(A, linalg.asmat([v[j] for v in pts], F), F)
        if sol is None:
            raise WrongModel(f"u_{j + 1}^{M.e[j]} is not in the span of U, T")
        rel.append((int(sol[0]), int(sol[1])))
    return tuple(rel)


def twisted_character(M: FamilyModel, j: int, h, P0=None) -> int:
    """psi_j(h) with u_j(g.P) = s^{w_j} psi_j(h) u_j(P)."""
    F = M.F
    w = M.u[j][0]
    idx = 0
    while True:
        P = P0 or random_point(M.E, sample_rng(0, 555, idx))
        idx += 1
        try:
            a = M.u_value(j, P)
            b = M.u_value(j, apply(h, (P,), M.E)[0])
        except PoleHit:
            P0 = None
            continue
        if a:
            s = F.pow(h.scalars[0].root(F), w)
            return F.div(b, F.mul(a, s))
        P0 = None


# -- the closed form -------------------------------------------------------------

@dataclass
class ClosedForm:
    family: str
    n: int
    d: tuple
    degrees: tuple
    labels: tuple
    model: FamilyModel
    hhat: list
    extra_k: tuple
    relation_rows: tuple

    @property
    def order(self) -> int:
        """Order of G_n(G1^, H1^) acting on the cone modulo mu_m^{n-1}."""
        n, M = self.n, self.model
        return (factorial(n) * len(M.ghat) ** (n - 1) * len(self.hhat)
                // M.m ** (n - 1))

    @property
    def effective_order(self) -> int:
        """Order of the group acting on the quotient: scalars mu_m inside
        H1^ act trivially on every generator and are divided out."""
        n, M = self.n, self.model
        mu = sum(1 for h in self.hhat
                 if h.autos[0].t == 0 and h.shifts[0].x is None)
        return factorial(n) * (len(M.ghat) // M.m) ** (n - 1) * len(self.hhat) // mu

    def spec(self) -> GroupSpec:
        M = self.model
        return make_imprimitive(self.n, M.ghat, self.hhat, M.E)

    def evaluate(self, xs) -> list:
        """Values of every generator at the tuple xs."""
        M = self.model
        F = M.F
        out = []
        uv = [[M.u_value(j, P) for P in xs] for j in range(len(M.u))]
        for j, dj in enumerate(self.d):
            out.append(F.pow(prod_f(F, uv[j]), dj))
        if self.extra_k:
            U = [F.pow(v, M.e[0]) for v in uv[0]]
            T = [F.pow(v, M.e[1]) for v in uv[1]]
            es = esym_pair(U, T, F)
            out += [int(es[k]) for k in self.extra_k]
        return out

    def hilbert(self, D: int):
        return hilbert_from_degrees(list(self.degrees), D)


def d_from_subset(M: FamilyModel, S) -> tuple:
    """d_j = e_j for labels j in S (1-based), else 1."""
    S = set(S)
    bad = S - set(range(1, len(M.u) + 1))
    if bad:
        raise WrongModel(f"labels {sorted(bad)} outside 1..{len(M.u)}")
    return tuple(M.e[j] if j + 1 in S else 1 for j in range(len(M.u)))


def imprimitive_closed_form(n: int, family: str, S=(), model: FamilyModel | None = None,
                            d=None, p: int = 1009) -> ClosedForm:
    """Closed-form generators for G_n(G1^, H1^) with H1^ cut out by d."""
    M = model or family_model(family, p)
    if M.name != family:
        raise WrongModel(f"model is {M.name}, not {family}")
    F = M.F
    d = d_from_subset(M, S) if d is None else tuple(d)
    if len(d) != len(M.u) or any(e % dj for e, dj in zip(M.e, d)):
        raise WrongModel(f"d={d} must divide e={M.e}")
    r = len(M.u)
    rows = []
    for al, be in M.relations:
        rows.append([F.mul(F.pow(be, n - k), F.pow(al, k)) for k in range(n + 1)])
    if linalg.rank(rows, F) < r:
        raise WrongModel(f"{family}: X_j^e_j are dependent for n={n}")
    extra = []
    cur = [list(v) for v in rows]
    for k in range(n + 1):
        if len(cur) == n + 1:
            break
        trial = cur + [[1 if i == k else 0 for i in range(n + 1)]]
        if linalg.rank(trial, F) > len(cur):
            cur = trial
            extra.append(k)
    degrees = tuple(w * dj for w, dj in zip(M.weights, d)) + (M.m,) * len(extra)
    labels = tuple(f"X{j + 1}^{dj}" if dj > 1 else f"X{j + 1}"
                   for j, dj in enumerate(d)) + tuple(f"e{k}(U,T)" for k in extra)
    hhat = h1_subgroup(M, d)
    return ClosedForm(family, n, d, degrees, labels, M, hhat, tuple(extra),
                      tuple(tuple(v) for v in rows))


def h1_subgroup(M: FamilyModel, d) -> list:
    """Elements h of G1^ with psi_j(h)^{d_j} = 1 for every j."""
    F = M.F
    out = []
    for h in M.ghat:
        if all(F.pow(twisted_character(M, j, h), dj) == 1
               for j, dj in enumerate(d)):
            out.append(h)
    return out


def character_dims(M: FamilyModel, k: int, hhat) -> dict:
    """Multiplicity of every twisted character of G1^ on L(kD), keyed by its
    values on hhat (used by the exact dimension formula)."""
    F = M.F
    spaces = eigen_decomposition(M, k, gens=M.ghat_gens)
    out = {}
    for key, S in spaces.items():
        c = S[0]
        vals = []
        for h in hhat:
            A = action_matrix(M, h, k)
            v = linalg.matmul(c.reshape(1, -1), A, F)[0]
            i = next(i for i in range(len(c)) if c[i])
            lam = F.div(int(v[i]), int(c[i]))
            vals.append(F.mul(lam, F.pow(F.inv(h.scalars[0].root(F)), k)))
        out[key] = (S.shape[0], all(v == 1 for v in vals))
    return out


def exact_dim(M: FamilyModel, n: int, k: int, hhat) -> int:
    """sum over characters trivial on H1^ of C(N + n - 1, n)."""
    return sum(comb(N + n - 1, n) for N, triv in
               character_dims(M, k, hhat).values() if triv)


# -- bootstrap ----------------------------------------------------------------

def ambient(M: FamilyModel, n: int, k: int) -> SymTensorSpace:
    return SymTensorSpace(M.F, lambda P: M.basis_values(P, k),
                          M.basis_dim(k), n)


def imprimitive_moves(cf: ClosedForm) -> list:
    """Group generators other than coordinate transpositions."""
    M = cf.model
    spec = cf.spec()
    return [curve_action(g, M.E) for g in spec.generators
            if any(a.t for a in g.autos) or any(s.x is not None for s in g.shifts)
            or any(s.t for s in g.scalars)]


def tuple_sampler(E: Curve, n: int):
    return lambda rng: tuple(random_point(E, rng) for _ in range(n))


def imprimitive_invariants(cf: ClosedForm, k: int, seed: int = 0,
                           budget: SampleBudget | None = None,
                           workers: int = 1) -> InvariantSpace:
    M = cf.model
    V = ambient(M, cf.n, k)
    expected = cf.hilbert(k)[k]
    return bootstrap_invariants(V, imprimitive_moves(cf), tuple_sampler(M.E, cf.n),
                                budget, degree=k, expected=expected, seed=seed,
                                stream=k, workers=workers)


# -- rank 1 ------------------------------------------------------------------

RANK1_ORDERS = (2, 3, 4, 6)


@dataclass
class Rank1Case:
    order: int
    m: int
    E: Curve
    kind: AutoKind

    @property
    def F(self):
        return self.E.ctx

    @property
    def degrees(self) -> tuple:
        return (1, self.order // self.m)

    def generator_function(self, P) -> int:
        """x, y, x^2 or x^3: the invariant of pole order |G|."""
        F = self.F
        if self.order == 2:
            return P.x
        if self.order == 3:
            return P.y
        if self.order == 4:
            return F.mul(P.x, P.x)
        return F.pow(P.x, 3)


def rank1_case(order: int, m: int, p: int, k: int | None = None) -> Rank1Case:
    if order not in RANK1_ORDERS or order % m:
        raise WrongModel(f"need |G| in {RANK1_ORDERS} and m | |G|")
    need = {2: 2, 3: 3, 4: 4, 6: 3}[order]
    if k is None:
        k = 1
        while (p ** k - 1) % need:
            k += 1
    F = make_field(p, k)
    if order == 2:
        E = curve_new(F, a4=1, a6=1)
    elif order == 4:
        E = curve_new(F, a4=1)
    else:
        E = curve_new(F, a6=1)
    return Rank1Case(order, m, E, AutoKind.from_root(order, 1))


def rr_action_diagonal(case: Rank1Case, d: int) -> list:
    """Eigenvalue of [omega]^* on each monomial x^a y^b of L(d[0])."""
    F = case.F
    w = case.kind.root(F)
    return [F.pow(w, -(2 * a + 3 * b)) for a, b in monomials_up_to(d)]


def rank1_elements(case: Rank1Case) -> list:
    """Exponents e of [omega]^e, one per group element."""
    return list(range(case.order))


def rank1_invariants(case: Rank1Case, degree: int) -> InvariantSpace:
    """Exact invariants of [mu_|G|] in L(degree * m [0]) by Reynolds."""
    F = case.F
    eig = rr_action_diagonal(case, degree * case.m)
    dim = len(eig)

    def act(e):
        return np.diag([F.pow(v, e) for v in eig]).astype(np.int64)
    V = PolySpace(F, dim, act, labels=monomials_up_to(degree * case.m))
    return reynolds_invariants(rank1_elements(case), V, degree)
