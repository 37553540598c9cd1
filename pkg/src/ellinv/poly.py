"""Sparse weighted multivariate polynomials, Groebner bases, Hilbert series."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .arith import FieldCtx, FieldElement
from .errors import (BudgetExceeded, InvalidInput, LengthMismatch,
                     NotAdditiveSubgroup, NotHomogeneous)


class MultiPoly:
    """Polynomial over ctx stored as {exponent tuple: encoded coefficient}."""

    __slots__ = ("ctx", "nvars", "weights", "terms")

    def __init__(self, ctx: FieldCtx, nvars: int, terms=None, weights=None):
        self.ctx = ctx
        self.nvars = nvars
        self.weights = tuple(weights) if weights else (1,) * nvars
        if len(self.weights) != nvars:
            raise LengthMismatch("one weight per variable")
        out = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise LengthMismatch("exponent length differs from nvars")
            c = ctx.coerce(c)
            if c:
                out[e] = c
        self.terms = out

    @classmethod
    def _raw(cls, ctx, nvars, weights, terms):
        f = cls.__new__(cls)
        f.ctx, f.nvars, f.weights, f.terms = ctx, nvars, weights, terms
        return f

    def _like(self, terms):
        return MultiPoly._raw(self.ctx, self.nvars, self.weights, terms)

    @classmethod
    def var(cls, ctx, nvars, i, weights=None):
        e = [0] * nvars
        e[i] = 1
        return cls(ctx, nvars, {tuple(e): 1}, weights)

    @classmethod
    def const(cls, ctx, nvars, c, weights=None):
        return cls(ctx, nvars, {(0,) * nvars: c}, weights)

    @classmethod
    def gens(cls, ctx, nvars, weights=None):
        return [cls.var(ctx, nvars, i, weights) for i in range(nvars)]

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(self.ctx, self.nvars, other, self.weights)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.ctx
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ctx
        return self._like({e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.ctx.coerce(other)
            if c == 0:
                return self._like({})
            F = self.ctx
            return self._like({e: F.mul(v, c) for e, v in self.terms.items()})
        F = self.ctx
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = F.add(out.get(e, 0), F.mul(c1, c2))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = MultiPoly.const(self.ctx, self.nvars, 1, self.weights)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            other = self._coerce(other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def monomial_degree(self, e) -> int:
        return sum(w * a for w, a in zip(self.weights, e))

    def degree(self) -> int:
        """Maximal weighted degree (-1 for the zero polynomial)."""
        return max((self.monomial_degree(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({self.monomial_degree(e) for e in self.terms}) <= 1

    def scale_monic(self, order: "MonomialOrder"):
        lc = self.terms[order.leading(self)]
        return self * self.ctx.inv(lc)

    def eval(self, point) -> int:
        """Value at a point of encoded field elements."""
        F = self.ctx
        pt = [F.coerce(v) for v in point]
        acc = 0
        for e, c in self.terms.items():
            t = c
            for v, a in zip(pt, e):
                if a:
                    t = F.mul(t, F.pow(v, a))
            acc = F.add(acc, t)
        return acc

    def subs(self, images: list["MultiPoly"]) -> "MultiPoly":
        """Compose: variable i is replaced by images[i]."""
        if len(images) != self.nvars:
            raise LengthMismatch("one image per variable")
        tgt = images[0]
        out = MultiPoly._raw(tgt.ctx, tgt.nvars, tgt.weights, {})
        cache = {}
        for e, c in self.terms.items():
            t = MultiPoly.const(tgt.ctx, tgt.nvars, c, tgt.weights)
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in cache:
                        cache[key] = images[i] ** a
                    t = t * cache[key]
            out = out + t
        return out

    def with_weights(self, weights):
        return MultiPoly._raw(self.ctx, self.nvars, tuple(weights),
                              dict(self.terms))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.ctx.elem(self.terms[e])
            mono = "*".join(f"x{i}" + (f"^{a}" if a > 1 else "")
                            for i, a in enumerate(e) if a)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)


@dataclass(frozen=True)
class MonomialOrder:
    """kind is "grevlex" (weighted) or "lex"."""
    kind: str = "grevlex"
    weights: tuple = ()

    def key(self, e):
        if self.kind == "lex":
            return tuple(e)
        w = self.weights or (1,) * len(e)
        deg = sum(a * b for a, b in zip(w, e))
        return (deg,) + tuple(-a for a in reversed(e))

    def leading(self, f: MultiPoly):
        return max(f.terms, key=self.key)

    def sorted_terms(self, f: MultiPoly):
        return sorted(f.terms, key=self.key, reverse=True)


def grevlex(weights=()) -> MonomialOrder:
    return MonomialOrder("grevlex", tuple(weights))


def lex() -> MonomialOrder:
    return MonomialOrder("lex", ())


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_mul(f: MultiPoly, e, c) -> MultiPoly:
    F = f.ctx
    return f._like({tuple(x + y for x, y in zip(k, e)): F.mul(v, c)
                    for k, v in f.terms.items()})


def normal_form(f: MultiPoly, G: list[MultiPoly], order: MonomialOrder):
    """Full reduction of f modulo G (G need not be a Groebner basis)."""
    F = f.ctx
    lts = [(order.leading(g), g) for g in G if g.terms]
    lcs = [F.inv(g.terms[lt]) for lt, g in lts]
    rem = {}
    work = dict(f.terms)
    key = order.key
    while work:
        e = max(work, key=key)
        c = work[e]
        for (lt, g), ilc in zip(lts, lcs):
            if _divides(lt, e):
                shift = tuple(x - y for x, y in zip(e, lt))
                fac = F.mul(c, ilc)
                for k, v in g.terms.items():
                    kk = tuple(x + y for x, y in zip(k, shift))
                    nv = F.sub(work.get(kk, 0), F.mul(fac, v))
                    if nv:
                        work[kk] = nv
                    else:
                        work.pop(kk, None)
                break
        else:
            rem[e] = c
            del work[e]
    return f._like(rem)


def spoly(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    F = f.ctx
    lf, lg = order.leading(f), order.leading(g)
    L = _lcm(lf, lg)
    a = _mono_mul(f, tuple(x - y for x, y in zip(L, lf)), F.inv(f.terms[lf]))
    b = _mono_mul(g, tuple(x - y for x, y in zip(L, lg)), F.inv(g.terms[lg]))
    return a - b


def buchberger(gens: list[MultiPoly], order: MonomialOrder,
               budget: int = 200000) -> list[MultiPoly]:
    """Reduced Groebner basis, sorted by leading monomial (ascending)."""
    G = [g for g in gens if isinstance(g, MultiPoly) and g.terms]
    if not G:
        raise InvalidInput("buchberger needs at least one nonzero generator")
    G = [g.scale_monic(order) for g in G]
    lt = [order.leading(g) for g in G]
    w = G[0].weights

    def pdeg(i, j):
        return sum(a * b for a, b in zip(w, _lcm(lt[i], lt[j])))

    pairs = {(i, j) for i, j in combinations(range(len(G)), 2)}
    steps = 0
    while pairs:
        i, j = min(pairs, key=lambda ij: (pdeg(*ij), ij))
        pairs.discard((i, j))
        L = _lcm(lt[i], lt[j])
        if all(a == 0 or b == 0 for a, b in zip(lt[i], lt[j])):
            continue
        if any(k not in (i, j) and _divides(lt[k], L)
               and (min(i, k), max(i, k)) not in pairs
               and (min(j, k), max(j, k)) not in pairs
               for k in range(len(G))):
            continue
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"more than {budget} S-polynomial reductions")
        h = normal_form(spoly(G[i], G[j], order), G, order)
        if h.terms:
            h = h.scale_monic(order)
            G.append(h)
            lt.append(order.leading(h))
            new = len(G) - 1
            pairs |= {(k, new) for k in range(new)}
    return _reduce_basis(G, order)


def _reduce_basis(G, order):
    lts = [order.leading(g) for g in G]
    keep = []
    for i, g in enumerate(G):
        dominated = any(j != i and _divides(lts[j], lts[i])
                        and (lts[j] != lts[i] or j < i)
                        for j in range(len(G)))
        if not dominated:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        out.append(normal_form(g, others, order).scale_monic(order))
    out.sort(key=lambda g: order.key(order.leading(g)))
    return out


def cone_common_zero_only_origin(homog: list[MultiPoly],
                                 order: MonomialOrder | None = None) -> bool:
    """True iff the only common zero of the (weighted) homogeneous
    polynomials on affine space is the origin."""
    if not homog:
        raise InvalidInput("empty polynomial list")
    for f in homog:
        if not f.is_homogeneous():
            raise NotHomogeneous(f"{f} is not homogeneous")
    if order is None:
        order = grevlex(homog[0].weights)
    G = buchberger(homog, order)
    n = homog[0].nvars
    pure = set()
    for g in G:
        e = order.leading(g)
        nz = [i for i, a in enumerate(e) if a]
        if len(nz) == 1:
            pure.add(nz[0])
        if not nz:
            return True
    return pure == set(range(n))


@dataclass(frozen=True)
class HilbertSeries:
    degrees: tuple
    coeffs: tuple

    def __getitem__(self, d: int) -> int:
        return self.coeffs[d]

    def __len__(self):
        return len(self.coeffs)


def hilbert_from_degrees(d, D: int) -> HilbertSeries:
    """Coefficients of prod 1/(1-t^di) up to t^D."""
    if any(x < 1 for x in d):
        raise InvalidInput("degrees must be positive")
    c = [1] + [0] * D
    for di in d:
        for k in range(di, D + 1):
            c[k] += c[k - di]
    return HilbertSeries(tuple(d), tuple(c))


def _esym(xs, ys, one, zero):
    c = [one]
    for x, y in zip(xs, ys):
        nxt = [x * c[0]]
        for k in range(1, len(c)):
            nxt.append(x * c[k] + y * c[k - 1])
        nxt.append(y * c[-1])
        c = nxt
    return c


def esym_pair(xs, ys, ctx: FieldCtx | None = None):
    """Coefficients e_0..e_n of prod (x_i + t y_i).

    Works on FieldElements, MultiPolys, or encoded ints when ctx is given.
    """
    if len(xs) != len(ys):
        raise LengthMismatch("xs and ys differ in length")
    if ctx is not None:
        xs = [ctx(x) for x in xs]
        ys = [ctx(y) for y in ys]
        return _esym(xs, ys, ctx(1), ctx(0))
    sample = (list(xs) + list(ys) or [None])[0]
    if isinstance(sample, MultiPoly):
        one = MultiPoly.const(sample.ctx, sample.nvars, 1, sample.weights)
        return _esym(xs, ys, one, one * 0)
    if isinstance(sample, FieldElement):
        return _esym(xs, ys, sample.ctx(1), sample.ctx(0))
    return _esym(xs, ys, 1, 0)


def elementary_symmetric(vars_: list[MultiPoly]) -> list[MultiPoly]:
    """e_0..e_n of the given polynomials."""
    one = MultiPoly.const(vars_[0].ctx, vars_[0].nvars, 1, vars_[0].weights)
    return esym_pair([one] * len(vars_), vars_)


def linearized_poly(T, ctx: FieldCtx | None = None) -> MultiPoly:
    """q(t) = prod_{c in T} (t - c), checked to be p-linearized."""
    if ctx is None:
        ctx = T[0].ctx
    elems = {ctx.coerce(c) for c in T}
    if 0 not in elems:
        raise NotAdditiveSubgroup("T must contain 0")
    for a in elems:
        for b in elems:
            if ctx.add(a, b) not in elems:
                raise NotAdditiveSubgroup("T is not closed under addition")
    t = MultiPoly.var(ctx, 1, 0)
    q = MultiPoly.const(ctx, 1, 1)
    for c in sorted(elems):
        q = q * (t - ctx.elem(c))
    p = ctx.p
    for (e,), c in q.terms.items():
        k = e
        while k > 1 and k % p == 0:
            k //= p
        if k != 1:
            raise NotAdditiveSubgroup("product is not p-linearized")
    return q


def symmetric_to_elementary(f: MultiPoly) -> MultiPoly:
    """Rewrite a symmetric polynomial as a polynomial in e_1..e_n.

    The result lives in n variables of weights 1..n.  Raises InvalidInput
    when f is not symmetric.
    """
    F, n = f.ctx, f.nvars
    x = MultiPoly.gens(F, n)
    es = elementary_symmetric(x)[1:]
    out = {}
    work = f.with_weights((1,) * n)
    order = lex()
    while work.terms:
        a = order.leading(work)
        if any(a[k] < a[k + 1] for k in range(n - 1)):
            raise InvalidInput("polynomial is not symmetric")
        expo = tuple(a[k] - (a[k + 1] if k + 1 < n else 0) for k in range(n))
        c = work.terms[a]
        term = MultiPoly.const(F, n, 1)
        for e, k in zip(es, expo):
            if k:
                term = term * e ** k
        work = work - term * F.elem(c)
        out[expo] = F.add(out.get(expo, 0), c)
    return MultiPoly(F, n, out, tuple(range(1, n + 1)))


def partial(f: MultiPoly, i: int) -> MultiPoly:
    """Formal derivative with respect to variable i."""
    F = f.ctx
    out = {}
    for e, c in f.terms.items():
        if e[i]:
            k = list(e)
            k[i] -= 1
            v = F.smul(e[i], c)
            if v:
                out[tuple(k)] = v
    return f._like(out)
