"""Riemann-Roch bases of L(d[0]) on E and their tensor products on E^n."""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .arith import Curve, CurvePoint, FieldElement
from .errors import DegeneratePoints, DegreeZero, NotSumZero, PoleAtIdentity


@dataclass(frozen=True)
class SectionBasis:
    """x^a y^b with pole order 2a+3b <= d, ordered by pole order."""
    curve: Curve
    d: int
    monomials: tuple

    def __len__(self):
        return len(self.monomials)

    def pole_orders(self) -> list[int]:
        return [2 * a + 3 * b for a, b in self.monomials]

    def values(self, P: CurvePoint) -> list[int]:
        """Encoded values of every basis monomial at P."""
        if P.x is None:
            raise PoleAtIdentity("sections of L(d[0]) have poles at O")
        F = self.curve.ctx
        out = []
        xp = 1
        cache = {0: 1}
        for a, b in self.monomials:
            if a not in cache:
                xp = cache[a - 1]
                cache[a] = F.mul(xp, P.x)
            v = cache[a]
            out.append(F.mul(v, P.y) if b else v)
        return out


def monomials_up_to(d: int) -> tuple:
    out = [(0, 0)]
    for k in range(2, d + 1):
        out.append((k // 2, 0) if k % 2 == 0 else ((k - 3) // 2, 1))
    return tuple(out)


def rr_basis(E: Curve, d: int) -> SectionBasis:
    if d < 1:
        raise DegreeZero("d must be at least 1")
    return SectionBasis(E, d, monomials_up_to(d))


def eval_section(basis: SectionBasis, index: int, P: CurvePoint):
    return basis.curve.ctx.elem(basis.values(P)[index])


def an_divisor_coords(E: Curve, points) -> tuple:
    """Section of L((n+1)[0]) vanishing on the sum-zero tuple ``points``,
    scaled so that its first nonzero coordinate is 1."""
    F = E.ctx
    pts = list(points)
    total = pts[0]
    for P in pts[1:]:
        total = E.add(total, P)
    if total.x is not None:
        raise NotSumZero("points do not sum to the identity")
    n1 = len(pts)
    basis = rr_basis(E, n1)
    m = sum(1 for P in pts if P.x is None)
    affine = [P for P in pts if P.x is not None]
    if len(set(affine)) != len(affine):
        raise DegeneratePoints("repeated non-identity point")
    rows = []
    for j, po in enumerate(basis.pole_orders()):
        if po > n1 - m:
            rows.append([1 if k == j else 0 for k in range(n1)])
    for P in affine[:-1]:
        rows.append(basis.values(P))
    N = linalg.nullspace(rows, F) if rows else linalg.identity(n1, F)
    if N.shape[0] != 1:
        raise DegeneratePoints("vanishing conditions are dependent")
    v = [int(c) for c in N[0]]
    lead = next(c for c in v if c)
    inv = F.inv(lead)
    v = [F.mul(c, inv) for c in v]
    for P in affine:
        vals = basis.values(P)
        acc = 0
        for c, w in zip(v, vals):
            acc = F.add(acc, F.mul(c, w))
        if acc:
            raise DegeneratePoints("section does not vanish at every point")
    return tuple(F.elem(c) for c in v)


@dataclass(frozen=True)
class TensorBasis:
    """L(d[0])^{boxtimes n}: products of per-factor basis monomials."""
    factors: tuple

    @property
    def dim(self) -> int:
        out = 1
        for b in self.factors:
            out *= len(b)
        return out


def tensor_basis(E: Curve, d: int, n: int) -> TensorBasis:
    return TensorBasis(tuple(rr_basis(E, d) for _ in range(n)))


def tensor_eval(tb: TensorBasis, index, points) -> FieldElement:
    F = tb.factors[0].curve.ctx
    acc = 1
    for b, i, P in zip(tb.factors, index, points):
        acc = F.mul(acc, b.values(P)[i])
    return F.elem(acc)
