"""Verdict records and the arithmetic, generation and exterior-power checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import factorial, gcd, prod

import numpy as np

from .. import linalg
from ..errors import (BadCharacteristic, CapExceeded, EnumerationMissing,
                      MissingOrbitData, PoleHit, RankUnstable)
from ..groups import MatrixGroup
from ..invariants.engine import sample_rng


@dataclass
class CaseDescriptor:
    """|G|, chi = dim of degree-1 sections, claimed degrees d_0..d_n and
    optional anticanonical orbit data as (ord(chi_i), deg(delta_i))."""
    group: str
    order: int
    chi: int
    degrees: tuple
    orbits: tuple | None = None
    note: str = ""

    @property
    def n(self) -> int:
        return len(self.degrees) - 1


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "flagged", "skipped")


VERDICTS = ("certified", "consistent-uncertified", "failed")


@dataclass
class CertReport:
    case: str
    claimed_degrees: tuple = ()
    checks: list = field(default_factory=list)
    dims: list = field(default_factory=list)
    budgets: dict = field(default_factory=dict)
    annotations: list = field(default_factory=list)
    exact: bool = True

    def add(self, name: str, ok: bool | None, detail: str = "",
            status: str | None = None) -> CheckResult:
        if status is None:
            status = "pass" if ok else "fail"
        r = CheckResult(name, status, detail)
        self.checks.append(r)
        return r

    def add_dim(self, degree: int, expected: int, computed: int,
                lower: int | None = None):
        self.dims.append({"degree": degree, "expected": expected,
                          "computed": computed,
                          "lower_bound": computed if lower is None else lower})

    @property
    def failed_stage(self) -> str | None:
        return next((c.name for c in self.checks if c.status == "fail"), None)

    @property
    def verdict(self) -> str:
        if self.failed_stage is not None:
            return "failed"
        bounds_ok = all(d["lower_bound"] == d["computed"] == d["expected"]
                        for d in self.dims)
        return "certified" if self.exact and bounds_ok else "consistent-uncertified"

    def to_dict(self) -> dict:
        return {"case": self.case,
                "claimed_degrees": list(self.claimed_degrees),
                "dims": self.dims,
                "checks": [{"name": c.name, "status": c.status,
                            "detail": c.detail} for c in self.checks],
                "budgets": self.budgets,
                "annotations": self.annotations,
                "verdict": self.verdict,
                "failed_stage": self.failed_stage}


# -- arithmetic identities ------------------------------------------------------

def degree_product_sides(case: CaseDescriptor) -> tuple:
    """(gcd(d) |G|, chi n! prod d).  Degrees sharing a factor g describe the
    same weighted projective space as d/g, with the scalar mu_g acting
    trivially on it, hence the gcd factor."""
    g = reduce(gcd, case.degrees)
    return g * case.order, case.chi * factorial(case.n) * prod(case.degrees)


def degree_product_check(case: CaseDescriptor) -> bool:
    lhs, rhs = degree_product_sides(case)
    return lhs == rhs


def canonical_degree_check(case: CaseDescriptor) -> bool:
    """sum d_i = sum (ord(chi_i) - 1) deg(delta_i)."""
    if not case.orbits:
        raise MissingOrbitData(f"{case.group}: no anticanonical orbit data")
    return sum(case.degrees) == sum((o - 1) * d for o, d in case.orbits)


# -- generation by evaluation ------------------------------------------------------

def degree_exponents(degrees, k: int, start: int = 0):
    """Exponent vectors a with sum a_i degrees_i = k."""
    if start == len(degrees):
        if k == 0:
            yield ()
        return
    for a in range(k // degrees[start] + 1):
        for rest in degree_exponents(degrees, k - a * degrees[start], start + 1):
            yield (a,) + rest


def monomial_values(F, gen_values, exps) -> list:
    out = []
    for e in exps:
        acc = 1
        for v, a in zip(gen_values, e):
            if a:
                acc = F.mul(acc, F.pow(v, a))
        out.append(acc)
    return out


def generation_ranks(F, gen_degrees, evaluate, sampler, D: int, seed: int = 0,
                     excess: int = 8, max_rounds: int = 8,
                     stream: int = 4000) -> list:
    """Rank, for k = 1..D, of the monomials of degree k in the generators,
    evaluated at random points until the rank is stable for one extra
    batch of ``excess`` points."""
    ranks = []
    for k in range(1, D + 1):
        exps = list(degree_exponents(gen_degrees, k))
        if not exps:
            ranks.append(0)
            continue
        rows = []
        idx = 0
        prev = -1
        target = len(exps) + excess
        for _ in range(max_rounds):
            while len(rows) < target:
                rng = sample_rng(seed, stream + k, idx)
                idx += 1
                try:
                    vals = evaluate(sampler(rng))
                except (PoleHit, ZeroDivisionError):
                    continue
                rows.append(monomial_values(F, vals, exps))
            r = linalg.rank(np.array(rows), F)
            if r == prev:
                break
            prev = r
            target += excess
        else:
            raise RankUnstable(f"degree {k}: rank kept growing")
        ranks.append(prev)
    return ranks


def generation_check(dims, gen_degrees, evaluate, sampler, F, D: int,
                     seed: int = 0, excess: int = 8) -> bool:
    """Monomials in the generators span the invariant space in each degree.

    ``dims[k-1]`` is the invariant dimension in degree k.  The monomials
    are invariant by construction, so equal rank means equal spaces.
    """
    ranks = generation_ranks(F, gen_degrees, evaluate, sampler, D, seed, excess)
    return all(r == d for r, d in zip(ranks, dims[:D]))


# -- exterior powers -----------------------------------------------------------------

def _elements(M: MatrixGroup, cap: int = 10 ** 5) -> list:
    if M.elements is not None:
        return M.elements
    if not M.generators:
        raise EnumerationMissing("no elements and no generators")
    try:
        return M.enumerate(cap)
    except CapExceeded as exc:
        raise EnumerationMissing(str(exc)) from exc


def exterior_average(M: MatrixGroup, s: int) -> int:
    """(1/|G|) sum_g det(1 + s g^{-1}) in the field of M."""
    F = M.F
    elems = _elements(M)
    if len(elems) % F.p == 0:
        raise BadCharacteristic(f"|G|={len(elems)} divisible by {F.p}")
    I = linalg.identity(M.n, F)
    acc = 0
    for g in elems:
        gi = linalg.inverse(g, F)
        acc = F.add(acc, linalg.det(linalg.add(I, linalg.scale(gi, s, F), F), F))
    return F.div(acc, F.coerce(len(elems)))


def exterior_invariants_check(M: MatrixGroup, n: int | None = None) -> bool:
    """Average of det(1 + s g^{-1}) equals 1 + s^n, tested at 2n+1 values."""
    F = M.F
    n = M.n if n is None else n
    if F.q <= 2 * n:
        raise BadCharacteristic("field too small to determine the polynomial")
    for s in range(2 * n + 1):
        sv = F.coerce(s)
        if exterior_average(M, sv) != F.add(1, F.pow(sv, n)):
            return False
    return True


def conjugate_group(M: MatrixGroup, P) -> MatrixGroup:
    F = M.F
    Pi = linalg.inverse(P, F)
    conj = [linalg.matmul(linalg.matmul(P, g, F), Pi, F) for g in _elements(M)]
    return MatrixGroup(F, M.n, conj, conj)


def random_invertible(F, n: int, rng) -> np.ndarray:
    while True:
        P = linalg.asmat([[F.random(rng) for _ in range(n)] for _ in range(n)], F)
        if linalg.det(P, F):
            return P
