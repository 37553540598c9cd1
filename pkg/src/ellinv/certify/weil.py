"""Dimensions of invariant sections in degrees that are products of split
primes, from kernel dimensions and the character on degree-1 sections."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

import numpy as np

from .. import linalg
from ..errors import InvalidInput, NonIntegralResult
from ..groups import (GroupSpec, MatrixGroup, _key, compose, enumerate_group,
                      identity_element, rank1, reduce_mod_split_prime)
from ..invariants.engine import sample_rng


@dataclass
class WeilResult:
    dim: int
    flags: tuple = ()
    lower_bound: bool = False
    exact: Fraction | None = None


def kernel_dims(M: MatrixGroup) -> list:
    """dim ker(g - 1) over the field of M for every enumerated element."""
    F = M.F
    I = linalg.identity(M.n, F)
    return [M.n - linalg.rank(linalg.sub(g, I, F), F) for g in M.enumerate()]


def check_class_function(M: MatrixGroup, chi, pairs: int = 32,
                         seed: int = 0) -> bool:
    """chi(h g h^-1) = chi(g) on random pairs."""
    F = M.F
    elems = M.enumerate()
    index = {_key(g): i for i, g in enumerate(elems)}
    rng = sample_rng(seed, 5000, 0)
    for _ in range(pairs):
        i, j = rng.integers(0, len(elems), size=2)
        g, h = elems[i], elems[j]
        c = linalg.matmul(linalg.matmul(h, g, F), linalg.inverse(h, F), F)
        if chi[index[_key(c)]] != chi[i]:
            return False
    return True


def weil_flags(order: int, primes, chi_degree: int) -> tuple:
    flags = []
    if any(order % l == 0 for l in primes):
        flags.append("l_divides_order")
    if any((2 * chi_degree) % l == 0 for l in primes):
        flags.append("l_divides_twice_degree")
    if len(set(primes)) != len(primes) or any(
            gcd(a, b) != 1 for i, a in enumerate(primes) for b in primes[i + 1:]):
        flags.append("primes_not_coprime")
    return tuple(flags)


def weil_dims(group, primes, chi=None, chi_degree: int = 1,
              reduction_prime: int | None = None, lift_twist: bool = False,
              check_chi: bool = True) -> WeilResult:
    """(1/|G|) sum_g (prod l_i)^{dim ker(g-1)} chi(g).

    ``group`` is a MatrixGroup over a good reduction prime (used only for
    kernel dimensions) or a GroupSpec, reduced at ``reduction_prime``
    (default: the first degree prime).  ``chi`` lists values aligned with
    the enumeration; None means the trivial character of degree
    ``chi_degree``.  With ``lift_twist`` the value is only a lower bound.
    """
    primes = tuple(int(l) for l in (primes if np.iterable(primes) else [primes]))
    if not primes:
        raise InvalidInput("need at least one degree prime")
    if isinstance(group, GroupSpec):
        group = reduce_mod_split_prime(group, reduction_prime or primes[0])
    elems = group.enumerate()
    if chi is None:
        chi = [chi_degree] * len(elems)
    elif len(chi) != len(elems):
        raise InvalidInput(f"{len(chi)} character values for {len(elems)} elements")
    else:
        chi_degree = int(chi[0])
    if check_chi and not check_class_function(group, chi):
        raise NonIntegralResult("character is not a class function")
    L = prod(primes)
    total = sum(Fraction(L) ** k * Fraction(c)
                for k, c in zip(kernel_dims(group), chi))
    val = total / len(elems)
    if val.denominator != 1 or val < 0:
        raise NonIntegralResult(f"formula gives {val}")
    return WeilResult(int(val), weil_flags(len(elems), primes, chi_degree),
                      lift_twist, val)


def read_character_file(path) -> list:
    """Lines "element-index value"; returns values ordered by index."""
    vals = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                i, v = line.split()
                vals[int(i)] = Fraction(v)
    if sorted(vals) != list(range(len(vals))):
        raise InvalidInput("character file must index elements 0..N-1")
    return [vals[i] for i in range(len(vals))]


# -- cross-check against exact traces on an imprimitive family --------------------

def _cycles(perm) -> list:
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = perm[j]
        out.append(c)
    return out


def _power(g, L, E):
    x = identity_element(g.n)
    for _ in range(L):
        x = compose(g, x, E)
    return x


def _lift(F, v: int) -> int:
    v = int(v)
    if F.k != 1:
        raise InvalidInput("trace lifting needs a prime field")
    return v if v <= F.p // 2 else v - F.p


def family_traces(M, k: int) -> dict:
    """Integer trace of each h in G1^ on L(kD), twist included."""
    from ..invariants.families import action_matrix
    F = M.F
    out = {}
    for h in M.ghat:
        A = action_matrix(M, h, k)
        s = F.pow(F.inv(h.scalars[0].root(F)), k)
        t = 0
        for i in range(A.shape[0]):
            t = F.add(t, int(A[i, i]))
        out[h] = _lift(F, F.mul(s, t))
    return out


@dataclass
class CrossCheck:
    order: int
    trace_dim: int
    weil_dim: int
    flags: tuple


def imprimitive_weil_crosscheck(cf, l: int) -> CrossCheck:
    """Exact trace average on Gamma(L^l)^{(x)n} against the Weil formula
    with chi_Theta the trace on Gamma(L)^{(x)n}.

    Kernel dimensions come from the linear parts (signed permutations for
    the mu_2 family: one fixed line per cycle whose signs multiply to +1).
    """
    M = cf.model
    if any(h.autos[0].order > 2 for h in M.ghat):
        raise InvalidInput("cross-check implemented for +-1 linear parts")
    E = M.E
    G = enumerate_group(cf.spec(), cap=10 ** 6)
    t1, tl = family_traces(M, 1), family_traces(M, l)
    trace_sum = Fraction(0)
    weil_sum = Fraction(0)
    for g in G:
        a, b, kdim = 1, 1, 0
        for c in _cycles(g.perm):
            gl = _power(g, len(c), E)
            i = c[0]
            h = rank1(gl.autos[i], gl.shifts[i], gl.scalars[i])
            a *= tl[h]
            b *= t1[h]
            kdim += gl.autos[i].t == 0
        trace_sum += a
        weil_sum += Fraction(l) ** kdim * b
    tdim, wdim = trace_sum / len(G), weil_sum / len(G)
    if tdim.denominator != 1 or wdim.denominator != 1:
        raise NonIntegralResult(f"averages {tdim}, {wdim}")
    chi = M.deg_D ** cf.n
    return CrossCheck(len(G), int(tdim), int(wdim),
                      weil_flags(len(G), (l,), chi))
