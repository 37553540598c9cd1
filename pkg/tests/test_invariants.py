from fractions import Fraction
from math import comb

import numpy as np
import pytest

from ellinv import linalg
from ellinv.arith import NEG, ZETA3, auto_apply, curve_new, make_field, random_point
from ellinv.errors import (BadCharacteristic, EnumerationMissing,
                           NonIntegralEndomorphism, NotAdditiveSubgroup,
                           RootOfUnityMissing, WrongModel)
from ellinv.groups import embed, enumerate_group, rank1
from ellinv.invariants import (Action, FunctionSpace, PolySpace, RationalEndo,
                               SampleBudget, bootstrap_invariants, curve_action,
                               evaluate_basis, quasi_isogeny_sample,
                               reynolds_invariants, sample_rng)
from ellinv.invariants.additive import (additive_quotient_invariants,
                                        generated_dim, invariant_dim,
                                        is_invariant)
from ellinv.invariants.engine import (batched_rank, binomial_tolerance,
                                      span_failure_bound, span_failure_frequency)
from ellinv.invariants.families import (ambient, exact_dim, family_model,
                                        imprimitive_closed_form,
                                        imprimitive_invariants, rank1_case,
                                        rank1_invariants, tuple_sampler)
from ellinv.invariants.lattices import (an_expected_dims, an_invariance_check,
                                        an_pushforward_dims, g2_degree3,
                                        g2_isogeny, linear_invariants)
from ellinv.invariants import st12
from ellinv.poly import hilbert_from_degrees

F = make_field(1009)
E = curve_new(F, a4=1, a6=1)


def _xy_space():
    def vals(P):
        return [1, P.x, P.y]
    return FunctionSpace(F, 3, vals, labels=["1", "x", "y"])


def _sampler(rng):
    return random_point(E, rng)


# -- reynolds --------------------------------------------------------------------

def test_reynolds_mu2_on_1_x_y():
    V = PolySpace(F, 3, lambda M: M)
    elems = [linalg.identity(3, F), linalg.asmat([[1, 0, 0], [0, 1, 0], [0, 0, -1]], F)]
    inv = reynolds_invariants(elems, V)
    assert inv.dim == 2 and inv.certified and inv.method == "reynolds"
    assert linalg.rank(np.vstack([inv.basis, linalg.asmat([[1, 0, 0], [0, 1, 0]], F)]),
                       F) == 2


def test_reynolds_trivial_group_is_ambient():
    V = PolySpace(F, 4, lambda M: M)
    assert reynolds_invariants([linalg.identity(4, F)], V).dim == 4


def test_reynolds_by_evaluation():
    neg = Action(E.neg, E.neg)
    inv = reynolds_invariants([Action(lambda P: P, lambda P: P), neg], _xy_space(),
                              sampler=_sampler)
    assert inv.dim == 2


def test_reynolds_errors():
    F3 = make_field(3)
    V = PolySpace(F3, 2, lambda M: M)
    I = linalg.identity(2, F3)
    with pytest.raises(BadCharacteristic):
        reynolds_invariants([I, I, I], V)
    with pytest.raises(EnumerationMissing):
        reynolds_invariants([], V)


def test_rank1_mu6_dims():
    case = rank1_case(6, 1, 1009)
    dims = [rank1_invariants(case, d).dim for d in range(1, 7)]
    assert dims == [1, 1, 1, 1, 1, 2]


@pytest.mark.parametrize("order", [2, 3, 4, 6])
def test_rank1_hilbert(order):
    for m in [m for m in range(1, order + 1) if order % m == 0]:
        case = rank1_case(order, m, 1009)
        h = hilbert_from_degrees([1, order // m], 12)
        assert [rank1_invariants(case, d).dim for d in range(1, 13)] == \
            [h[d] for d in range(1, 13)]


# -- bootstrap -------------------------------------------------------------------

def test_bootstrap_examples():
    neg = Action(E.neg, E.neg)
    V2 = FunctionSpace(F, 2, lambda P: [1, P.x])
    assert bootstrap_invariants(V2, [neg], _sampler).dim == 2
    inv = bootstrap_invariants(_xy_space(), [neg], _sampler)
    assert inv.dim == 2
    assert linalg.rank(np.vstack([inv.basis, linalg.asmat([[1, 0, 0], [0, 1, 0]], F)]),
                       F) == 2
    assert not inv.certified


def test_bootstrap_mu2_g3_degree1():
    cf = imprimitive_closed_form(3, "mu2")
    assert imprimitive_invariants(cf, 1).dim == 4


def test_bootstrap_monotone():
    neg = Action(E.neg, E.neg)
    small = SampleBudget(excess=1, q=F.q)
    big = SampleBudget(excess=24, q=F.q)
    a = bootstrap_invariants(_xy_space(), [neg], _sampler, small)
    b = bootstrap_invariants(_xy_space(), [neg], _sampler, big)
    assert b.dim <= a.dim


def test_bootstrap_workers_do_not_change_result():
    cf = imprimitive_closed_form(3, "mu2")
    a = imprimitive_invariants(cf, 2, seed=3, workers=1)
    b = imprimitive_invariants(cf, 2, seed=3, workers=3)
    assert np.array_equal(a.basis, b.basis)


def test_bootstrap_agrees_with_reynolds():
    M = family_model("mu3", 1009)
    cf = imprimitive_closed_form(2, "mu3", (), model=M)
    elems = [curve_action(g, M.E) for g in enumerate_group(cf.spec())]
    for k in (1, 2):
        V = ambient(M, 2, k)
        r = reynolds_invariants(elems, V, degree=k, sampler=tuple_sampler(M.E, 2))
        b = imprimitive_invariants(cf, k)
        assert r.dim == b.dim
        assert linalg.rank(np.vstack([r.basis, b.basis]), M.F) == r.dim


def test_closed_form_products_lie_in_bootstrap_space():
    cf = imprimitive_closed_form(3, "mu2")
    k = 2
    inv = imprimitive_invariants(cf, k)
    Fm = cf.model.F
    sampler = tuple_sampler(cf.model.E, 3)
    rows, target = [], []
    idx = 0
    while len(rows) < inv.dim + 10:
        xs = sampler(sample_rng(0, 42, idx))
        idx += 1
        try:
            rows.append(evaluate_basis(inv, xs))
            g = cf.evaluate(xs)
        except Exception:
            rows = rows[:len(target)]
            continue
        target.append(Fm.mul(g[0], g[1]))
    B = np.array(rows)
    assert linalg.rank(np.hstack([B, linalg.asmat(target, Fm).reshape(-1, 1)]), Fm) \
        == linalg.rank(B, Fm)


# -- quasi-isogeny samples -----------------------------------------------------------

def test_quasi_isogeny_samples():
    rng = np.random.default_rng(0)
    xs = (random_point(E, rng), random_point(E, rng))
    g2 = embed(rank1(NEG), 2, 0)
    assert quasi_isogeny_sample(xs, g2, 1, E) == (xs, (E.neg(xs[0]), xs[1]))
    a, b = quasi_isogeny_sample(xs, g2, 2, E)
    assert a[0] == E.mul(2, xs[0]) and b[0] == E.neg(E.mul(2, xs[0]))


def test_quasi_isogeny_thirds():
    E0 = curve_new(F, a6=1)
    rng = np.random.default_rng(1)
    xs = (random_point(E0, rng), random_point(E0, rng))
    third = Fraction(1, 3)
    g = RationalEndo((((third, 0), (0, third)), ((0, 0), (1, 0))), ZETA3)
    Nx, Ngx = quasi_isogeny_sample(xs, g, 3, E0)
    assert Ngx[0] == E0.add(xs[0], auto_apply(ZETA3, E0, xs[1]))
    assert Ngx[1] == E0.mul(3, xs[1])
    with pytest.raises(NonIntegralEndomorphism):
        quasi_isogeny_sample(xs, g, 1, E0)


# -- closed forms ------------------------------------------------------------------

def test_closed_form_mu2_relations():
    M = family_model("mu2", 1009)
    lam = M.params["lambda"]
    # u_j^2 = alpha T + beta U: U, T, T - U, T - lambda U
    assert M.relations == ((0, 1), (1, 0), (1, M.F.neg(1)), (1, M.F.neg(lam)))
    cf = imprimitive_closed_form(3, "mu2", model=M)
    assert cf.degrees == (1, 1, 1, 1)


def test_closed_form_mu2_degrees_all_subsets():
    from itertools import combinations
    M = family_model("mu2", 1009)
    for r in range(5):
        for S in combinations(range(1, 5), r):
            cf = imprimitive_closed_form(3, "mu2", S, model=M)
            assert sorted(cf.degrees) == sorted([1] * (4 - r) + [2] * r)


def test_closed_form_mu3():
    M = family_model("mu3", 1009)
    cf = imprimitive_closed_form(2, "mu3", model=M)
    assert cf.degrees == (1, 1, 1)
    (a1, b1), (a2, b2), (a3, b3) = M.relations
    assert (a1, b1) == (0, 1) and (a2, b2) == (1, 0)
    # third cube is a combination of U and T with both coefficients nonzero
    assert a3 and b3
    cf3 = imprimitive_closed_form(3, "mu3", model=M)
    assert sorted(cf3.degrees) == [1, 1, 1, 3]


def test_closed_form_errors():
    with pytest.raises(WrongModel):
        imprimitive_closed_form(2, "mu2")
    with pytest.raises(RootOfUnityMissing):
        family_model("mu3", 1019, k=1)


def test_exact_dim_matches_bootstrap():
    M = family_model("mu2", 1009)
    cf = imprimitive_closed_form(3, "mu2", (1,), model=M)
    for k in (1, 2):
        assert exact_dim(M, 3, k, cf.hhat) == imprimitive_invariants(cf, k).dim \
            == cf.hilbert(k)[k]


# -- additive quotients -------------------------------------------------------------

def test_additive_trivial_group():
    F3 = make_field(3)
    A = additive_quotient_invariants([F3.elem(0)], 2, 3)
    assert A.degrees == (1, 2, 2, 2)


def test_additive_prime_field():
    F9 = make_field(3, 2)
    A = additive_quotient_invariants([F9.elem(c) for c in range(3)], 1, 2)
    assert A.degrees == (1, 1, 3)
    assert A.q.terms == {(3,): 1, (1,): F9.neg(1)}
    for g in A.generators:
        assert is_invariant(A, g)
    h = A.hilbert(6)
    for k in range(1, 5):
        assert invariant_dim(A, k) == generated_dim(A, k) == h[k]


def test_additive_rejects_non_subgroup():
    F9 = make_field(3, 2)
    with pytest.raises(NotAdditiveSubgroup):
        additive_quotient_invariants([F9.elem(0), F9.elem(1)], 1, 2)


# -- A_n and G_2 -----------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_an(n):
    assert an_invariance_check(E, n, trials=20)
    assert an_pushforward_dims(E, n, 3) == an_expected_dims(n, 3) == \
        [comb(n + d, n) for d in (1, 2, 3)]


def test_g2_lattices():
    q = linear_invariants(g2_degree3(E), 6)
    assert q.gen_degrees == (1, 1, 2) and q.dims == q.hilbert((1, 1, 2))
    E0 = curve_new(F, a6=1)
    q2 = linear_invariants(g2_isogeny(E0, E0.point(0, 1)), 6)
    assert q2.gen_degrees == (1, 2, 3) and q2.dims == q2.hilbert((1, 2, 3))
    assert q2.group.order == 6


# -- ST_12 -----------------------------------------------------------------------------

def test_st12_singular_points():
    K = st12.st12_kummer(13)
    assert st12.is_singular_point(K, (K.i, 1, 1, 1))
    pts = st12.singular_points(K)
    assert len(pts) == 16 and all(st12.is_singular_point(K, P) for P in pts)


@pytest.mark.parametrize("p", [13, 29])
def test_st12_relations(p):
    K = st12.st12_kummer(p)
    assert st12.relation_identity(K, "fixed")
    assert st12.relation_identity(K, "torsor")
    assert st12.torsor_relation_identity(K)
    assert st12.fixed_forces_e4(K)
    assert st12.common_zero_check(K, "fixed")


def test_st12_dims():
    K = st12.st12_kummer(13)
    for name in st12.LIFTS:
        dims = st12.invariant_dims(K, name, 6)
        assert dims == st12.generated_dims(K, name, 6) == st12.expected_dims(name, 6)
    assert st12.expected_dims("torsor", 6) == [1, 2, 3, 4, 5, 7]


def test_st12_bad_primes():
    with pytest.raises(BadCharacteristic) as e2:
        st12.st12_kummer(2)
    with pytest.raises(BadCharacteristic) as e5:
        st12.st12_kummer(5)
    assert e2.value.code != e5.value.code
    with pytest.raises(RootOfUnityMissing):
        st12.st12_kummer(7)


# -- random span lemma ------------------------------------------------------------------

def test_batched_rank_matches_linalg():
    rng = np.random.default_rng(0)
    A = rng.integers(0, 5, size=(30, 5, 4))
    F5 = make_field(5)
    assert list(batched_rank(A, 5)) == [linalg.rank(a, F5) for a in A]


@pytest.mark.parametrize("q,n", [(3, 0), (3, 2), (5, 1)])
def test_span_frequency_under_bound(q, n):
    trials = 20000
    freq = span_failure_frequency(q, 4, n, trials, seed=1)
    bound = span_failure_bound(q, n)
    assert freq <= binomial_tolerance(bound, trials)
