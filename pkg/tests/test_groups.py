from math import factorial

import numpy as np
import pytest

from ellinv.arith import NEG, ZETA3, curve_new, make_field, random_point, torsion_points
from ellinv.errors import (CapExceeded, IncompatibleJ, NoSplitEmbedding, NotNormal,
                           OrderDividesL)
from ellinv.groups import (apply, automorphism_group, compose,
                           enumerate_group, identity_element, inverse,
                           is_reflection_matrix, make_imprimitive, rank1,
                           read_generator_file, reduce_mod_split_prime,
                           transposition, embed, weyl_a)

F7 = make_field(7)
E7 = curve_new(F7, a6=1)          # j = 0, zeta3 = 2 in F_7
E13 = curve_new(make_field(13), a4=1, a6=1)


def _tuple(E, n, seed=0):
    rng = np.random.default_rng(seed)
    return tuple(random_point(E, rng) for _ in range(n))


def test_make_imprimitive_orders():
    G1 = automorphism_group(E7, 2)
    spec = make_imprimitive(2, G1, G1, E7)
    assert spec.declared_order == 8
    assert len(enumerate_group(spec)) == 8
    mu3 = automorphism_group(E7, 3)
    spec3 = make_imprimitive(3, mu3, [rank1()], E7)
    assert spec3.declared_order == factorial(3) * 9 * 1 == 54
    assert len(enumerate_group(spec3)) == 54
    for n in (2, 3, 4):
        s = make_imprimitive(n, [rank1()], [rank1()], E7)
        assert len(enumerate_group(s)) == factorial(n)


def test_make_imprimitive_errors():
    with pytest.raises(IncompatibleJ):
        make_imprimitive(2, automorphism_group(E13, 3), [rank1()], E13)
    # translations by 2-torsion do not commute with nothing missing, but
    # a subset that is not a subgroup is rejected
    with pytest.raises(NotNormal):
        make_imprimitive(2, [rank1(), rank1(ZETA3)], [rank1()], E7)


def test_enumerate_cap():
    spec3 = make_imprimitive(3, automorphism_group(E7, 3), [rank1()], E7)
    with pytest.raises(CapExceeded):
        enumerate_group(spec3, cap=10)


def test_group_axioms_on_enumeration():
    G1 = automorphism_group(E7, 3)
    spec = make_imprimitive(2, G1, G1, E7)
    elems = enumerate_group(spec)
    s = set(elems)
    assert identity_element(2) in s
    for g in elems:
        assert inverse(g, E7) in s
        for h in elems[:6]:
            assert compose(g, h, E7) in s


def test_apply_examples():
    xs = _tuple(E13, 3)
    assert apply(identity_element(3), xs, E13) == xs
    t = transposition(3, 0, 1)
    assert apply(t, xs, E13) == (xs[1], xs[0], xs[2])
    neg1 = embed(rank1(NEG), 3, 0)
    assert apply(neg1, xs, E13) == (E13.neg(xs[0]), xs[1], xs[2])


def test_apply_is_action():
    F = make_field(1009)
    E = curve_new(F, a6=1)
    G1 = automorphism_group(E, 3, translations=torsion_points(E, 2))
    H1 = G1
    spec = make_imprimitive(3, G1, H1, E)
    xs = _tuple(E, 3, 5)
    for g in spec.generators:
        for h in spec.generators:
            lhs = apply(compose(g, h, E), xs, E)
            rhs = apply(g, apply(h, xs, E), E)
            assert lhs == rhs


def test_is_reflection_matrix():
    assert is_reflection_matrix(np.array([[-1, 0], [0, 1]]) % (2 ** 31 - 1))
    assert not is_reflection_matrix(np.eye(2, dtype=np.int64))
    assert is_reflection_matrix(np.array([[0, 1], [1, 0]]))


def test_reduce_examples():
    spec = make_imprimitive(2, [rank1(ZETA3)] + [rank1(ZETA3 * ZETA3), rank1()],
                            [rank1(), rank1(ZETA3), rank1(ZETA3 * ZETA3)], E7)
    M = reduce_mod_split_prime(spec, 13)
    F = M.F
    mats = {tuple(m.ravel()) for m in M.generators}
    assert (0, 1, 1, 0) in mats  # the transposition
    # the rank-1 zeta3 generator on coordinate 1 becomes diag(r, 1), r = 3
    assert F.root_of_unity(3) == 3
    assert any(m[0, 0] in (3, 9) and m[1, 1] == 1 and m[0, 1] == 0
               for m in M.generators)
    assert make_field(7).root_of_unity(3) == 2
    with pytest.raises(NoSplitEmbedding):
        reduce_mod_split_prime(spec, 5)
    with pytest.raises(OrderDividesL):
        reduce_mod_split_prime(spec, 3)


def test_reduction_keeps_reflections():
    spec = make_imprimitive(3, automorphism_group(E7, 3), automorphism_group(E7, 3), E7)
    M = reduce_mod_split_prime(spec, 19)
    for g in M.generators:
        assert is_reflection_matrix(g, F=M.F)
    assert M.order == spec.declared_order


def test_weyl_a_order():
    for n in range(1, 5):
        assert weyl_a(n, 1009).order == factorial(n + 1)


def test_read_generator_file(tmp_path):
    path = tmp_path / "gens.txt"
    path.write_text("# swap\n0 1\n1 0\n\n-1 0\n0 1\n")
    M = read_generator_file(path, 7)
    assert M.order == 8  # B_2
    assert M.generators[1][0, 0] == 6
