from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from ellinv import linalg
from ellinv.arith import make_field, random_point
from ellinv.certify import (CaseDescriptor, CertReport, canonical_degree_check,
                            degree_product_check, exterior_invariants_check,
                            full_verify, generation_check, load_tables,
                            table_rows, verify_tables, weil_dims)
from ellinv.certify.checks import (conjugate_group, generation_ranks,
                                   random_invertible)
from ellinv.certify.weil import (imprimitive_weil_crosscheck, read_character_file,
                                 weil_flags)
from ellinv.errors import (BadCharacteristic, EnumerationMissing, MissingOrbitData,
                           NoSplitEmbedding, NonIntegralResult, ConfigError)
from ellinv.groups import (MatrixGroup, automorphism_group, make_imprimitive,
                           weyl_a)
from ellinv.invariants import imprimitive_closed_form, rank1_case, rank1_invariants
from ellinv.arith import curve_new

# -- degree identities -------------------------------------------------------------


def test_degree_product_examples():
    assert degree_product_check(CaseDescriptor("G2", 12, 3, (1, 1, 2)))
    e8 = CaseDescriptor("E8", 696729600, 1, (1, 2, 2, 3, 3, 4, 4, 5, 6))
    assert factorial(8) * 1 * 2 * 2 * 3 * 3 * 4 * 4 * 5 * 6 == 696729600
    assert degree_product_check(e8)
    assert not degree_product_check(CaseDescriptor("x", 12, 3, (1, 1, 1)))


def test_degree_product_complex_rows():
    rows = {r.case.group: r.case for r in table_rows() if r.kind == "complex"}
    st32 = rows["ST32"]
    assert st32.order == 155520 == 9 * 24 * 720
    assert 39191040 == 1 * 720 * 54432
    for r in table_rows():
        if r.kind == "complex":
            assert degree_product_check(r.case), r.case


def test_canonical_examples():
    assert canonical_degree_check(CaseDescriptor("A3", 24, 4, (1, 1, 1, 1), ((2, 4),)))
    assert canonical_degree_check(CaseDescriptor(
        "E8", 696729600, 1, (1, 2, 2, 3, 3, 4, 4, 5, 6), ((2, 30),)))
    f4 = next(r.case for r in table_rows() if r.case.group == "F4" and r.case.chi == 4)
    assert sum(f4.degrees) == 9 and canonical_degree_check(f4)
    with pytest.raises(MissingOrbitData):
        canonical_degree_check(CaseDescriptor("G2", 12, 3, (1, 1, 2)))


def test_tables_report():
    data = load_tables()
    assert data["schema"] == 1
    rep = verify_tables()
    assert rep.verdict == "certified"
    flagged = [c.name for c in rep.checks if c.status == "flagged"]
    assert any(name.startswith("real:A_") for name in flagged)
    assert all(c.status == "pass" for c in rep.checks
               if c.name.startswith("real:") and "canonical" in c.name)
    for n in range(1, 9):
        assert degree_product_check(CaseDescriptor(f"A{n}", factorial(n + 1), n + 1,
                                                   (1,) * (n + 1)))
        assert not degree_product_check(CaseDescriptor(f"A{n}", factorial(n + 1), n,
                                                       (1,) * (n + 1)))


# -- report logic ----------------------------------------------------------------------

def test_report_verdicts():
    r = CertReport("x", (1,))
    r.add("a", True)
    r.add_dim(1, 1, 1)
    assert r.verdict == "certified"
    r.add_dim(2, 2, 2, lower=1)
    assert r.verdict == "consistent-uncertified"
    r.add("b", False, "bad")
    assert r.verdict == "failed" and r.failed_stage == "b"
    assert r.to_dict()["failed_stage"] == "b"


# -- generation ---------------------------------------------------------------------------

def _rank1_setup():
    case = rank1_case(6, 1, 1009)
    dims = [rank1_invariants(case, k).dim for k in range(1, 13)]
    E = case.E

    def sampler(rng):
        return random_point(E, rng)
    return case, dims, sampler


def test_generation_rank1_mu6():
    case, dims, sampler = _rank1_setup()
    ev = lambda P: [1, case.generator_function(P)]  # noqa: E731
    assert generation_check(dims, (1, 6), ev, sampler, case.F, 12)


def test_generation_fails_without_top_generator():
    case, dims, sampler = _rank1_setup()
    ranks = generation_ranks(case.F, (1,), lambda P: [1], sampler, 12)
    assert not generation_check(dims, (1,), lambda P: [1], sampler, case.F, 12)
    first_bad = next(k for k, (r, d) in enumerate(zip(ranks, dims), 1) if r != d)
    assert first_bad == 6


def test_generation_trivial_group():
    F = make_field(1009)

    def sampler(rng):
        return tuple(int(v) for v in rng.integers(0, F.p, size=3))
    dims = [comb(2 + k, 2) for k in range(1, 4)]
    assert generation_check(dims, (1, 1, 1), list, sampler, F, 3)


# -- Weil ------------------------------------------------------------------------------

def test_weil_s3():
    assert weil_dims(weyl_a(2, 1009), (5,), chi_degree=3).dim == 21 == comb(7, 2)


def test_weil_identity_group():
    F = make_field(1009)
    I = linalg.identity(3, F)
    G = MatrixGroup(F, 3, [I], [I])
    assert weil_dims(G, (7,), chi_degree=4).dim == 4 * 7 ** 3


def test_weil_flags_and_errors():
    r = weil_dims(weyl_a(2, 1009), (2,), chi_degree=3)
    assert r.dim == 6 and "l_divides_order" in r.flags
    assert weil_flags(6, (5, 5), 1) == ("primes_not_coprime",)
    E7 = curve_new(make_field(7), a6=1)
    mu3 = automorphism_group(E7, 3)
    spec = make_imprimitive(2, mu3, mu3, E7)
    with pytest.raises(NoSplitEmbedding):
        weil_dims(spec, (5,))
    with pytest.raises(NonIntegralResult):
        weil_dims(weyl_a(2, 1009), (5,), chi=[1, 0, 0, 0, 0, 0], check_chi=False)


def test_weil_an_binomials():
    for n in range(1, 5):
        G = weyl_a(n, 1009)
        for l in (5, 7, 11):
            assert weil_dims(G, (l,), chi_degree=n + 1).dim == comb(n + l, n)


def test_weil_mu2_crosscheck():
    cf = imprimitive_closed_form(3, "mu2")
    x = imprimitive_weil_crosscheck(cf, 5)
    assert x.trace_dim == x.weil_dim == 56


def test_character_file(tmp_path):
    p = tmp_path / "chi.txt"
    p.write_text("# index value\n0 2\n1 -1\n2 1/2\n")
    assert read_character_file(p) == [2, -1, Fraction(1, 2)]


# -- exterior criterion -----------------------------------------------------------------

def _group(F, gens):
    return MatrixGroup(F, 2, [linalg.asmat(g, F) for g in gens])


def test_exterior_examples():
    F = make_field(1009)
    m = F.neg(1)
    assert exterior_invariants_check(_group(F, [[[m, 0], [0, m]]]))
    assert exterior_invariants_check(_group(F, [[[0, m], [1, 0]]]))
    I = linalg.identity(2, F)
    assert not exterior_invariants_check(MatrixGroup(F, 2, [I], [I]))


def test_exterior_conjugation_invariance():
    F = make_field(1009)
    m = F.neg(1)
    rng = np.random.default_rng(0)
    for gens in ([[[m, 0], [0, m]]], [[[0, m], [1, 0]]], [[[0, 1], [1, 0]]]):
        G = _group(F, gens)
        base = exterior_invariants_check(G)
        for _ in range(5):
            P = random_invertible(F, 2, rng)
            assert exterior_invariants_check(conjugate_group(G, P)) == base


def test_exterior_errors():
    F3 = make_field(3)
    with pytest.raises(BadCharacteristic):
        exterior_invariants_check(_group(F3, [[[2, 0], [0, 2]]]))
    F = make_field(1009)
    with pytest.raises(EnumerationMissing):
        exterior_invariants_check(MatrixGroup(F, 2, []))


# -- full_verify ------------------------------------------------------------------------

def test_full_verify_examples():
    r = full_verify({"case": "imprimitive", "family": "mu2", "n": 3, "subset": ""})
    assert r.verdict == "certified" and r.claimed_degrees == (1, 1, 1, 1)
    r = full_verify({"case": "rank1", "order": 6, "m": 1, "p": 1009})
    assert r.verdict == "certified" and r.claimed_degrees == (1, 6)
    r = full_verify({"case": "st12", "p": 13, "lift": "torsor"})
    assert r.verdict == "certified" and r.claimed_degrees == (1, 3, 8)


def test_full_verify_certified_implies_checks():
    r = full_verify({"case": "an", "n": 2, "p": 1009})
    assert r.verdict == "certified"
    names = {c.name: c.status for c in r.checks}
    assert names["hilbert"] == names["generation"] == names["degree_product"] == "pass"
    assert names["common_zero"] == "pass"


def test_full_verify_failure_names_stage():
    r = full_verify({"case": "st12", "p": 7})
    assert r.verdict == "failed" and r.failed_stage == "error"
    r = full_verify({"case": "exterior", "group": "trivial"})
    assert r.failed_stage == "exterior"


def test_full_verify_rejects_bad_jobs():
    with pytest.raises(ConfigError):
        full_verify({"case": "nosuch"})
    with pytest.raises(ConfigError):
        full_verify({"case": "an", "colour": "red"})
    with pytest.raises(ConfigError):
        full_verify({"case": "an", "n": "three"})
