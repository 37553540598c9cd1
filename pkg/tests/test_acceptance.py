"""Acceptance criteria 1-10, each timed and reported on one line."""
import time
from contextlib import contextmanager
from itertools import combinations
from math import comb, sqrt

import pytest

from conftest import ACCEPTANCE
from ellinv.arith import curve_new, make_field
from ellinv.certify import full_verify, imprimitive_weil_crosscheck, weil_dims
from ellinv.groups import weyl_a
from ellinv.invariants import imprimitive_closed_form
from ellinv.invariants.engine import span_failure_bound, span_failure_frequency
from ellinv.invariants.lattices import an_invariance_check
from ellinv.poly import hilbert_from_degrees


@contextmanager
def criterion(num: int, title: str, limit: float):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - t0
        status = "PASS" if elapsed < limit else "FAIL (too slow)"
        assert elapsed < limit, f"criterion {num} took {elapsed:.2f}s (limit {limit}s)"
    finally:
        elapsed = time.perf_counter() - t0
        line = f"criterion {num:>2} {status:<15} {elapsed:7.2f}s / {limit:g}s  {title}"
        ACCEPTANCE[num] = line
        print(line)


def _certified(job, degrees=None):
    r = full_verify(job)
    assert r.verdict == "certified", (job, [(c.name, c.status, c.detail)
                                            for c in r.checks if c.status != "pass"])
    if degrees is not None:
        assert sorted(r.claimed_degrees) == sorted(degrees), (job, r.claimed_degrees)
    return r


def _subsets(k):
    return [S for r in range(k + 1) for S in combinations(range(1, k + 1), r)]


def test_criterion_01_tables():
    with criterion(1, "table arithmetic", 1.0):
        r = full_verify({"case": "tables"})
        assert r.verdict == "certified"
        st = {c.name.split(":")[1]: c for c in r.checks
              if c.name.startswith("complex:") and c.name.endswith(":degree_product")}
        for g in ("ST4", "ST5", "ST8", "ST12", "ST24", "ST25", "ST26", "ST29",
                  "ST31", "ST32", "ST33", "ST34"):
            rows = [c for k, c in st.items() if k.split()[0] == g]
            assert rows and all(c.status == "pass" for c in rows), g
        real = [c for c in r.checks if c.name.startswith("real:")]
        assert all(c.status == "pass" for c in real if c.name.endswith("canonical_degree"))
        assert all(c.status == "pass" for c in real if c.name.endswith(":degree_product"))
        flags = [c for c in real if c.status == "flagged"]
        assert flags and all(c.name.startswith("real:A_") for c in flags)


def test_criterion_02_rank1():
    with criterion(2, "rank one quotients", 10.0):
        for order in (2, 3, 4, 6):
            for p in (1009, 10007):
                for m in (m for m in range(1, order + 1) if order % m == 0):
                    r = _certified({"case": "rank1", "order": order, "m": m, "p": p,
                                    "max_degree": 12}, (1, order // m))
                    h = hilbert_from_degrees([1, order // m], 12)
                    assert [d["computed"] for d in r.dims] == [h[k] for k in range(1, 13)]


def _imprimitive_dims_match(r, degrees, D):
    h = hilbert_from_degrees(degrees, D)
    assert [d["computed"] for d in r.dims] == [h[k] for k in range(1, D + 1)]
    assert all(d["lower_bound"] == d["computed"] for d in r.dims)


def test_criterion_03_mu2():
    with criterion(3, "imprimitive mu2, n=3, 16 subsets", 60.0):
        subsets = _subsets(4)
        assert len(subsets) == 16
        for S in subsets:
            degrees = (1,) * (4 - len(S)) + (2,) * len(S)
            r = _certified({"case": "imprimitive", "family": "mu2", "n": 3,
                            "subset": " ".join(map(str, S)), "max_degree": 4}, degrees)
            _imprimitive_dims_match(r, degrees, 4)
            assert any(c.name == "generation" and c.status == "pass" for c in r.checks)


def test_criterion_04_mu3():
    with criterion(4, "imprimitive mu3, n=2,3, all subsets", 60.0):
        assert 1009 % 3 == 1
        for n in (2, 3):
            for S in _subsets(3):
                degrees = (1,) * (3 - len(S)) + (3,) * (n - 2 + len(S))
                r = _certified({"case": "imprimitive", "family": "mu3", "n": n,
                                "subset": " ".join(map(str, S)), "max_degree": 4},
                               degrees)
                _imprimitive_dims_match(r, degrees, 4)


def test_criterion_05_mu4():
    with criterion(5, "imprimitive mu4, n=2, subgroup chains", 60.0):
        assert 1009 % 4 == 1
        for job, degrees in (({"d": ""}, (1, 1, 2)), ({"d": "1 2 1"}, (1, 2, 2)),
                             ({"subset": "all"}, None)):
            r = _certified({"case": "imprimitive", "family": "mu4", "n": 2,
                            "max_degree": 4, **job}, degrees)
            _imprimitive_dims_match(r, r.claimed_degrees, 4)


def test_criterion_06_an_g2():
    with criterion(6, "A_n and G2 quotients", 60.0):
        E = curve_new(make_field(1009), a4=1, a6=1)
        for n in range(1, 5):
            assert an_invariance_check(E, n, trials=100, seed=n)
            r = _certified({"case": "an", "n": n, "p": 1009, "max_degree": 3},
                           (1,) * (n + 1))
            assert [d["computed"] for d in r.dims] == [comb(n + d, n) for d in (1, 2, 3)]
        _certified({"case": "g2", "lattice": "degree3", "max_degree": 6}, (1, 1, 2))
        _certified({"case": "g2", "lattice": "isogeny", "max_degree": 6}, (1, 2, 3))


def test_criterion_07_st12():
    with criterion(7, "ST12 Kummer quartic", 30.0):
        for p in (13, 29):
            r = _certified({"case": "st12", "p": p, "lift": "fixed"}, (1, 2, 3))
            names = {c.name for c in r.checks}
            assert {"singular_points", "common_zero"} <= names, names
            r = _certified({"case": "st12", "p": p, "lift": "torsor"}, (1, 3, 8))
            assert "relation" in {c.name for c in r.checks}


def test_criterion_08_weil():
    with criterion(8, "Weil dimension oracle (core)", 10.0):
        for n in range(1, 5):
            G = weyl_a(n, 1009)
            for l in (5, 7, 11):
                assert weil_dims(G, (l,), chi_degree=n + 1).dim == comb(n + l, n)
        x = imprimitive_weil_crosscheck(imprimitive_closed_form(3, "mu2", ()), 5)
        assert x.trace_dim == x.weil_dim


def test_criterion_08_st33_stretch():
    r = full_verify({"case": "weil", "group": "file"})
    if any(c.status == "skipped" for c in r.checks):
        print("criterion  8 ST33 stretch target: skipped (no generator data)")
        pytest.skip("no ST33 generator data shipped")
    assert r.verdict != "failed"


def test_criterion_09_span_lemma():
    trials = 10 ** 5
    with criterion(9, "random span lemma", 10.0):
        for q, n in ((q, n) for q in (3, 5) for n in (0, 1, 2)):
            freq = span_failure_frequency(q, 4, n, trials, seed=100 * q + n)
            b = span_failure_bound(q, n)
            assert freq <= b + 3 * sqrt(b * (1 - b) / trials), (q, n, freq, b)


def test_criterion_10_exterior():
    with criterion(10, "exterior criterion", 1.0):
        for group, expect in (("pm_identity", "certified"), ("rot4", "certified"),
                              ("trivial", "failed")):
            r = full_verify({"case": "exterior", "group": group, "conjugations": 20})
            assert r.verdict == expect, group
            conj = next(c for c in r.checks if c.name == "conjugation_invariance")
            assert conj.status == "pass" and conj.detail.startswith("20/20")
