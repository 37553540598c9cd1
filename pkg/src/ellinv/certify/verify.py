"""End-to-end verification jobs: group, dims per degree, Hilbert comparison,
generation, degree identities, common zeros, verdict."""
from __future__ import annotations

from math import comb, factorial

import numpy as np

from .. import linalg
from ..arith import curve_new, make_field, random_point
from ..errors import ConfigError, EllinvError, PoleHit
from ..groups import MatrixGroup, read_generator_file, weyl_a
from ..poly import MultiPoly, cone_common_zero_only_origin, grevlex, hilbert_from_degrees
from ..invariants.engine import SampleBudget, sample_rng
from ..invariants.families import (family_model, imprimitive_closed_form,
                                   imprimitive_invariants, imprimitive_moves,
                                   rank1_case, rank1_invariants, tuple_sampler)
from ..invariants.lattices import (an_coords, an_invariance_check,
                                   an_pushforward_dims, g2_degree3, g2_isogeny,
                                   linear_invariants, sum_zero_tuple)
from ..invariants import st12 as st12mod
from .checks import (CaseDescriptor, CertReport, conjugate_group,
                     degree_product_check, degree_product_sides,
                     exterior_invariants_check, generation_ranks,
                     random_invertible)
from .tables import verify_tables
from .weil import imprimitive_weil_crosscheck, read_character_file, weil_dims

# case -> {parameter: (type, default)}
CASES = {
    "rank1": {"order": (int, 6), "m": (int, 1), "p": (int, 1009), "k": (int, 0),
              "max_degree": (int, 12)},
    "imprimitive": {"family": (str, "mu2"), "n": (int, 3), "subset": (str, ""),
                    "d": (str, ""), "p": (int, 1009), "max_degree": (int, 4),
                    "excess": (int, 16), "workers": (int, 1)},
    "an": {"n": (int, 3), "p": (int, 1009), "max_degree": (int, 3),
           "trials": (int, 100), "excess": (int, 16)},
    "g2": {"lattice": (str, "degree3"), "p": (int, 1009), "max_degree": (int, 6)},
    "st12": {"p": (int, 13), "lift": (str, "torsor"), "max_degree": (int, 6)},
    "weil": {"group": (str, "A"), "n": (int, 2), "l": (str, "5"),
             "reduction_prime": (int, 0), "chi_degree": (int, 0),
             "generators": (str, ""), "character": (str, ""),
             "expected": (int, -1), "lift_twist": (int, 0)},
    "tables": {},
    "exterior": {"group": (str, "pm_identity"), "p": (int, 1009),
                 "generators": (str, ""), "conjugations": (int, 20)},
}
COMMON = {"seed": (int, 0), "excess": (int, 16), "workers": (int, 1),
          "max_degree": (int, 0)}


def normalize_job(job: dict) -> dict:
    """Fill defaults, coerce types and reject unknown keys."""
    case = job.get("case")
    if case not in CASES:
        raise ConfigError(f"unknown case {case!r}; choose from {sorted(CASES)}")
    schema = dict(COMMON)
    schema.update(CASES[case])
    out = {"case": case}
    for key, val in job.items():
        if key == "case":
            continue
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for case {case}")
        typ = schema[key][0]
        try:
            out[key] = typ(val)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{key}: cannot read {val!r} as {typ.__name__}") from exc
    for key, (_, default) in schema.items():
        out.setdefault(key, default)
    if out["max_degree"] == 0 and "max_degree" in CASES[case]:
        out["max_degree"] = CASES[case]["max_degree"][1]
    return out


def _int_list(text: str) -> tuple:
    text = text.replace(",", " ").replace("{", " ").replace("}", " ").strip()
    if text in ("", "none", "empty"):
        return ()
    if text == "all":
        return ("all",)
    return tuple(int(v) for v in text.split())


def _compare_dims(report: CertReport, degrees, dims, lower=None, start: int = 1):
    """Record per-degree dims against the Hilbert function of ``degrees``."""
    D = start + len(dims) - 1
    h = hilbert_from_degrees(list(degrees), D)
    ok = True
    for i, c in enumerate(dims):
        k = start + i
        lo = c if lower is None else lower[i]
        report.add_dim(k, h[k], c, lo)
        ok &= h[k] == c == lo
    report.add("hilbert", ok, f"claimed degrees {tuple(degrees)} up to {D}")
    return ok


def _degree_product(report: CertReport, case: CaseDescriptor):
    lhs, rhs = degree_product_sides(case)
    report.add("degree_product", degree_product_check(case),
               f"gcd(d)|G| = {lhs}, chi n! prod d = {rhs}")


# -- cases ---------------------------------------------------------------------

def _rank1(job, report):
    case = rank1_case(job["order"], job["m"], job["p"], job["k"] or None)
    F = case.F
    D = job["max_degree"]
    report.claimed_degrees = case.degrees
    dims = [rank1_invariants(case, k).dim for k in range(1, D + 1)]
    _compare_dims(report, case.degrees, dims)
    E = case.E

    def evaluate(P):
        if P.x is None:
            raise PoleHit("identity")
        return [1, case.generator_function(P)]
    ranks = generation_ranks(F, case.degrees, evaluate, lambda rng: random_point(E, rng),
                             D, job["seed"], job["excess"])
    report.add("generation", ranks == dims, f"ranks {ranks}")
    _degree_product(report, CaseDescriptor(f"mu{case.order}", case.order, case.m,
                                           case.degrees))
    report.budgets["field"] = f"F_{F.p}^{F.k}"


def _parse_subset(job, M):
    S = _int_list(job["subset"])
    if S == ("all",):
        S = tuple(range(1, len(M.u) + 1))
    d = _int_list(job["d"])
    return S, (d or None)


def _imprimitive(job, report):
    M = family_model(job["family"], job["p"])
    S, d = _parse_subset(job, M)
    cf = imprimitive_closed_form(job["n"], job["family"], S, model=M, d=d)
    F = M.F
    D = job["max_degree"]
    report.claimed_degrees = cf.degrees
    report.annotations.append(f"generators {', '.join(cf.labels)}")
    budget = SampleBudget(excess=job["excess"], q=F.q)
    dims, used = [], 0
    for k in range(1, D + 1):
        inv = imprimitive_invariants(cf, k, job["seed"], budget, job["workers"])
        dims.append(inv.dim)
        used += inv.samples_used
    sampler = tuple_sampler(M.E, cf.n)
    lower = generation_ranks(F, cf.degrees, cf.evaluate, sampler, D,
                             job["seed"], job["excess"])
    _compare_dims(report, cf.degrees, dims, lower)
    report.add("generation", lower == dims, f"closed-form ranks {lower}")
    report.add("containment", _closed_form_invariant(cf, job["seed"]),
               "closed-form generators satisfy every move")
    chi = M.deg_D ** cf.n
    _degree_product(report, CaseDescriptor(f"G_{cf.n}({job['family']})",
                                           cf.effective_order, chi, cf.degrees))
    report.budgets.update({"bootstrap_samples": used, "excess": job["excess"],
                           "failure_bound": budget.failure_bound()})


def _closed_form_invariant(cf, seed: int, trials: int = 8) -> bool:
    M = cf.model
    F = M.F
    sampler = tuple_sampler(M.E, cf.n)
    for mi, mv in enumerate(imprimitive_moves(cf)):
        done = idx = 0
        while done < trials and idx < 100 * trials:
            xs = sampler(sample_rng(seed, 900 + mi, idx))
            idx += 1
            try:
                a, b = cf.evaluate(mv.fwd(xs)), cf.evaluate(xs)
            except (PoleHit, ZeroDivisionError):
                continue
            for v, w, deg in zip(a, b, cf.degrees):
                if v != F.mul(F.pow(mv.scalar, deg), w):
                    return False
            done += 1
    return True


def _curve(p: int, a4: int = 1, a6: int = 1):
    return curve_new(make_field(p), a4=a4, a6=a6)


def _an(job, report):
    n, D = job["n"], job["max_degree"]
    E = _curve(job["p"])
    F = E.ctx
    degrees = (1,) * (n + 1)
    report.claimed_degrees = degrees
    report.add("invariance", an_invariance_check(E, n, job["trials"], job["seed"]),
               f"{job['trials']} sum-zero tuples")
    dims = an_pushforward_dims(E, n, D, job["seed"], job["excess"])
    _compare_dims(report, degrees, dims)
    ranks = generation_ranks(F, degrees, lambda pts: list(an_coords(E, pts)),
                             lambda rng: sum_zero_tuple(E, n, rng), D,
                             job["seed"], job["excess"])
    report.add("generation", ranks == dims, f"ranks {ranks}")
    _degree_product(report, CaseDescriptor(f"A_{n}", factorial(n + 1), n + 1, degrees))
    x = MultiPoly.gens(F, n + 1)
    report.add("common_zero", cone_common_zero_only_origin(x, grevlex()),
               f"coordinates on P^{n}")


def _g2(job, report):
    D = job["max_degree"]
    if job["lattice"] == "degree3":
        E = _curve(job["p"])
        group, chi, claimed = g2_degree3(E), 3, (1, 1, 2)
    elif job["lattice"] == "isogeny":
        if job["p"] % 3 == 0:
            raise ConfigError("isogeny lattice needs p != 3")
        E = _curve(job["p"], a4=0, a6=1)
        T0 = E.point(0, 1)
        group, chi, claimed = g2_isogeny(E, T0), 1, (1, 2, 3)
    else:
        raise ConfigError(f"lattice must be degree3 or isogeny, not {job['lattice']!r}")
    report.claimed_degrees = claimed
    q = linear_invariants(group, D)
    _compare_dims(report, claimed, q.dims)
    report.add("generation", q.generated == q.dims and q.gen_degrees == claimed,
               f"minimal generators in degrees {q.gen_degrees}")
    report.add("common_zero", cone_common_zero_only_origin(q.generators, grevlex()),
               "generators on P^2")
    _degree_product(report, CaseDescriptor("G_2", 12, chi, claimed))
    report.annotations.append(f"residual linear group of order {group.order}")


def _st12(job, report):
    K = st12mod.st12_kummer(job["p"])
    name, D = job["lift"], job["max_degree"]
    if name not in st12mod.LIFTS:
        raise ConfigError(f"lift must be one of {st12mod.LIFTS}")
    L = K.lift(name)
    report.claimed_degrees = L.degrees
    pts = st12mod.singular_points(K)
    report.add("singular_points", len(pts) == 16 and
               all(st12mod.is_singular_point(K, P) for P in pts),
               f"{len(pts)} nodes in the orbit of (i:1:1:1)")
    report.add("relation", st12mod.relation_identity(K, name),
               "lifted quartic equals the e-form")
    dims = st12mod.invariant_dims(K, name, D)
    expected = st12mod.expected_dims(name, D)
    ok = True
    for k, (c, e) in enumerate(zip(dims, expected), start=1):
        report.add_dim(k, e, c)
        ok &= c == e
    report.add("hilbert", ok, f"{L.polarization} grading, degrees {L.degrees}")
    gen = st12mod.generated_dims(K, name, D)
    report.add("generation", gen == dims, f"ranks {gen}")
    report.add("common_zero", st12mod.common_zero_check(K, name),
               f"{len(L.zero_set)} forms on P^3")
    chi = 4 if name == "fixed" else 1
    _degree_product(report, CaseDescriptor("ST12", 48, chi, L.degrees))


def _weil(job, report):
    ls = _int_list(job["l"])
    if not ls or ls == ("all",):
        raise ConfigError("l must list one or more primes")
    red = job["reduction_prime"] or None
    if job["group"] == "A":
        n = job["n"]
        group = weyl_a(n, red or 1009)
        chi_deg = job["chi_degree"] or n + 1
        for l in ls:
            r = weil_dims(group, (l,), chi_degree=chi_deg)
            _weil_row(report, f"l={l}", r, comb(n + l, n))
    elif job["group"] == "mu2":
        cf = imprimitive_closed_form(job["n"], "mu2", ())
        for l in ls:
            x = imprimitive_weil_crosscheck(cf, l)
            status = "flagged" if x.flags and x.trace_dim == x.weil_dim else None
            report.add(f"crosscheck l={l}", x.trace_dim == x.weil_dim,
                       f"trace average {x.trace_dim}, formula {x.weil_dim}, "
                       f"|G|={x.order}", status=status)
            report.add_dim(l, x.trace_dim, x.weil_dim)
    elif job["group"] == "file":
        if not job["generators"]:
            report.add("weil", None, "no generator file supplied", status="skipped")
            report.exact = False
            return
        group = read_generator_file(job["generators"], red or ls[0])
        chi = read_character_file(job["character"]) if job["character"] else None
        r = weil_dims(group, ls, chi=chi, chi_degree=job["chi_degree"] or 1,
                      lift_twist=bool(job["lift_twist"]))
        exp = job["expected"] if job["expected"] >= 0 else r.dim
        _weil_row(report, "l=" + "*".join(map(str, ls)), r, exp)
    else:
        raise ConfigError("weil group must be A, mu2 or file")


def _weil_row(report, label, r, expected):
    deg = int(np.prod([int(v) for v in label[2:].split("*")]))
    ok = r.dim == expected
    status = "flagged" if ok and r.flags else None
    report.add(f"weil {label}", ok, f"dim {r.dim}, expected {expected}"
               + (f", flags {','.join(r.flags)}" if r.flags else ""), status=status)
    report.add_dim(deg, expected, r.dim, None if not r.lower_bound else 0)
    if r.lower_bound:
        report.exact = False


def _exterior_group(job) -> MatrixGroup:
    F = make_field(job["p"])
    neg = F.neg(1)
    named = {
        "pm_identity": [[[neg, 0], [0, neg]]],
        "rot4": [[[0, neg], [1, 0]]],
        "trivial": [],
    }
    if job["group"] == "file":
        if not job["generators"]:
            raise ConfigError("exterior group=file needs generators=PATH")
        return read_generator_file(job["generators"], job["p"])
    if job["group"] not in named:
        raise ConfigError(f"exterior group must be one of {sorted(named)} or file")
    gens = [linalg.asmat(g, F) for g in named[job["group"]]]
    if not gens:
        I = linalg.identity(2, F)
        return MatrixGroup(F, 2, [I], [I])
    return MatrixGroup(F, 2, gens)


def _exterior(job, report):
    M = _exterior_group(job)
    M.elements = M.elements or M.enumerate()
    base = exterior_invariants_check(M)
    report.add("exterior", base, f"|G'|={len(M.elements)}, n={M.n}")
    agree = 0
    for t in range(job["conjugations"]):
        P = random_invertible(M.F, M.n, sample_rng(job["seed"], 950, t))
        agree += exterior_invariants_check(conjugate_group(M, P)) == base
    report.add("conjugation_invariance", agree == job["conjugations"],
               f"{agree}/{job['conjugations']} conjugates agree")


def _tables(job, report):
    t = verify_tables()
    report.checks.extend(t.checks)


RUNNERS = {"rank1": _rank1, "imprimitive": _imprimitive, "an": _an, "g2": _g2,
           "st12": _st12, "weil": _weil, "tables": _tables, "exterior": _exterior}


def full_verify(job: dict) -> CertReport:
    """Run one job; component errors become a failed stage in the report."""
    job = normalize_job(job)
    report = CertReport(job["case"])
    try:
        RUNNERS[job["case"]](job, report)
    except ConfigError:
        raise
    except EllinvError as exc:
        report.add("error", False, f"{type(exc).__name__}: {exc}")
    return report
