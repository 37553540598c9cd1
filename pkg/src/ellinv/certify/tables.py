"""Shipped degree tables and their arithmetic verification."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from math import factorial

from .checks import (CaseDescriptor, CertReport, canonical_degree_check,
                     degree_product_check, degree_product_sides)

TABLE_FILE = "tables_v1.json"


def load_tables() -> dict:
    with resources.files("ellinv.data").joinpath(TABLE_FILE).open() as fh:
        return json.load(fh)


@dataclass
class TableRow:
    kind: str
    case: CaseDescriptor
    torsor: bool = False
    table_chi: int | None = None
    canonical_flag: str = ""


def _label(group, chi, torsor):
    return f"{group} deg {chi}{'*' if torsor else ''}"


def table_rows(data: dict | None = None) -> list:
    data = load_tables() if data is None else data
    rows = []
    an = data["real"]["A_n"]
    lo, hi = an["n_range"]
    for n in range(lo, hi + 1):
        case = CaseDescriptor(f"A_{n}", factorial(n + 1), n + 1, (1,) * (n + 1),
                              ((2, n + 1),))
        rows.append(TableRow("real", case, table_chi=n))
    for r in data["real"]["rows"]:
        case = CaseDescriptor(r["group"], r["order"], r["chi"], tuple(r["degrees"]),
                              tuple(tuple(o) for o in r["orbits"]))
        rows.append(TableRow("real", case))
    for r in data["complex"]:
        case = CaseDescriptor(r["group"], r["order"], r["chi"], tuple(r["degrees"]),
                              tuple(tuple(o) for o in r["orbits"]))
        rows.append(TableRow("complex", case, r.get("torsor", False),
                             canonical_flag=r.get("canonical_flag", "")))
    return rows


def verify_row(row: TableRow) -> list:
    """(check name, status, detail) for one row."""
    c = row.case
    out = []
    if row.table_chi is not None and row.table_chi != c.chi:
        tab = CaseDescriptor(c.group, c.order, row.table_chi, c.degrees)
        lhs, rhs = degree_product_sides(tab)
        out.append(("degree_product_table_chi", "flagged",
                    f"table chi={row.table_chi}: {lhs} != {rhs}; "
                    f"identity forces chi={c.chi}"))
    lhs, rhs = degree_product_sides(c)
    out.append(("degree_product", "pass" if degree_product_check(c) else "fail",
                f"{lhs} vs {rhs}"))
    sd = sum(c.degrees)
    sk = sum((o - 1) * d for o, d in c.orbits)
    ok = canonical_degree_check(c)
    if ok:
        status = "pass"
    elif row.canonical_flag:
        status = "flagged"
    else:
        status = "fail"
    out.append(("canonical_degree", status, f"sum d={sd}, orbit sum={sk}"
                + (f"; {row.canonical_flag}" if status == "flagged" else "")))
    return out


def verify_tables(data: dict | None = None) -> CertReport:
    report = CertReport("tables")
    for row in table_rows(data):
        label = _label(row.case.group, row.table_chi or row.case.chi, row.torsor)
        for name, status, detail in verify_row(row):
            report.add(f"{row.kind}:{label}:{name}", None, detail, status=status)
    return report
