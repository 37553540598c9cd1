"""Command-line driver: `ellinv verify <case> [options]` and `ellinv list`."""
from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone

from .certify.verify import CASES, full_verify, normalize_job
from .errors import ConfigError, EllinvError

SCHEMA = 1
EXIT = {"certified": 0, "consistent-uncertified": 0, "failed": 1}


def read_job_file(path) -> dict:
    """key=value lines; '#' starts a comment."""
    job = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(f"cannot read job file: {exc}") from exc
    with fh:
        for num, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{num}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            if not key:
                raise ConfigError(f"{path}:{num}: empty key")
            job[key.replace("-", "_")] = val
    return job


def list_cases() -> str:
    """Case registry with parameter schemas, in sorted order."""
    lines = []
    for name in sorted(CASES):
        params = " ".join(f"{k}={d!r}" for k, (_, d) in sorted(CASES[name].items()))
        lines.append(f"{name:<12} {params}".rstrip())
    return "\n".join(lines)


def _parse_params(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellinv",
                                 description="Verify invariant degrees of quotients "
                                             "of products of elliptic curves.")
    sub = ap.add_subparsers(dest="command")
    sub.add_parser("list", help="show the built-in cases")
    v = sub.add_parser("verify", help="run one verification job")
    v.add_argument("case", nargs="?", help="case name (or give --job)")
    v.add_argument("params", nargs="*", help="extra key=value parameters")
    v.add_argument("--job", help="key=value job file")
    v.add_argument("--seed", type=int)
    v.add_argument("--workers", type=int)
    v.add_argument("--max-degree", type=int, dest="max_degree")
    v.add_argument("--excess", type=int)
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--format", choices=("json", "text"))
    for key in ("n", "p", "m", "order", "family", "subset", "d", "lift",
                "lattice", "l", "group", "generators", "character"):
        v.add_argument(f"--{key}")
    return ap


def _job_from_args(args) -> dict:
    job = read_job_file(args.job) if args.job else {}
    if args.case:
        job["case"] = args.case
    job.update(_parse_params(args.params))
    skip = {"command", "case", "params", "job"}
    for key, val in vars(args).items():
        if key not in skip and val is not None:
            job[key] = val
    if "case" not in job:
        raise ConfigError("no case given")
    return job


def report_json(job: dict, report, timings: dict) -> dict:
    d = report.to_dict()
    return {"schema": SCHEMA, "job": job, "case": d["case"],
            "claimed_degrees": d["claimed_degrees"], "dims": d["dims"],
            "checks": d["checks"], "verdict": d["verdict"],
            "failed_stage": d["failed_stage"], "annotations": d["annotations"],
            "budgets": d["budgets"], "timings": timings}


def _table(rows, header) -> list:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    return [fmt.format(*header).rstrip()] + [fmt.format(*map(str, r)).rstrip()
                                              for r in rows]


def report_text(data: dict) -> str:
    out = [f"case {data['case']}  claimed degrees "
           f"{tuple(data['claimed_degrees']) or '-'}"]
    if data["dims"]:
        out += _table([[d["degree"], d["expected"], d["computed"], d["lower_bound"]]
                       for d in data["dims"]],
                      ["degree", "expected", "computed", "lower"])
    out += _table([[c["name"], c["status"], c["detail"]] for c in data["checks"]],
                  ["check", "status", "detail"])
    out.append(f"verdict {data['verdict']}"
               + (f" (failed at {data['failed_stage']})" if data["failed_stage"] else ""))
    return "\n".join(out)


def run(job: dict, out: str | None = None, fmt: str = "text", stream=None) -> int:
    """Run a job, write the report and return the exit code."""
    stream = stream or sys.stdout
    job = normalize_job(job)
    t0 = time.perf_counter()
    report = full_verify(job)
    elapsed = time.perf_counter() - t0
    timings = {"elapsed_s": round(elapsed, 3),
               "timestamp": datetime.now(timezone.utc).isoformat()}
    data = report_json(job, report, timings)
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    if fmt == "json":
        print(text, file=stream)
    else:
        print(report_text(data), file=stream)
    return EXIT[report.verdict]


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.command == "list":
        print(list_cases())
        return 0
    if args.command != "verify":
        ap.print_help()
        return 2
    try:
        job = _job_from_args(args)
        fmt = job.pop("format", None) or "text"
        out = job.pop("out", None)
        return run(job, out, fmt)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EllinvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
