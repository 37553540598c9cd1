import io
import json
from math import comb

from ellinv.cli import list_cases, main, read_job_file, run


def _json(capsys, argv):
    code = main(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def _strip(d):
    d = dict(d)
    d.pop("timings")
    return d


def test_verify_tables(capsys):
    code, data = _json(capsys, ["verify", "tables"])
    assert code == 0
    assert any(c["name"].startswith("real:A_") and c["status"] == "flagged"
               for c in data["checks"])


def test_verify_an(capsys):
    code, data = _json(capsys, ["verify", "an", "--n", "3", "--p", "1009",
                                "--seed", "7"])
    assert code == 0 and data["verdict"] == "certified"
    for row in data["dims"]:
        assert row["computed"] == row["expected"] == comb(3 + row["degree"], 3)
    assert set(data["timings"]) == {"elapsed_s", "timestamp"}


def test_bad_key_exits_2(capsys):
    assert main(["verify", "an", "colour=red"]) == 2
    assert main(["verify", "an", "novalue"]) == 2
    assert main(["verify", "nosuch"]) == 2
    assert main(["verify", "--bogus-flag"]) == 2


def test_list_stable(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    names = [line.split()[0] for line in out.splitlines()]
    assert "st12" in names and "imprimitive" in names
    assert names == sorted(names)
    assert out.strip() == list_cases()


def test_json_deterministic(capsys):
    argv = ["verify", "imprimitive", "--family", "mu3", "--n", "2", "--seed", "3"]
    _, a = _json(capsys, argv)
    _, b = _json(capsys, argv)
    assert _strip(a) == _strip(b)


def test_out_file_and_job_file(tmp_path, capsys):
    job = tmp_path / "job.txt"
    job.write_text("# rank one\ncase = rank1\norder = 4\nm = 1\n")
    assert read_job_file(job) == {"case": "rank1", "order": "4", "m": "1"}
    out = tmp_path / "r.json"
    assert main(["verify", "--job", str(job), "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["schema"] == 1 and data["verdict"] == "certified"
    assert "verdict certified" in capsys.readouterr().out


def test_failure_exit_1(capsys):
    assert main(["verify", "exterior", "--group", "trivial"]) == 1
    assert main(["verify", "st12", "--p", "7"]) == 1


def test_run_stream():
    buf = io.StringIO()
    assert run({"case": "rank1", "order": "2", "m": "1"}, fmt="text", stream=buf) == 0
    assert "verdict certified" in buf.getvalue()
