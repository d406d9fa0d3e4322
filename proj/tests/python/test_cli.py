"""End-to-end checks of the command line binary (cheap subcommands only)."""

import csv
import io
import json
import os
import subprocess

import pytest

CLI = os.environ.get("HOMGROWTH_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="HOMGROWTH_CLI not set")


def run(*args, check=True, env=None):
    full_env = dict(os.environ)
    full_env.pop("HOMGROWTH_CACHE_DIR", None)
    if env:
        full_env.update(env)
    p = subprocess.run([CLI, *args], capture_output=True, text=True, env=full_env)
    if check:
        assert p.returncode == 0, p.stderr
    return p


def test_library_listing():
    p = run("library")
    assert "cycle_" in p.stdout
    assert "rp2_flag" in p.stdout


def test_betti_csv_schema():
    p = run("betti", "--complex", "builtin:cycle_4", "--n", "2", "--field", "q")
    rows = list(csv.DictReader(io.StringIO(p.stdout)))
    assert [r["degree"] for r in rows] == ["0", "1", "2"]
    top = rows[-1]
    assert top["complex"] == "cycle_4"
    assert top["index"] == "16"
    assert top["n"] == "2"
    assert top["field"] == "q"
    assert top["betti"] == "25"
    assert top["normalized"] == "25/16=1.562500"
    assert top["target"] == "1"
    # timings never contaminate stdout
    assert "elapsed" not in p.stdout
    assert "elapsed" in p.stderr


def test_betti_json():
    p = run("betti", "--complex", "cycle_4", "--n", "3", "--out", "json")
    rows = json.loads(p.stdout)
    assert rows[2]["betti"] == 100
    assert rows[2]["normalized"] == "100/81"
    assert rows[2]["normalized_decimal"] == "1.234568"


def test_cover_scan():
    p = run("cover-scan", "--complex", "builtin:cycle_4", "--n", "1,2",
            "--field", "f:2")
    rows = list(csv.DictReader(io.StringIO(p.stdout)))
    assert len(rows) == 6
    assert rows[5]["normalized"].startswith("25/16")


def test_torsion_rows():
    p = run("torsion", "--complex", "builtin:cycle_4", "--n", "2", "--p", "2")
    rows = list(csv.DictReader(io.StringIO(p.stdout)))
    # q rows, f:2 rows, then t rows carrying t-values in the betti column
    fields = [r["field"] for r in rows]
    assert fields.count("q") == 3
    assert fields.count("f:2") == 3
    assert fields.count("t:2") == 3
    assert all(r["betti"] == "0" for r in rows if r["field"] == "t:2")


def test_davis_subcommand():
    p = run("davis", "--complex", "builtin:cycle_4", "--field", "q")
    rows = list(csv.DictReader(io.StringIO(p.stdout)))
    assert [r["betti"] for r in rows] == ["1", "2", "1"]
    assert rows[0]["index"] == "16"


def test_mv_check_json():
    p = run("mv-check", "--complex", "builtin:cycle_4", "--vertex", "c00",
            "--field", "f:2")
    rep = json.loads(p.stdout)
    assert rep["pass"] is True
    assert rep["alternating_sum_zero"] is True


def test_nerve_check_json():
    p = run("nerve-check", "--complex", "builtin:cycle_4", "--n", "2",
            "--field", "q")
    rep = json.loads(p.stdout)
    assert rep["coefficient_nerve_checked"] is True
    assert rep["rows"][2]["cover_normalized"] == "25/16"
    assert rep["rows"][2]["nerve_normalized"] == "1"


def test_complex_file_input(tmp_path):
    path = tmp_path / "tri.cplx"
    path.write_text("# a hollow triangle\na b\nb c\na c\n")
    p = run("betti", "--complex", str(path), "--n", "2", "--field", "q")
    rows = list(csv.DictReader(io.StringIO(p.stdout)))
    assert rows[0]["complex"] == "tri"
    assert rows[0]["index"] == "8"


def test_exit_codes():
    assert run("betti", "--no-such-flag", check=False).returncode == 1
    assert run("no-such-subcommand", check=False).returncode == 1
    assert run("betti", "--complex", "builtin:nope", check=False).returncode == 1
    p = run("betti", "--complex", "builtin:rp2_6", "--n", "2", "--budget", "5",
            check=False)
    assert p.returncode == 2  # budget exceeded


def test_cache_round_trip(tmp_path):
    args = ("betti", "--complex", "builtin:cycle_4", "--n", "2", "--cache-dir",
            str(tmp_path))
    first = run(*args)
    assert "cache hit" not in first.stderr
    second = run(*args)
    assert "cache hit" in second.stderr
    assert first.stdout == second.stdout
    assert list(tmp_path.glob("*.json"))
    # the env variable is honored too
    third = run("betti", "--complex", "builtin:cycle_4", "--n", "2",
                env={"HOMGROWTH_CACHE_DIR": str(tmp_path)})
    assert "cache hit" in third.stderr


def test_help_exits_zero():
    assert run("--help", check=False).returncode == 0
