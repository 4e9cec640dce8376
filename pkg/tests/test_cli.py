import csv
import io
import json
import os
import subprocess
import sys

import pytest

from sawlab.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_count_rows_and_values(capsys):
    code, out, _ = run(capsys, "count", "--model", "saw", "--n", "10")
    assert code == EXIT_OK
    table = rows(out)
    assert [int(r["n"]) for r in table] == list(range(1, 11))
    assert [int(r["count"]) for r in table][:5] == [4, 12, 36, 100, 284]


def test_count_json_and_output_file(capsys, tmp_path):
    target = tmp_path / "c.json"
    code, out, _ = run(capsys, "count", "--model", "sab", "--n", "6", "--format", "json", "--output", str(target))
    assert code == EXIT_OK and out == ""
    body = json.loads(target.read_text())
    assert body == json.loads(json.dumps(body))
    assert "17" in target.read_text()


def test_budget_gives_partial_output_and_exit_3(capsys):
    code, out, _ = run(capsys, "count", "--n", "12", "--budget", "1000")
    assert code == EXIT_CAP
    assert out.splitlines()[-1].startswith("# partial")
    exact = [line for line in out.splitlines()[1:] if not line.startswith("#")]
    assert exact == ["saw,z2,1,4", "saw,z2,2,12", "saw,z2,3,36"][: len(exact)]


@pytest.mark.parametrize(
    "argv",
    [
        ("count", "--model", "bogus"),
        ("count", "--n", "0"),
        ("nosuchcommand",),
        ("decompose",),
        ("decompose", "--walk", "NXN"),
        ("join", "--walk", "NNNNNNN", "--polygon", "ENWE"),
        ("join", "--walk", "NNNNNNN", "--polygon", "ENWS", "--height", "0"),
        ("observable", "--domain", "disc:3"),
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# counts\nmodel = sab\nn=4\n")
    code, out, _ = run(capsys, "count", "--config", str(cfg))
    assert code == EXIT_OK
    assert [r["model"] for r in rows(out)] == ["sab"] * 4
    code, out, _ = run(capsys, "count", "--config", str(cfg), "--n", "2", "--model", "hsw")
    assert [(r["model"], r["n"]) for r in rows(out)] == [("hsw", "1"), ("hsw", "2")]


@pytest.mark.parametrize("text", ["colour=red\n", "model=bogus\n", "no equals sign\n"])
def test_bad_config_is_a_usage_error(capsys, tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    code, _, _ = run(capsys, "count", "--config", str(cfg))
    assert code == EXIT_USAGE


def test_decompose_round_trip(capsys):
    code, out, _ = run(capsys, "decompose", "--walk", "NENNWWN")
    body = json.loads(out)
    assert code == EXIT_OK and body["roundtrip"] and body["bridge_list_valid"]
    code, out, _ = run(capsys, "decompose", "--walk", "NENNWWN", "--format", "csv")
    assert rows(out)[0]["steps"] == "NENNWWN"


def test_join_single_case(capsys):
    code, out, _ = run(capsys, "join", "--walk", "NNNNNNN", "--polygon", "ENWS")
    body = json.loads(out)
    assert code == EXIT_OK
    assert all(body["contract"].values())
    assert len(body["joined"]) == 7 + 20


def test_join_random_corpus(capsys):
    code, out, _ = run(capsys, "join", "--corpus", "random", "--count", "40", "--seed", "3")
    body = json.loads(out)
    assert code == EXIT_OK and body["cases"] == 40 and body["failed"] == {}


def test_observable_local_at_critical_point(capsys):
    code, out, _ = run(capsys, "observable", "--domain", "triangle:2", "--check", "local")
    assert code == EXIT_OK
    assert max(float(r["residual"]) for r in rows(out)) < 1e-9


def test_observable_off_critical_fails(capsys):
    code, out, _ = run(capsys, "observable", "--domain", "triangle:2", "--check", "local", "--x", "0.6")
    assert code == EXIT_FAIL
    assert max(float(r["residual"]) for r in rows(out)) > 1e-3


def test_observable_boundary_sum(capsys):
    code, out, _ = run(capsys, "observable", "--domain", "lambda:1", "--check", "boundary")
    assert code == EXIT_OK
    assert float(rows(out)[0]["abs"]) < 1e-9


def test_insertion_recovers_every_input(capsys):
    code, out, _ = run(capsys, "insertion", "--m", "4", "--lists", "1")
    table = rows(out)
    assert code == EXIT_OK and table
    assert all(r["truth_found"] == "True" for r in table)
    assert all(int(r["output_length"]) > int(r["input_length"]) for r in table)


def test_covers_commands(capsys):
    code, out, _ = run(capsys, "covers", "--check", "lemma", "--n", "1", "--length-cap", "16")
    assert code == EXIT_OK and rows(out)[0]["holds"] == "True"
    code, out, _ = run(capsys, "covers", "--check", "census", "--n-cap", "16")
    assert code == EXIT_OK
    assert {(r["n"], r["count"]) for r in rows(out)} == {("14", "3"), ("16", "4")}


def test_verify_all_smoke(capsys):
    code, out, _ = run(capsys, "verify-all", "--level", "smoke", "--only", "1,2,5")
    body = json.loads(out)
    assert code == EXIT_OK
    assert [c["clause"] for c in body["clauses"]] == ["1", "2", "5"]
    assert all(c["pass"] for c in body["clauses"])


def test_console_script_threads_env_is_byte_stable(tmp_path):
    outs = []
    for threads in ("1", "3"):
        env = dict(os.environ, SAWLAB_THREADS=threads)
        res = subprocess.run(
            [sys.executable, "-m", "sawlab.cli", "count", "--model", "hsw", "--n", "11"],
            capture_output=True, env=env, check=False,
        )
        assert res.returncode == 0, res.stderr
        outs.append(res.stdout)
    assert outs[0] == outs[1]
