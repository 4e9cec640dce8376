"""Acceptance suite: one printed PASS/FAIL line per criterion.

Criteria 1 to 10 read the desk-level verify-all report produced by the
console entry point with one worker; criterion 11 reruns it with 4 and 16
workers and compares bytes. Tolerances are pinned below.

Run alone with ``pytest -v -s tests/test_acceptance.py`` or skip with
``-m "not slow"``. Expect roughly five minutes on one core.
"""
import json
import math
import os
import subprocess
import sys
import time

import pytest

pytestmark = pytest.mark.slow

RESIDUAL_TOL = 1e-9
IDENTITY_TOL = 1e-8
CONTROL_FLOOR = 1e-3
GROWTH_TOL = 1e-12
PHASE_TOL = 1e-9
ORACLE_SECONDS = 300.0
MU_HEX = math.sqrt(2 + math.sqrt(2))

LINES = []


def report(n, ok, msg):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {msg}"
    LINES.append(line)
    print(line)
    assert ok, line


def _verify_all(threads, only=None):
    env = dict(os.environ, SAWLAB_THREADS=str(threads))
    argv = [sys.executable, "-m", "sawlab.cli", "verify-all", "--level", "desk", "--format", "json"]
    if only:
        argv += ["--only", only]
    t0 = time.perf_counter()
    res = subprocess.run(argv, capture_output=True, env=env, check=False)
    return res.returncode, res.stdout, time.perf_counter() - t0


@pytest.fixture(scope="module")
def desk_run():
    code, raw, seconds = _verify_all(1)
    body = json.loads(raw)
    return {"code": code, "raw": raw, "seconds": seconds, "clauses": {c["clause"]: c for c in body["clauses"]}}


def clause(desk_run, key):
    return desk_run["clauses"][key]


def test_criterion_01_oracle_equivalence(desk_run):
    c = clause(desk_run, "1")
    d = c["detail"]
    t0 = time.perf_counter()
    code, _, _ = _verify_all(1, only="1")
    seconds = time.perf_counter() - t0
    ok = c["pass"] and code == 0 and d["square_n"] == 12 and d["hex_n"] == 12 and not d["mismatches"]
    ok = ok and seconds < ORACLE_SECONDS
    report(1, ok, f"square n<=12, hex n<=12, mismatches={d['mismatches']}, {seconds:.1f}s < {ORACLE_SECONDS:.0f}s")


def test_criterion_02_bridge_decomposition(desk_run):
    d = clause(desk_run, "2")["detail"]
    ok = d["walks"] == 3793 and d["roundtrip_failures"] == d["height_violations"] == d["empty_violations"] == 0
    ok = ok and d["bp_len"] == 12
    report(2, ok, f"{d['walks']} half-space walks n<=9, round trip failures {d['roundtrip_failures']}, "
                  f"height violations {d['height_violations']}, empty-class violations {d['empty_violations']} (length<=12)")


def test_criterion_03_square_join(desk_run):
    d = clause(desk_run, "3")["detail"]
    ex, rnd = d["exhaustive"], d["random"]
    ok = ex["cases"] == 35 and rnd["cases"] == 10_000
    ok = ok and all(t["no_join"] == 0 and not t["failed"] and t["max_preimages"] <= 4 for t in (ex, rnd))
    report(3, ok, f"exhaustive {ex['cases']} cases, random {rnd['cases']} cases, failed clauses "
                  f"{ex['failed'] or rnd['failed'] or 'none'}, max preimages {max(ex['max_preimages'], rnd['max_preimages'])} <= 4")


def test_criterion_04_equal_gap_adjacency(desk_run):
    d = clause(desk_run, "4")["detail"]
    ok = d["n_max"] == 12 and d["violations"] == 0 and d["walks"] == 109642
    report(4, ok, f"{d['walks']} walks of length <=12, {d['adjacencies']} adjacencies, violations {d['violations']}")


def test_criterion_05_polygon_lower_bound(desk_run):
    rows = [r.split(",") for r in clause(desk_run, "5")["detail"]["rows"]]
    ok = [int(r[0]) for r in rows] == [1, 2, 3, 4, 5, 6] and all(r[-1] == "pass" for r in rows)
    ok = ok and [int(r[1]) for r in rows] == [1, 2, 7, 28, 124, 588]
    report(5, ok, f"n<=6 polygon counts {[int(r[1]) for r in rows]}, all rows pass")


def test_criterion_06_observable(desk_run):
    d = clause(desk_run, "6")["detail"]
    res = {k: float(v) for k, v in d["max_residual"].items()}
    ident = {k: float(v) for k, v in d["triangle_lhs_minus_1"].items()}
    ctrl = {k: float(v) for k, v in d["control_x_0.6"].items()}
    ok = len(res) == 5 and all(v < RESIDUAL_TOL for v in res.values())
    ok = ok and {"1", "2"} <= set(ident) and all(abs(v) <= IDENTITY_TOL for v in ident.values())
    ok = ok and all(v > CONTROL_FLOOR for v in ctrl.values())
    report(6, ok, f"max residual {max(res.values()):.1e} < {RESIDUAL_TOL}, identity |lhs-1| <= "
                  f"{max(abs(v) for v in ident.values()):.1e} <= {IDENTITY_TOL}, control {min(ctrl.values()):.4f} > {CONTROL_FLOOR}")


def test_criterion_07_honeycomb_growth(desk_run):
    d = clause(desk_run, "7")["detail"]
    slack = {k: float(v) for k, v in d["min_slack"].items()}
    ok = d["n_max"] == 14 and all(v >= -GROWTH_TOL for v in slack.values())
    report(7, ok, f"min over n<=14 of c_n^(1/n) - {MU_HEX:.6f}: {slack}")


def test_criterion_08_honeycomb_join(desk_run):
    d = clause(desk_run, "8")["detail"]
    n = d["cases"]
    ok = d["errors"] == 0 and d["delta_18"] == d["bridge"] == d["unique_decode"] == d["truth_found"] == n == 400
    report(8, ok, f"{n} cases: +18 exact {d['delta_18']}, bridge {d['bridge']}, unique decode {d['unique_decode']}")


def test_criterion_09_insertion(desk_run):
    d = clause(desk_run, "9")["detail"]
    n = d["runs"]
    ok = n > 0 and d["truth_found"] == d["length_exact"] == d["within_12_pow_K"] == n
    report(9, ok, f"{n} runs: truth recovered {d['truth_found']}, length exact {d['length_exact']}, "
                  f"within 12^K {d['within_12_pow_K']}, largest candidate set {d['max_candidates']}")


def test_criterion_10_covers(desk_run):
    c = clause(desk_run, "10")
    d = c["detail"]
    lemma = d["lemma"]
    ok = c["pass"] and set(lemma) == {"1", "2"} and all(v["holds"] for v in lemma.values())
    ok = ok and d["symmetry_failures"] == 0 and d["supermult_failures"] == 0
    ok = ok and float(d["phase_spread"]) < PHASE_TOL and float(d["phase_offset_error"]) < PHASE_TOL
    sides = ", ".join(f"n={k}: {v['lhs']} <= {v['rhs_lower_bound']}" for k, v in sorted(lemma.items()))
    report(10, ok, f"{sides}; census entries {d['census_entries']}, relation failures "
                   f"{d['symmetry_failures'] + d['supermult_failures']}, phase spread {d['phase_spread']}")


def test_criterion_11_determinism(desk_run):
    outs = {1: desk_run["raw"]}
    codes = {1: desk_run["code"]}
    for t in (4, 16):
        codes[t], outs[t], _ = _verify_all(t)
    same = outs[1] == outs[4] == outs[16]
    ok = same and all(c == 0 for c in codes.values())
    report(11, ok, f"desk reports at 1/4/16 workers byte-identical: {same} ({len(outs[1])} bytes), exit codes {codes}")
