"""Verification suites behind ``sawlab verify-all``.

Each suite returns a :class:`Clause` whose ``detail`` holds only values that
are reproducible from the inputs, never timings, so reports can be compared
byte for byte across runs and thread counts.
"""
from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import covers, enumerate as en, hwdecomp, insertion, observable, surgery
from .corpus import exhaustive_square_cases, random_hex_cases, random_square_cases
from .lattice import lambda_domain, triangle_domain
from .widepoly import kesten_check, wide_polygons

LEVELS = ("smoke", "desk")


@dataclass
class Clause:
    key: str
    title: str
    passed: bool
    detail: Dict[str, object] = field(default_factory=dict)

    def row(self) -> Dict[str, object]:
        return {"clause": self.key, "title": self.title, "pass": self.passed, "detail": self.detail}


def _sizes(level: str) -> dict:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    desk = level == "desk"
    return {
        "oracle_sq": 12 if desk else 8,
        "oracle_hex": 12 if desk else 8,
        "psi_n": 9 if desk else 6,
        "bp_len": 12 if desk else 8,
        "join_random": 10_000 if desk else 300,
        "lemma55": 12 if desk else 8,
        "kesten": 6 if desk else 4,
        "tri_k": (1, 2, 3) if desk else (1, 2),
        "lam_k": (1, 2) if desk else (1,),
        "hex_mu": 14 if desk else 10,
        "hex_cases": 400 if desk else 40,
        "ins_m": (4, 6, 8) if desk else (4,),
        "ins_K": (0, 1, 2, 3) if desk else (0, 1, 2),
        "cover_n": (1, 2) if desk else (1,),
        "census_cap": 28 if desk else 20,
    }


# ---------------------------------------------------------------- 1


def oracle_equivalence(n_sq: int = 12, n_hex: int = 12, threads: Optional[int] = None) -> Clause:
    mismatches = []
    for model in ("saw", "sab", "hsw"):
        if en.naive_square(model, n_sq) != en.count_square(model, n_sq, threads).counts:
            mismatches.append(f"z2:{model}")
    if en.naive_sap(n_sq) != en.count_square("sap", n_sq, threads).counts:
        mismatches.append("z2:sap")
    for conv in ("hex", "hexv"):
        if en.naive_hex(n_hex, conv) != en.count_hex(n_hex, conv, threads).counts:
            mismatches.append(f"{conv}:saw")
    return Clause(
        "1",
        "pruned enumeration equals naive recursion",
        not mismatches,
        {"square_n": n_sq, "hex_n": n_hex, "mismatches": mismatches},
    )


# ---------------------------------------------------------------- 2


def psi_bijection(n_max: int = 9, bp_len: int = 12) -> Clause:
    walks = failures = nondecreasing = 0
    seen = set()
    for n in range(1, n_max + 1):
        for w in en.walks("hsw", n):
            walks += 1
            bl = hwdecomp.psi(w)
            ok, _ = hwdecomp.is_bridge_list(bl)
            nondecreasing += not ok
            key = tuple(tuple(b) for b in bl)
            failures += hwdecomp.psi_inverse(bl) != tuple(w) or key in seen
            seen.add(key)
    empty_violations = 0
    for length in range(1, bp_len + 1):
        for j in range(1, length + 1):
            if j > math.sqrt(2 * length) and hwdecomp.bp_count(length, j):
                empty_violations += 1
    return Clause(
        "2",
        "bridge decomposition round trip and empty list classes",
        failures == nondecreasing == empty_violations == 0,
        {
            "walks": walks,
            "roundtrip_failures": failures,
            "height_violations": nondecreasing,
            "bp_len": bp_len,
            "empty_violations": empty_violations,
        },
    )


# ---------------------------------------------------------------- 3


def _contract_tally(cases) -> Dict[str, object]:
    failed: Dict[str, int] = {}
    total = no_join = 0
    max_mult = 0
    for g, pe in cases:
        total += 1
        try:
            res = surgery.madras_join(g, pe)
        except surgery.JoinError:
            no_join += 1
            continue
        for k, v in surgery.madras_contract(g, pe, res).items():
            if not v:
                failed[k] = failed.get(k, 0) + 1
        max_mult = max(max_mult, len(surgery.unjoin(res.joined, res.junction)))
    return {"cases": total, "no_join": no_join, "failed": dict(sorted(failed.items())), "max_preimages": max_mult}


def join_contract(random_count: int = 10_000, seed: int = 20240501) -> Clause:
    small = _contract_tally(exhaustive_square_cases(8, (4, 6)))
    big = _contract_tally(random_square_cases(seed, random_count))
    ok = all(t["no_join"] == 0 and not t["failed"] and t["max_preimages"] <= 4 for t in (small, big))
    return Clause("3", "square join contract", ok, {"exhaustive": small, "random": big, "seed": seed})


# ---------------------------------------------------------------- 4


def lemma55_sweep(n_max: int = 12) -> Clause:
    """Walks from the origin never below their start and ending at their maximal height."""
    walks = pairs = bad = 0
    path = [(0, 0)]
    seen = {(0, 0)}
    ymax = [0]

    def rec():
        nonlocal walks, pairs, bad
        if len(path) > 1 and path[-1][1] == ymax[-1]:
            walks += 1
            adj = surgery.find_right_detachable(path)
            pairs += len(adj)
            if len(adj) > 1:
                bad += len(surgery.adjacency_gap_violations(path))
        if len(path) - 1 == n_max:
            return
        x, y = path[-1]
        for dx, dy in ((1, 0), (0, 1), (0, -1), (-1, 0)):
            s = (x + dx, y + dy)
            if s[1] < 0 or s in seen:
                continue
            seen.add(s)
            path.append(s)
            ymax.append(max(ymax[-1], s[1]))
            rec()
            ymax.pop()
            path.pop()
            seen.discard(s)

    rec()
    return Clause(
        "4",
        "equal-gap adjacencies are separated by their gap",
        bad == 0,
        {"n_max": n_max, "walks": walks, "adjacencies": pairs, "violations": bad},
    )


# ---------------------------------------------------------------- 5


def kesten(n_max: int = 6, threads: Optional[int] = None) -> Clause:
    rows = kesten_check(n_max, threads)
    return Clause(
        "5",
        "polygon count lower bound from bridge counts",
        all(r.passed for r in rows),
        {"rows": [r.csv() for r in rows]},
    )


# ---------------------------------------------------------------- 6


def observable_exactness(tri_k=(1, 2, 3), lam_k=(1, 2), threads: Optional[int] = None) -> Clause:
    residuals = {}
    identity = {}
    control = {}
    for k in tri_k:
        dom = triangle_domain(k)
        f = observable.observable(dom, _triangle_z0(k), threads=threads)
        residuals[dom.name] = observable.max_residual(f, dom)
        identity[k] = observable.triangle_identity(k, threads=threads)["lhs"]
    for k in lam_k:
        dom = lambda_domain(k)
        f = observable.observable(dom, threads=threads)
        residuals[dom.name] = observable.max_residual(f, dom)
    dom = triangle_domain(tri_k[0])
    bad = observable.observable(dom, _triangle_z0(tri_k[0]), x=0.6, threads=threads)
    control[dom.name] = observable.max_residual(bad, dom)
    ok = (
        all(r < 1e-9 for r in residuals.values())
        and all(abs(v - 1) <= 1e-8 for v in identity.values())
        and all(r > 1e-3 for r in control.values())
    )
    return Clause(
        "6",
        "observable local relation and triangle identity",
        ok,
        {
            "max_residual": {k: f"{v:.3e}" for k, v in residuals.items()},
            "triangle_lhs_minus_1": {str(k): f"{v - 1:.3e}" for k, v in identity.items()},
            "control_x_0.6": {k: f"{v:.6f}" for k, v in control.items()},
        },
    )


def _triangle_z0(k: int):
    from .lattice import axis_mid

    return axis_mid(k)


# ---------------------------------------------------------------- 7


def hex_growth(n_max: int = 14, threads: Optional[int] = None) -> Clause:
    worst = {}
    ok = True
    for conv in ("hex", "hexv"):
        counts = en.count_hex(n_max, conv, threads).counts
        slack = min(counts[n] ** (1.0 / n) - en.MU_HEX for n in range(1, n_max + 1))
        worst[conv] = f"{slack:.6f}"
        ok &= slack >= -1e-12
    return Clause("7", "honeycomb counts stay above the growth rate", ok, {"n_max": n_max, "min_slack": worst})


# ---------------------------------------------------------------- 8


def hex_join_suite(count: int = 400, seed: int = 7) -> Clause:
    delta = bridge = unique = truth = errors = 0
    for g, pe in random_hex_cases(seed, count):
        try:
            r = surgery.hex_join(g, pe)
        except surgery.JoinError:
            errors += 1
            continue
        delta += len(r.joined) - len(g) == len(pe) + 18
        bridge += surgery.is_hex_bridge(r.joined)
        cands = surgery.hex_unjoin(r.joined, r.junction)
        unique += len(cands) == 1
        truth += (tuple(g), surgery.normalize_hex_polygon(pe)) in cands
    ok = errors == 0 and delta == bridge == unique == truth == count
    return Clause(
        "8",
        "honeycomb join length, bridge and unique decode",
        ok,
        {"cases": count, "seed": seed, "errors": errors, "delta_18": delta, "bridge": bridge, "unique_decode": unique, "truth_found": truth},
    )


# ---------------------------------------------------------------- 9


def insertion_roundtrip(ms=(4, 6, 8), Ks=(0, 1, 2, 3), lists_per=2, seed: int = 11) -> Clause:
    rng = random.Random(seed)
    walks = insertion.fixture_walks()
    runs = found = length_ok = bound_ok = commute_ok = 0
    worst = 0
    for m in ms:
        params = insertion.InsertionParams(n=400, u=1, m=m)
        polys = wide_polygons(1, m)
        for w in walks:
            ctx = insertion.build_context(w, params)
            for K in Ks:
                for lst in insertion.location_lists(ctx, K, rng=rng, limit=lists_per):
                    ps = [rng.choice(polys) for _ in lst]
                    enc = insertion.phi_encode(w, ps, lst, params, ctx)
                    runs += 1
                    length_ok += enc.length == len(w) - 1 + K * (m + 16)
                    order = list(range(K))
                    rng.shuffle(order)
                    enc2 = insertion.phi_encode(w, ps, lst, params, ctx, application_order=order)
                    commute_ok += enc2.bridges == enc.bridges
                    dec = insertion.phi_decode(enc.bridges, params, K)
                    worst = max(worst, len(dec.candidates))
                    bound_ok += len(dec.candidates) <= 12 ** K
                    found += any(
                        c.walk == tuple(w) and c.locations == sorted(lst) and c.polygons == ps for c in dec.candidates
                    )
    ok = runs > 0 and found == length_ok == bound_ok == commute_ok == runs
    return Clause(
        "9",
        "insertion encode and decode round trip",
        ok,
        {
            "runs": runs,
            "truth_found": found,
            "length_exact": length_ok,
            "within_12_pow_K": bound_ok,
            "order_independent": commute_ok,
            "max_candidates": worst,
        },
    )


# ---------------------------------------------------------------- 10


def covers_suite(ns=(1, 2), census_cap: int = 28) -> Clause:
    lemma = {}
    ok = True
    for n in ns:
        r = covers.lemma_a1_check(n)
        lemma[str(n)] = {"lhs": f"{r.lhs:.9f}", "rhs_lower_bound": f"{r.rhs:.9f}", "holds": r.holds}
        ok &= r.holds
        # walks ending at a lift of o split exactly by the end they arrive through
        ok &= all(abs(gp + gm - tot) <= 1e-12 * max(1.0, tot) for _, gp, gm, tot in r.plus_minus)
        ok &= len(covers.preimages(r.z0)) == 8
    idx = (3, 5, 7)
    table = covers.good_polygon_census(0, idx, census_cap)
    rel = covers.census_relations(table, idx, census_cap)
    ok &= rel["symmetry_failures"] == 0 and rel["supermult_failures"] == 0
    ok &= not covers.good_polygons(0, 4, census_cap)
    audit = covers.winding_phase_audit(1, length_cap=30)
    ok &= audit.max_spread < 1e-9 and audit.offset_error < 1e-9
    loops, loop_fail = covers.sheet_algebra_audit()
    ok &= loop_fail == 0
    return Clause(
        "10",
        "cover inequality, good polygon relations and winding phases",
        bool(ok),
        {
            "lemma": lemma,
            "census_cap": census_cap,
            "census_entries": len(table),
            **rel,
            "phase_spread": f"{audit.max_spread:.3e}",
            "phase_offset_error": f"{audit.offset_error:.3e}",
            "sheet_loops": loops,
            "sheet_failures": loop_fail,
        },
    )


# ---------------------------------------------------------------- 11


def parallel_agreement(threads: Optional[int] = None) -> Clause:
    """Parallel kernels give the same ledgers at 1, 4 and 16 workers."""
    def snapshot(t):
        sq = en.count_square("saw", 10, t).counts
        hx = en.count_hex(10, "hex", t).counts
        h = en.domain_histogram(triangle_domain(2), _triangle_z0(2), threads=t, split_depth=4).counts
        return json.dumps([sorted(sq.items()), sorted(hx.items()), repr(h)])

    snaps = {t: snapshot(t) for t in (1, 4, 16)}
    same = len(set(snaps.values())) == 1
    return Clause("11", "parallel kernels agree across worker counts", same, {"workers": [1, 4, 16]})


SUITES: Dict[str, Callable[[dict, Optional[int]], Clause]] = {
    "1": lambda s, t: oracle_equivalence(s["oracle_sq"], s["oracle_hex"], t),
    "2": lambda s, t: psi_bijection(s["psi_n"], s["bp_len"]),
    "3": lambda s, t: join_contract(s["join_random"]),
    "4": lambda s, t: lemma55_sweep(s["lemma55"]),
    "5": lambda s, t: kesten(s["kesten"], t),
    "6": lambda s, t: observable_exactness(s["tri_k"], s["lam_k"], t),
    "7": lambda s, t: hex_growth(s["hex_mu"], t),
    "8": lambda s, t: hex_join_suite(s["hex_cases"]),
    "9": lambda s, t: insertion_roundtrip(s["ins_m"], s["ins_K"]),
    "10": lambda s, t: covers_suite(s["cover_n"], s["census_cap"]),
    "11": lambda s, t: parallel_agreement(t),
}


def run_all(level: str = "desk", threads: Optional[int] = None, only: Optional[List[str]] = None) -> List[Clause]:
    sizes = _sizes(level)
    keys = only or list(SUITES)
    return [SUITES[k](sizes, threads) for k in keys]


def report_json(clauses: List[Clause], level: str) -> str:
    body = {"level": level, "passed": all(c.passed for c in clauses), "clauses": [c.row() for c in clauses]}
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def report_csv(clauses: List[Clause]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(("clause", "pass", "title", "detail"))
    for c in clauses:
        out.writerow((c.key, "pass" if c.passed else "fail", c.title, json.dumps(c.detail, sort_keys=True)))
    return buf.getvalue()
