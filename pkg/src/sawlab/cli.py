"""Command-line front end.

Every subcommand builds its whole output in memory and writes it once at the
end, so the bytes depend only on the configuration and seed. Exit codes:
0 pass, 1 usage error, 2 verification failure, 3 resource cap hit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from typing import Dict, List, Optional, Sequence

from . import covers, enumerate as en, hwdecomp, insertion, observable, surgery, suites
from .corpus import exhaustive_square_cases, placed, random_square_cases
from .lattice import WindowExit, axis_mid, edge_id, lambda_domain, triangle_domain
from .walkmodel import first_repeat, from_steps, is_bridge, is_hsw, polygon_from_text, to_steps
from .widepoly import wide_polygons

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2, which is reserved for failed checks
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- config


def read_config(path: str) -> Dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out: Dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_config(sub: argparse.ArgumentParser, cfg: Dict[str, str]) -> None:
    actions = {a.dest: a for a in sub._actions}
    for key, value in cfg.items():
        act = actions.get(key)
        if act is None or key in ("help", "config", "command"):
            raise UsageError(f"unknown config key {key!r}")
        # argparse runs string defaults through the action's type converter
        if act.choices is not None and act.type is None and value not in act.choices:
            raise UsageError(f"config {key}={value}: choose from {sorted(act.choices)}")
        sub.set_defaults(**{key: value})


# ---------------------------------------------------------------- output


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: Sequence[str], rows: List[Sequence[object]]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(header)
    out.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _int_list(text: str) -> List[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


# ---------------------------------------------------------------- commands


def cmd_count(a) -> int:
    try:
        led = en.count(a.model, a.lattice, a.n, a.threads, budget=a.budget)
        code = EXIT_OK
    except en.ResourceCap as exc:
        led, code = exc.ledger, EXIT_CAP
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    counts = {n: c for n, c in sorted(led.counts.items()) if n >= 1}
    if a.format == "json":
        body = {
            "model": led.model,
            "lattice": led.lattice,
            "n_max": a.n,
            "complete": led.complete,
            "engine": led.engine,
            "config_hash": led.config_hash,
            "counts": {str(n): c for n, c in counts.items()},
        }
        _emit(_json(body), a.output)
    else:
        rows = [(led.model, led.lattice, n, c) for n, c in counts.items()]
        text = _csv(("model", "lattice", "n", "count"), rows)
        if not led.complete:
            text += f"# partial: node budget exhausted, exact only up to n={led.high_water}\n"
        _emit(text, a.output)
    return code


def _read_walk(a) -> tuple:
    text = a.walk
    if a.walk_file:
        with open(a.walk_file, encoding="utf-8") as fh:
            text = fh.read()
    if not text:
        raise UsageError("give --walk STEPS or --walk-file PATH")
    try:
        return from_steps(text.strip())
    except KeyError as exc:
        raise UsageError(f"step strings use the letters E, N, W, S; got {exc}") from exc


def cmd_decompose(a) -> int:
    w = _read_walk(a)
    if first_repeat(w) is not None or not is_hsw(w):
        raise UsageError("input is not a half-space self-avoiding walk")
    body = hwdecomp.decomposition_json(w)
    back = hwdecomp.psi_inverse(hwdecomp.psi(w))
    ok = tuple(back) == tuple(w)
    ok_list, why = hwdecomp.is_bridge_list(hwdecomp.psi(w))
    body["roundtrip"] = ok
    body["bridge_list_valid"] = ok_list
    if a.format == "json":
        _emit(_json(body), a.output)
    else:
        bl = hwdecomp.psi(w)
        rows = [(i, b[-1][1] - b[0][1], len(b) - 1, to_steps(b)) for i, b in enumerate(bl)]
        _emit(_csv(("index", "height", "length", "steps"), rows), a.output)
    return EXIT_OK if ok and ok_list else EXIT_FAIL


def _join_one(a) -> int:
    g = _read_walk(a)
    if not (is_bridge(g) or is_bridge(tuple((-x, y) for x, y in g))):
        raise UsageError("input walk is neither a bridge nor a reflected bridge")
    try:
        p = polygon_from_text(a.polygon)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad polygon: {exc}") from exc
    if a.height is None:
        heights = [j for j in range(-64, 65) if surgery.alignment_ok(g, placed(p, j))]
        if not heights:
            raise UsageError("no vertical placement meets the alignment condition")
        j = heights[0]
    else:
        j = a.height
    pe = placed(p, j)
    if not surgery.alignment_ok(g, pe):
        raise UsageError(f"placement at height {j} breaks the alignment condition")
    res = surgery.madras_join(g, pe)
    contract = surgery.madras_contract(g, pe, res)
    ok = all(contract.values())
    if a.format == "json":
        body = {
            "walk": to_steps(g),
            "polygon": a.polygon,
            "height": j,
            "joined": to_steps(res.joined),
            "junction": list(res.junction),
            "translate": res.translate,
            "contract": contract,
        }
        _emit(_json(body), a.output)
    else:
        rows = [(k, "pass" if v else "fail") for k, v in contract.items()]
        _emit(_csv(("clause", "result"), rows), a.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_join(a) -> int:
    if a.corpus == "none":
        return _join_one(a)
    cases = exhaustive_square_cases(8, (4, 6)) if a.corpus == "exhaustive" else random_square_cases(a.seed, a.count)
    tally = suites._contract_tally(cases)
    ok = not tally["failed"] and tally["no_join"] == 0 and tally["max_preimages"] <= 4
    body = {"corpus": a.corpus, **tally}
    if a.corpus == "random":
        body["seed"] = a.seed
    if a.format == "json":
        _emit(_json(body), a.output)
    else:
        rows = [("cases", tally["cases"]), ("no_join", tally["no_join"]), ("max_preimages", tally["max_preimages"])]
        rows += [(f"failed:{k}", v) for k, v in tally["failed"].items()]
        _emit(_csv(("field", "value"), rows), a.output)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_domain(text: str):
    kind, _, arg = text.partition(":")
    try:
        k = int(arg)
    except ValueError as exc:
        raise UsageError(f"domain must look like triangle:K or lambda:K, got {text!r}") from exc
    if k < 1:
        raise UsageError("domain size must be positive")
    if kind == "triangle":
        return triangle_domain(k), axis_mid(k), k
    if kind == "lambda":
        dom = lambda_domain(k)
        return dom, observable.pick_z0(dom), k
    raise UsageError(f"unknown domain kind {kind!r}")


def cmd_observable(a) -> int:
    dom, z0, k = _parse_domain(a.domain)
    x = en.X_CRIT if a.x is None else a.x
    sigma = observable.SIGMA_CRIT if a.sigma is None else a.sigma
    if a.check == "identity":
        if not a.domain.startswith("triangle"):
            raise UsageError("the boundary identity check runs on triangle domains")
        r = observable.triangle_identity(k, sigma, x, threads=a.threads)
        ok = abs(r["lhs"] - 1) <= a.tol
        row = {key: r[key] for key in ("k", "sigma", "x", "left_sum", "right_sum", "bottom_sum", "lhs")}
        if a.format == "json":
            _emit(_json({**row, "ok": ok}), a.output)
        else:
            _emit(_csv(list(row), [list(row.values())]), a.output)
        return EXIT_OK if ok else EXIT_FAIL
    f = observable.observable(dom, z0, sigma, x, threads=a.threads)
    if a.check == "boundary":
        s = observable.boundary_sum(f, dom)
        ok = abs(s) < a.tol
        row = (dom.name, f"{s.real:.3e}", f"{s.imag:.3e}", f"{abs(s):.3e}")
        if a.format == "json":
            _emit(_json({"domain": dom.name, "boundary_sum_abs": row[3], "ok": ok}), a.output)
        else:
            _emit(_csv(("domain", "real", "imag", "abs"), [row]), a.output)
        return EXIT_OK if ok else EXIT_FAIL
    scan = observable.residual_scan(f, dom)
    worst = max(r for _, r in scan)
    ok = worst < a.tol
    if a.format == "json":
        body = {
            "domain": dom.name,
            "z0": edge_id(z0),
            "x": x,
            "sigma": sigma,
            "max_residual": f"{worst:.3e}",
            "ok": ok,
            "residuals": {f"{v[0]},{v[1]}": f"{r:.3e}" for v, r in scan},
        }
        _emit(_json(body), a.output)
    else:
        rows = [(dom.name, f"{v[0]}:{v[1]}", f"{r:.3e}") for v, r in scan]
        _emit(_csv(("domain", "vertex", "residual"), rows), a.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_insertion(a) -> int:
    rng = random.Random(a.seed)
    params = insertion.InsertionParams(n=a.walk_size, u=1, m=a.m)
    polys = wide_polygons(1, a.m)
    rows = []
    ok = True
    for wi, w in enumerate(insertion.fixture_walks(a.seed)):
        ctx = insertion.build_context(w, params)
        for lst in insertion.location_lists(ctx, a.K, rng=rng, limit=a.lists):
            ps = [rng.choice(polys) for _ in lst]
            enc = insertion.phi_encode(w, ps, lst, params, ctx)
            dec = insertion.phi_decode(enc.bridges, params, a.K)
            found = any(c.walk == tuple(w) and c.locations == sorted(lst) and c.polygons == ps for c in dec.candidates)
            length_ok = enc.length == len(w) - 1 + a.K * (a.m + 16)
            bound_ok = len(dec.candidates) <= 12 ** a.K
            ok &= found and length_ok and bound_ok
            loc = ";".join(f"{l}:{j}" for l, j in sorted(lst))
            rows.append((wi, a.m, a.K, loc, len(w) - 1, enc.length, len(dec.candidates), found))
    header = ("walk", "m", "K", "locations", "input_length", "output_length", "candidates", "truth_found")
    if a.format == "json":
        _emit(_json({"params": params.to_json(), "seed": a.seed, "ok": ok, "runs": [dict(zip(header, r)) for r in rows]}), a.output)
    else:
        _emit(_csv(header, rows), a.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_covers(a) -> int:
    try:
        if a.check == "lemma":
            r = covers.lemma_a1_check(a.n, length_cap=a.length_cap)
            body = r.to_json()
            ok = r.holds
            header = ("n", "length_cap", "lhs", "rhs_lower_bound", "holds")
            rows = [(r.n, r.length_cap, f"{r.lhs:.12f}", f"{r.rhs:.12f}", r.holds)]
        elif a.check == "census":
            idx = a.indices
            table = covers.good_polygon_census(a.k, idx, a.n_cap)
            rel = covers.census_relations(table, idx, a.n_cap)
            ok = rel["symmetry_failures"] == 0 and rel["supermult_failures"] == 0
            body = {"k": a.k, "n_cap": a.n_cap, "relations": rel, "counts": [[n, i, j, c] for (n, i, j), c in sorted(table.items())]}
            header = ("n", "i", "j", "count")
            rows = [(n, i, j, c) for (n, i, j), c in sorted(table.items())]
        else:
            audit = covers.winding_phase_audit(a.n, length_cap=a.length_cap or 30)
            ok = audit.max_spread < 1e-9 and audit.offset_error < 1e-9
            body = {"n": a.n, "max_spread": f"{audit.max_spread:.3e}", "offset_error": f"{audit.offset_error:.3e}", "ok": ok}
            header = ("n", "max_spread", "offset_error")
            rows = [(a.n, body["max_spread"], body["offset_error"])]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if a.format == "json":
        _emit(_json(body), a.output)
    else:
        _emit(_csv(header, rows), a.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_all(a) -> int:
    only = [s.strip() for s in a.only.split(",")] if a.only else None
    if only and any(k not in suites.SUITES for k in only):
        raise UsageError(f"--only takes clause numbers from {', '.join(suites.SUITES)}")
    clauses = suites.run_all(a.level, a.threads, only)
    text = suites.report_json(clauses, a.level) if a.format == "json" else suites.report_csv(clauses)
    _emit(text, a.output)
    return EXIT_OK if all(c.passed for c in clauses) else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sawlab", description="Exact enumeration and surgery checks for self-avoiding walks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, default_format="csv"):
        sp.add_argument("--config", help="key=value file; command-line flags take precedence")
        sp.add_argument("--format", choices=("csv", "json"), default=default_format)
        sp.add_argument("--output", help="write here instead of standard output")
        sp.add_argument("--threads", type=_positive, default=None, help="worker processes (default: SAWLAB_THREADS, else 1)")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    s = common(sub.add_parser("count", help="exact walk and polygon counts"))
    s.add_argument("--model", choices=("saw", "sab", "hsw", "sap"), default="saw")
    s.add_argument("--lattice", choices=("z2", "hex", "hexv"), default="z2")
    s.add_argument("--n", type=_positive, default=10)
    s.add_argument("--budget", type=_nonneg, default=0, help="per-worker node budget, 0 for none")
    s.set_defaults(func=cmd_count)

    s = common(sub.add_parser("decompose", help="record points and bridge list of a half-space walk"), "json")
    s.add_argument("--walk", help="step string over E, N, W, S")
    s.add_argument("--walk-file")
    s.set_defaults(func=cmd_decompose)

    s = common(sub.add_parser("join", help="attach a polygon to the right of a bridge"), "json")
    s.add_argument("--walk")
    s.add_argument("--walk-file")
    s.add_argument("--polygon", help="closed step string")
    s.add_argument("--height", type=int, default=None, help="vertical shift of the rooted polygon")
    s.add_argument("--corpus", choices=("none", "exhaustive", "random"), default="none")
    s.add_argument("--count", type=_positive, default=1000)
    s.set_defaults(func=cmd_join)

    s = common(sub.add_parser("observable", help="check the observable on a finite domain"))
    s.add_argument("--domain", default="triangle:1", help="triangle:K or lambda:K")
    s.add_argument("--check", choices=("local", "boundary", "identity"), default="local")
    s.add_argument("--x", type=float, default=None)
    s.add_argument("--sigma", type=float, default=None)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_observable)

    s = common(sub.add_parser("insertion", help="polygon insertion round trips on the toy corpus"))
    s.add_argument("--m", type=_positive, default=4)
    s.add_argument("--K", type=_nonneg, default=1)
    s.add_argument("--lists", type=_positive, default=2)
    s.add_argument("--walk-size", type=_positive, default=400, help="nominal length driving the strip geometry")
    s.set_defaults(func=cmd_insertion)

    s = common(sub.add_parser("covers", help="cover inequality, good polygon census, phase audit"))
    s.add_argument("--check", choices=("lemma", "census", "phase"), default="lemma")
    s.add_argument("--n", type=_positive, default=1)
    s.add_argument("--length-cap", type=_positive, default=None)
    s.add_argument("--k", type=_nonneg, default=0)
    s.add_argument("--indices", type=_int_list, default=[3, 5, 7])
    s.add_argument("--n-cap", type=_positive, default=20)
    s.set_defaults(func=cmd_covers)

    s = common(sub.add_parser("verify-all", help="run every verification suite"), "json")
    s.add_argument("--level", choices=suites.LEVELS, default="desk")
    s.add_argument("--only", help="comma separated clause numbers")
    s.set_defaults(func=cmd_verify_all)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre, _ = parser.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(pre, "config", None):
            sub = parser._subparsers._group_actions[0].choices[pre.command]
            _apply_config(sub, read_config(pre.config))
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"sawlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sawlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (en.ResourceCap, WindowExit) as exc:
        print(f"sawlab: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
