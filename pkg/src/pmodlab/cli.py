"""Command line entry point: ``pmodlab <command> --config path.json``.

Exit status is 0 on success, 1 when a verification verdict fails and 2 for
configuration errors.  Output goes to ``--out`` (a file, or a directory that
receives both CSV and JSON), else to ``$PMODLAB_OUTPUT_DIR``, else stdout.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import config as cfgmod
from .capacity import (
    SphericalCondenser,
    capacity_bounds,
    eta0_mass,
    lemma1_cap_upper,
    ring_box_bound,
    weighted_ring_integral,
)
from .distortion import k_ip, stretches
from .reporting import report_summary_row, to_csv, to_json
from .theorems import (
    PASS,
    constant_chain,
    corollary1_check,
    corollary2_rescale,
    run_fixture_suite,
    theorem1_check,
    theorem2_check,
    theorem3_counterexample,
)
from .weights import alpha_norm_on_annulus, ball_average, q0_estimate

log = logging.getLogger("pmodlab")

OUTPUT_ENV = "PMODLAB_OUTPUT_DIR"
COMMANDS = ("constants", "capacity", "modulus", "distortion", "verify", "sweep")
CHECKS = ("thm1", "cor1", "cor2", "thm2", "thm3", "suite")


class Result:
    """Rows for the CSV view plus the JSON document; ``ok`` drives the exit code."""

    def __init__(self, stem, rows, document, ok=True, columns=None):
        self.stem = stem
        self.rows = rows
        self.document = document
        self.ok = ok
        self.columns = columns


# commands ----------------------------------------------------------------

def cmd_constants(cfg):
    ch = constant_chain(cfg.space)
    row = {"n": cfg.space.n, "p": cfg.space.p, "c": ch.c, "c1": ch.c1, "c0": ch.c0}
    return Result("constants", [row], {"config": cfg.raw, "constants": ch.as_dict()})


def _condenser(cfg):
    ring = cfg.ring
    if ring is None:
        raise cfgmod.ConfigError("command needs a 'ring' entry with r1 and r2")
    return SphericalCondenser(ring["r1"], ring["r2"])


def cmd_capacity(cfg):
    cond = _condenser(cfg)
    b = capacity_bounds(cfg.space, cond, cfg.weight, cfg.grid_points)
    row = {"n": cfg.space.n, "p": cfg.space.p, "r1": cond.r_inner, "r2": cond.r_outer,
           "lower_mazya": b.lower_mazya, "exact": b.exact_spherical,
           "variational": b.variational, "upper_lemma1": b.upper_lemma1}
    return Result("capacity", [row], {"config": cfg.raw, "bounds": b.as_dict()})


def _ring_row(cfg, r1, r2):
    w, sp = cfg.weight, cfg.space
    I = weighted_ring_integral(w, sp, r1, r2)
    row = {"n": sp.n, "p": sp.p, "r1": r1, "r2": r2, "I": I,
           "eta0_mass": eta0_mass(w, sp, r1, r2),
           "upper_lemma1": lemma1_cap_upper(w, sp, SphericalCondenser(r1, r2)),
           "box_bound": None, "ball_average": None}
    if abs(r2 - 2 * r1) <= 1e-15 * r2 and r1 < 0.5:
        row["box_bound"] = ring_box_bound(w, sp, r1)
        row["ball_average"] = ball_average(w, sp, r1)
    return row


def cmd_modulus(cfg):
    rows = []
    if cfg.ring is not None:
        rows.append(_ring_row(cfg, cfg.ring["r1"], cfg.ring["r2"]))
    for e in cfg.ladder:
        rows.append(_ring_row(cfg, e, 2 * e))
    return Result("modulus", rows, {"config": cfg.raw, "rows": rows})


def cmd_distortion(cfg):
    rows = []
    for r in cfg.radii:
        s = stretches(cfg.fmap, r)
        rows.append({"r": r, "lambda_r": s.lambda_r, "lambda_tau": s.lambda_tau,
                     "jac": s.jacobian_abs, "min_stretch": s.min_stretch,
                     "k_ip": k_ip(cfg.fmap, r)})
    return Result("distortion", rows, {"config": cfg.raw, "rows": rows})


def _thm3_params(cfg):
    chk = cfg.check
    m = cfg.raw.get("map", {})
    alpha = chk.get("alpha", m.get("alpha", 2.0))
    eps = chk.get("eps", m.get("eps", 0.1))
    return alpha, eps


def run_check(cfg, kind):
    sp, chk = cfg.space, cfg.check
    if kind == "thm1":
        return theorem1_check(cfg.fmap, cfg.weight, sp, cfg.ladder)
    if kind == "cor1":
        return corollary1_check(cfg.fmap, sp, cfg.ladder)
    if kind == "cor2":
        return corollary2_rescale(cfg.fmap, cfg.weight, sp, chk.get("scale", 0.5), cfg.ladder).report
    if kind == "thm2":
        return theorem2_check(cfg.fmap, sp, chk.get("alpha", 2.0), cfg.ladder,
                              chk.get("compact_radius", 0.5), cfg.deltas)
    if kind == "thm3":
        alpha, eps = _thm3_params(cfg)
        return theorem3_counterexample(sp, alpha, eps, chk.get("eps0", 0.5), cfg.deltas)[1]
    raise cfgmod.ConfigError(f"unknown check {kind!r}")


def cmd_verify(cfg, kind):
    if kind == "suite":
        rows, reports = [], []
        ok = True
        for name, expected, rep in run_fixture_suite():
            match = rep.verdict == expected
            ok &= match
            rows.append({"fixture": name, "check": rep.name, "verdict": rep.verdict,
                         "expected": expected, "match": match, "flags": " | ".join(rep.flags)})
            reports.append({"fixture": name, "expected": expected, "report": rep.as_dict()})
        return Result("verify_suite", rows, {"config": cfg.raw, "reports": reports}, ok)
    rep = run_check(cfg, kind)
    doc = {"config": cfg.raw, "report": rep.as_dict()}
    return Result(f"verify_{kind}", [report_summary_row(rep)], doc, rep.verdict == PASS)


SWEEP_COLUMNS = {
    "constants": lambda cfg: dict(zip(("c", "c1", "c0"), _chain_tuple(cfg))),
    "capacity": lambda cfg: {k: v for k, v in cmd_capacity(cfg).rows[0].items()
                             if k in ("lower_mazya", "exact", "variational", "upper_lemma1")},
    "q0": lambda cfg: _q0_cols(cfg),
    "alpha_norm": lambda cfg: {"alpha_norm": alpha_norm_on_annulus(
        cfg.weight, cfg.space, cfg.check.get("alpha", 2.0), cfg.check.get("delta", 1e-3),
        cfg.check.get("eps0", 0.5))},
}


def _chain_tuple(cfg):
    ch = constant_chain(cfg.space)
    return ch.c, ch.c1, ch.c0


def _q0_cols(cfg):
    q = q0_estimate(cfg.weight, cfg.space, cfg.ladder)
    return {"q0_value": q.value, "q0_trend": q.trend, "q0_limit": q.limit}


def _check_cols(cfg, kind):
    rep = run_check(cfg, kind)
    row = report_summary_row(rep)
    row.pop("name")
    return row


def _sweep_point(raw, param, value, command):
    row = {param: value}
    try:
        cfg = cfgmod.build(cfgmod.with_param(raw, param, value))
        if command in SWEEP_COLUMNS:
            row.update(SWEEP_COLUMNS[command](cfg))
            row["status"] = "ok"
        else:
            cols = _check_cols(cfg, command)
            row.update(cols)
            row["status"] = cols["verdict"]
    except Exception as exc:  # a bad grid point is recorded, not fatal
        row["status"] = "error"
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_sweep(cfg, jobs=1):
    sw = cfg.raw.get("sweep")
    if sw is None:
        raise cfgmod.ConfigError("command 'sweep' needs a 'sweep' entry")
    param, values, command = sw["param"], sw["values"], sw["command"]
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        rows = list(pool.map(lambda v: _sweep_point(cfg.raw, param, v, command), values))
    ok = all(r["status"] in ("ok", PASS) for r in rows)
    return Result(f"sweep_{command}_{param}", rows, {"config": cfg.raw, "rows": rows}, ok)


# output ------------------------------------------------------------------

def _write(result, fmt, out):
    csv_text = to_csv(result.rows, result.columns)
    json_text = to_json(result.document)
    target = out or os.environ.get(OUTPUT_ENV)
    if not target:
        sys.stdout.write(json_text if fmt == "json" else csv_text)
        return []
    path = Path(target)
    if out is None or path.is_dir() or str(target).endswith(os.sep):
        path.mkdir(parents=True, exist_ok=True)
        written = [path / f"{result.stem}.csv", path / f"{result.stem}.json"]
        written[0].write_text(csv_text)
        written[1].write_text(json_text)
        return written
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "csv"
    path.write_text(json_text if fmt == "json" else csv_text)
    return [path]


def build_parser():
    ap = argparse.ArgumentParser(prog="pmodlab", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("check", nargs="?", choices=CHECKS,
                    help="which checker to run (verify only)")
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--out", help="output file, or directory for both CSV and JSON")
    ap.add_argument("--format", choices=("csv", "json"), default=None)
    ap.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "verify" and args.check is None:
            raise cfgmod.ConfigError("verify needs one of: " + ", ".join(CHECKS))
        if args.command != "verify" and args.check is not None:
            raise cfgmod.ConfigError(f"unexpected argument {args.check!r} for {args.command}")
        if args.config is None:
            if args.command == "verify" and args.check == "suite":
                cfg = cfgmod.build({"space": {"n": 2, "p": 3}})
            else:
                raise cfgmod.ConfigError("--config is required")
        else:
            cfg = cfgmod.load(args.config)
        out_cfg = cfg.raw.get("output", {})
        fmt = args.format or out_cfg.get("format")
        out = args.out or out_cfg.get("path")
        if args.command == "verify":
            result = cmd_verify(cfg, args.check)
        elif args.command == "sweep":
            result = cmd_sweep(cfg, args.jobs)
        else:
            result = globals()[f"cmd_{args.command}"](cfg)
    except cfgmod.ConfigError as exc:
        print(f"pmodlab: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"pmodlab: invalid input: {exc}", file=sys.stderr)
        return 2
    if fmt is None and args.command == "verify" and not out:
        fmt = "json"
    for path in _write(result, fmt, out):
        log.info("wrote %s", path)
    if not result.ok:
        print(f"pmodlab: {result.stem}: verdict failed", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
