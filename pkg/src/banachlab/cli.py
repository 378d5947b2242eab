"""Command-line front end: moduli, curves, classification, duals, quotients, sums, checks and replays."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__

SCHEMA_ID = "banachlab.report/1"
EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, EXIT_INCONCLUSIVE = 0, 1, 2, 3
MIN_ANGLES = 64

CONFIG_FIELDS = {"angles", "tol", "format", "eps", "tau", "jobs", "strict", "seed", "samples", "n"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- parsing helpers ----------------------------------------------------------------------


def parse_space(text: str):
    from .catalog import parse_catalog
    from .normcore import dual_space
    from .sums import parse_sum

    t = text.strip()
    if t.startswith("dual:"):
        return dual_space(parse_space(t[len("dual:"):]))
    if t.startswith("sum("):
        return parse_sum(t)
    return parse_catalog(t)


def _floats(text, name):
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        vals = [float(v) for v in text]
    else:
        parts = [p for p in str(text).split(",") if p.strip()]
        try:
            if len(parts) == 1 and ":" in parts[0]:
                a, b, k = parts[0].split(":")
                vals = [float(v) for v in np.linspace(float(a), float(b), int(k))]
            else:
                vals = [float(p) for p in parts]
        except ValueError as exc:
            raise UsageError(f"cannot read {name} list {text!r}") from exc
    if not vals or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"invalid {name} grid {text!r}")
    return vals


def _eps_grid(text):
    vals = _floats(text, "eps")
    if vals is not None and not all(0.0 < v <= 2.0 for v in vals):
        raise UsageError("eps values must lie in (0, 2]")
    return vals


def _tau_grid(text):
    vals = _floats(text, "tau")
    if vals is not None and not all(v > 0.0 for v in vals):
        raise UsageError("tau values must be positive")
    return vals


def _vectors(text):
    rows = [r for r in text.split(";") if r.strip()]
    return [[float(c) for c in r.split(",")] for r in rows]


def _load_config():
    path = os.environ.get("BANACHLAB_CONFIG")
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read BANACHLAB_CONFIG file {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("BANACHLAB_CONFIG must hold a JSON object")
    unknown = set(data) - CONFIG_FIELDS
    if unknown:
        raise UsageError(f"unknown config fields {sorted(unknown)}")
    return data


# -- output ----------------------------------------------------------------------------------


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    return v


def envelope(command, config, result, status):
    return {"schema": SCHEMA_ID, "version": __version__, "command": command,
            "config": _plain(config), "status": status, "result": _plain(result)}


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(c) for c in r])
    return buf.getvalue()


def _cell(c):
    if isinstance(c, (bool, np.bool_)):
        return "true" if c else "false"
    if isinstance(c, (float, np.floating)):
        return repr(float(c))
    return "" if c is None else c


def _emit(args, text):
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _status_counts(statuses):
    out = {"verified": 0, "violated": 0, "inconclusive": 0}
    for s in statuses:
        out[s] += 1
    return out


def _exit_for(counts, strict):
    if counts.get("violated", 0):
        return EXIT_VIOLATED
    if strict and counts.get("inconclusive", 0):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# -- commands ------------------------------------------------------------------------------------


def cmd_modulus(args):
    from .moduli import estimate

    space = parse_space(args.space)
    arg = None
    if args.kind in ("rho_X", "rho_uacs", "rho_uacs_ball"):
        vals = _tau_grid(args.tau)
        if not vals or len(vals) != 1:
            raise UsageError(f"{args.kind} needs one --tau value")
        arg = vals[0]
    elif args.kind != "nonsquareness":
        vals = _eps_grid(args.eps)
        if not vals or len(vals) != 1:
            raise UsageError(f"{args.kind} needs one --eps value")
        arg = vals[0]
    z = _floats(args.z, "z") if args.z else None
    est = estimate(space, args.kind, arg, args.angles, z=z)
    cfg = {"space": args.space, "kind": args.kind, "argument": arg, "angles": args.angles, "z": z}
    if args.format == "csv":
        return rows_csv(("kind", "arg", "lo", "hi", "certified"),
                        [(est.kind, arg if arg is not None else "", est.lo, est.hi, est.certified)]), EXIT_OK
    return dumps(envelope("modulus", cfg, est.to_dict(), {"certified": est.certified})), EXIT_OK


def cmd_curve(args):
    from .moduli import curve, to_csv
    from .moduli.curves import default_grid

    space = parse_space(args.space)
    rho = args.kind.startswith("rho")
    grid = (_tau_grid(args.tau) if rho else _eps_grid(args.eps)) or default_grid(args.kind, args.count)
    z = _floats(args.z, "z") if args.z else None
    c = curve(space, args.kind, grid, args.angles, z=z)
    if args.format == "csv":
        return to_csv(c), EXIT_OK
    cfg = {"space": args.space, "kind": args.kind, "grid": list(grid), "angles": args.angles, "z": z}
    res = {"kind": c.kind, "estimates": [e.to_dict() for e in c.estimates],
           "monotone_violations": [list(p) for p in c.monotone_violations()]}
    return dumps(envelope("curve", cfg, res, {"points": len(grid)})), EXIT_OK


def cmd_classify(args):
    from .classify import classify

    space = parse_space(args.space)
    rep = classify(space, args.tol, args.angles)
    d = rep.to_dict()
    if args.format == "csv":
        rows = [(k, v["status"]) for k, v in sorted(d["verdicts"].items())]
        return rows_csv(("property", "status"), rows), EXIT_OK
    cfg = {"space": args.space, "tol": args.tol, "angles": args.angles}
    st = {k: v["status"] for k, v in d["verdicts"].items()}
    code = EXIT_INCONCLUSIVE if args.strict and "inconclusive" in st.values() else EXIT_OK
    return dumps(envelope("classify", cfg, d, st)), code


def cmd_dual(args):
    from .normcore import dual_norm, dual_space
    from .verify import involution_error

    space = parse_space(args.space)
    res = {"space": space.label, "dual": dual_space(space).label}
    if args.functional:
        f = _floats(args.functional, "functional")
        res["dual_norm"] = dual_norm(space, f, args.angles or 1024).to_dict()
    if space.dim == 2 or space.meta.get("dual_factory") is not None:
        res["involution"] = involution_error(space, args.samples, args.seed)
    cfg = {"space": args.space, "functional": args.functional, "samples": args.samples, "seed": args.seed}
    if args.format == "csv":
        inv = res.get("involution", {})
        return rows_csv(("space", "dual", "samples", "max_rel_error"),
                        [(res["space"], res["dual"], inv.get("samples"), inv.get("max_rel_error"))]), EXIT_OK
    return dumps(envelope("dual", cfg, res, {})), EXIT_OK


def cmd_quotient(args):
    from .classify import is_acs
    from .normcore import quotient_space

    space = parse_space(args.space)
    if args.subspace:
        Q = quotient_space(space, _vectors(args.subspace))
        v = is_acs(Q, args.tol, args.angles or 256)
        res = {"quotient": Q.label, "dim": Q.dim, "acs": v.to_dict()}
        st = {"acs": v.status}
        code = EXIT_INCONCLUSIVE if args.strict and v.status == "inconclusive" else EXIT_OK
        if args.format == "csv":
            return rows_csv(("quotient", "acs"), [(Q.label, v.status)]), code
        cfg = {"space": args.space, "subspace": args.subspace, "tol": args.tol, "angles": args.angles}
        return dumps(envelope("quotient", cfg, res, st)), code
    from .verify import check_quotient_acs

    rep = check_quotient_acs(space, args.samples, args.tol, args.angles or 256, args.seed)
    return _report_out(args, "quotient", {"space": args.space, "samples": args.samples, "tol": args.tol}, [rep])


def cmd_sum(args):
    from .classify import is_acs
    from .sums import parse_sum, sum_delta_uacs

    S = parse_sum(args.spec)
    eps = _eps_grid(args.eps) or [0.5, 1.0]
    res = {
        "label": S.label,
        "dim": S.dim,
        "E_acs": is_acs(S.E.as_space(), args.tol).status,
        "components_acs": [is_acs(X, args.tol).status for X in S.components],
        "delta_uacs": [sum_delta_uacs(S, e, args.angles).to_dict() for e in eps],
    }
    if args.format == "csv":
        rows = [(d["kind"], d["argument"], d["lo"], d["hi"], d["certified"]) for d in res["delta_uacs"]]
        return rows_csv(("kind", "arg", "lo", "hi", "certified"), rows), EXIT_OK
    cfg = {"spec": args.spec, "eps": eps, "tol": args.tol, "angles": args.angles}
    return dumps(envelope("sum", cfg, res, {})), EXIT_OK


VERIFY_IDS = ("delta_rho", "delta_tilde_rho", "lipschitz_delta_uacs", "dual", "superreflexivity",
              "quotient_acs", "sum_theorems", "acs_characterizations")


def _verify_job(job):
    """One (space, inequality) pair; runs in a worker process when --jobs > 1."""
    from . import verify as V

    spec, which, eps, tau, angles = job
    if which == "sum_theorems":
        return [V.check_sum_theorems(spec, eps, angles).to_dict()]
    space = parse_space(spec)
    if which == "quotient_acs":
        return [V.check_quotient_acs(space).to_dict()]
    if which == "acs_characterizations":
        return [V.check_acs_characterizations(space, resolution=angles).to_dict()]
    ids = V.INEQUALITIES if which == "all" else (which,)
    return [r.to_dict() for r in V.run_inequalities(space, eps, tau, angles, ids)]


def _run_jobs(jobs, n):
    if n <= 1 or len(jobs) <= 1:
        return [_verify_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_verify_job, jobs))


def _report_out(args, command, cfg, reports):
    dicts = [r if isinstance(r, dict) else r.to_dict() for r in reports]
    counts = _status_counts(p["status"] for d in dicts for p in d["points"])
    code = _exit_for(counts, args.strict)
    if args.format == "csv":
        rows = []
        for d in dicts:
            for p in d["points"]:
                a = json.dumps(p["args"], sort_keys=True)
                rows.append((d["inequality"], d["space"], a, p["status"], p["margin"]))
        return rows_csv(("inequality", "space", "args", "status", "margin"), rows), code
    n = sum(counts.values())
    summary = dict(counts, points=n, strong_rate=counts["verified"] / n if n else 0.0)
    return dumps(envelope(command, cfg, {"reports": dicts}, summary)), code


def cmd_verify(args):
    from .verify import HARNESS_EPS, HARNESS_SPACES, HARNESS_TAU

    if args.manifest:
        return _verify_manifest(args)
    which = args.inequality
    if which not in VERIFY_IDS + ("all",):
        raise UsageError(f"unknown inequality {which!r}; choose from {', '.join(VERIFY_IDS)} or all")
    eps = _eps_grid(args.eps) or list(HARNESS_EPS)
    tau = _tau_grid(args.tau) or list(HARNESS_TAU)
    spaces = args.space or ["catalog:" + s for s in HARNESS_SPACES]
    for s in spaces:
        parse_space(s)
    jobs = [(s, which, eps, tau, args.angles) for s in spaces]
    reports = [r for batch in _run_jobs(jobs, args.jobs) for r in batch]
    cfg = {"inequality": which, "spaces": spaces, "eps": eps, "tau": tau, "angles": args.angles}
    return _report_out(args, "verify", cfg, reports)


def _verify_manifest(args):
    """Manifest: a JSON list of {"space", "inequality", "eps", "tau"}; one report per entry."""
    try:
        entries = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read manifest {args.manifest!r}: {exc}") from exc
    if not isinstance(entries, list):
        raise UsageError("manifest must be a JSON list")
    jobs = []
    for e in entries:
        which = e.get("inequality", "all")
        if which not in VERIFY_IDS + ("all",):
            raise UsageError(f"unknown inequality {which!r} in manifest")
        jobs.append((e["space"], which, _eps_grid(e.get("eps")) or [0.25, 0.5, 1.0, 1.5],
                     _tau_grid(e.get("tau")) or [0.1, 0.25, 0.5], e.get("angles", args.angles)))
    batches = _run_jobs(jobs, args.jobs)
    out_dir = Path(args.output_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows, statuses = [], []
    for k, (job, batch) in enumerate(zip(jobs, batches)):
        cfg = {"space": job[0], "inequality": job[1], "eps": job[2], "tau": job[3], "angles": job[4]}
        counts = _status_counts(p["status"] for d in batch for p in d["points"])
        (out_dir / f"report_{k:03d}.json").write_text(dumps(envelope("verify", cfg, {"reports": batch}, counts)),
                                                        encoding="utf-8")
        for d in batch:
            for p in d["points"]:
                statuses.append(p["status"])
                rows.append((k, d["inequality"], d["space"], json.dumps(p["args"], sort_keys=True), p["status"], p["margin"]))
    summary = rows_csv(("entry", "inequality", "space", "args", "status", "margin"), rows)
    (out_dir / "summary.csv").write_text(summary, encoding="utf-8")
    counts = _status_counts(statuses)
    return dumps({"entries": len(jobs), "output_dir": str(out_dir), **counts}), _exit_for(counts, args.strict)


def cmd_replay(args):
    from .verify import replay_example, summarize_replays

    reps = replay_example(args.example, args.n)
    summ = summarize_replays(reps)
    if args.format == "csv":
        names = sorted(reps[0].quantities)
        header = ["n"] + names
        rows = [[r.n] + [r.quantities[k] for k in names] for r in reps]
        if args.example == 62:
            header = [("norm_sum" if h == "norm_x_plus_y" else h) for h in header]
        return rows_csv(header, rows), EXIT_OK if summ["ok"] or not args.strict else EXIT_INCONCLUSIVE
    cfg = {"example": args.example, "n": args.n}
    res = {"replays": [r.to_dict() for r in reps], "summary": summ}
    code = EXIT_OK if summ["ok"] or not args.strict else EXIT_INCONCLUSIVE
    return dumps(envelope("replay", cfg, res, {"ok": summ["ok"]})), code


def cmd_catalog(args):
    from .catalog import catalog_entries

    entries = catalog_entries()
    if args.format == "csv":
        return rows_csv(("spec", "description"), [(e["spec"], e["description"]) for e in entries]), EXIT_OK
    return dumps(envelope("catalog", {}, {"entries": entries}, {})), EXIT_OK


COMMANDS = {
    "modulus": cmd_modulus, "curve": cmd_curve, "classify": cmd_classify, "dual": cmd_dual,
    "quotient": cmd_quotient, "sum": cmd_sum, "verify": cmd_verify, "replay": cmd_replay, "catalog": cmd_catalog,
}
KINDS = ("delta_X", "rho_X", "delta_uacs", "delta_uacs_tilde", "rho_uacs", "rho_uacs_ball", "delta_uacsed",
         "nonsquareness")


def build_parser(defaults=None) -> argparse.ArgumentParser:
    d = defaults or {}
    p = _Parser(prog="banachlab", description=__doc__)
    p.add_argument("--version", action="version", version=f"banachlab {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, angles=True):
        sp.add_argument("--format", choices=("json", "csv"), default=d.get("format", "json"))
        sp.add_argument("--output", "-o", default=None, help="write here instead of stdout")
        sp.add_argument("--strict", action="store_true", default=bool(d.get("strict", False)),
                        help="exit 3 when anything is inconclusive")
        sp.add_argument("--jobs", type=int, default=int(d.get("jobs", 1)), help="worker processes")
        if angles:
            sp.add_argument("--angles", type=int, default=d.get("angles"), help=f"angle resolution (>= {MIN_ANGLES})")

    def grids(sp):
        e, t = d.get("eps"), d.get("tau")
        sp.add_argument("--eps", default=",".join(map(str, e)) if isinstance(e, list) else e,
                        help="comma list or a:b:count")
        sp.add_argument("--tau", default=",".join(map(str, t)) if isinstance(t, list) else t,
                        help="comma list or a:b:count")

    sp = sub.add_parser("modulus", help="one modulus enclosure")
    sp.add_argument("--space", required=True)
    sp.add_argument("--kind", required=True, choices=KINDS)
    sp.add_argument("--z", default=None, help="direction for delta_uacsed")
    grids(sp)
    common(sp)

    sp = sub.add_parser("curve", help="a modulus over a grid")
    sp.add_argument("--space", required=True)
    sp.add_argument("--kind", required=True, choices=KINDS[:-1])
    sp.add_argument("--count", type=int, default=41)
    sp.add_argument("--z", default=None)
    grids(sp)
    common(sp)

    sp = sub.add_parser("classify", help="R, S, acs and the Lau condition")
    sp.add_argument("--space", required=True)
    sp.add_argument("--tol", type=float, default=float(d.get("tol", 1e-4)))
    common(sp)

    sp = sub.add_parser("dual", help="dual space, dual norms and the bidual check")
    sp.add_argument("--space", required=True)
    sp.add_argument("--functional", default=None)
    sp.add_argument("--samples", type=int, default=int(d.get("samples", 100)))
    sp.add_argument("--seed", type=int, default=int(d.get("seed", 0)))
    common(sp)

    sp = sub.add_parser("quotient", help="classify X/U, or sample quotients against the dual")
    sp.add_argument("--space", required=True)
    sp.add_argument("--subspace", default=None, help="basis rows 'a,b,c;d,e,f'")
    sp.add_argument("--samples", type=int, default=int(d.get("samples", 20)))
    sp.add_argument("--seed", type=int, default=int(d.get("seed", 0)))
    sp.add_argument("--tol", type=float, default=float(d.get("tol", 1e-3)))
    common(sp)

    sp = sub.add_parser("sum", help="build an absolute sum, classify its parts and estimate delta_uacs")
    sp.add_argument("--spec", required=True, help="sum(E=catalog:lp(m,p); spec, spec, ...)")
    sp.add_argument("--tol", type=float, default=float(d.get("tol", 1e-4)))
    grids(sp)
    common(sp)

    sp = sub.add_parser("verify", help="inequality harness")
    sp.add_argument("--inequality", default="all")
    sp.add_argument("--space", action="append", default=None, help="repeatable; default is the planar catalog")
    sp.add_argument("--manifest", default=None)
    sp.add_argument("--output-dir", default=None)
    grids(sp)
    common(sp)

    sp = sub.add_parser("replay", help="explicit counterexample sequences")
    sp.add_argument("--example", type=int, required=True, choices=(62, 63, 64, 65))
    sp.add_argument("--n", type=int, default=int(d.get("n", 64)))
    common(sp, angles=False)

    sp = sub.add_parser("catalog", help="list catalog presets")
    common(sp, angles=False)
    return p


def run(argv=None) -> int:
    from .normcore import DimensionError, DomainError

    try:
        args = build_parser(_load_config()).parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if getattr(args, "angles", None) is not None and args.angles < MIN_ANGLES:
            raise UsageError(f"--angles must be at least {MIN_ANGLES}")
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        text, code = COMMANDS[args.command](args)
        _emit(args, text)
        return code
    except (UsageError, DomainError, DimensionError) as exc:
        sys.stderr.write(f"banachlab: error: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
