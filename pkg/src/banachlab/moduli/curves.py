"""Modulus curves over a grid of arguments, with CSV and JSON export."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from ..estimate import ModulusCurve
from ..normcore.space import DomainError, NormedSpace
from .estimators import estimate

CSV_HEADER = ("kind", "arg", "lo", "hi", "certified")


def default_grid(kind: str, count: int = 41):
    if kind in ("delta_X", "delta_uacs", "delta_uacs_tilde", "delta_uacsed"):
        return tuple(float(e) for e in np.linspace(2.0 / count, 2.0, count))
    if kind in ("rho_X", "rho_uacs", "rho_uacs_ball"):
        return tuple(float(t) for t in np.linspace(0.05, 2.0, count))
    raise DomainError(f"no argument grid for {kind!r}")


def curve(space: NormedSpace, kind: str, grid=None, resolution: int | None = None, z=None) -> ModulusCurve:
    args = tuple(float(a) for a in (grid if grid is not None else default_grid(kind)))
    ests = tuple(estimate(space, kind, a, resolution, z=z) for a in args)
    return ModulusCurve(kind, args, ests)


def to_csv(c: ModulusCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for kind, arg, lo, hi, cert in c.rows():
        w.writerow((kind, repr(float(arg)), repr(float(lo)), repr(float(hi)), "true" if cert else "false"))
    return buf.getvalue()


def witnesses_json(c: ModulusCurve) -> str:
    rows = [{"arg": e.argument, "witness": None if e.witness is None else e.witness.to_dict()} for e in c.estimates]
    return json.dumps({"kind": c.kind, "witnesses": rows}, sort_keys=True, indent=2)


def read_csv(text: str):
    r = csv.DictReader(io.StringIO(text))
    return [(d["kind"], float(d["arg"]), float(d["lo"]), float(d["hi"]), d["certified"] == "true") for d in r]
