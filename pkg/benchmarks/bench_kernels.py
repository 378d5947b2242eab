"""Time the compiled scan kernels against the numpy fallback and check they agree bit for bit.

    python3 benchmarks/bench_kernels.py [--angles 1024] [--repeat 3]
"""

import argparse
import time

from banachlab import kernels
from banachlab.catalog import parse_catalog
from banachlab.moduli import planar
from banachlab.normcore import planar_ring

SPACES = ("lp(2,2)", "lp(2,1)", "arc2d(ex61)")
TASKS = {
    "delta_X(1)": lambda s, n: planar.delta_x(s, 1.0, n),
    "rho_X(0.5)": lambda s, n: planar.rho(s, 0.5, n, False),
    "rho_uacs(0.5)": lambda s, n: planar.rho(s, 0.5, n, True),
    "nonsquareness": lambda s, n: planar.nonsquareness(s, n),
    "delta_uacs(1)": lambda s, n: planar.delta_uacs(s, 1.0, n),
}


def _key(est):
    w = est.witness
    parts = [est.lo, est.hi]
    if w is not None:
        for v in (w.x, w.y, w.f):
            if v is not None:
                parts.extend(float(c) for c in v)
    return tuple(parts)


def bench(angles, repeat):
    rows = []
    for spec in SPACES:
        space = parse_catalog(spec)
        planar_ring(space, angles)  # ring construction is shared, keep it out of the timings
        for name, task in TASKS.items():
            out = {}
            for backend in ("python", "cython"):
                kernels.use(backend)
                best = float("inf")
                for _ in range(repeat):
                    t0 = time.perf_counter()
                    est = task(space, angles)
                    best = min(best, time.perf_counter() - t0)
                out[backend] = (best, _key(est))
            same = out["python"][1] == out["cython"][1]
            rows.append((spec, name, out["python"][0], out["cython"][0], same))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--angles", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        kernels.use("cython")
    except ImportError:
        print("compiled kernels are not built; nothing to compare")
        return
    rows = bench(args.angles, args.repeat)
    print(f"{'space':<13} {'task':<15} {'python s':>9} {'cython s':>9} {'speedup':>8}  identical")
    for spec, name, tp, tc, same in rows:
        print(f"{spec:<13} {name:<15} {tp:9.4f} {tc:9.4f} {tp / tc:8.2f}  {same}")
    if not all(r[-1] for r in rows):
        raise SystemExit("backends disagree")


if __name__ == "__main__":
    main()
