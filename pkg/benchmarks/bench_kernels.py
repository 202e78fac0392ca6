#!/usr/bin/env python3
"""Compiled kernels vs the numpy fallback on random dense matrices, plus one end-to-end run.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from kh2 import linalg
from kh2.fields import GF
from kh2.linalg import _fallback

try:
    from kh2.linalg import _kernels
except ImportError:  # pragma: no cover
    _kernels = None

CASES = [  # (label, field degree, rows, cols)
    ("rank GF(2) 2000x2000", 1, 2000, 2000),
    ("rank GF(2) 500x4000", 1, 500, 4000),
    ("rank GF(4) 400x400", 2, 400, 400),
    ("rank GF(2^8) 400x400", 8, 400, 400),
    ("rank GF(2^16) 300x300", 16, 300, 300),
]


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    rows = []
    for label, k, nr, nc in CASES:
        fld = GF(k)
        a = rng.integers(0, fld.order, size=(nr, nc), dtype=np.uint16)
        # rank-deficient so elimination does real back-substitution work
        a[nr // 2:] = a[: nr - nr // 2]
        t_py, r_py = _best(lambda: linalg.rank(a, fld, impl=_fallback), args.repeat)
        row = {"case": label, "python_s": round(t_py, 4), "rank": r_py}
        if _kernels is not None:
            t_c, r_c = _best(lambda: linalg.rank(a, fld, impl=_kernels), args.repeat)
            assert r_c == r_py, (label, r_c, r_py)
            row.update(compiled_s=round(t_c, 4), speedup=round(t_py / t_c, 1) if t_c else None)
        rows.append(row)

    # end to end: 8-crossing knot, field tier, with whichever backend is active
    from kh2.complex import build_complex
    from kh2.frobenius import SYSTEMS
    from kh2.homology import homology_field
    from kh2.table import load_table
    d = load_table()["8_19"]
    t_e2e, mod = _best(lambda: homology_field(build_complex(d, SYSTEMS["kh"])), 1)
    e2e = {"case": f"8_19 field tier end-to-end ({linalg.BACKEND})", "seconds": round(t_e2e, 3),
           "total_rank": mod.total_rank}

    if args.json:
        print(json.dumps({"backend": linalg.BACKEND, "kernels": rows, "end_to_end": e2e}, indent=2))
        return
    print(f"active backend: {linalg.BACKEND}")
    print(f"{'case':26s} {'python (s)':>11s} {'compiled (s)':>13s} {'speedup':>8s}")
    for r in rows:
        print(f"{r['case']:26s} {r['python_s']:11.4f} {r.get('compiled_s', float('nan')):13.4f} "
              f"{r.get('speedup') or float('nan'):8.1f}")
    print(f"{e2e['case']}: {e2e['seconds']} s, total rank {e2e['total_rank']}")


if __name__ == "__main__":
    main()
