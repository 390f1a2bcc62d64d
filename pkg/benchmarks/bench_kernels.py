"""Time the compiled and pure-Python KL column solvers on the same ball.

    python benchmarks/bench_kernels.py --group g2 --weights 3,1 --radius 12
"""

from __future__ import annotations

import argparse
import time

from klcells import kernel
from klcells.coxeter import get_group
from klcells.klbasis import KLTable
from klcells.weights import WeightFunction


def time_backend(L: WeightFunction, R: int, backend: str, repeat: int) -> tuple[float, KLTable]:
    best, table = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        table = KLTable(L, R, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--group", default="g2")
    ap.add_argument("--weights", default="3,1")
    ap.add_argument("--radius", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    L = WeightFunction.from_params(args.group, [int(x) for x in args.weights.split(",")])
    get_group(args.group).ensure_radius(args.radius)
    print(f"{args.group} weights {L.params} radius {args.radius}: {get_group(args.group).ball_size(args.radius)} elements")
    t_py, tab_py = time_backend(L, args.radius, "python", args.repeat)
    print(f"python  {t_py:8.3f} s")
    if kernel.compiled_solve_column is None:
        print("cython  (extension not built)")
        return 0
    t_cy, tab_cy = time_backend(L, args.radius, "cython", args.repeat)
    print(f"cython  {t_cy:8.3f} s  ({t_py / t_cy:.1f}x)")
    same = all(tab_py.column(w) == tab_cy.column(w) for w in range(tab_py.n))
    print("tables agree" if same else "TABLES DIFFER")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
