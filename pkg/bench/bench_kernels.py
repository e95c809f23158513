"""Benchmark the JIT-compiled kernels against the pure-Python fallback.

Without arguments this script re-runs itself in two subprocesses, one
with numba active and one with RAINBOWFREE_NO_NUMBA=1, then prints a
side-by-side table. --single runs the benchmarks in the current lane
and emits raw tab-separated rows (the parent invocation consumes this).

Usage: python bench/bench_kernels.py [--single] [--reps R]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time


def _timeit(fn, reps: int) -> float:
    fn()  # warmup; compiles the kernel on the numba lane
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _bench_rows(reps: int) -> list[tuple[str, float]]:
    import numpy as np

    from rainbowfree import _accel
    from rainbowfree.constructions import t_star
    from rainbowfree.rainbow import family_state
    from rainbowfree.search import enumerate_extremal, max_family

    rows: list[tuple[str, float]] = []

    cnt20, mult20, idx20 = family_state(t_star(20))
    rows.append(
        (
            "rainbow_triple_scan n=20",
            _timeit(
                lambda: _accel.rainbow_triple_scan(cnt20, mult20, idx20, 20), reps
            ),
        )
    )

    cnt16, mult16, idx16 = family_state(t_star(16))
    pool16, _ = _accel.build_pool(16)

    def all_adds() -> None:
        for x, y, z in pool16:
            _accel.rainbow_after_add(cnt16, mult16, idx16, 16, x, y, z, 1)

    rows.append((f"rainbow_after_add x{len(pool16)} n=16", _timeit(all_adds, reps)))

    cnt12, mult12, idx12 = family_state(t_star(12))
    pool12, _ = _accel.build_pool(12)
    pa = np.array([t[0] for t in pool12], dtype=np.int64)
    pb = np.array([t[1] for t in pool12], dtype=np.int64)
    pc = np.array([t[2] for t in pool12], dtype=np.int64)
    buf = np.zeros(len(pool12), dtype=np.int64)
    rows.append(
        (
            "list_extensions n=12",
            _timeit(
                lambda: _accel.list_extensions(
                    cnt12, mult12, idx12, 12, pa, pb, pc, 0, 1, buf
                ),
                reps,
            ),
        )
    )

    f12 = t_star(12)
    ta = np.array([t[0] for t, _ in f12.members], dtype=np.int64)
    tb = np.array([t[1] for t, _ in f12.members], dtype=np.int64)
    tc = np.array([t[2] for t, _ in f12.members], dtype=np.int64)
    tm = np.array([m for _, m in f12.members], dtype=np.int64)
    sup = np.array(f12.support_vertices(), dtype=np.int64)
    rows.append(
        (
            "is_min_labeled t_star(12)",
            _timeit(lambda: _accel.is_min_labeled(ta, tb, tc, tm, sup, 12), reps),
        )
    )

    rows.append(("search maximize n=7", _timeit(lambda: max_family(7), max(1, reps // 3))))
    rows.append(
        (
            "search enumerate n=8",
            _timeit(lambda: enumerate_extremal(8), max(1, reps // 3)),
        )
    )
    return rows


def _run_single(reps: int) -> int:
    from rainbowfree import _accel

    print(f"lane\t{'numba' if _accel.USING_NUMBA else 'python'}")
    for name, secs in _bench_rows(reps):
        print(f"{name}\t{secs:.6f}")
    return 0


def _run_lane(no_numba: bool, reps: int) -> tuple[str, dict[str, float]]:
    env = dict(os.environ)
    env.pop("RAINBOWFREE_NO_NUMBA", None)
    if no_numba:
        env["RAINBOWFREE_NO_NUMBA"] = "1"
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--single", "--reps", str(reps)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    ).stdout
    lane = "?"
    rows: dict[str, float] = {}
    for line in out.splitlines():
        name, _, value = line.partition("\t")
        if name == "lane":
            lane = value
        elif value:
            rows[name] = float(value)
    return lane, rows


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--single", action="store_true")
    ap.add_argument("--reps", type=int, default=7)
    args = ap.parse_args(argv)
    if args.single:
        return _run_single(args.reps)

    fast_lane, fast = _run_lane(no_numba=False, reps=args.reps)
    slow_lane, slow = _run_lane(no_numba=True, reps=args.reps)
    if fast_lane != "numba":
        print("warning: numba unavailable, comparing python against itself")
    width = max(len(name) for name in fast)
    print(f"{'benchmark':<{width}}  {fast_lane:>12}  {slow_lane:>12}  {'speedup':>8}")
    for name in fast:
        a, b = fast[name], slow[name]
        ratio = b / a if a > 0 else float("inf")
        print(f"{name:<{width}}  {a * 1e3:>10.3f}ms  {b * 1e3:>10.3f}ms  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
