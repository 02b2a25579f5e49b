"""Timing comparison of the compiled and numpy quadrature kernels.

Measures the Birkhoff-Rott matrix build, the kernel motion term and the
arc-chord scan on both backends over a range of grid sizes:

    python3 benchmarks/bench_kernels.py --sizes 64 128 256 512 --repeats 20
"""
import argparse
import time

import numpy as np

from interface_dyn import _kernels_np

try:
    from interface_dyn import _kernels
except ImportError:  # pragma: no cover - compiled extension not built
    _kernels = None


# ---------------------------------------------------------------------------
# cases
# ---------------------------------------------------------------------------

def _cases(mod, n: int):
    h = 2.0 * np.pi / n
    nodes = -np.pi + h * np.arange(n)
    r = 1.0 + 0.2 * np.cos(3 * nodes)
    x = r * np.cos(nodes)
    y = r * np.sin(nodes)
    xt, yt = -y.copy(), x.copy()
    u = 1.0 + 0.5 * np.sin(nodes)
    px = 0.05 * np.sin(nodes)          # graph-like curve for the periodic kernel
    py = 0.1 * np.cos(2 * nodes)
    gx, gy = nodes + px, py
    gxt, gyt = 0.3 * np.cos(nodes), -0.2 * np.sin(nodes)
    return {
        "br_build_closed": lambda: mod.br_build_closed(x, y, h),
        "br_build_periodic": lambda: mod.br_build_periodic(gx, gy, h),
        "corr_closed": lambda: mod.corr_closed(x, y, xt, yt, u, h),
        "corr_periodic": lambda: mod.corr_periodic(gx, gy, gxt, gyt, u, h),
        "chord_scan_closed": lambda: mod.chord_scan_closed(x, y, nodes),
        "chord_scan_periodic": lambda: mod.chord_scan_periodic(px, py, nodes),
    }


def _best_of(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    if _kernels is None:
        print("compiled backend unavailable; timing numpy only")

    header = f"{'case':<20}{'n':>6}{'numpy [us]':>14}{'compiled [us]':>16}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        np_cases = _cases(_kernels_np, n)
        c_cases = _cases(_kernels, n) if _kernels is not None else None
        for name, fn in np_cases.items():
            t_np = _best_of(fn, args.repeats)
            if c_cases is None:
                print(f"{name:<20}{n:>6}{t_np * 1e6:>14.1f}{'-':>16}{'-':>10}")
                continue
            t_c = _best_of(c_cases[name], args.repeats)
            print(f"{name:<20}{n:>6}{t_np * 1e6:>14.1f}{t_c * 1e6:>16.1f}"
                  f"{t_np / t_c:>10.2f}")


if __name__ == "__main__":
    main()
