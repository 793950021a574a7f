"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 16 32 64] [--repeat 5]
"""
import argparse
import random
import statistics
import time

from blocksieve import _accel
from blocksieve.graph import Graph


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    # a spanning path keeps it connected so every kernel does full work
    edges += [(i, i + 1) for i in range(n - 1)]
    return Graph(range(n), edges)


def best_of(fn, repeat: int) -> tuple:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times), statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--density", type=float, default=0.1)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _accel._ext is None:
        raise SystemExit("compiled extension not available; build with `pip install -e . --no-build-isolation`")

    kernels = {
        # walk powers up to length 8 keep counts inside int64, so the compiled path is taken
        "walk_powers": lambda ip, ix, n, b: _accel.walk_powers(ip, ix, n, 8, backend=b),
        "bfs_all": lambda ip, ix, n, b: _accel.bfs_all(ip, ix, n, backend=b),
        "biconnected": lambda ip, ix, n, b: _accel.biconnected(ip, ix, n, backend=b),
    }
    print(f"{'kernel':<14}{'n':>6}{'m':>7}{'cython ms':>12}{'python ms':>12}{'speedup':>10}")
    for name, fn in kernels.items():
        for n in args.sizes:
            g = random_graph(n, args.density, seed=n)
            ip, ix = g.csr()
            assert fn(ip, ix, n, "cython") == fn(ip, ix, n, "python")
            fast, _ = best_of(lambda: fn(ip, ix, n, "cython"), args.repeat)
            slow, _ = best_of(lambda: fn(ip, ix, n, "python"), args.repeat)
            print(f"{name:<14}{n:>6}{g.m:>7}{fast * 1e3:>12.3f}{slow * 1e3:>12.3f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
