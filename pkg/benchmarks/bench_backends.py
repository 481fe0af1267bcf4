"""Time the compiled and pure-Python kernels on the same work.

    python benchmarks/bench_backends.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from janossy import _backend, mc, tw

RAYS = [(-1.0, 1.0), (-3.0, 5.0), (0.0, 8.0), (-10.0, 10.0)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def ode_work(name):
    def run():
        for a, b in RAYS:
            tw.integrate_ray(a, b, backend=name)
    return run


def eig_work(name, N=1000, count=5):
    k = _backend.get(name)
    rng = np.random.default_rng(0)
    mats = [mc._tridiagonal(N, rng) for _ in range(count)]

    def run():
        for d, e in mats:
            k.tqli_eigvalsh(d.copy(), e.copy(), mc.QL_MAX_ITER)
    return run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    names = _backend.available()
    jobs = {"tw rays (4)": ode_work, "tqli N=1000 (5)": eig_work}
    print(f"{'task':<18}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, make in jobs.items():
        t = [best_of(make(n), args.repeat) for n in names]
        line = f"{label:<18}" + "".join(f"{x:>11.4f}s" for x in t)
        if len(t) == 2:
            line += f"{t[1] / t[0]:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
