"""Compare the compiled and pure-Python kernels on the hot paths.

Run: python3 benchmarks/bench_kernels.py [--repeat 3]
Each workload builds fresh rewrite systems so normal-form caches start cold.
"""

import argparse
import random
import time

from gmpy2 import mpq

from kappatwist import _backend, deform, hopf, linsolve, pbw


def work_normal_forms():
    h = hopf.kappa_poincare(4, 4)
    rng = random.Random(1)
    for _ in range(300):
        w = [rng.randrange(h.rs.dim) for _ in range(5)]
        pbw.normal_form(h.rs, w)


def work_hopf_check():
    hopf.check_hopf_axioms(hopf.kappa_poincare(3, 4), samples=20)


def work_twist():
    deform.kappa_pipeline(hopf.kappa_poincare(3, 3))


def work_elimination():
    rng = random.Random(2)
    n = 160
    rows = [{j: rng.randint(-3, 3) for j in rng.sample(range(n), 12)} for _ in range(n)]
    rows = [{k: mpq(v) for k, v in r.items() if v} for r in rows]
    linsolve.rank(rows, n)


WORKLOADS = [
    ("normal_form kappa-poincare-4 N=4", work_normal_forms),
    ("check_hopf_axioms kappa-poincare-3 N=4", work_hopf_check),
    ("twist pipeline kappa-poincare-3 order 3", work_twist),
    ("sparse rank 160x160", work_elimination),
]


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"]
    try:
        _backend.use("cython")
        backends.append("cython")
    except ImportError:
        print("compiled kernels not built; timing the pure-Python backend only")
    print("%-44s %10s %10s %8s" % ("workload", "python", "cython", "speedup"))
    for name, fn in WORKLOADS:
        times = {}
        for b in backends:
            _backend.use(b)
            times[b] = timed(fn, args.repeat)
        c = times.get("cython")
        print("%-44s %9.3fs %10s %8s" % (
            name, times["python"], "%.3fs" % c if c else "-",
            "%.2fx" % (times["python"] / c) if c else "-"))


if __name__ == "__main__":
    main()
