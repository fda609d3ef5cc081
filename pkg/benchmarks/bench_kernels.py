"""Compare the numba kernels against their numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is timed on
identical inputs in both variants (results are checked to agree), then one
end-to-end workload is timed in two subprocesses, with and without
``ADDFROB_NUMBA=0``.
"""

import argparse
import json
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from addfrob import _kernels as K
from addfrob.gf import FieldSpec


def _best(fn, number, repeat=5):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def kernel_cases(rng, spec):
    t = spec.tables
    q = spec.order

    def vec(n, top_nonzero=True):
        v = rng.integers(0, q, n)
        if top_nonzero:
            v[-1] = rng.integers(1, q)
        return v.astype(np.int64)

    a, b = vec(120), vec(60)
    g = vec(20)
    ga, gb = K.np_poly_mul(vec(40), g, t.add, t.mul), K.np_poly_mul(vec(35), g, t.add, t.mul)
    m = rng.integers(0, q, (48, 64)).astype(np.int64)
    t1 = rng.integers(0, q, (256, 24)).astype(np.int64)
    t2 = rng.integers(0, q, (256, 24)).astype(np.int64)
    return {
        "poly_mul": (lambda f: f(a, b, t.add, t.mul), 200),
        "poly_divmod": (lambda f: f(a, b, t.add, t.mul, t.neg, t.inv), 200),
        "poly_gcd": (lambda f: f(ga, gb, t.add, t.mul, t.neg, t.inv), 200),
        "rref": (lambda f: f(m.copy(), t.add, t.mul, t.neg, t.inv), 20),
        "pair_extent": (lambda f: f(t1, t2, t.add), 3),
    }


def _same(x, y):
    if isinstance(x, tuple):
        return all(_same(u, v) for u, v in zip(x, y))
    return np.array_equal(x, y)


def bench_kernels(seed=1):
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is unavailable (or ADDFROB_NUMBA=0 is set); nothing to compare")
    rng = np.random.default_rng(seed)
    rows = []
    for spec in (FieldSpec(2), FieldSpec(2, 2), FieldSpec(3)):
        for name, (call, number) in kernel_cases(rng, spec).items():
            nb, npf = getattr(K, "nb_" + name), getattr(K, "np_" + name)
            if not _same(call(nb), call(npf)):
                raise AssertionError(f"{name} disagrees between backends")
            t_nb = _best(lambda: call(nb), number)
            t_np = _best(lambda: call(npf), number)
            rows.append({"field": f"F_{spec.order}", "kernel": name, "numba_us": t_nb * 1e6,
                         "numpy_us": t_np * 1e6, "speedup": t_np / t_nb})
    return rows


WORKLOAD = ("from addfrob.suites import suite_hasse, suite_reduction;"
            "import time; t=time.perf_counter(); suite_hasse(n={n}); suite_reduction(n={n}); "
            "print(time.perf_counter()-t)")


def bench_end_to_end(n):
    out = {}
    for label, flag in (("numba", "1"), ("numpy", "0")):
        env = dict(os.environ, ADDFROB_NUMBA=flag)
        code = WORKLOAD.format(n=n)
        # first run warms the numba cache so compile time is not counted
        subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True)
        t0 = time.perf_counter()
        res = subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True, text=True)
        out[label] = {"workload_s": float(res.stdout.strip()), "process_s": time.perf_counter() - t0}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100, help="samples per suite in the end-to-end workload")
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args(argv)
    rows = bench_kernels()
    e2e = None if args.skip_e2e else bench_end_to_end(args.n)
    if args.json:
        print(json.dumps({"kernels": rows, "end_to_end": e2e}, indent=1, sort_keys=True))
        return
    print(f"{'field':6} {'kernel':12} {'numba us':>10} {'numpy us':>10} {'speedup':>8}")
    for r in rows:
        print(f"{r['field']:6} {r['kernel']:12} {r['numba_us']:10.1f} {r['numpy_us']:10.1f} {r['speedup']:8.1f}")
    if e2e:
        print(f"\nend to end (hasse + reduction suites, n={args.n}):")
        for k, v in e2e.items():
            print(f"  {k:6} {v['workload_s']:.2f} s")


if __name__ == "__main__":
    main()
