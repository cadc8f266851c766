"""Benchmark the compiled kernel against the pure-Python fallback.

Times raw kernel operations (mul, accumulate, qdiv) in-process against
both implementations, then times an end-to-end colored evaluation in
subprocesses so each side gets the backend selected at import.

Usage: python3 benchmarks/bench_kernel.py [--quick]
"""

import argparse
import os
import random
import subprocess
import sys
import time

from qhomfly import _kernel_py

try:
    from qhomfly import _ckernel
except ImportError:
    _ckernel = None


def _rand_terms(rng: random.Random, count: int, spread: int) -> dict:
    terms = {}
    while len(terms) < count:
        key = (
            rng.randrange(-spread, spread + 1),
            rng.randrange(-4 * spread, 4 * spread + 1),
            rng.randrange(-spread, spread + 1),
        )
        terms[key] = rng.randrange(-999, 1000) or 1
    return terms


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_raw(quick: bool) -> None:
    rng = random.Random(7)
    sizes = [50, 200] if quick else [50, 200, 800]
    repeat = 3
    print(f"{'op':<22}{'pure (s)':>12}{'compiled (s)':>14}{'speedup':>9}")
    for n in sizes:
        f = _rand_terms(rng, n, 20)
        g = _rand_terms(rng, n, 20)
        rows = [(f"mul {n}x{n}", lambda m: m.mul(f, g))]
        # qdiv needs guaranteed-exact input: multiply a bracket in first
        bracket = {(0, 3, 0): 1, (0, -3, 0): -1}
        prod = _kernel_py.mul(f, bracket)
        rows.append((f"qdiv {len(prod)} by [3]", lambda m: m.qdiv(prod, 3)))

        def accumulate(m):
            acc = m.Accum()
            for _ in range(20):
                acc.add_mul(f, g, 1, 0, 0, 1)
            return acc.to_terms()

        rows.append((f"accum 20*({n}x{n})", accumulate))
        for label, fn in rows:
            t_pure = _time(lambda: fn(_kernel_py), repeat)
            if _ckernel is None:
                print(f"{label:<22}{t_pure:>12.4f}{'n/a':>14}{'n/a':>9}")
                continue
            t_c = _time(lambda: fn(_ckernel), repeat)
            assert fn(_kernel_py) == fn(_ckernel)
            print(f"{label:<22}{t_pure:>12.4f}{t_c:>14.4f}{t_pure / t_c:>8.1f}x")


_EVAL_SNIPPET = """
import time
from qhomfly import eval_reduced, link_from_cf, cf, kernel
link = link_from_cf(cf(3))
t0 = time.perf_counter()
eval_reduced(link, {color}, normalize="raw")
print(f"{{kernel.BACKEND}} {{time.perf_counter() - t0:.3f}}")
"""


def bench_eval(quick: bool) -> None:
    color = 12 if quick else 25
    print(f"\nend-to-end: trefoil raw evaluation at color {color}")
    for env_extra in ({"QHOMFLY_PURE": "1"}, {}):
        env = {k: v for k, v in os.environ.items() if k != "QHOMFLY_PURE"}
        env.update(env_extra)
        out = subprocess.run(
            [sys.executable, "-c", _EVAL_SNIPPET.format(color=color)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        backend, elapsed = out.stdout.split()
        print(f"  backend {backend:<10} {elapsed}s")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller sizes")
    args = parser.parse_args()
    if _ckernel is None:
        print("compiled kernel not built; raw timings pure-only", file=sys.stderr)
    bench_raw(args.quick)
    bench_eval(args.quick)


if __name__ == "__main__":
    main()
