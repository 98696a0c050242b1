"""Numba vs numpy kernels, in isolation and end to end.

    python benchmarks/bench_kernels.py [--repeat N]

Kernel timings call both paths in one process (``use_numba=True/False``).
The end-to-end rows run a Leibniz batch and a Dirac assembly in fresh
interpreters with QDIRAC_NUMBA=1 and QDIRAC_NUMBA=0.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qdirac import kernels
from qdirac.rng import generator

END_TO_END = """
import time
from qdirac import calculus, dirac, disc
from qdirac.rng import generator
rng = generator(0)
pairs = [(disc.random_f0(0.5, 24, rng, support=12), disc.random_f0(0.5, 24, rng, support=12)) for _ in range(40)]
D = calculus.TwistedDerivation("T1", 0.5, 24)
calculus.leibniz_residual(D, *pairs[0])
t = time.perf_counter()
for f, g in pairs:
    calculus.leibniz_residual(D, f, g)
t1 = time.perf_counter() - t
dirac.assemble_dirac(dirac.DiracConfig(K=6, M=1))
t = time.perf_counter()
dirac.field_operators.cache_clear()
dirac.assemble_dirac(dirac.DiracConfig(K=24, M=6))
print(t1, time.perf_counter() - t)
"""


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_shift_product(repeat):
    rng = generator(1)
    K, ext = 64, 80
    a = rng.normal(size=ext) + 1j * rng.normal(size=ext)
    b = rng.normal(size=ext) + 1j * rng.normal(size=ext)
    args = (a, a.copy(), b, b.copy(), 1.0, 0.5, 2, -1, K, 40, 50, 70, 70)
    kernels.shift_product(*args, use_numba=True)
    return (_best(lambda: kernels.shift_product(*args, use_numba=True), repeat),
            _best(lambda: kernels.shift_product(*args, use_numba=False), repeat))


def bench_twosided(repeat):
    rng = generator(2)
    K, M = 32, 6
    ldeg, rdeg = np.array([-1, 0, 1]), np.array([-1, 1])
    ltab = rng.normal(size=(3, K)) + 0j
    rtab = rng.normal(size=(2, K)) + 0j
    kernels.twosided_coo(ldeg, ltab, rdeg, rtab, K, M, 1, 1.0, 1, use_numba=True)
    run = lambda nb: kernels.twosided_coo(ldeg, ltab, rdeg, rtab, K, M, 1, 1.0, 1, use_numba=nb)
    return _best(lambda: run(True), repeat), _best(lambda: run(False), repeat)


def end_to_end(flag):
    env = dict(os.environ, QDIRAC_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    return tuple(float(x) for x in out.stdout.split())


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args()
    if not kernels.HAVE_NUMBA:
        print("numba not importable: both columns run the numpy path")
    rows = [("shift_product (K=64)", *bench_shift_product(args.repeat)),
            ("twosided_coo (K=32, M=6)", *bench_twosided(args.repeat))]
    nb, npy = end_to_end("1"), end_to_end("0")
    rows += [("40 Leibniz residuals (K=24)", nb[0], npy[0]),
             ("Dirac assembly (K=24, M=6)", nb[1], npy[1])]
    print(f"{'case':<30}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, a, b in rows:
        print(f"{name:<30}{a:>12.2e}{b:>12.2e}{b / a:>10.1f}")


if __name__ == "__main__":
    main()
