"""Compare the compiled and pure-Python kernel backends.

Kernel timings call both modules directly on identical inputs and check
that results agree.  End-to-end timings run a table build and an even-m
construction in subprocesses, once per backend (WEILFORGE_PURE=1 forces
the fallback).

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction
from functools import partial

from weilforge import _kernels_py
from weilforge.family import h
from weilforge.realroots import (
    SturmChain,
    _ceil_scaled,
    _floor_scaled,
    refine_bracket,
    verify_roots_in_ab,
)

try:
    from weilforge import _ckernels
except ImportError:
    _ckernels = None

E2E = {
    'build_table(3001)': 'from weilforge.discquality import build_table; build_table(3001)',
    'construct_even(100, 3)': 'from weilforge.pipeline import construct_even; construct_even(100, 3)',
}


def _workloads():
    rng = random.Random(7)
    small_a = [rng.randint(-9, 9) for _ in range(40)] + [1]
    small_b = [rng.randint(-9, 9) for _ in range(30)] + [1]
    p = h(12, 100)
    big = list(p.coeffs)
    chain = SturmChain(p).chain
    rep = verify_roots_in_ab(p)
    scale = 1 << 48
    br = [refine_bracket(rep.reduced, l, r, Fraction(1, scale)) for l, r in rep.isolating_brackets]
    lo1 = [_floor_scaled(l, scale) - 1 for l, _ in br]
    hi1 = [_ceil_scaled(r, scale) + 1 for _, r in br]
    lo2 = [_floor_scaled(l * l, scale) - 1 for l, _ in br]
    hi2 = [_ceil_scaled(r * r, scale) + 1 for _, r in br]
    d = [-1, 3, -2, 1]
    return {
        'poly_mul small': ('poly_mul', (small_a, small_b)),
        'poly_mul big': ('poly_mul', (big, big)),
        'eval_homogeneous': ('eval_homogeneous', (big, 3, 7)),
        'divmod_unit': ('divmod_unit', (big, d)),
        'sign_variations': ('sign_variations', (chain, 123, 64)),
        'subset_candidates d<=4': ('subset_candidates', (lo1, hi1, lo2, hi2, scale, 4)),
    }


def bench_kernels(repeat: int) -> None:
    print(f'{"kernel":28s} {"python ms":>10s} {"cython ms":>10s} {"speedup":>8s}')
    for name, (fn, args) in _workloads().items():
        py = getattr(_kernels_py, fn)
        t_py = min(timeit.repeat(partial(py, *args), number=1, repeat=repeat)) * 1e3
        if _ckernels is None:
            print(f'{name:28s} {t_py:10.3f} {"n/a":>10s}')
            continue
        cy = getattr(_ckernels, fn)
        if cy(*args) != py(*args):
            raise SystemExit(f'backend mismatch in {name}')
        t_cy = min(timeit.repeat(partial(cy, *args), number=1, repeat=repeat)) * 1e3
        print(f'{name:28s} {t_py:10.3f} {t_cy:10.3f} {t_py / t_cy:7.1f}x')


def bench_end_to_end() -> None:
    print(f'\n{"end to end":28s} {"python s":>10s} {"cython s":>10s} {"speedup":>8s}')
    for name, stmt in E2E.items():
        times = []
        for pure in ('1', '0'):
            env = dict(os.environ, WEILFORGE_PURE=pure)
            code = f'import time; t = time.perf_counter(); {stmt}; print(time.perf_counter() - t)'
            res = subprocess.run([sys.executable, '-c', code], env=env, capture_output=True,
                                 text=True, check=True)
            times.append(float(res.stdout.strip().splitlines()[-1]))
        print(f'{name:28s} {times[0]:10.2f} {times[1]:10.2f} {times[0] / times[1]:7.2f}x')


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument('--repeat', type=int, default=5)
    ap.add_argument('--skip-e2e', action='store_true')
    args = ap.parse_args()
    bench_kernels(args.repeat)
    if not args.skip_e2e:
        bench_end_to_end()


if __name__ == '__main__':
    main()
