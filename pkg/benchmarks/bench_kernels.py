"""Compare the compiled and pure-Python kernels, with scipy as a reference.

    python benchmarks/bench_kernels.py [--sizes 4,8,16,32,64] [--repeat 20]

Times the triangular square-root recurrence on the Schur factor of an
accretive matrix, the full principal square root built on it, and the
Hermitian defect. Prints a table and checks that all paths agree.
"""

import argparse
import time

import numpy as np
import scipy.linalg

from realmono import _pykernels
from realmono.hermitian import random_real_positive

try:
    from realmono import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_of(fn, arg, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(arg)
        best = min(best, time.perf_counter() - t0)
    return best


def full_sqrt(kernel):
    def run(X):
        T, Z = scipy.linalg.schur(X, output="complex")
        return Z @ kernel(np.ascontiguousarray(T)) @ Z.conj().T
    return run


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="4,8,16,32,64,128")
    p.add_argument("--repeat", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    kernels = {"python": _pykernels}
    if _ckernels is not None:
        kernels["cython"] = _ckernels
    else:
        print("compiled extension not available; timing the fallback only")

    head = f"{'n':>5} {'kernel':>8} {'triu (ms)':>11} {'sqrtm (ms)':>11} {'defect (us)':>12} {'residual':>10}"
    print(head)
    print("-" * len(head))
    for n in (int(s) for s in args.sizes.split(",")):
        X = random_real_positive(rng, n)
        T = np.ascontiguousarray(scipy.linalg.schur(X, output="complex")[0])
        for name, k in kernels.items():
            t_triu = best_of(k.sqrtm_triu, T, args.repeat)
            t_full = best_of(full_sqrt(k.sqrtm_triu), X, args.repeat)
            t_def = best_of(k.hermitian_defect, X, args.repeat)
            R = full_sqrt(k.sqrtm_triu)(X)
            res = np.linalg.norm(R @ R - X, 2) / np.linalg.norm(X, 2)
            print(f"{n:5d} {name:>8} {1e3 * t_triu:11.3f} {1e3 * t_full:11.3f} {1e6 * t_def:12.2f} {res:10.1e}")
        t_sp = best_of(scipy.linalg.sqrtm, X, args.repeat)
        R = scipy.linalg.sqrtm(X)
        res = np.linalg.norm(R @ R - X, 2) / np.linalg.norm(X, 2)
        print(f"{n:5d} {'scipy':>8} {'':>11} {1e3 * t_sp:11.3f} {'':>12} {res:10.1e}")
        if _ckernels is not None:
            diff = np.max(np.abs(_ckernels.sqrtm_triu(T) - _pykernels.sqrtm_triu(T)))
            assert diff <= 1e-10 * max(1.0, np.max(np.abs(T))), f"kernels disagree at n={n}: {diff:.2e}"


if __name__ == "__main__":
    main()
