"""Time the numpy fallback against the compiled kernels.

Usage: python3 benchmarks/bench_kernels.py [--n 1000000] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from dirichlet_forge._kernels import available_backends


def workloads(kernels, n):
    lpf = kernels.lpf_sieve(n)
    primes = np.flatnonzero((lpf == np.arange(n + 1)) & (np.arange(n + 1) > 1))
    lam_p = np.zeros(n + 1, dtype=np.complex128)
    lam_p[primes] = -1.0
    logp = np.zeros(n + 1)
    logp[primes] = np.log(primes)
    coeffs = kernels.extend_multiplicative(lpf, lam_p, n)
    logb = np.log(np.maximum(np.arange(n + 1), 1)).astype(np.float64)
    mangoldt = np.zeros(n + 1)
    base = kernels.prime_power_base(lpf, n)
    mangoldt[base > 0] = np.log(base[base > 0])
    return {
        "lpf_sieve": lambda: kernels.lpf_sieve(n),
        "extend_multiplicative": lambda: kernels.extend_multiplicative(lpf, lam_p, n),
        "extend_additive": lambda: kernels.extend_additive(lpf, logp, n),
        "prime_power_base": lambda: kernels.prime_power_base(lpf, n),
        "divisor_sums": lambda: kernels.divisor_sums(mangoldt, n),
        "dirichlet_sum": lambda: kernels.dirichlet_sum(coeffs, logb, complex(2.0, 14.0), 1, n + 1),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10**6)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    timings = {}
    for name, kernels in backends.items():
        for job, fn in workloads(kernels, args.n).items():
            timings.setdefault(job, {})[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))

    names = list(backends)
    both = {"python", "cython"} <= set(names)
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<24}" + "".join(f"{b + ' (ms)':>16}" for b in names) + (f"{'speedup':>10}" if both else ""))
    for job, row in timings.items():
        line = f"{job:<24}" + "".join(f"{1e3 * row[b]:>16.2f}" for b in names)
        if both:
            line += f"{row['python'] / row['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
