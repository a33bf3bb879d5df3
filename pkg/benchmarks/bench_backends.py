#!/usr/bin/env python3
"""Benchmark the pure-Python keystream backend against the compiled one.

The per-byte round loop (one network step, eight tent iterations, weight
flips) dominates cipher runtime, which is why it lives in a compiled
extension.  This script times both backends on identical inputs, checks
they agree bit for bit, and reports the speedup.

    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --bytes 4096 65536 1048576 --repeat 5
"""

import argparse
import time

import numpy as np

from cnncipher import _purepy
from cnncipher.cipher import SecretKey, _fresh_state, encrypt_stream

try:
    from cnncipher import _speed
except ImportError:
    _speed = None

KEY = SecretKey(1.99, 0.41, (1, -1, 1, -1, 1, -1, 1, -1))


def time_backend(impl, n, repeat):
    state = _fresh_state(KEY)
    best = float("inf")
    result = None
    for _ in range(repeat):
        cells = state.cells.copy()
        weights = state.weights.copy()
        masks = np.empty(n, np.uint8)
        xs = np.empty(n, np.float64)
        start = time.perf_counter()
        impl.run_rounds(state.r, state.x, cells, weights, masks, xs, False)
        best = min(best, time.perf_counter() - start)
        result = (masks, xs)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bytes", type=int, nargs="+",
                        default=[4096, 65536, 262144],
                        help="keystream lengths to time")
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions per measurement (best is kept)")
    args = parser.parse_args()

    if _speed is None:
        print("compiled backend not built; timing the pure backend only")

    header = f"{'bytes':>9}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in args.bytes:
        pure_t, pure_out = time_backend(_purepy, n, args.repeat)
        if _speed is None:
            print(f"{n:>9}  {pure_t:>9.4f}s  {'-':>10}  {'-':>8}")
            continue
        fast_t, fast_out = time_backend(_speed, n, args.repeat)
        if not (np.array_equal(pure_out[0], fast_out[0])
                and np.array_equal(pure_out[1], fast_out[1])):
            raise SystemExit(f"backends disagree at {n} bytes")
        print(f"{n:>9}  {pure_t:>9.4f}s  {fast_t:>9.4f}s  {pure_t / fast_t:>7.1f}x")

    # one end-to-end figure on the active backend
    data = np.random.default_rng(0).integers(0, 256, 65536, dtype=np.uint8).tobytes()
    start = time.perf_counter()
    encrypt_stream(KEY, data)
    elapsed = time.perf_counter() - start
    from cnncipher import BACKEND
    print(f"\nencrypt_stream of 65536 bytes on the {BACKEND} backend: {elapsed:.4f}s")


if __name__ == "__main__":
    main()
