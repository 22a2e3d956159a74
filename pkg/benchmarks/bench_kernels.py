"""Timing comparison of the pure-Python and compiled percentile kernels.

Run:  python3 benchmarks/bench_kernels.py [--sizes 100,1000,10000,100000]

Scores each synthetic reference set repeatedly under the mid rule and
reports per-call time plus speedup. The compiled kernel is the Cython
extension built at install time; when it is unavailable the script says so
and times the fallback alone.
"""

from __future__ import annotations

import argparse
import time

from citimpact.kernels import compiled, pure
from citimpact.synthgen import SplitMix64


def _sample(n: int, rng: SplitMix64) -> list[int]:
    # skewed counts: squared uniform stretches the tail a bit
    return [int(200 * rng.random() ** 2) for _ in range(n)]


def _time(func, xs, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        func(xs, "mid")
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="100,1000,10000,100000")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = SplitMix64(0xBEEF)
    print(f"{'N':>8}  {'pure (ms)':>12}  {'compiled (ms)':>14}  {'speedup':>8}")
    for n in sizes:
        xs = _sample(n, rng)
        t_pure = _time(pure.percentile_values, xs, args.repeats)
        if compiled is None:
            print(f"{n:>8}  {t_pure * 1e3:>12.3f}  {'unavailable':>14}  {'':>8}")
            continue
        t_comp = _time(compiled.percentile_values, xs, args.repeats)
        assert list(pure.percentile_values(xs, "mid")) == list(
            compiled.percentile_values(xs, "mid")
        )
        print(f"{n:>8}  {t_pure * 1e3:>12.3f}  {t_comp * 1e3:>14.3f}  {t_pure / t_comp:>7.1f}x")


if __name__ == "__main__":
    main()
