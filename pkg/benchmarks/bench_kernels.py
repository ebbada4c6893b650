"""Timing comparison between the compiled kernels and their NumPy/stdlib
fallbacks.

Run as a script; it reports best-of-three wall times for the sieve, the
compensated prime-weight sums, and the batched Legendre symbols.  Set
IGFIELDS_DISABLE_NUMBA=1 to confirm the package runs (more slowly) without
the JIT.
"""

from __future__ import annotations

import time

from igfields import _kernels, arith


def _best_of(fn, *args, repeat: int = 3) -> float:
    fn(*args)  # warm-up pays any JIT compilation cost up front
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _row(label: str, fallback: float, compiled: float | None) -> None:
    if compiled is None:
        print(f"{label:34s} {fallback * 1e3:10.2f} ms          (no JIT)")
    else:
        speedup = fallback / compiled if compiled > 0 else float("inf")
        print(
            f"{label:34s} {fallback * 1e3:10.2f} ms "
            f"{compiled * 1e3:10.2f} ms {speedup:8.1f}x"
        )


def main() -> None:
    print(f"JIT available: {_kernels.USING_NUMBA}")
    header = f"{'kernel':34s} {'fallback':>13s} {'compiled':>13s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))

    sieve_limit = 10**7
    primes = arith.first_odd_primes(200_000)
    disc = 4 * 3 * 5 * 7 * 11 * 13
    values = primes[:50_000]
    p_mod = 1_000_003

    cases = [
        (f"sieve_flags({sieve_limit})",
         _kernels.sieve_flags_numpy, "sieve_flags_numba", (sieve_limit,)),
        (f"sum_log_over_sqrt({primes.size} primes)",
         _kernels.sum_log_over_sqrt_numpy, "sum_log_over_sqrt_numba", (primes,)),
        (f"sum_log_over_lin({primes.size} primes)",
         _kernels.sum_log_over_lin_numpy, "sum_log_over_lin_numba", (primes,)),
        (f"legendre_mod_many({primes.size} moduli)",
         _kernels.legendre_mod_many_numpy, "legendre_mod_many_numba",
         (disc, primes)),
        (f"legendre_many_mod_p({values.size} values)",
         _kernels.legendre_many_mod_p_numpy, "legendre_many_mod_p_numba",
         (values, p_mod)),
    ]
    for label, fallback_fn, compiled_name, args in cases:
        fallback = _best_of(fallback_fn, *args)
        compiled = None
        if _kernels.USING_NUMBA:
            compiled = _best_of(getattr(_kernels, compiled_name), *args)
        _row(label, fallback, compiled)


if __name__ == "__main__":
    main()
