"""Numerical kernels with optional JIT acceleration.

The hot loops of the package live here: the Eratosthenes sieve, compensated
prime-weight sums (Kahan–Babuska–Neumaier), and batched Legendre symbols via
binary exponentiation.  When numba is importable and the environment variable
IGFIELDS_DISABLE_NUMBA is unset, each kernel is compiled with @njit; otherwise
a NumPy/stdlib fallback with identical semantics is used.  math.fsum in the
fallback and KBN in the compiled path both deliver sums accurate to well over
15 significant digits.  benchmarks/bench_kernels.py times the two paths
against each other.

Legendre kernels work in int64 and therefore require odd prime moduli below
2^31.5 (the squaring step must not overflow); arith.kronecker has no such
restriction and is used whenever the bound could fail.
"""

from __future__ import annotations

import math
import os

import numpy as np

_MAX_INT64_MODULUS = 3_000_000_000  # (p-1)^2 must stay below 2^63


def _numba_requested() -> bool:
    flag = os.environ.get("IGFIELDS_DISABLE_NUMBA", "")
    if flag.strip().lower() in {"1", "true", "yes", "on"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USING_NUMBA = _numba_requested()


# ---------------------------------------------------------------------------
# Fallback implementations (NumPy / stdlib).
# ---------------------------------------------------------------------------

def sieve_flags_numpy(limit: int) -> np.ndarray:
    """Boolean array flags[0..limit] with flags[n] = True iff n is prime."""
    flags = np.ones(limit + 1, dtype=np.bool_)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return flags


def sum_log_numpy(primes: np.ndarray) -> float:
    """Σ log p, exactly rounded over the term list."""
    return math.fsum(np.log(primes.astype(np.float64)))


def sum_log_over_sqrt_numpy(primes: np.ndarray) -> float:
    """Σ log p / (√p − 1)."""
    p = primes.astype(np.float64)
    return math.fsum(np.log(p) / (np.sqrt(p) - 1.0))


def sum_log_over_lin_numpy(primes: np.ndarray) -> float:
    """Σ log p / (p − 1)."""
    p = primes.astype(np.float64)
    return math.fsum(np.log(p) / (p - 1.0))


def sum_reciprocal_numpy(values: np.ndarray) -> float:
    """Σ 1/v."""
    return math.fsum(1.0 / values.astype(np.float64))


def legendre_mod_many_numpy(a: int, primes: np.ndarray) -> np.ndarray:
    """Legendre symbols (a/p) for one integer over an array of odd primes."""
    out = np.empty(primes.shape[0], dtype=np.int8)
    for i, p in enumerate(primes.tolist()):
        s = pow(a % p, (p - 1) // 2, p)
        out[i] = -1 if s == p - 1 else s
    return out


def legendre_many_mod_p_numpy(values: np.ndarray, p: int) -> np.ndarray:
    """Legendre symbols (v/p) for an array of integers modulo one odd prime."""
    e = (p - 1) // 2
    out = np.empty(values.shape[0], dtype=np.int8)
    for i, v in enumerate(values.tolist()):
        s = pow(v % p, e, p)
        out[i] = -1 if s == p - 1 else s
    return out


# ---------------------------------------------------------------------------
# Compiled implementations.
# ---------------------------------------------------------------------------

if USING_NUMBA:
    from numba import njit

    @njit(cache=True)
    def sieve_flags_numba(limit: int) -> np.ndarray:  # pragma: no cover
        flags = np.ones(limit + 1, dtype=np.bool_)
        flags[0] = False
        if limit >= 1:
            flags[1] = False
        p = 2
        while p * p <= limit:
            if flags[p]:
                for m in range(p * p, limit + 1, p):
                    flags[m] = False
            p += 1
        return flags

    @njit(cache=True)
    def _kbn_weighted(primes, mode):  # pragma: no cover
        # mode 0: log p; 1: log p/(sqrt p - 1); 2: log p/(p - 1); 3: 1/p
        s = 0.0
        c = 0.0
        for i in range(primes.shape[0]):
            p = float(primes[i])
            if mode == 0:
                term = math.log(p)
            elif mode == 1:
                term = math.log(p) / (math.sqrt(p) - 1.0)
            elif mode == 2:
                term = math.log(p) / (p - 1.0)
            else:
                term = 1.0 / p
            t = s + term
            if abs(s) >= abs(term):
                c += (s - t) + term
            else:
                c += (term - t) + s
            s = t
        return s + c

    @njit(cache=True)
    def _legendre_mod_many_numba(a, primes):  # pragma: no cover
        out = np.empty(primes.shape[0], dtype=np.int8)
        for i in range(primes.shape[0]):
            p = primes[i]
            r = a % p
            if r < 0:
                r += p
            e = (p - 1) // 2
            acc = 1
            base = r
            while e > 0:
                if e & 1:
                    acc = (acc * base) % p
                base = (base * base) % p
                e >>= 1
            out[i] = -1 if acc == p - 1 else acc
        return out

    @njit(cache=True)
    def _legendre_many_mod_p_numba(values, p):  # pragma: no cover
        out = np.empty(values.shape[0], dtype=np.int8)
        for i in range(values.shape[0]):
            r = values[i] % p
            if r < 0:
                r += p
            e = (p - 1) // 2
            acc = 1
            base = r
            while e > 0:
                if e & 1:
                    acc = (acc * base) % p
                base = (base * base) % p
                e >>= 1
            out[i] = -1 if acc == p - 1 else acc
        return out

    def sum_log_numba(primes: np.ndarray) -> float:
        return _kbn_weighted(primes.astype(np.int64), 0)

    def sum_log_over_sqrt_numba(primes: np.ndarray) -> float:
        return _kbn_weighted(primes.astype(np.int64), 1)

    def sum_log_over_lin_numba(primes: np.ndarray) -> float:
        return _kbn_weighted(primes.astype(np.int64), 2)

    def sum_reciprocal_numba(values: np.ndarray) -> float:
        return _kbn_weighted(values.astype(np.int64), 3)

    def legendre_mod_many_numba(a: int, primes: np.ndarray) -> np.ndarray:
        return _legendre_mod_many_numba(np.int64(a), primes.astype(np.int64))

    def legendre_many_mod_p_numba(values: np.ndarray, p: int) -> np.ndarray:
        return _legendre_many_mod_p_numba(values.astype(np.int64), np.int64(p))


# ---------------------------------------------------------------------------
# Dispatch.
# ---------------------------------------------------------------------------

if USING_NUMBA:
    sieve_flags = sieve_flags_numba
    sum_log = sum_log_numba
    sum_log_over_sqrt = sum_log_over_sqrt_numba
    sum_log_over_lin = sum_log_over_lin_numba
    sum_reciprocal = sum_reciprocal_numba
    _legendre_mod_many = legendre_mod_many_numba
    _legendre_many_mod_p = legendre_many_mod_p_numba
else:
    sieve_flags = sieve_flags_numpy
    sum_log = sum_log_numpy
    sum_log_over_sqrt = sum_log_over_sqrt_numpy
    sum_log_over_lin = sum_log_over_lin_numpy
    sum_reciprocal = sum_reciprocal_numpy
    _legendre_mod_many = legendre_mod_many_numpy
    _legendre_many_mod_p = legendre_many_mod_p_numpy


def legendre_mod_many(a: int, primes: np.ndarray) -> np.ndarray:
    """(a/p) over an array of odd primes; falls back for oversized inputs."""
    if abs(a) < _MAX_INT64_MODULUS and (
        primes.size == 0 or int(primes[-1]) < _MAX_INT64_MODULUS
    ):
        return _legendre_mod_many(a, primes)
    return legendre_mod_many_numpy(a, primes)


def legendre_many_mod_p(values: np.ndarray, p: int) -> np.ndarray:
    """(v/p) over an array of integers; falls back for oversized moduli."""
    if p < _MAX_INT64_MODULUS and (
        values.size == 0 or int(np.abs(values).max()) < _MAX_INT64_MODULUS
    ):
        return _legendre_many_mod_p(values, p)
    return legendre_many_mod_p_numpy(values, p)
