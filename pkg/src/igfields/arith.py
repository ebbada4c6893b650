"""Exact integer and prime-analytic primitives.

Everything downstream reduces to what lives here: a prime sieve, the n-th
odd prime, the Chebyshev function ϑ(x) = Σ_{p≤x} log p, the Kronecker symbol
(a/n), CRT lifting, and squarefree reduction.  Integer inputs may be
arbitrary precision; products such as 2·∏p_i·∏q_j exceed 64 bits almost
immediately and are always handled as Python ints.  Real-valued sums use
compensated summation and are good to at least 15 significant digits.

ϑ uses the natural logarithm; callers needing base-r logarithms (the
function-field variants) convert at the call site.
"""

from __future__ import annotations

import math
import threading
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from igfields import _kernels

# Deterministic Miller–Rabin witnesses for n < 3.3·10^24; beyond that the
# same bases make the test probabilistic with error < 4^-13.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, ascending.

    Attributes:
        limit: Inclusive sieving bound.
        primes: int64 array of every prime ≤ limit, strictly ascending.
    """

    limit: int
    primes: np.ndarray

    def count(self) -> int:
        return int(self.primes.shape[0])

    def __contains__(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            return False
        i = bisect_right(self.primes, n)
        return i > 0 and int(self.primes[i - 1]) == n


def sieve(limit: int) -> PrimeTable:
    """Eratosthenes sieve of every prime ≤ limit.

    Args:
        limit: Inclusive bound, at least 2.

    Returns:
        PrimeTable with ascending primes.

    Raises:
        ValueError: If limit < 2.
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be at least 2, got {limit}")
    flags = _kernels.sieve_flags(int(limit))
    primes = np.nonzero(flags)[0].astype(np.int64)
    return PrimeTable(limit=int(limit), primes=primes)


# A single shared table, grown geometrically on demand.  Reads of _table are
# atomic; growth is serialized by the lock, so concurrent callers only ever
# see a fully built table.
_table: PrimeTable = sieve(1 << 10)
_table_lock = threading.Lock()


def _primes_to(limit: int) -> PrimeTable:
    """Shared table covering at least ``limit``."""
    global _table
    t = _table
    if t.limit >= limit:
        return t
    with _table_lock:
        if _table.limit < limit:
            new_limit = max(limit, 2 * _table.limit)
            _table = sieve(new_limit)
        return _table


def _primes_count(count: int) -> PrimeTable:
    """Shared table holding at least ``count`` primes."""
    t = _table
    while t.count() < count:
        t = _primes_to(2 * t.limit)
    return t


def nth_prime(n: int) -> int:
    """The n-th prime overall (n=1 → 2)."""
    if n < 1:
        raise ValueError(f"prime index must be positive, got {n}")
    t = _primes_count(n)
    return int(t.primes[n - 1])


def nth_odd_prime(n: int) -> int:
    """The n-th prime strictly greater than 2 (n=1 → 3).

    Raises:
        ValueError: If n < 1.
    """
    return nth_prime(n + 1)


def first_odd_primes(n: int) -> np.ndarray:
    """int64 array of the first n odd primes."""
    if n < 0:
        raise ValueError(f"count must be nonnegative, got {n}")
    t = _primes_count(n + 1)
    return t.primes[1: n + 1].copy()


def next_primes_after(p: int, count: int) -> np.ndarray:
    """int64 array of the first ``count`` primes strictly greater than p."""
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    t = _primes_to(max(p, 2))
    start = bisect_right(t.primes, p)
    while t.count() - start < count:
        t = _primes_to(2 * t.limit)
        start = bisect_right(t.primes, p)
    return t.primes[start: start + count].copy()


def primes_upto(x: float) -> np.ndarray:
    """int64 array of all primes ≤ x (empty for x < 2)."""
    if x < 2:
        return np.empty(0, dtype=np.int64)
    limit = int(math.floor(x))
    t = _primes_to(limit)
    end = bisect_right(t.primes, limit)
    return t.primes[:end]


def theta(x: float) -> float:
    """Chebyshev function ϑ(x) = Σ_{p ≤ x} log p, compensated summation.

    Returns 0 for x < 2.

    Raises:
        ValueError: If x < 0.
    """
    if x < 0:
        raise ValueError(f"theta argument must be nonnegative, got {x}")
    ps = primes_upto(x)
    if ps.size == 0:
        return 0.0
    return _kernels.sum_log(ps)


def is_prime(n: int) -> bool:
    """Miller–Rabin primality test, deterministic for n < 3.3·10^24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd m > 0."""
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), equal to the Legendre symbol for odd prime n.

    Standard extension: (a/2) is 0 for even a and (−1)^((a²−1)/8) otherwise;
    (a/−1) is −1 exactly for a < 0; (a/1) = 1.

    Raises:
        ValueError: If n = 0.
    """
    if n == 0:
        raise ValueError("kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5) and twos % 2 == 1:
            result = -result
    return result * _jacobi(a, n)


def crt(residues: list[tuple[int, int]]) -> int:
    """Solve x ≡ rᵢ (mod mᵢ) for pairwise coprime moduli.

    Args:
        residues: Sequence of (remainder, modulus) pairs; moduli ≥ 1.

    Returns:
        The unique solution in [0, ∏ mᵢ).

    Raises:
        ValueError: If the moduli are not pairwise coprime or some
            modulus is < 1.
    """
    pairs = [(int(r), int(m)) for r, m in residues]
    for _, m in pairs:
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if math.gcd(pairs[i][1], pairs[j][1]) != 1:
                raise ValueError(
                    f"moduli {pairs[i][1]} and {pairs[j][1]} are not coprime"
                )
    modulus = 1
    for _, m in pairs:
        modulus *= m
    x = 0
    for r, m in pairs:
        if m == 1:
            continue
        t = modulus // m
        x += r * t * pow(t, -1, m)
    return x % modulus


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n ≥ 1 as ascending (prime, exponent) pairs.

    Trial division; complete for any n whose second-largest prime factor is
    within sieving reach.  Not intended for cryptographic-size semiprimes.
    """
    if n < 1:
        raise ValueError(f"factorize requires n ≥ 1, got {n}")
    out: list[tuple[int, int]] = []
    if n == 1:
        return out
    t = _primes_to(max(1 << 10, min(math.isqrt(n) + 1, 1 << 22)))
    rem = n
    idx = 0
    while rem > 1:
        if idx >= t.count():
            if is_prime(rem):
                out.append((rem, 1))
                return out
            t = _primes_to(2 * t.limit)
            continue
        p = int(t.primes[idx])
        if p * p > rem:
            out.append((rem, 1))
            return out
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            out.append((p, e))
        idx += 1
    return out


def squarefree_reduce(n: int) -> int:
    """Squarefree kernel of n ≥ 1: divide out p² while any square remains.

    Equivalent to keeping each prime exactly when its exponent is odd, so
    the result divides n and n/result is a perfect square (12 → 3, 360 → 10).
    """
    if n < 1:
        raise ValueError(f"squarefree_reduce requires n ≥ 1, got {n}")
    out = 1
    for p, e in factorize(n):
        if e % 2 == 1:
            out *= p
    return out


def is_squarefree(n: int) -> bool:
    """True iff no p² divides n (n ≥ 1)."""
    return squarefree_reduce(n) == n
