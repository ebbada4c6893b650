"""Quadratic fields Q(√d) and the split-prime field construction.

A QuadField carries the discriminant, genus (½ log|disc|, in nats), signature
and ramified primes of Q(√d).  construct_Kn builds, for the first n odd
primes P, a real quadratic field K_n = Q(√(q_1···q_{r_n}·r)) in which every
p ∈ P splits and whose ramified-prime count clears the Golod–Shafarevich
threshold, so K_n carries an infinite unramified 2-class field tower with P
totally split.

The multiplier r is chosen as a product of distinct primes outside P ∪ Q
whose Legendre-symbol vector over P hits the required targets
(r/p_i) = ∏_j (q_j/p_i); solving for the product subset is linear algebra
over GF(2).  Working with a known factorization keeps every postcondition
(odd, squarefree, coprime, correct symbols, r < 2·∏P·∏Q) certifiable, which
a plain CRT lift of this size would not be.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from igfields import arith, bounds
from igfields.errors import ConstructionError


class SplitType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class QuadField:
    """The quadratic field Q(√d) for squarefree d ∉ {0, 1}.

    Attributes:
        d: Squarefree defining integer.
        discriminant: d if d ≡ 1 (mod 4), else 4d.
        genus: ½·log|discriminant| (nats).
        r1: Real places (2 if d > 0 else 0).
        r2: Complex places (0 if d > 0 else 1).
        ramified_primes: Ascending prime divisors of the discriminant.
    """

    d: int
    discriminant: int
    genus: float
    r1: int
    r2: int
    ramified_primes: tuple[int, ...]

    @classmethod
    def from_d(cls, d: int, factors: tuple[int, ...] | None = None) -> "QuadField":
        """Build Q(√d), validating that d is squarefree.

        Args:
            d: Defining integer, squarefree, not 0 or 1.
            factors: Optional known ascending prime factorization of |d|;
                required in practice when |d| is too large to factor by
                trial division.

        Raises:
            ValueError: If d is 0/1, not squarefree, or factors are wrong.
        """
        if d in (0, 1):
            raise ValueError(f"d must define a quadratic field, got {d}")
        if factors is None:
            factor_pairs = arith.factorize(abs(d))
            if any(e != 1 for _, e in factor_pairs):
                raise ValueError(f"d must be squarefree, got {d}")
            factors = tuple(p for p, _ in factor_pairs)
        else:
            factors = tuple(int(p) for p in factors)
            if list(factors) != sorted(set(factors)):
                raise ValueError("factors must be ascending and distinct")
            prod = 1
            for p in factors:
                if not arith.is_prime(p):
                    raise ValueError(f"claimed factor {p} is not prime")
                prod *= p
            if prod != abs(d):
                raise ValueError("factors do not multiply to |d|")
        disc = d if d % 4 == 1 else 4 * d
        ram = factors if disc == d else tuple(sorted(set(factors) | {2}))
        genus = 0.5 * math.log(abs(disc))
        r1, r2 = (2, 0) if d > 0 else (0, 1)
        return cls(
            d=d, discriminant=disc, genus=genus, r1=r1, r2=r2,
            ramified_primes=ram,
        )


def split_type(field: QuadField, p: int) -> SplitType:
    """Splitting behaviour of the rational prime p in the field.

    Ramified iff p divides the discriminant; otherwise split iff the
    discriminant is a nonzero square mod p (for p = 2: iff d ≡ 1 mod 8).

    Raises:
        ValueError: If p is not prime.
    """
    if not arith.is_prime(p):
        raise ValueError(f"split_type requires a prime, got {p}")
    if field.discriminant % p == 0:
        return SplitType.RAMIFIED
    if p == 2:
        return SplitType.SPLIT if field.d % 8 == 1 else SplitType.INERT
    sym = arith.kronecker(field.discriminant % p, p)
    return SplitType.SPLIT if sym == 1 else SplitType.INERT


def rn_formula(n: int) -> int:
    """Auxiliary prime count r_n = 1 + ⌊n + 5 + 2√(2n+5)⌋, exactly.

    Evaluated as n + 6 + isqrt(8n + 20): the smallest integer exceeding the
    threshold n + 5 + 2√(2n+5), with the floor taken in integer arithmetic.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return n + 6 + math.isqrt(8 * n + 20)


@dataclass(frozen=True)
class ConstructionResult:
    """Output of construct_Kn.

    Attributes:
        n: Number of prescribed split primes.
        P: The first n odd primes, all split in ``field``.
        rn: Count of auxiliary ramified primes.
        Q_primes: The r_n primes immediately after p_n.
        r: Odd squarefree multiplier coprime to P and Q_primes.
        field: Q(√(r·∏Q_primes)).
        gs_threshold: Golod–Shafarevich threshold C for this setup.
        gs_satisfied: Whether #ramified ≥ C (always true by design).
    """

    n: int
    P: tuple[int, ...]
    rn: int
    Q_primes: tuple[int, ...]
    r: int
    field: QuadField
    gs_threshold: float
    gs_satisfied: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rn": self.rn,
            "P": list(self.P),
            "Q": list(self.Q_primes),
            "r": self.r,
            "d": self.field.d,
            "discriminant": self.field.discriminant,
            "genus": self.field.genus,
            "ramified": list(self.field.ramified_primes),
            "gs_threshold": self.gs_threshold,
        }


def _legendre_targets(P: list[int], Q: list[int]) -> int:
    """Bitmask over P-indices: bit i set iff ∏_j (q_j/p_i) = −1."""
    q_arr = np.array(Q, dtype=np.int64)
    mask = 0
    for i, p in enumerate(P):
        symbols = _legendre_row(q_arr, p)
        negatives = int(np.count_nonzero(symbols == -1))
        if int(np.count_nonzero(symbols == 0)):
            raise ValueError("P and Q_primes must be disjoint")
        if negatives % 2 == 1:
            mask |= 1 << i
    return mask


def _legendre_row(values: np.ndarray, p: int) -> np.ndarray:
    from igfields import _kernels

    return _kernels.legendre_many_mod_p(values, p)


def _legendre_col(a: int, primes: np.ndarray) -> np.ndarray:
    from igfields import _kernels

    return _kernels.legendre_mod_many(a, primes)


class _Gf2Solver:
    """Online Gaussian elimination over GF(2) with combination tracking.

    Vectors are bitmasks over the target coordinates; each basis row also
    carries the set (bitmask over stream indices) of input vectors whose sum
    it equals.
    """

    def __init__(self) -> None:
        self._pivots: dict[int, tuple[int, int]] = {}

    def add(self, vec: int, stream_index: int) -> None:
        mask = 1 << stream_index
        while vec:
            low = vec & -vec
            row = self._pivots.get(low)
            if row is None:
                self._pivots[low] = (vec, mask)
                return
            vec ^= row[0]
            mask ^= row[1]

    def solve(self, target: int) -> int | None:
        """Stream-index bitmask whose vectors sum to target, or None."""
        mask = 0
        while target:
            low = target & -target
            row = self._pivots.get(low)
            if row is None:
                return None
            target ^= row[0]
            mask ^= row[1]
        return mask


def _pool_primes(exclude: frozenset[int]):
    """Ascending odd primes not in ``exclude``."""
    last = 2
    while True:
        block = arith.next_primes_after(last, 512)
        for p in block.tolist():
            if p not in exclude:
                yield p
        last = int(block[-1])


def _symbol_mask(a: int, p_arr: np.ndarray) -> int:
    """Bitmask over p_arr indices where (a/p_i) = −1."""
    mask = 0
    if p_arr.size:
        col = _legendre_col(a, p_arr)
        for i, s in enumerate(col.tolist()):
            if s == -1:
                mask |= 1 << i
    return mask


def _solve_r_minimal(
    targets: int, p_arr: np.ndarray, pool,
) -> set[int]:
    """Smallest-window factor set: empty when every target symbol is +1."""
    if not targets:
        return set()
    solver = _Gf2Solver()
    stream: list[int] = []
    for s in pool:
        stream.append(s)
        solver.add(_symbol_mask(s, p_arr), len(stream) - 1)
        solution = solver.solve(targets)
        if solution is not None:
            return {stream[i] for i in _bit_indices(solution)}
    raise AssertionError  # pragma: no cover - pool generator is infinite


def _solve_r_padded(
    targets: int, p_arr: np.ndarray, exclude: frozenset[int], bound: int,
) -> set[int]:
    """Factor set whose product sits just under ``bound``.

    Packs pairs of adjacent pool primes while the everywhere-larger choice
    ∏ b_k stays under the bound, then takes one prime per pair: the larger
    one exactly on a correction subset of pairs chosen by GF(2) elimination
    so that the combined symbol vector hits ``targets``.  Swapping within a
    pair moves the symbol vector by vec(a)⊕vec(b) while moving the size by
    only log(b/a), so the product stays within ∏ a_k .. ∏ b_k regardless of
    which correction the elimination finds.
    """
    pool = _pool_primes(exclude)
    pairs: list[tuple[int, int]] = []
    prod_b = 1
    for a in pool:
        b = next(pool)
        if prod_b * b >= bound:
            break
        pairs.append((a, b))
        prod_b *= b

    residual = targets
    solver = _Gf2Solver()
    for k, (a, b) in enumerate(pairs):
        va = _symbol_mask(a, p_arr)
        vb = _symbol_mask(b, p_arr)
        residual ^= va
        solver.add(va ^ vb, k)
    solution = solver.solve(residual)
    if solution is None:
        # The packed swap vectors span all of GF(2)^|P| except with
        # probability ~2^{-(#pairs - |P|)}; if that ever happens, fall back
        # to the smallest-window solution over a fresh pool.
        return _solve_r_minimal(targets, p_arr, _pool_primes(exclude))
    flips = set(_bit_indices(solution))
    return {b if k in flips else a for k, (a, b) in enumerate(pairs)}


def _solve_r_scan(
    targets: int, P: list[int], Q: list[int], bound: int,
) -> set[int]:
    """Exhaustive ascending scan for a valid multiplier below the bound.

    Last resort for tiny inputs, where the subset-of-primes modes can
    overshoot 2·∏P·∏Q; the scan space is then small by construction.
    """
    limit = min(bound, 2_000_000)
    r = 1
    while r < limit:
        if all(r % q for q in Q) and all(r % p for p in P):
            factor_pairs = arith.factorize(r)
            if all(e == 1 for _, e in factor_pairs):
                ok = True
                for i, p in enumerate(P):
                    want = -1 if (targets >> i) & 1 else 1
                    if arith.kronecker(r % p, p) != want:
                        ok = False
                        break
                if ok:
                    return {p for p, _ in factor_pairs}
        r += 2
    raise ConstructionError(
        f"no multiplier below the contract bound {bound} within scan range"
    )


def _solve_r(
    P: list[int], Q: list[int], pad: bool = False
) -> tuple[int, tuple[int, ...]]:
    """Find r = ∏(distinct primes ∉ P∪Q) with (r/p_i) = ∏_j (q_j/p_i).

    Returns (r, its ascending prime factors).  With pad=False the returned r
    is the canonical smallest-window solution (r = 1 whenever all targets are
    +1).  With pad=True, r is padded to lie just under the contract bound
    2·∏P·∏Q, mirroring the size of a generic residue lift.
    """
    for p in P + Q:
        if p == 2:
            raise ValueError("P and Q_primes must consist of odd primes")
        if not arith.is_prime(p):
            raise ValueError(f"{p} is not prime")
    if set(P) & set(Q):
        raise ValueError("P and Q_primes must be disjoint")

    bound = 2
    for p in P:
        bound *= p
    for q in Q:
        bound *= q

    p_arr = np.array(P, dtype=np.int64)
    targets = _legendre_targets(P, Q) if P else 0
    exclude = frozenset(P) | frozenset(Q)

    if pad:
        factors = _solve_r_padded(targets, p_arr, exclude, bound)
    else:
        factors = _solve_r_minimal(targets, p_arr, _pool_primes(exclude))

    r = 1
    for s in factors:
        r *= s
    if r >= bound:
        # Subset-of-primes search overshot: only possible when the bound
        # itself is tiny, so an exhaustive scan is affordable.
        factors = _solve_r_scan(targets, P, Q, bound)
        r = 1
        for s in factors:
            r *= s

    _check_r(r, sorted(factors), P, Q, targets, bound)
    return r, tuple(sorted(factors))


def _bit_indices(mask: int):
    idx = 0
    while mask:
        if mask & 1:
            yield idx
        mask >>= 1
        idx += 1


def _check_r(
    r: int, factors: list[int], P: list[int], Q: list[int],
    targets: int, bound: int,
) -> None:
    if r % 2 == 0 or not (1 <= r < bound):
        raise ConstructionError(f"multiplier r={r} outside (odd, [1, bound)) range")
    if len(set(factors)) != len(factors):
        raise ConstructionError("multiplier r is not squarefree")
    for s in factors:
        if s in P or s in Q:
            raise ConstructionError("multiplier r shares a factor with P or Q")
    for i, p in enumerate(P):
        want = -1 if (targets >> i) & 1 else 1
        if arith.kronecker(r % p, p) != want:
            raise ConstructionError(f"symbol condition failed at p={p}")


def solve_r(P: list[int], Q_primes: list[int], pad: bool = False) -> int:
    """Odd squarefree r in [1, 2·∏P·∏Q) with (r/p_i) = ∏_j (q_j/p_i) ∀ p_i ∈ P.

    Consequently every p ∈ P splits in Q(√(r·∏Q_primes)).  r = 1 whenever all
    the symbol targets are +1 and pad is False.

    Args:
        P: Odd primes whose splitting is prescribed.
        Q_primes: Odd primes that will ramify; disjoint from P.
        pad: Pad r towards the upper bound with ballast prime factors
            (used by construct_Kn to mirror a generic residue lift).
    """
    r, _ = _solve_r([int(p) for p in P], [int(q) for q in Q_primes], pad=pad)
    return r


@lru_cache(maxsize=32)
def construct_Kn(n: int) -> ConstructionResult:
    """Real quadratic field in which the first n odd primes split, with an
    infinite unramified 2-class field tower certified by ramified-prime count.

    Raises:
        ValueError: If n < 1.
        ConstructionError: If any internal invariant fails (never expected).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    P = [int(p) for p in arith.first_odd_primes(n)]
    rn = rn_formula(n)
    Q = [int(q) for q in arith.next_primes_after(P[-1], rn)]
    r, r_factors = _solve_r(P, Q, pad=True)

    d = r
    for q in Q:
        d *= q
    factors = tuple(sorted(set(r_factors) | set(Q)))
    field = QuadField.from_d(d, factors=factors)

    for p in P:
        if split_type(field, p) is not SplitType.SPLIT:
            raise ConstructionError(f"prescribed prime {p} does not split")

    params = bounds.GSParams(
        ell=2, sizeT_k=n, sizeT_K=2 * n, t0=n, r1=2, r2=0, rho=0, delta_ell=1,
    )
    threshold = bounds.gs_threshold_nf(params)
    satisfied = len(field.ramified_primes) >= threshold
    if not satisfied:
        raise ConstructionError(
            f"ramified count {len(field.ramified_primes)} below threshold {threshold}"
        )
    return ConstructionResult(
        n=n, P=tuple(P), rn=rn, Q_primes=tuple(Q), r=r, field=field,
        gs_threshold=threshold, gs_satisfied=satisfied,
    )


def genus_upper_bound(n: int) -> float:
    """g_n = ϑ(q_{r_n}) − ½·ϑ(p_n) + log 2, an upper bound for the genus."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    p_n = arith.nth_odd_prime(n)
    q_last = int(arith.next_primes_after(p_n, rn_formula(n))[-1])
    return arith.theta(q_last) - 0.5 * arith.theta(p_n) + math.log(2)


def genus_lower_bound(n: int) -> float:
    """g′_n = ½·Σ_j log q_j, a lower bound for the genus."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    p_n = arith.nth_odd_prime(n)
    q_last = int(arith.next_primes_after(p_n, rn_formula(n))[-1])
    return 0.5 * (arith.theta(q_last) - arith.theta(p_n))
