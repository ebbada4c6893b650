"""Basic inequalities, deficiencies, and Golod–Shafarevich thresholds.

The basic inequality bounds the weighted sum of limit invariants φ of an
infinite global field by 1; the deficiency is the gap.  Three variants share
the shape Σ_q φ_q·w(q) + a_R·φ_R + a_C·φ_C ≤ 1 and differ in the weights:

    grh   w(q) = log q/(√q − 1)      (number fields, under GRH)
    nf    w(q) = log q/(q − 1)       (number fields, unconditional)
    ff    w(r^m) = m/(r^{m/2} − 1)   (function fields over F_r, no arch term)

The Golod–Shafarevich thresholds decide when enough ramification forces an
infinite unramified ℓ-class field tower, and deficiency_lower_bound turns a
finite split-place set into an explicit non-optimality certificate α.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

from igfields import arith
from igfields.errors import FeasibilityError

EULER_GAMMA = 0.57721566490153286

_NF_VARIANTS = ("grh", "nf")
_VARIANTS = ("grh", "nf", "ff")


@dataclass(frozen=True)
class ArchCoefficients:
    """Archimedean weights (a_R per real place, a_C per complex place)."""

    variant: str
    a_R: float
    a_C: float


def arch_coefficients(variant: str) -> ArchCoefficients:
    """Archimedean coefficients for an NF-weight variant.

    Both variants satisfy 2·a_R ≥ a_C, which archimedean_monotonicity
    relies on.
    """
    if variant == "grh":
        a_r = 0.5 * math.log(8 * math.pi) + math.pi / 4 + EULER_GAMMA / 2
        a_c = math.log(8 * math.pi) + EULER_GAMMA
    elif variant == "nf":
        a_r = EULER_GAMMA / 2 + math.log(2 * math.sqrt(math.pi))
        a_c = EULER_GAMMA + math.log(2 * math.pi)
    else:
        raise ValueError(f"no archimedean coefficients for variant {variant!r}")
    return ArchCoefficients(variant=variant, a_R=a_r, a_C=a_c)


def place_weight(norm: int, variant: str, ff_base: int | None = None) -> float:
    """Weight w(norm) of a finite place class in the basic inequality."""
    if norm < 2:
        raise ValueError(f"place norm must be ≥ 2, got {norm}")
    if variant == "grh":
        return math.log(norm) / (math.sqrt(norm) - 1)
    if variant == "nf":
        return math.log(norm) / (norm - 1)
    if variant == "ff":
        if ff_base is None:
            raise ValueError("ff weights require the constant-field size")
        m = _exact_power(norm, ff_base)
        return m / (ff_base ** (m / 2) - 1)
    raise ValueError(f"unknown variant {variant!r}")


def _exact_power(q: int, r: int) -> int:
    m, value = 0, 1
    while value < q:
        value *= r
        m += 1
    if value != q:
        raise ValueError(f"{q} is not a power of the constant-field size {r}")
    return m


@dataclass(frozen=True)
class GSParams:
    """Inputs of the Golod–Shafarevich threshold for an ℓ-tower of K/k.

    T is a finite set of places of k, all split in K; sizeT_K counts the
    places of K above T; t0 of the ideals in T(k) are principal (for k = Q
    every ideal is, so t0 = sizeT_k); rho counts real places of k that
    become complex in K; delta_ell is 1 iff k contains the ℓ-th roots of
    unity.
    """

    ell: int
    sizeT_k: int
    sizeT_K: int
    t0: int
    r1: int
    r2: int
    rho: int
    delta_ell: int

    def __post_init__(self) -> None:
        if not arith.is_prime(self.ell):
            raise ValueError(f"ell must be prime, got {self.ell}")
        for name in ("sizeT_k", "sizeT_K", "t0", "r1", "r2", "rho"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.t0 > self.sizeT_k:
            raise ValueError("t0 cannot exceed sizeT_k")
        if self.delta_ell not in (0, 1):
            raise ValueError("delta_ell must be 0 or 1")


def gs_threshold_nf(p: GSParams) -> float:
    """Number-field threshold C: ramified-prime count ≥ C forces an
    infinite unramified ℓ-class field tower in which T stays split."""
    radicand = p.sizeT_K + p.ell * (p.r1 + p.r2 - p.rho / 2) + p.delta_ell
    if radicand < 0:
        raise ValueError("negative radicand; inconsistent parameters")
    return (
        p.sizeT_K - p.t0 + p.r1 + p.r2 + p.delta_ell + 2 - p.rho
        + 2 * math.sqrt(radicand)
    )


def gs_threshold_ff(p: GSParams) -> float:
    """Function-field threshold C (no archimedean terms)."""
    return p.sizeT_k + 2 + p.delta_ell + 2 * math.sqrt(p.sizeT_K + p.delta_ell)


class PlaceTerm(NamedTuple):
    """One finite or archimedean contribution to the basic inequality."""

    place: object  # int norm, or "R"/"C"
    phi: float
    weight: float
    term: float


@dataclass(frozen=True)
class InequalityReport:
    """Evaluation of one basic inequality on a PhiVector.

    lhs = finite_term + arch_term; deficiency = 1 − lhs.  A vector
    realizable by an infinite global field has deficiency in [0, 1].
    """

    variant: str
    lhs: float
    deficiency: float
    finite_term: float
    arch_term: float
    places: tuple[PlaceTerm, ...]

    def to_json_dict(self) -> dict:
        return {
            "variant": self.variant,
            "lhs": self.lhs,
            "deficiency": self.deficiency,
            "finite_term": self.finite_term,
            "arch_term": self.arch_term,
            "places": [
                {
                    "place": str(t.place),
                    "phi": t.phi,
                    "weight": t.weight,
                    "term": t.term,
                }
                for t in self.places
            ],
        }

    def to_csv_row(self, n: int | None = None, alpha: float | None = None) -> list:
        return [
            self.variant,
            "" if n is None else n,
            self.lhs,
            self.deficiency,
            "" if alpha is None else alpha,
        ]


def basic_inequality(v, variant: str) -> InequalityReport:
    """Evaluate the basic inequality of the given variant on a PhiVector.

    Raises:
        ValueError: On a variant/vector mismatch (ff weights on an NF
            vector or vice versa) or an unknown variant.
    """
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if (variant == "ff") != (v.variant == "FF"):
        raise ValueError(
            f"variant {variant!r} does not match vector variant {v.variant!r}"
        )
    ff_base = v.ff_base if v.variant == "FF" else None

    terms: list[PlaceTerm] = []
    finite = 0.0
    for q in sorted(k for k in v.entries if isinstance(k, int)):
        phi = v.entries[q]
        w = place_weight(q, variant, ff_base)
        terms.append(PlaceTerm(q, phi, w, phi * w))
        finite += phi * w

    arch = 0.0
    if variant in _NF_VARIANTS:
        coeffs = arch_coefficients(variant)
        for key, a in (("R", coeffs.a_R), ("C", coeffs.a_C)):
            phi = v.entries.get(key, 0.0)
            if phi:
                terms.append(PlaceTerm(key, phi, a, phi * a))
                arch += phi * a

    lhs = finite + arch
    return InequalityReport(
        variant=variant, lhs=lhs, deficiency=1.0 - lhs,
        finite_term=finite, arch_term=arch, places=tuple(terms),
    )


_REFINED_ARCH_CONSTANT = {
    "nf": lambda: math.log(2 * math.pi) + EULER_GAMMA,
    "grh": lambda: math.log(8 * math.pi) + EULER_GAMMA,
}


@dataclass(frozen=True)
class IharaSplitBound:
    """Split-place sum against its simple (1/φ_∞) and refined bounds.

    Iterates as the 3-tuple (split_sum, bound, holds) where bound is the
    refined one; both bounds are +∞ when φ_∞ = 0.
    """

    split_sum: float
    bound: float
    holds: bool
    simple_bound: float

    def __iter__(self):
        return iter((self.split_sum, self.bound, self.holds))


def ihara_split_bound(
    v, T_norms: Iterable[int], base_degree: int, variant: str
) -> IharaSplitBound:
    """Bound the weighted sum over base places split in the infinite field.

    The sum uses the variant's weight at each norm in T_norms; the simple
    bound is 1/φ_∞ and the refined bound is (n₀²/φ_∞)(1 − ½c·φ_∞) with
    c = log 2π + γ (nf) or log 8π + γ (grh), and n₀²/φ_∞ alone for ff.
    """
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if base_degree < 1:
        raise ValueError("base degree must be ≥ 1")
    ff_base = v.ff_base if v.variant == "FF" else None
    split_sum = math.fsum(
        place_weight(q, variant, ff_base) for q in T_norms
    )
    phi_inf = v.phi_infinity
    if phi_inf == 0.0:
        return IharaSplitBound(split_sum, math.inf, True, math.inf)
    simple = 1.0 / phi_inf
    n0sq = float(base_degree * base_degree)
    if variant == "ff":
        refined = n0sq / phi_inf
    else:
        c = _REFINED_ARCH_CONSTANT[variant]()
        refined = (n0sq / phi_inf) * (1.0 - 0.5 * c * phi_inf)
    return IharaSplitBound(split_sum, refined, split_sum <= refined, simple)


class PlaceGroup(NamedTuple):
    """A Galois-stable group of places over one rational prime."""

    prime: int
    norm: int
    count: int


@dataclass(frozen=True)
class DeficiencyLowerBound:
    """Non-optimality certificate from a finite split/inert place set.

    P_set is norm-ascending and Galois-stable (conjugate places enter
    together via count); alpha lower-bounds the deficiency of every
    infinite unramified tower over the field in which P_set stays split.
    """

    P_set: tuple[PlaceGroup, ...]
    p0_norm: int
    alpha: float

    def to_json_dict(self) -> dict:
        return {
            "P_set": [
                {"prime": g.prime, "norm": g.norm, "count": g.count}
                for g in self.P_set
            ],
            "p0_norm": self.p0_norm,
            "alpha": self.alpha,
        }


def deficiency_lower_bound(
    K,
    S: Iterable[int],
    ell: int = 2,
    variant: str = "nf",
    max_norm: int = 10**7,
) -> DeficiencyLowerBound:
    """Greedy place set P over K and the deficiency lower bound α it yields.

    Places of K outside S enter by ascending norm (ties: smaller rational
    prime first, split before inert; a split p contributes two norm-p
    places, an inert p one norm-p² place) until the weighted sum exceeds
    g − ℓ·a_C/2.  With ℼ₀ the final (maximal-norm) place over p₀,
    α = (ℓ·log p₀/g)·(1/(Nℼ₀ − 1) − 1/(Nℼ₀^ℓ − 1)).

    The nf weight log N/(N − 1) is the validated form; the grh analog
    log N/(√N − 1) is exposed with the matching grh cutoff but has no
    independent ground truth here.

    Raises:
        ValueError: If g(K) ≤ 0, ell is not prime, or the variant has no
            archimedean coefficients.
        FeasibilityError: If the cutoff is not reached by places of norm
            ≤ max_norm (the nf form needs norms ~e^{g} already for small
            constructed fields).
    """
    from igfields import quadfield

    if not arith.is_prime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    if variant not in _NF_VARIANTS:
        raise ValueError(f"variant must be one of {_NF_VARIANTS}, got {variant!r}")
    g = K.genus
    if g <= 0:
        raise ValueError(f"genus must be positive, got {g}")
    skip = set(int(p) for p in S) | set(K.ramified_primes)
    cutoff = g - ell * arch_coefficients(variant).a_C / 2

    groups: list[PlaceGroup] = []
    total = 0.0
    # Heap orders candidate groups by (norm, prime, inert-after-split);
    # a group is popped only once no unseen prime can precede it.
    heap: list[tuple[int, int, int, int]] = []
    last_prime = 1
    while True:
        while not heap or (last_prime < heap[0][0] and last_prime <= max_norm):
            block = arith.next_primes_after(last_prime, 64)
            for p in (int(x) for x in block):
                if p in skip:
                    continue
                kind = quadfield.split_type(K, p)
                if kind is quadfield.SplitType.SPLIT:
                    heapq.heappush(heap, (p, p, 0, 2))
                elif kind is quadfield.SplitType.INERT:
                    heapq.heappush(heap, (p * p, p, 1, 1))
            last_prime = int(block[-1])
        norm, prime, _, count = heapq.heappop(heap)
        if norm > max_norm:
            raise FeasibilityError(
                f"place sum reached {total:.6g} of cutoff {cutoff:.6g} "
                f"using all norms ≤ {max_norm}; enumerating further is "
                f"beyond the configured bound"
            )
        total += count * place_weight(norm, variant)
        groups.append(PlaceGroup(prime, norm, count))
        if total > cutoff:
            break

    p0 = groups[-1]
    alpha = (ell * math.log(p0.prime) / g) * (
        1.0 / (p0.norm - 1) - 1.0 / (p0.norm**ell - 1)
    )
    return DeficiencyLowerBound(
        P_set=tuple(groups), p0_norm=p0.norm, alpha=alpha
    )


def _partial_weighted_sums(
    entries: dict, p: int, max_m: int
) -> tuple[list[float], list[float]]:
    """(A_m prefix sums, k·φ_{p^k} terms) for k = 1..max_m."""
    terms = [0.0] * (max_m + 1)
    power = 1
    for k in range(1, max_m + 1):
        power *= p
        terms[k] = k * float(entries.get(power, 0.0))
    prefix = [0.0] * (max_m + 1)
    for k in range(1, max_m + 1):
        prefix[k] = prefix[k - 1] + terms[k]
    return prefix, terms


def _max_exponent(entries: dict, p: int) -> int:
    m = 0
    for key in entries:
        if isinstance(key, int) and key >= p:
            k, q = 0, 1
            while q < key:
                q *= p
                k += 1
            if q == key:
                m = max(m, k)
    return m


def weighted_dominance(
    u, v, p: int, weight: Callable[[int], float]
) -> bool:
    """Whether u dominates v at p: A_m(u) ≥ A_m(v) for all m, where
    A_m = Σ_{k≤m} k·φ_{p^k}.

    When it does, the Abel-transform consequence
    Σ_k k·φ_{p^k}(v)·w(k) ≤ Σ_k k·φ_{p^k}(u)·w(k) holds for every
    positive nonincreasing weight and is asserted before returning.

    Raises:
        ValueError: If p is not prime or the weight is not positive and
            nonincreasing over the exercised exponents.
    """
    if not arith.is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    max_m = max(_max_exponent(u.entries, p), _max_exponent(v.entries, p), 1)
    w = [0.0] + [float(weight(k)) for k in range(1, max_m + 2)]
    for k in range(1, max_m + 1):
        if w[k] <= 0 or w[k + 1] > w[k]:
            raise ValueError("weight must be positive and nonincreasing")

    a_u, t_u = _partial_weighted_sums(u.entries, p, max_m)
    a_v, t_v = _partial_weighted_sums(v.entries, p, max_m)
    dominates = all(a_u[m] >= a_v[m] - 1e-12 for m in range(1, max_m + 1))
    if dominates:
        sum_u = math.fsum(t_u[k] * w[k] for k in range(1, max_m + 1))
        sum_v = math.fsum(t_v[k] * w[k] for k in range(1, max_m + 1))
        assert sum_v <= sum_u + 1e-9, "Abel-transform consequence violated"
    return dominates


def archimedean_monotonicity(
    base_counts: tuple[float, float],
    decomposition: Iterable[tuple[float, float]],
    relative_degree: int,
    coeffs: tuple[float, float],
) -> bool:
    """Whether the archimedean term can only shrink per unit degree.

    base_counts = (Φ_R(K), Φ_C(K)); decomposition lists, for each real
    place v of K, the counts (Φ_{v,R}, Φ_{v,C}) of real/complex places of
    L above v, which must satisfy Φ_{v,R} + 2·Φ_{v,C} = [L:K].  Complex
    places of K contribute [L:K]·Φ_C(K) complex places of L.  Returns
    whether a₁·Φ_R(L) + a₂·Φ_C(L) ≤ [L:K]·(a₁·Φ_R(K) + a₂·Φ_C(K)),
    which 2a₁ ≥ a₂ guarantees.

    Raises:
        ValueError: If 2a₁ < a₂, a row violates its degree identity, or
            the row count differs from Φ_R(K).
    """
    a1, a2 = coeffs
    if 2 * a1 < a2:
        raise ValueError("coefficients must satisfy 2·a1 ≥ a2")
    if relative_degree < 1:
        raise ValueError("relative degree must be ≥ 1")
    phi_r_base, phi_c_base = base_counts
    rows = [(float(r), float(c)) for r, c in decomposition]
    if len(rows) != round(phi_r_base):
        raise ValueError(
            f"need one decomposition row per real place ({phi_r_base}), "
            f"got {len(rows)}"
        )
    for vr, vc in rows:
        if vr < 0 or vc < 0 or abs(vr + 2 * vc - relative_degree) > 1e-9:
            raise ValueError(
                f"row ({vr}, {vc}) violates Φ_R + 2·Φ_C = {relative_degree}"
            )
    phi_r_top = math.fsum(vr for vr, _ in rows)
    phi_c_top = relative_degree * phi_c_base + math.fsum(vc for _, vc in rows)
    lhs = a1 * phi_r_top + a2 * phi_c_top
    rhs = relative_degree * (a1 * phi_r_base + a2 * phi_c_base)
    return lhs <= rhs + 1e-12
