"""Prime-weight partial sums, shrinking deficiency margins ε_n, and
convergence-ratio reports against their asymptotic laws.

S_n sums log p/(√p − 1) and S′_n sums log p/(p − 1) over the first n odd
primes; ε_n turns them into the margin by which the n-split-prime
construction beats deficiency 1.  Ratio reports compare computed values
against 2√(n log n), log(n log n), and the 4/(3n)-type laws for ε.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from igfields import _kernels, arith, bounds, quadfield, serialize

_NAMES = ("sn", "sprimen", "epsilon")
_ABEL_RTOL = 1e-6


def s_n(n: int) -> float:
    """S_n = ∑ log p/(√p − 1) over the first n odd primes (compensated)."""
    if n < 1:
        raise ValueError(f"n must be ≥ 1, got {n}")
    return _kernels.sum_log_over_sqrt(arith.first_odd_primes(n))


def s_prime_n(n: int) -> float:
    """S′_n = ∑ log p/(p − 1) over the first n odd primes (compensated)."""
    if n < 1:
        raise ValueError(f"n must be ≥ 1, got {n}")
    return _kernels.sum_log_over_lin(arith.first_odd_primes(n))


def s_n_abel(n: int) -> float:
    """S_n recomputed by partial summation over the running ϑ-sum.

    Writing T_k = ∑_{i≤k} log p_i and u(p) = 1/(√p − 1), Abel summation
    gives S_n = T_n·u(p_n) + ∑_{k<n} T_k·(u(p_k) − u(p_{k+1})).  A distinct
    rounding path from the direct sum, used as an internal cross-check.
    """
    if n < 1:
        raise ValueError(f"n must be ≥ 1, got {n}")
    p = arith.first_odd_primes(n).astype(np.float64)
    theta = np.cumsum(np.log(p))
    u = 1.0 / (np.sqrt(p) - 1.0)
    tail = float(theta[-1] * u[-1])
    if n == 1:
        return tail
    return tail + float(np.dot(theta[:-1], u[:-1] - u[1:]))


def epsilon_n(n: int, variant: str = "nf") -> float:
    """Margin ε with deficiency ≤ 1 − ε for the n-split-prime field.

    ε = (2/g)·(S_n + a_R) under GRH weights or (2/g)·(S′_n + a_R) under
    unconditional NF weights, where g is the genus of the constructed
    field (the actual value, not its upper bound) and a_R the real
    archimedean coefficient of the chosen variant.

    Args:
        n: Number of prescribed split primes; the construction must be
            feasible at this size.
        variant: "grh" for ε^(1) or "nf" for ε^(2).

    Returns:
        The positive margin ε.
    """
    coeffs = bounds.arch_coefficients(variant)
    finite = s_n(n) if variant == "grh" else s_prime_n(n)
    genus = quadfield.construct_Kn(n).field.genus
    return (2.0 / genus) * (finite + coeffs.a_R)


def _asymptote(name: str, variant: str, n: int) -> float:
    nlogn = n * math.log(n)
    if name == "sn":
        return 2.0 * math.sqrt(nlogn)
    if name == "sprimen":
        return math.log(nlogn)
    if variant == "grh":
        return 8.0 / (3.0 * math.sqrt(nlogn))
    return 4.0 / (3.0 * n)


class SequenceSample(NamedTuple):
    """One sampled point of a sequence against its asymptote."""

    n: int
    computed: float
    asymptote: float
    ratio: float


@dataclass(frozen=True)
class SequenceReport:
    """Sampled sequence values with their asymptote ratios."""

    name: str
    samples: tuple[SequenceSample, ...]

    def __post_init__(self) -> None:
        for s in self.samples:
            if s.n < 2:
                raise ValueError(f"samples start at n ≥ 2, got {s.n}")
            if not s.asymptote > 0:
                raise ValueError(f"asymptote must be positive at n={s.n}")
            if s.ratio != s.computed / s.asymptote:
                raise ValueError(f"inconsistent ratio at n={s.n}")

    def to_csv_lines(self) -> list[str]:
        lines = ["n,computed,asymptote,ratio"]
        for s in self.samples:
            lines.append(
                serialize.csv_line([s.n, s.computed, s.asymptote, s.ratio])
            )
        return lines

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "samples": [
                {
                    "n": s.n,
                    "computed": s.computed,
                    "asymptote": s.asymptote,
                    "ratio": s.ratio,
                }
                for s in self.samples
            ],
        }


def ratio_report(name: str, n_samples, variant: str = "nf") -> SequenceReport:
    """Sample a named sequence and compare against its asymptotic law.

    Args:
        name: "sn", "sprimen", or "epsilon".
        n_samples: Strictly ascending sample points, each ≥ 2.
        variant: Weight variant for "epsilon" ("nf" or "grh"); ignored
            otherwise.

    Returns:
        SequenceReport with ratio = computed/asymptote per sample.  For
        "sn" every sample is cross-checked against the Abel-summation
        recomputation to 10^{-6} relative agreement.
    """
    if name not in _NAMES:
        raise ValueError(f"unknown sequence {name!r}; expected one of {_NAMES}")
    points = [int(n) for n in n_samples]
    if not points:
        raise ValueError("need at least one sample point")
    if any(b <= a for a, b in zip(points, points[1:])):
        raise ValueError("sample points must be strictly ascending")
    if points[0] < 2:
        raise ValueError("samples start at n ≥ 2")
    bounds.arch_coefficients(variant)

    samples = []
    for n in points:
        if name == "sn":
            computed = s_n(n)
            check = s_n_abel(n)
            if abs(computed - check) > _ABEL_RTOL * abs(check):
                raise AssertionError(
                    f"Abel cross-check failed at n={n}: {computed} vs {check}"
                )
        elif name == "sprimen":
            computed = s_prime_n(n)
        else:
            computed = epsilon_n(n, variant)
        asymptote = _asymptote(name, variant, n)
        samples.append(
            SequenceSample(
                n=n, computed=computed, asymptote=asymptote,
                ratio=computed / asymptote,
            )
        )
    return SequenceReport(name=name, samples=tuple(samples))
