"""Chebotarev-style densities on explicit finite groups and empirical
prime-splitting statistics.

Group-side values (class densities, degree-one-place densities) are exact
rationals computed from multiplication tables; the built-in catalog covers
the cyclic groups up to order 12, S₃, S₄, A₄, D₄ and Q₈.  Prime-side
statistics (split fractions, arithmetic-progression reciprocal sums) use
natural density over primes ≤ x as a stand-in for Dirichlet density.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from igfields import _kernels, arith
from igfields.quadfield import QuadField, SplitType, split_type


class FiniteGroup:
    """A finite group as an explicit multiplication table.

    table[a][b] is the index of a·b; labels name the elements (cycle
    notation for permutation groups).  Associativity, identity, and
    inverses are all verified on construction.
    """

    def __init__(
        self,
        table: tuple[tuple[int, ...], ...],
        labels: tuple[str, ...],
        name: str = "",
    ) -> None:
        order = len(table)
        if order == 0:
            raise ValueError("a group needs at least the identity")
        if len(labels) != order or any(len(row) != order for row in table):
            raise ValueError("table must be square with one label per element")
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.labels = tuple(labels)
        self.order = order
        self.name = name

        identity = None
        for e in range(order):
            if all(
                self.table[e][x] == x and self.table[x][e] == x
                for x in range(order)
            ):
                identity = e
                break
        if identity is None:
            raise ValueError("table has no two-sided identity")
        self.identity = identity

        self._inverse = [None] * order
        for a in range(order):
            for b in range(order):
                if self.table[a][b] == identity:
                    if self.table[b][a] != identity:
                        raise ValueError(f"one-sided inverse at element {a}")
                    self._inverse[a] = b
                    break
            if self._inverse[a] is None:
                raise ValueError(f"element {a} has no inverse")

        for a in range(order):
            for b in range(order):
                ab = self.table[a][b]
                for c in range(order):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError(
                            f"associativity fails at ({a}, {b}, {c})"
                        )

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def element(self, spec: int | str) -> int:
        """Resolve an element given as index, label, or cycle notation."""
        if isinstance(spec, int):
            if not 0 <= spec < self.order:
                raise ValueError(f"element index {spec} out of range")
            return spec
        spec = spec.strip()
        if spec in self.labels:
            return self.labels.index(spec)
        if self._degree is not None and (spec.startswith("(") or spec in ("e", "()")):
            perm = _parse_cycles(spec, self._degree)
            try:
                return self._perms.index(perm)
            except ValueError:
                raise ValueError(f"{spec!r} is not an element of {self.name or 'group'}")
        raise ValueError(f"unknown element {spec!r}")

    _degree: int | None = None
    _perms: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def from_permutations(
        cls, generators, degree: int, name: str = ""
    ) -> "FiniteGroup":
        """Close a generating set of permutations (0-based image tuples)."""
        idn = tuple(range(degree))
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if sorted(g) != list(range(degree)):
                raise ValueError(f"{g} is not a permutation of {degree} points")
            gens.append(g)
        elements = [idn]
        seen = {idn}
        frontier = [idn]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(p[g[i]] for i in range(degree))
                    if q not in seen:
                        seen.add(q)
                        elements.append(q)
                        nxt.append(q)
            frontier = nxt
        elements.sort()
        index = {p: i for i, p in enumerate(elements)}
        table = tuple(
            tuple(index[tuple(a[b[i]] for i in range(degree))] for b in elements)
            for a in elements
        )
        labels = tuple(_cycle_label(p) for p in elements)
        group = cls(table, labels, name=name)
        group._degree = degree
        group._perms = tuple(elements)
        return group


def _cycle_label(perm: tuple[int, ...]) -> str:
    n = len(perm)
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = perm[x]
        cycles.append([p + 1 for p in cyc])
    if not cycles:
        return "e"
    wide = n >= 10
    return "".join(
        "(" + (" ".join(map(str, c)) if wide else "".join(map(str, c))) + ")"
        for c in cycles
    )


def _parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    text = text.strip()
    images = list(range(degree))
    if text in ("e", "()", ""):
        return tuple(images)
    if not re.fullmatch(r"(\([^()]*\))+", text):
        raise ValueError(f"malformed cycle notation {text!r}")
    touched = set()
    for body in re.findall(r"\(([^()]*)\)", text):
        body = body.strip()
        if not body:
            continue
        if re.search(r"[,\s]", body):
            points = [int(t) for t in re.split(r"[,\s]+", body)]
        else:
            points = [int(ch) for ch in body]
        if any(not 1 <= p <= degree for p in points):
            raise ValueError(f"point outside 1..{degree} in {text!r}")
        zero = [p - 1 for p in points]
        if len(set(zero)) != len(zero) or touched & set(zero):
            raise ValueError(f"repeated point in {text!r}")
        touched |= set(zero)
        for i, p in enumerate(zero):
            images[p] = zero[(i + 1) % len(zero)]
    return tuple(images)


@dataclass(frozen=True)
class Subgroup:
    """A verified subgroup: closed, contains identity and inverses."""

    parent: FiniteGroup
    elements: frozenset

    def __post_init__(self) -> None:
        G = self.parent
        if G.identity not in self.elements:
            raise ValueError("subgroup must contain the identity")
        for a in self.elements:
            if G.inv(a) not in self.elements:
                raise ValueError("subgroup not closed under inverse")
            for b in self.elements:
                if G.mul(a, b) not in self.elements:
                    raise ValueError("subgroup not closed under product")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // len(self.elements)

    def is_normal(self) -> bool:
        G = self.parent
        return all(
            G.mul(G.mul(g, h), G.inv(g)) in self.elements
            for g in range(G.order)
            for h in self.elements
        )


def subgroup_generated(G: FiniteGroup, generators) -> Subgroup:
    """Subgroup generated by element specs (indices, labels, or cycles)."""
    gens = [G.element(g) for g in generators]
    elements = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                for b in (G.mul(a, g), G.mul(a, G.inv(g))):
                    if b not in elements:
                        elements.add(b)
                        nxt.append(b)
        frontier = nxt
    return Subgroup(G, frozenset(elements))


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, ascending by order then by sorted element indices."""
    found = {frozenset({G.identity})}
    frontier = [frozenset({G.identity})]
    while frontier:
        nxt = []
        for H in frontier:
            for x in range(G.order):
                if x in H:
                    continue
                extended = _closure(G, H | {x})
                if extended not in found:
                    found.add(extended)
                    nxt.append(extended)
        frontier = nxt
    return [
        Subgroup(G, H)
        for H in sorted(found, key=lambda h: (len(h), sorted(h)))
    ]


def _closure(G: FiniteGroup, seed: frozenset) -> frozenset:
    elements = set(seed) | {G.identity}
    frontier = list(elements)
    while frontier:
        nxt = []
        for a in frontier:
            for g in list(seed):
                for b in (G.mul(a, g), G.mul(a, G.inv(g))):
                    if b not in elements:
                        elements.add(b)
                        nxt.append(b)
        frontier = nxt
    return frozenset(elements)


def _quaternion_table() -> tuple[tuple[tuple[int, ...], ...], tuple[str, ...]]:
    # Elements as (sign, axis) with axes 1, i, j, k and the usual rules
    # i² = j² = k² = −1, ij = k, jk = i, ki = j.
    axes = "1ijk"
    axis_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"),
        ("1", "k"): (1, "k"), ("i", "1"): (1, "i"), ("j", "1"): (1, "j"),
        ("k", "1"): (1, "k"), ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"),
        ("k", "k"): (-1, "1"), ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
        ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"), ("k", "i"): (1, "j"),
        ("i", "k"): (-1, "j"),
    }
    elements = [(s, a) for a in axes for s in (1, -1)]
    elements.sort(key=lambda e: (axes.index(e[1]), -e[0]))
    index = {e: n for n, e in enumerate(elements)}
    table = []
    for s1, a1 in elements:
        row = []
        for s2, a2 in elements:
            s3, a3 = axis_mul[(a1, a2)]
            row.append(index[(s1 * s2 * s3, a3)])
        table.append(tuple(row))
    labels = tuple(("" if s == 1 else "-") + a for s, a in elements)
    return tuple(table), labels


@functools.cache
def catalog() -> dict:
    """Built-in groups: c1..c12, s3, s4, a4, d4, q8."""
    groups: dict[str, FiniteGroup] = {}
    for n in range(1, 13):
        cycle = tuple(list(range(1, n)) + [0])
        groups[f"c{n}"] = FiniteGroup.from_permutations([cycle], n, name=f"c{n}")
    groups["s3"] = FiniteGroup.from_permutations(
        [(1, 0, 2), (1, 2, 0)], 3, name="s3"
    )
    groups["s4"] = FiniteGroup.from_permutations(
        [(1, 0, 2, 3), (1, 2, 3, 0)], 4, name="s4"
    )
    groups["a4"] = FiniteGroup.from_permutations(
        [(1, 2, 0, 3), (1, 0, 3, 2)], 4, name="a4"
    )
    groups["d4"] = FiniteGroup.from_permutations(
        [(1, 2, 3, 0), (3, 2, 1, 0)], 4, name="d4"
    )
    table, labels = _quaternion_table()
    groups["q8"] = FiniteGroup(table, labels, name="q8")
    return groups


@dataclass(frozen=True)
class DensityReport:
    """An exact density with its theoretical bracket."""

    value: Fraction
    lower_bound: Fraction
    upper_bound: Fraction
    context: str

    def __post_init__(self) -> None:
        if not self.lower_bound <= self.value <= self.upper_bound:
            raise ValueError(
                f"density {self.value} outside "
                f"[{self.lower_bound}, {self.upper_bound}]"
            )

    def to_json_dict(self) -> dict:
        return {
            "value": str(self.value),
            "lower_bound": str(self.lower_bound),
            "upper_bound": str(self.upper_bound),
            "context": self.context,
        }


def conjugacy_class_density(G: FiniteGroup, sigma: int | str) -> Fraction:
    """Density #{conjugates of σ}/#G of the Frobenius class of σ."""
    s = G.element(sigma)
    conjugates = {G.mul(G.mul(G.inv(t), s), t) for t in range(G.order)}
    return Fraction(len(conjugates), G.order)


def split_degree_one_density(G: FiniteGroup, H: Subgroup) -> DensityReport:
    """Density of base places with a degree-one place above: the union of
    conjugates of H over #G, with the index bounds 1/[G:H] (attained iff H
    is normal) and min(1 − ([G:H]−1)/#G, (1 + #G − [G:H])/#G)."""
    if H.parent is not G:
        raise ValueError("H must be a subgroup of G")
    union = set()
    for t in range(G.order):
        t_inv = G.inv(t)
        for h in H.elements:
            union.add(G.mul(G.mul(t_inv, h), t))
    value = Fraction(len(union), G.order)
    n = H.index
    lower = Fraction(1, n)
    upper = min(
        1 - Fraction(n - 1, G.order),
        Fraction(1 + G.order - n, G.order),
    )
    assert (value == lower) == H.is_normal(), "index bound equality criterion"
    return DensityReport(
        value=value, lower_bound=lower, upper_bound=upper,
        context=f"degree-one places, index {n} of order {G.order}",
    )


def totally_split_density_bound(G: FiniteGroup, H: Subgroup) -> Fraction:
    """Density 1/#G of the identity Frobenius class (totally split places);
    never exceeds the degree-one density floor 1/[G:H]."""
    if H.parent is not G:
        raise ValueError("H must be a subgroup of G")
    value = Fraction(1, G.order)
    assert value <= Fraction(1, H.index)
    return value


@dataclass(frozen=True)
class EmpiricalDensity:
    """Observed split fraction among unramified primes up to a bound."""

    fraction: float
    split_count: int
    considered: int


def empirical_split_density(d: int, x: int) -> EmpiricalDensity:
    """Fraction of unramified primes ≤ x that split in Q(√d).

    Natural density over primes ≤ x, a proxy for the Dirichlet density the
    class-density theorems are stated with.
    """
    if x < 100:
        raise ValueError(f"x must be ≥ 100, got {x}")
    field = QuadField.from_d(d)
    primes = arith.primes_upto(x)
    odd = primes[1:] if primes.size and primes[0] == 2 else primes
    disc = field.discriminant
    unramified = odd[np.mod(disc, odd) != 0]
    symbols = _kernels.legendre_mod_many(disc, unramified)
    split = int(np.count_nonzero(symbols == 1))
    considered = int(unramified.size)
    if primes.size and primes[0] == 2 and disc % 2 != 0:
        considered += 1
        if split_type(field, 2) is SplitType.SPLIT:
            split += 1
    fraction = split / considered if considered else 0.0
    return EmpiricalDensity(
        fraction=fraction, split_count=split, considered=considered
    )


class NortonDeviation(NamedTuple):
    """Reciprocal prime sum in a progression against its expected size."""

    partial_sum: float
    deviation: float


def norton_deviation(q: int, a: int, x: int) -> NortonDeviation:
    """∑ 1/p over primes p ≤ x with p ≡ a (mod q), and its deviation from
    log log x/(q − 1).

    Raises:
        ValueError: If q is not an odd prime, gcd(a, q) > 1, or x < 10.
    """
    if not arith.is_prime(q) or q == 2:
        raise ValueError(f"q must be an odd prime, got {q}")
    if a % q == 0 or math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not invertible mod {q}")
    if x < 10:
        raise ValueError(f"x must be ≥ 10, got {x}")
    primes = arith.primes_upto(x)
    matching = primes[primes % q == a % q]
    partial = float(np.sum(1.0 / matching)) if matching.size else 0.0
    deviation = partial - math.log(math.log(x)) / (q - 1)
    return NortonDeviation(partial_sum=partial, deviation=deviation)
