"""Finite-prefix towers of global fields and their limit invariants.

An infinite global field is represented by a finite prefix of levels; for
unramified towers the ratios Φ_q/g* and n/g* are exactly constant from the
base up, so the top level already carries the limit vector φ.  Ramification
is recorded per step as explicit (base norm, e, f, multiplicity) rows, from
which Riemann–Hurwitz gives exact genus increments and two-sided Galois
bounds.

Level indexing: events carry the index of the level they lead into; a
level-0 event describes the ramification of the base field itself over the
rationals (a degree-1, genus-0 floor), which is how a finite amount of base
ramification enters the almost-Galois convergent sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from igfields import arith
from igfields.errors import StabilizationError
from igfields.quadfield import QuadField, SplitType, split_type

_TOL = 1e-12


def _is_prime_power(q: int) -> bool:
    return q >= 2 and len(arith.factorize(q)) == 1


def _exponent_of(q: int, p: int) -> int:
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return k if q == 1 else 0


@dataclass(frozen=True)
class PhiVector:
    """Limit invariants φ of an infinite global field.

    entries maps place classes to φ values: "R" and "C" for the
    archimedean classes (NF only) and integer prime-power norms for the
    finite ones; phi_infinity is the degree/genus limit.  NF vectors must
    satisfy φ_R + 2·φ_C = φ_∞ and, for every rational prime p,
    Σ_m m·φ_{p^m} ≤ φ_∞.  FF vectors use norms that are powers of the
    constant-field size ff_base and have no archimedean entries.
    """

    entries: dict
    phi_infinity: float
    variant: str = "NF"
    ff_base: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in ("NF", "FF"):
            raise ValueError(f"variant must be NF or FF, got {self.variant!r}")
        if self.phi_infinity < 0:
            raise ValueError("phi_infinity must be nonnegative")
        if (self.variant == "FF") != (self.ff_base is not None):
            raise ValueError("ff_base is required exactly for FF vectors")
        if self.ff_base is not None and not _is_prime_power(self.ff_base):
            raise ValueError(f"ff_base must be a prime power, got {self.ff_base}")
        for key, value in self.entries.items():
            if value < 0:
                raise ValueError(f"negative φ at {key!r}")
            if key in ("R", "C"):
                if self.variant == "FF":
                    raise ValueError("FF vectors have no archimedean entries")
                continue
            if not isinstance(key, int) or not _is_prime_power(key):
                raise ValueError(f"finite place class must be a prime power, got {key!r}")
            if self.variant == "FF":
                q, r = key, self.ff_base
                while q % r == 0:
                    q //= r
                if q != 1:
                    raise ValueError(
                        f"FF norm {key} is not a power of the constant field size"
                    )
        if self.variant == "NF":
            phi_r = self.entries.get("R", 0.0)
            phi_c = self.entries.get("C", 0.0)
            if abs(phi_r + 2 * phi_c - self.phi_infinity) > _TOL:
                raise ValueError("φ_R + 2·φ_C must equal φ_∞")
            per_prime: dict[int, float] = {}
            for key, value in self.entries.items():
                if isinstance(key, int):
                    p = arith.factorize(key)[0][0]
                    per_prime[p] = per_prime.get(p, 0.0) + _exponent_of(key, p) * value
            for p, s in per_prime.items():
                if s > self.phi_infinity + _TOL:
                    raise ValueError(
                        f"Σ m·φ_{{{p}^m}} = {s} exceeds φ_∞ = {self.phi_infinity}"
                    )

    def to_json_dict(self) -> dict:
        return {
            "variant": self.variant,
            "ff_base": self.ff_base,
            "phi_infinity": self.phi_infinity,
            "entries": {str(k): v for k, v in self.entries.items()},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PhiVector":
        entries = {
            (int(k) if k.isdigit() else k): float(v)
            for k, v in data["entries"].items()
        }
        return cls(
            entries=entries,
            phi_infinity=float(data["phi_infinity"]),
            variant=data.get("variant", "NF"),
            ff_base=data.get("ff_base"),
        )


class RamRow(NamedTuple):
    """Splitting of one base place in one tower step.

    norm is the base-field norm Nℼ; multiplicity counts places above with
    this (e, f).  Rows of one event sharing a norm describe the same base
    place.
    """

    norm: int
    e: int
    f: int
    multiplicity: int


@dataclass(frozen=True)
class RamificationEvent:
    """All ramification data of the step leading into one level."""

    level: int
    places: tuple[RamRow, ...]

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        rows = tuple(RamRow(*r) for r in self.places)
        object.__setattr__(self, "places", rows)
        for row in rows:
            if row.norm < 2:
                raise ValueError(f"base norm must be ≥ 2, got {row.norm}")
            if min(row.e, row.f, row.multiplicity) < 1:
                raise ValueError(f"e, f, multiplicity must be ≥ 1 in {row}")

    def ramified_norms(self) -> tuple[int, ...]:
        """Distinct base norms with at least one e ≥ 2 row, ascending."""
        return tuple(sorted({r.norm for r in self.places if r.e >= 2}))

    def to_json_dict(self) -> dict:
        return {"level": self.level, "places": [list(r) for r in self.places]}


@dataclass(frozen=True)
class TowerLevel:
    """One layer: absolute degree, genus, and place counts."""

    degree: int
    genus_star: float
    place_counts: dict
    r1: int = 0
    r2: int = 0

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("degree must be positive")
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError("archimedean counts must be nonnegative")
        for q, count in self.place_counts.items():
            if not isinstance(q, int) or q < 2 or count < 0:
                raise ValueError(f"bad place count {q!r}: {count!r}")

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "genus_star": self.genus_star,
            "r1": self.r1,
            "r2": self.r2,
            "place_counts": {str(q): c for q, c in self.place_counts.items()},
        }


@dataclass(frozen=True)
class Tower:
    """A finite prefix of an infinite global field.

    Levels are ascending; each degree divides the next and g* never
    decreases.  events[i].level indexes the level the step leads into,
    with level 0 meaning the base's own ramification over the degree-1
    genus-0 floor.
    """

    levels: tuple[TowerLevel, ...]
    events: tuple[RamificationEvent, ...] = ()
    base: QuadField | None = None
    split_norms: dict = field(default_factory=dict)
    variant: str = "NF"
    ff_base: int | None = None

    def __post_init__(self) -> None:
        if not self.levels:
            raise ValueError("a tower needs at least one level")
        for lo, hi in zip(self.levels, self.levels[1:]):
            if hi.degree % lo.degree != 0 or hi.degree == lo.degree:
                raise ValueError("each degree must properly divide the next")
            if hi.genus_star < lo.genus_star - _TOL:
                raise ValueError("genus_star must be nondecreasing")
        seen = set()
        for ev in self.events:
            if ev.level >= len(self.levels):
                raise ValueError(f"event level {ev.level} beyond top level")
            if ev.level in seen:
                raise ValueError(f"duplicate event for level {ev.level}")
            seen.add(ev.level)

    def event_at(self, level: int) -> RamificationEvent | None:
        for ev in self.events:
            if ev.level == level:
                return ev
        return None

    def to_json_dict(self) -> dict:
        return {
            "variant": self.variant,
            "ff_base": self.ff_base,
            "base": None if self.base is None else {
                "d": self.base.d,
                "discriminant": self.base.discriminant,
                "genus": self.base.genus,
                "r1": self.base.r1,
                "r2": self.base.r2,
                "ramified_primes": list(self.base.ramified_primes),
            },
            "split_norms": {str(q): c for q, c in self.split_norms.items()},
            "levels": [lv.to_json_dict() for lv in self.levels],
            "events": [ev.to_json_dict() for ev in self.events],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Tower":
        base = None
        if data.get("base") is not None:
            b = data["base"]
            base = QuadField(
                d=int(b["d"]),
                discriminant=int(b["discriminant"]),
                genus=float(b["genus"]),
                r1=int(b["r1"]),
                r2=int(b["r2"]),
                ramified_primes=tuple(int(p) for p in b["ramified_primes"]),
            )
        return cls(
            levels=tuple(
                TowerLevel(
                    degree=int(lv["degree"]),
                    genus_star=float(lv["genus_star"]),
                    place_counts={
                        int(q): float(c) for q, c in lv["place_counts"].items()
                    },
                    r1=int(lv["r1"]),
                    r2=int(lv["r2"]),
                )
                for lv in data["levels"]
            ),
            events=tuple(
                RamificationEvent(
                    level=int(ev["level"]),
                    places=tuple(tuple(int(x) for x in row) for row in ev["places"]),
                )
                for ev in data["events"]
            ),
            base=base,
            split_norms={int(q): int(c) for q, c in data["split_norms"].items()},
            variant=data.get("variant", "NF"),
            ff_base=data.get("ff_base"),
        )


class HurwitzBounds(NamedTuple):
    """Next-level genus: Galois two-sided bounds and the exact value."""

    lower: float
    upper: float
    exact: float


def hurwitz_genus_bounds(
    level: TowerLevel, event: RamificationEvent, relative_degree: int
) -> HurwitzBounds:
    """Genus of the next level from explicit ramification rows.

    exact = m·g* + ½·Σ (e−1)·f·multiplicity·log(norm) over all rows (tame
    ramification); the Galois bounds add m/4·Σ log(norm) resp.
    m/2·Σ log(norm) over the distinct ramified base norms to m·g*.

    Raises:
        ValueError: If for some base norm Σ e·f·multiplicity differs from
            the relative degree.
    """
    if relative_degree < 1:
        raise ValueError("relative degree must be positive")
    per_norm: dict[int, int] = {}
    for row in event.places:
        per_norm[row.norm] = per_norm.get(row.norm, 0) + row.e * row.f * row.multiplicity
    for norm, total in per_norm.items():
        if total != relative_degree:
            raise ValueError(
                f"rows above norm {norm} sum to {total}, expected {relative_degree}"
            )
    m = relative_degree
    base = m * level.genus_star
    exact = base + 0.5 * math.fsum(
        (row.e - 1) * row.f * row.multiplicity * math.log(row.norm)
        for row in event.places
    )
    ram_log = math.fsum(math.log(q) for q in event.ramified_norms())
    return HurwitzBounds(
        lower=base + (m / 4) * ram_log,
        upper=base + (m / 2) * ram_log,
        exact=exact,
    )


def almost_galois_sum(tower: Tower, horizon: int) -> float:
    """Partial convergent sum Σ_i (1/n_i)·Σ_{ramified base places} log Nℼ.

    The step into level j is weighted by the reciprocal degree below it
    (1 for j = 0).  The two-sided genus consequence
    g₀*/n₀ + ¼·sum ≤ g_h*/n_h ≤ g₀*/n₀ + ½·sum is asserted, starting from
    the degree-1 genus-0 floor when a level-0 event is present.
    """
    if not 0 <= horizon < len(tower.levels):
        raise ValueError(f"horizon {horizon} outside tower levels")
    total = 0.0
    for ev in tower.events:
        if ev.level > horizon:
            continue
        n_below = 1 if ev.level == 0 else tower.levels[ev.level - 1].degree
        total += math.fsum(math.log(q) for q in ev.ramified_norms()) / n_below
    if tower.event_at(0) is not None:
        start = 0.0
    else:
        start = tower.levels[0].genus_star / tower.levels[0].degree
    top = tower.levels[horizon]
    ratio = top.genus_star / top.degree
    assert start + total / 4 <= ratio + 1e-9, "lower genus consequence violated"
    assert ratio <= start + total / 2 + 1e-9, "upper genus consequence violated"
    return total


def simulate_classfield_tower(
    base: QuadField,
    split_primes,
    depth: int,
    branching: int = 2,
) -> Tower:
    """Unramified-everywhere tower over a quadratic base with declared
    totally split primes.

    Level i has degree 2·branching^i over the rationals, genus
    branching^i·g(base), branching^i·2 places over each split prime, and
    the base signature scaled by branching^i.  The base's own ramification
    enters as the level-0 event.

    Raises:
        ValueError: If a declared split prime is not split in base, the
            base genus is not positive, depth < 0, or branching < 2.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if branching < 2:
        raise ValueError("branching must be ≥ 2")
    if base.genus <= 0:
        raise ValueError("base genus must be positive")
    split = [int(p) for p in split_primes]
    for p in split:
        kind = split_type(base, p)
        if kind is not SplitType.SPLIT:
            raise ValueError(f"declared split prime {p} is {kind.value} in base")

    levels = []
    scale = 1
    for _ in range(depth + 1):
        levels.append(
            TowerLevel(
                degree=2 * scale,
                genus_star=scale * base.genus,
                place_counts={p: 2 * scale for p in split},
                r1=base.r1 * scale,
                r2=base.r2 * scale,
            )
        )
        scale *= branching
    base_event = RamificationEvent(
        level=0,
        places=tuple((p, 2, 1, 1) for p in base.ramified_primes),
    )
    return Tower(
        levels=tuple(levels),
        events=(base_event,),
        base=base,
        split_norms={p: 2 for p in split},
    )


def phi_limit(tower: Tower, policy: str = "strict") -> PhiVector:
    """Limit vector φ from the top of a (stabilized) tower.

    policy "strict" requires at least two levels whose ratios Φ_q/g*,
    n/g*, r1/g*, r2/g* agree to 10^{−12} relative error; policy "top"
    reads the top level unconditionally.

    Raises:
        StabilizationError: Under "strict" when the ratios still move.
    """
    if policy not in ("strict", "top"):
        raise ValueError(f"unknown policy {policy!r}")
    top = tower.levels[-1]
    if top.genus_star <= 0:
        raise StabilizationError("top level has nonpositive genus")
    if policy == "strict":
        if len(tower.levels) < 2:
            raise StabilizationError("one level cannot witness stabilized ratios")
        prev = tower.levels[-2]
        if prev.genus_star <= 0:
            raise StabilizationError("previous level has nonpositive genus")
        pairs = [
            (top.degree / top.genus_star, prev.degree / prev.genus_star),
            (top.r1 / top.genus_star, prev.r1 / prev.genus_star),
            (top.r2 / top.genus_star, prev.r2 / prev.genus_star),
        ]
        for q in set(top.place_counts) | set(prev.place_counts):
            pairs.append(
                (
                    top.place_counts.get(q, 0) / top.genus_star,
                    prev.place_counts.get(q, 0) / prev.genus_star,
                )
            )
        for a, b in pairs:
            if abs(a - b) > _TOL * max(1.0, abs(a), abs(b)):
                raise StabilizationError(
                    f"ratios not stabilized: {a!r} vs {b!r}; "
                    "extend the tower or pass policy='top'"
                )
    g = top.genus_star
    entries: dict = {}
    for q, count in sorted(top.place_counts.items()):
        if count:
            entries[q] = count / g
    if tower.variant == "NF":
        if top.r1:
            entries["R"] = top.r1 / g
        if top.r2:
            entries["C"] = top.r2 / g
    return PhiVector(
        entries=entries,
        phi_infinity=top.degree / g,
        variant=tower.variant,
        ff_base=tower.ff_base,
    )


def support(v: PhiVector, tolerance: float = 1e-15) -> set:
    """Place classes with φ above the tolerance (includes "R"/"C")."""
    return {k for k, value in v.entries.items() if value > tolerance}
