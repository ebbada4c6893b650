"""Invariants of infinite global fields.

Computes Tsfasman–Vladut invariants φ_q and φ_∞ of (simulated) towers of
global fields, the basic inequalities and their deficiencies, Golod–
Shafarevich thresholds for class field towers, Chebotarev densities on
explicit finite groups, and an effective construction of quadratic number
fields in which n prescribed primes split and which carry an infinite
unramified 2-class field tower.
"""

from igfields import (
    arith,
    asymptotics,
    bounds,
    density,
    quadfield,
    serialize,
    tower,
)
from igfields.errors import ConstructionError, FeasibilityError, StabilizationError

__version__ = "0.1.0"

__all__ = [
    "ConstructionError",
    "FeasibilityError",
    "StabilizationError",
    "__version__",
    "arith",
    "asymptotics",
    "bounds",
    "density",
    "quadfield",
    "serialize",
    "tower",
]
