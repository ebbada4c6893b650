"""Exception types shared across the package.

Domain errors (bad arguments, violated preconditions) raise the built-in
ValueError; the classes here cover failures of a different nature: internal
invariant violations during field construction, computations whose exact
answer lies beyond any reachable enumeration bound, and towers whose limit
ratios have not stabilized.
"""


class ConstructionError(RuntimeError):
    """An invariant of the split-prime field construction failed post-hoc."""


class FeasibilityError(RuntimeError):
    """The exact answer requires enumeration beyond the configured bound."""


class StabilizationError(ValueError):
    """Tower ratios have not stabilized and no limit policy was supplied."""
