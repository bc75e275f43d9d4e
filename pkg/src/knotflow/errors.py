"""Exception types shared across the library.

Validation routines report *violations* (plain data, see templates.validate)
for anything a caller may want to collect in bulk; exceptions below are for
conditions that make the requested computation impossible.
"""


class KnotflowError(Exception):
    pass


class EmptyRestriction(KnotflowError):
    """Restricting a template removed every in- or out-slot of a needed line."""


class BudgetExceeded(KnotflowError):
    """An enumeration or search exceeded its configured cap."""


class NotAKnot(KnotflowError):
    """A single-component diagram was required."""


class DisconnectedClosure(KnotflowError):
    """Braid closure is a multi-component link where a knot was required."""


class InvalidPleating(KnotflowError):
    """Fold arcs of a pleating self-intersect or trap an end of the arc."""


class NonIncrementalTwists(KnotflowError):
    """Consecutive twists must differ by exactly one."""


class UnsupportedCarrier(KnotflowError):
    """Carrier knot type outside the supported set."""


class NoConvergence(KnotflowError):
    """Newton iteration failed to reach the residual tolerance."""


class StepBudgetExceeded(KnotflowError):
    """ODE integration exhausted its step budget."""


class SeedingFailure(KnotflowError):
    """Series seeding of the invariant-graph integration failed."""


class CoveringFailed(KnotflowError):
    """A rectangle image did not stretch across a target rectangle."""

    def __init__(self, source, target, detail=""):
        self.source = source
        self.target = target
        super().__init__(f"covering {source}->{target} failed: {detail}")


class DegenerateProjection(KnotflowError):
    """Projected curve had a tangency or triple point; retry with a nudge."""
