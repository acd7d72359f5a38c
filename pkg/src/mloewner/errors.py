"""Exception hierarchy shared across the package."""


class MLoewnerError(Exception):
    """Base class for all mloewner errors."""


class InvalidAxis(MLoewnerError):
    """Axis construction rejected (bad bounds or point count)."""


class SamplingError(MLoewnerError):
    """A sampled value was non-finite.

    Carries the offending grid coordinates in ``coords``.
    """

    def __init__(self, message, coords=None):
        super().__init__(message)
        self.coords = tuple(coords) if coords is not None else None


class PartitionError(MLoewnerError):
    """Support-point request exceeds what the axis pools can provide."""


class GridLookupError(MLoewnerError, LookupError):
    """Requested coordinate is not a node of the grid tensor."""


class DegenerateSupport(MLoewnerError):
    """Coincident column/row points make the divided differences singular."""


class DegenerateSlice(MLoewnerError):
    """A 1-D solve saw all-zero data; carries the frozen coordinates."""

    def __init__(self, message, frozen=None):
        super().__init__(message)
        self.frozen = dict(frozen) if frozen is not None else None


class PoleEncountered(MLoewnerError):
    """Denominator sum vanished away from the support; carries ``x``."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = tuple(x) if x is not None else None


class OverPrunedModel(MLoewnerError):
    """Weight pruning removed every entry."""


class FactorsUnavailable(MLoewnerError):
    """Model has no per-variable factor tensors (needed for the KST form)."""


class CaseUnavailable(MLoewnerError):
    """Benchmark case has no formula registered."""


class SweepExhausted(MLoewnerError):
    """Every configuration in a parameter sweep failed."""


class InvalidInput(MLoewnerError):
    """Malformed argument outside the more specific categories above."""


class MethodFallbackWarning(UserWarning):
    """A null-space method hit a singular sub-problem and fell back to SVD."""
