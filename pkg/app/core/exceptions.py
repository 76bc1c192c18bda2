class ToolkitError(Exception):
    """
    Base class for every error raised by the verification toolkit
    """


class EnumerationCapExceeded(ToolkitError):
    """A closure or search grew past its configured cap."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeded the cap of {cap} elements")
        self.cap = cap


class NotASubgroupError(ToolkitError):
    pass


class FixtureError(ToolkitError):
    """Missing, unknown or malformed data file entry."""


class UnknownSuiteError(ToolkitError):
    pass


class CliffordRelationError(ToolkitError):
    """A generator does not square to a scalar or a pair fails to anticommute."""


class NotIdempotentError(ToolkitError):
    pass


class CharacterTableError(ToolkitError):
    """Dixon computation, orthogonality or multiplicity failure."""


class RealStructureError(ToolkitError):
    pass


class UnitMismatchError(ToolkitError):
    pass


class MissingConstantError(ToolkitError):
    pass


class LieClosureError(ToolkitError):
    """A matrix basis is not closed under the commutator."""


class CheckSkipped(ToolkitError):
    """Raised inside a check whose inputs are unavailable; recorded as SKIP."""
