"""Exceptions raised by the duality toolkit."""


class ContractViolation(ValueError):
    """A precondition of an operation does not hold (dimensions, finiteness, membership)."""


class NotMonotoneError(ContractViolation):
    """A matrix or resolvent does not describe a monotone operator."""


class MembershipError(ContractViolation):
    """A point or solution pair fails its membership oracle."""


class NotParamonotoneError(ContractViolation):
    """A paramonotone-only operation was called on a pair lacking the flag."""


class OrthogonalityError(ContractViolation):
    """Sampled orthogonality validation between two sets failed."""


class InconsistentStepError(ContractViolation):
    """The Haugazeau halfspace intersection is empty."""


class FixtureError(ValueError):
    """Unknown fixture, malformed overlay, or failed self-validation."""


class UsageError(ValueError):
    """Invalid command-line usage: unknown suite or algorithm, bad vector argument."""
