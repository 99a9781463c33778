"""Exception hierarchy shared by all grusskit modules."""


class GrussKitError(ValueError):
    """Base class for every error raised deliberately by grusskit."""


class DimensionError(GrussKitError):
    """Shapes are empty, non-square, ragged or mutually incompatible."""


class DomainError(GrussKitError):
    """Argument lies outside the mathematical domain of an operation."""


class PreconditionError(GrussKitError):
    """A hypothesis of the theorem being checked does not hold for the input."""


class ContractViolation(GrussKitError):
    """An input does not satisfy a structural contract (e.g. Hermitian-ness)."""
