"""Exception types shared across the package."""


class PoissonBlocksError(Exception):
    """Base class for all package errors."""


class FieldMismatchError(PoissonBlocksError):
    pass


class ArityMismatchError(PoissonBlocksError):
    pass


class ParseError(PoissonBlocksError, ValueError):
    pass


class StarConditionError(PoissonBlocksError):
    """The divisor does not have a unique top and bottom monomial on the axis."""


class TermCapExceeded(PoissonBlocksError):
    """Symbolic size passed the configured cap; callers fall back to fingerprints."""


class AllPolesError(PoissonBlocksError):
    """Every sampled evaluation point hit a pole, even after resampling."""


class UnknownGeneratorError(PoissonBlocksError, KeyError):
    pass


class InvalidOrderError(PoissonBlocksError, ValueError):
    pass


class UnitRelationError(PoissonBlocksError, ValueError):
    """A single-monomial relation generates the unit ideal."""


class AdmissibilityError(PoissonBlocksError):
    """A relation identified two distinct states at the same time."""


class InfeasibleStageError(PoissonBlocksError):
    pass


class CatalogError(PoissonBlocksError, ValueError):
    pass


class ProjectionError(PoissonBlocksError):
    """Diagonal entries are not constants times monomials, so no exponent projection."""


class DeltaPairError(PoissonBlocksError, ValueError):
    """The two delta atoms do not differ by a unipotent element."""
