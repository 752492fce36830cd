"""Exception hierarchy shared by all modules."""


class GenDiracError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(GenDiracError, ValueError):
    """Operand shapes are incompatible with the requested operation."""


class SingularMatrix(GenDiracError):
    """Elimination met a pivot below the singularity threshold."""

    def __init__(self, msg, pivot):
        super().__init__(msg)
        self.pivot = pivot


class NumericalFailure(GenDiracError):
    """An iterative method failed to reach its residual target."""

    def __init__(self, msg, residual):
        super().__init__(msg)
        self.residual = residual


class ContractViolation(GenDiracError, ValueError):
    """Inputs do not satisfy a documented precondition."""


class DegenerateParameter(GenDiracError, ValueError):
    """The operation is undefined at this parameter value (typically a = 0)."""


class ComplexMass(GenDiracError, ValueError):
    """a < -1/4: the two masses are complex."""


class ComplexMassWarning(UserWarning):
    """Parameters were accepted but lie in the complex-mass region."""


class OffShell(GenDiracError, ValueError):
    """A momentum does not satisfy the mass-shell condition."""


class SeedExhausted(GenDiracError):
    """A projector annihilated the current seed vector."""


class NoSuchState(GenDiracError):
    """No seed vector produced a nonzero state with the requested labels."""


class SingularElimination(GenDiracError):
    """The vector-index tensor used to eliminate the vector-bispinor is singular."""

    def __init__(self, msg, det):
        super().__init__(msg)
        self.det = det
