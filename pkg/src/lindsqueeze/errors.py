"""Exception hierarchy shared by all modules."""


class LindSqueezeError(Exception):
    pass


class ShapeError(LindSqueezeError, ValueError):
    """Operand has the wrong shape or length."""


class SizeError(ShapeError):
    """Result would exceed the dense-storage budget."""


class ContractError(LindSqueezeError, ValueError):
    """Input violates a documented precondition (e.g. not Hermitian)."""


class ValidationError(LindSqueezeError, ValueError):
    """Physical parameters or configuration are out of the admissible range."""


class TruncationRangeError(ValidationError):
    """State parameter too large for the chosen Fock truncation."""


class NumericError(LindSqueezeError, ArithmeticError):
    pass


class InconsistentSolutionError(NumericError):
    """A squeeze solution does not cancel the anomalous dissipator terms."""


class SingularFactorizationError(NumericError):
    """F(t) vanishes (or nearly so) and the disentangled form breaks down."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class StepSizeError(NumericError):
    """Explicit integrator blew up; reduce the step."""
