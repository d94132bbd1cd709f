"""Squeezing transformation and su(1,1) propagators for the damped oscillator
with generalized Lindblad damping, on a truncated Fock space."""
from .errors import (
    ContractError,
    InconsistentSolutionError,
    LindSqueezeError,
    NumericError,
    ShapeError,
    SingularFactorizationError,
    SizeError,
    StepSizeError,
    TruncationRangeError,
    ValidationError,
)
from .model import ModelParams, SqueezeSolution, TransformedCoeffs, solve_squeeze, transformed_coeffs, validate

__version__ = "0.1.0"
