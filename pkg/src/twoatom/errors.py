"""Exception types raised by state validation, integration and parsing."""


class ValidationError(ValueError):
    """Base class for all domain validation failures."""


class NotHermitian(ValidationError):
    """Matrix is not Hermitian within tolerance."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"matrix is not Hermitian: max |m - m^dag| = {residual:.3e}")


class TraceNotOne(ValidationError):
    """Matrix trace deviates from one beyond tolerance."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"trace differs from 1 by {residual:.3e}")


class NotPSD(ValidationError):
    """Matrix has a negative eigenvalue beyond tolerance."""

    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")


class NotNormalized(ValidationError):
    """State vector norm deviates from one beyond tolerance."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"state vector norm differs from 1 by {residual:.3e}")


class OutOfRange(ValidationError):
    """A scalar parameter lies outside its admissible range."""


class NotAProbabilityVector(ValidationError):
    """Weights are negative or do not sum to one."""


class DegenerateAt(ValidationError):
    """Parameter value at which a formula degenerates (division by zero)."""


class StepTooLarge(ValidationError):
    """Integration step violates the stability bound, or a mid-run sample failed validation."""


class EigenFailure(ValidationError):
    """Eigen-decomposition produced residues incompatible with a valid density matrix."""


class NotXForm(ValidationError):
    """State is outside the real X-shaped single-excitation family."""


class ParseError(ValidationError):
    """A state descriptor string could not be parsed."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")
