"""Exception types shared across the package."""


class GkdualError(Exception):
    """Base class for all library errors."""


class ParameterError(GkdualError, ValueError):
    """A spectrum or state parameter violates its constraint."""


class IndexRangeError(GkdualError, IndexError):
    """A Fock index lies outside the model's level range."""


class RadiusError(GkdualError, ValueError):
    """A state label lies at or beyond the convergence radius."""


class TruncationError(GkdualError, RuntimeError):
    """The requested tail tolerance is unreachable below the cutoff cap."""


class QuadratureError(GkdualError, RuntimeError):
    """Adaptive quadrature failed to converge within the refinement budget."""


class SpectrumValidationError(GkdualError, ValueError):
    """A user-supplied spectrum failed the monotonicity/ratio checks."""


class DegenerateStateError(GkdualError, ValueError):
    """A superposition collapsed to the zero vector."""


class ShapeMismatchError(GkdualError, ValueError):
    """Operator/state cutoffs or models do not match."""
