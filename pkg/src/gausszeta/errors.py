"""Exception types shared across the package."""


class GaussZetaError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GaussZetaError, ValueError):
    """An argument lies outside the domain of validity of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class ParityError(DomainError):
    """A continued-fraction word has the wrong length parity."""


class NonConvergenceError(GaussZetaError, RuntimeError):
    """An iteration or series failed to reach its stopping rule."""


class QuadratureError(GaussZetaError, RuntimeError):
    """Adaptive quadrature could not certify the requested tolerance."""


class ResourceError(GaussZetaError, RuntimeError):
    """An enumeration or normalization would exceed the configured budget."""


class EigensolverError(GaussZetaError, RuntimeError):
    """The dense eigenvalue solver failed to converge."""
