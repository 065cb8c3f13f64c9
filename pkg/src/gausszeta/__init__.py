"""Transfer-operator numerics for the Gauss map and the Selberg zeta function
of the modular group."""

from . import dynamics, operator, specfun, spectral, verify, zeta
from .errors import (DomainError, EigensolverError, GaussZetaError,
                     NonConvergenceError, ParityError, PoleError,
                     QuadratureError, ResourceError)

__version__ = "0.1.0"

__all__ = [
    "dynamics", "operator", "specfun", "spectral", "verify", "zeta",
    "GaussZetaError", "DomainError", "PoleError", "ParityError",
    "NonConvergenceError", "QuadratureError", "ResourceError",
    "EigensolverError",
    "__version__",
]
