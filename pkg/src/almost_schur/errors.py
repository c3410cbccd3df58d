"""Exception types shared across the toolkit."""


class GeometryError(Exception):
    """Base class for all toolkit errors."""


class ArgumentError(GeometryError, ValueError):
    """Bad argument: dimension mismatch, index out of range, order out of range."""


class DegenerateImmersionError(GeometryError):
    """Jacobian of an immersion chart is rank deficient at a sample point."""


class CodimensionError(GeometryError):
    """Operation requires a hypersurface (codimension one)."""


class PositivityError(GeometryError):
    """A matrix that must be positive definite is not."""


class DomainError(GeometryError):
    """A sample point or stencil leaves the chart domain, or a pointwise
    positivity constraint fails on the sampled domain."""


class GridError(GeometryError):
    """Quadrature grid construction failed (too many rejected nodes, bad resolution)."""


class NumericError(GeometryError):
    """Non-finite value or failed internal numerical cross-check."""


class EstimatorError(GeometryError):
    """Spectral estimator could not produce a value (empty basis, no registry entry)."""


class AdmissibilityError(GeometryError):
    """Requested inequality instance violates the admissibility rules."""
