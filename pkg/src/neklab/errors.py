"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the declared domain of validity of an operation."""


class ResolutionError(RuntimeError):
    """Grid or quadrature too coarse to support the requested computation."""


class BudgetError(RuntimeError):
    """A configurable combinatorial or time budget was exceeded."""

    def __init__(self, message, attempted=None):
        super().__init__(message)
        self.attempted = attempted


class SmallDivisorError(RuntimeError):
    """A divisor k.omega(I) fell below the declared lower bound."""

    def __init__(self, message, k=None, point=None, value=None):
        super().__init__(message)
        self.k = k
        self.point = point
        self.value = value


class DivergenceError(RuntimeError):
    """An iteration failed to contract; per-step norms attached."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history or [])


class IntegrationError(RuntimeError):
    """Fixed-point solve inside an implicit integrator failed to converge."""


class CoveringError(RuntimeError):
    """Internal consistency failure: a sampled action was not covered by any block."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
