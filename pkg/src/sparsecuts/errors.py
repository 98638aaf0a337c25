class SparseCutsError(Exception):
    """Base class for all package errors."""


class Infeasible(SparseCutsError):
    pass


class Unbounded(SparseCutsError):
    """Raised when vertices were requested but the polyhedron has rays or lineality."""

    def __init__(self, msg, rays=(), lineality=()):
        super().__init__(msg)
        self.rays = tuple(rays)
        self.lineality = tuple(lineality)


class BudgetExceeded(SparseCutsError):
    pass


class DimensionMismatch(SparseCutsError, ValueError):
    pass


class NegativeCoefficient(SparseCutsError, ValueError):
    pass


class NormTooLarge(SparseCutsError, ValueError):
    pass


class NotSeparated(SparseCutsError):
    def __init__(self, msg, best_margin=None):
        super().__init__(msg)
        self.best_margin = best_margin


class DegenerateBox(SparseCutsError, ValueError):
    pass


class NotPowerOfTwo(SparseCutsError, ValueError):
    pass


class TooManyRequested(SparseCutsError, ValueError):
    pass
