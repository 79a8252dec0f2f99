"""Exception types shared across the package."""


class PizzaError(Exception):
    """Base class for all errors raised by this package."""


class GeometryError(PizzaError, ValueError):
    """Invalid geometric input (zero vector, dependent normals, bad form)."""


class ArrangementError(PizzaError, ValueError):
    """An arrangement failed validation (parallel pair, no base chamber)."""


class OnHyperplaneError(PizzaError, ValueError):
    """A point lies in the zero band of some hyperplane."""


class PreconditionError(PizzaError, ValueError):
    """An engine was called outside its domain of validity."""


class EnumerationCapError(PizzaError, RuntimeError):
    """An enumeration exceeded its configured cap."""
