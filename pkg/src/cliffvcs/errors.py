"""Exception types raised across the package."""


class AlgebraTagError(ValueError):
    """An operation received an element of the wrong algebra."""


class LabelSetError(ValueError):
    """A label ``t = ||x||`` lies outside ``0 <= t < L``."""


class QuadratureError(ValueError):
    """A quadrature rule cannot resolve the requested integral."""


class ConfigError(ValueError):
    """Invalid run configuration. ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
