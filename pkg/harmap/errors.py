"""Exception hierarchy for the harmonic mapping toolkit.

Check failures are reported through report objects, never raised.
"""


class HarmonicMapError(Exception):
    """Base class for every error raised by harmap."""


class ConfigError(HarmonicMapError):
    pass


class DomainError(HarmonicMapError):
    """A point or radius lies outside the open unit disk, or a range is violated."""


class InvalidParameterError(HarmonicMapError):
    pass


class NormalizationError(HarmonicMapError):
    pass


class SingularPointError(HarmonicMapError):
    """A denominator (h', f, d/dθ f, 1 ∓ w, ...) vanishes at ``z``."""

    def __init__(self, message: str, z: complex):
        super().__init__(f"{message} at z={z!r}")
        self.z = complex(z)


class PoleError(HarmonicMapError):
    """A tangent identity was evaluated too close to a pole of tan Ψ or tan Φ."""


class BracketingError(HarmonicMapError):
    pass


class NonMonotoneError(HarmonicMapError):
    """A radius property passed above a radius where it failed."""

    def __init__(self, message: str, radii, passed):
        super().__init__(message)
        self.radii = list(radii)
        self.passed = list(passed)
