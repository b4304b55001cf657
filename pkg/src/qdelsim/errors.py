"""Exception hierarchy shared by every module."""


class QDelSimError(Exception):
    """Base class for all library errors."""


class ConfigurationError(QDelSimError, ValueError):
    """Parameters violate a construction constraint."""


class CapabilityError(QDelSimError, ValueError):
    """Request exceeds what the code or simulator can handle."""


class DecodeFailure(QDelSimError):
    """A decoder could not produce a consistent result."""


class IntegrityError(QDelSimError):
    """Marker measurements are inconsistent with at most t deletions."""


class NumericalError(QDelSimError, ArithmeticError):
    """A numerical quantity fell outside its tolerance."""


class ConstructionError(QDelSimError):
    """A numerically built object failed its own consistency check."""
