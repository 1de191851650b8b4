"""Exception hierarchy. Every class also derives from the closest builtin."""

from typing import Any, Optional


class SkylinkError(Exception):
    pass


class ArgumentError(SkylinkError, ValueError):
    pass


class ChartDomainError(SkylinkError, ValueError):
    pass


class CapabilityError(SkylinkError, NotImplementedError):
    pass


class IntegrationError(SkylinkError, RuntimeError):
    def __init__(self, message: str, partial: Optional[Any] = None) -> None:
        super().__init__(message)
        self.partial = partial


class CrossingRangeError(IntegrationError):
    pass


class DegenerateCovectorError(SkylinkError, RuntimeError):
    pass


class NumericalError(SkylinkError, ArithmeticError):
    def __init__(self, message: str, best_bound: Optional[float] = None) -> None:
        super().__init__(message)
        self.best_bound = best_bound


class IntegrityError(SkylinkError, RuntimeError):
    pass


class FrontError(SkylinkError, ValueError):
    def __init__(self, message: str, phi: Optional[float] = None) -> None:
        super().__init__(message)
        self.phi = phi


class TangencyError(FrontError):
    pass


class UnderResolvedFrontError(FrontError):
    pass


class UnsupportedTopologyError(SkylinkError, ValueError):
    pass


class ConfigError(SkylinkError, ValueError):
    pass
