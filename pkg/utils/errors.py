from typing import List


class NetSlopeError(Exception):
    """Base class for every domain error raised by netslope."""


class ZeroZero(NetSlopeError, ValueError):
    def __init__(self, text: str = "0/0"):
        super().__init__(f"{text} is not a slope: numerator and denominator are both zero")


class EqualSlopes(NetSlopeError, ValueError):
    def __init__(self, slope):
        super().__init__(f"slopes must be distinct, got {slope} twice")
        self.slope = slope


class BadParameter(NetSlopeError, ValueError):
    pass


class ExhaustedRetries(NetSlopeError):
    pass


class NonGenericUnresolvable(NetSlopeError):
    def __init__(self, message: str, incidence: str = ""):
        super().__init__(f"{message}: {incidence}" if incidence else message)
        self.incidence = incidence


class NonGeneric(NetSlopeError):
    """A single slope line met a lattice point, mirror endpoint or mirror overlap."""

    def __init__(self, incidence: str):
        super().__init__(incidence)
        self.incidence = incidence


class DegenerateArcModel(NetSlopeError):
    pass


class NotACoreArc(NetSlopeError, ValueError):
    pass


class UnsupportedOrbifold(NetSlopeError):
    pass


class LatticeImageFailure(NetSlopeError):
    pass


class PostconditionError(NetSlopeError):
    """An engine produced data contradicting one of its structural guarantees."""

    def __init__(self, message: str, diagnostics: dict = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class PresentationSyntaxError(NetSlopeError, ValueError):
    def __init__(self, message: str, line: int = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class InvalidPresentation(NetSlopeError, ValueError):
    def __init__(self, violations: List):
        names = ", ".join(v.kind for v in violations)
        super().__init__(f"invalid presentation: {names}")
        self.violations = list(violations)
