"""Error taxonomy shared across the package."""


class PvrefineError(Exception):
    """Base class for all package-specific errors."""


class ReducibleError(PvrefineError):
    """Monic integer polynomial factors over the integers."""


class DegenerateError(PvrefineError):
    """Polynomial is not squarefree (repeated root)."""


class PrecisionError(PvrefineError):
    """Certification or tolerance target unreachable at the working precision."""


class NotPisotError(PvrefineError):
    """Operation requires a certified PV dilation field."""


class NormalizationError(PvrefineError):
    """Scalar mask coefficients do not sum to |alpha|."""


class EigenError(PvrefineError):
    """Matrix symbol at zero lacks a simple eigenvalue 1."""


class NonconvergenceError(PvrefineError):
    """Infinite product tail bound not reached within the factor budget."""


class UnknownExampleError(PvrefineError):
    """Unrecognized builtin mask name."""


class EmptyWindowError(PvrefineError):
    """Window operation produced an empty index range."""


class WindowTooSmallError(PvrefineError):
    """Window does not cover the translate supports at the requested tolerance."""


class SizeError(PvrefineError):
    """Enumeration forecast exceeds the configured budget."""
