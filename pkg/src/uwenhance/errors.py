"""Exception hierarchy shared across the package."""


class UwEnhanceError(Exception):
    """Base class for all errors raised by uwenhance."""


class PnmError(UwEnhanceError, ValueError):
    """Malformed or unsupported PNM data."""


class UnsupportedFormat(PnmError):
    pass


class TruncatedPayload(PnmError):
    pass


class ChannelMismatch(UwEnhanceError, ValueError):
    pass


class DimensionMismatch(UwEnhanceError, ValueError):
    pass


class InvalidWindow(UwEnhanceError, ValueError):
    pass


class TooSmall(UwEnhanceError, ValueError):
    pass


class DegenerateAirlight(UwEnhanceError, ValueError):
    pass


class InsufficientSamples(UwEnhanceError, ValueError):
    pass


class InsufficientData(UwEnhanceError, ValueError):
    pass


class SingularDesign(UwEnhanceError, ValueError):
    pass


class RatingsFormatError(UwEnhanceError, ValueError):
    """A ratings CSV could not be parsed; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DegenerateLabels(UwEnhanceError, ValueError):
    pass


class GateError(UwEnhanceError, RuntimeError):
    """Enhancer failure inside the quality gate.

    ``iteration`` is the 1-based gate iteration that failed (``None`` when the
    enhancer was invoked outside a gate loop) and ``stderr`` holds captured
    output of an external process, if any.
    """

    def __init__(self, message, iteration=None, stderr=""):
        super().__init__(message)
        self.iteration = iteration
        self.stderr = stderr
