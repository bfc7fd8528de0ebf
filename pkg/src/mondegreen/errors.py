"""Exception types shared across the package.

Everything raised for bad *input* derives from MondegreenError so callers
(CLI, HTTP service) can map the whole family to one failure class while
genuine bugs still surface as ordinary exceptions.
"""


class MondegreenError(Exception):
    """Base class for input and validation failures."""


class SubtitleParseError(MondegreenError):
    """Malformed SRT or console-log content."""


class PairingError(MondegreenError):
    """A pairing spec points at lines/segments that do not exist."""


class AnnotationError(MondegreenError):
    """An annotation references an unknown pair or diff position."""


class WavFormatError(MondegreenError):
    """Unsupported or corrupt RIFF/WAVE content."""


class DegenerateInputError(MondegreenError):
    """Numerically unusable input (constant channel, dependent channels, ...)."""


class SpectrumError(MondegreenError):
    """Signal unsuitable for the requested spectral analysis."""
