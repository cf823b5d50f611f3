"""Exception types shared across the package."""


class HocdvsError(Exception):
    """Base class for all package-specific errors."""


# --- sequence / estimator errors ---------------------------------------------

class EmptySequenceError(HocdvsError):
    """A sample sequence with zero length was supplied."""


class LengthMismatchError(HocdvsError):
    """Sequences that must share a length do not."""


class NotCenteredError(HocdvsError):
    """An operation requiring zero-mean input received uncentered data."""


class LagTooLargeError(HocdvsError):
    """A requested lag is not smaller than the sequence length."""


class NonPositiveNoiseError(HocdvsError):
    """Noise power must be strictly positive for a dB ratio."""


class ZeroSignalError(HocdvsError):
    """Signal power is zero where a positive power is required."""


class PowerMismatchError(HocdvsError):
    """Two sequences that must be power-matched differ by more than 1%."""


class DegenerateNoiseReferenceError(HocdvsError):
    """The noise reference is too symmetric for a stable cumulant ratio."""


class BadRangeError(HocdvsError):
    """Invalid histogram range or bin count."""


# --- synthesis errors ---------------------------------------------------------

class EmptyRequestError(HocdvsError):
    """A generator was asked for zero samples."""


class BadIntervalError(HocdvsError):
    """An asymmetry interval is empty or outside the truncation window."""


class BadConfigError(HocdvsError):
    """A simulation config is invalid, incomplete, or unparseable."""


# --- detection errors ---------------------------------------------------------

class TooFewTracesError(HocdvsError):
    """At least two traces are needed to remove the static trend."""


class WindowExceedsTracesError(HocdvsError):
    """The requested window is larger than the number of traces."""


class BadAverageLengthError(HocdvsError):
    """Block-average length does not leave at least two blocks to difference."""


class NotDetrendedError(HocdvsError):
    """Per-point means are not zero; run detrend first."""


class NoPeakError(HocdvsError):
    """The profile contains no usable peak (all zero or non-finite)."""


class BadGuardError(HocdvsError):
    """The guard band leaves no background samples."""


class ZeroBackgroundError(HocdvsError):
    """Background power is exactly zero; the SNR ratio is undefined."""


class NoEdgeError(HocdvsError):
    """No rising edge with both 10% and 90% crossings was found."""


# --- persistence errors -------------------------------------------------------

class IoError(HocdvsError):
    """An underlying file operation failed; message carries the path."""


class NotATraceFileError(HocdvsError):
    """The file does not start with the trace-file magic tag."""


class CorruptHeaderError(HocdvsError):
    """Trace-file header fields are inconsistent with the payload."""


class TruncatedPayloadError(HocdvsError):
    """The file ends before the advertised payload is complete."""


# --- experiment runner errors --------------------------------------------------

class UnknownPresetError(HocdvsError):
    """The requested experiment preset name is not recognized."""
