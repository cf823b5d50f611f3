"""Detection pipeline: detrend, per-point cumulant profile, localization.

The detector removes the static trend by subtracting each fiber point's
across-trace mean, then reduces the windowed residual history at every
point to a single statistic. The primary statistic is the zero-lag third
cumulant (mean cube), which stays near zero for symmetric residuals and
responds strongly to the skewed residuals a non-50%-duty drive produces;
baseline methods reduce the same window with consecutive-trace absolute
differences instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadAverageLengthError,
    BadGuardError,
    NoEdgeError,
    NoPeakError,
    NotDetrendedError,
    TooFewTracesError,
    WindowExceedsTracesError,
    ZeroBackgroundError,
)
from .synth import TraceMatrix

METHOD_HOC = "hoc"
METHOD_MOVING_DIFFERENTIAL = "moving_differential"
METHOD_MOVING_AVERAGE = "moving_average"
METHODS = (METHOD_HOC, METHOD_MOVING_DIFFERENTIAL, METHOD_MOVING_AVERAGE)

# Column means after detrending must be below this times max(1, max|amplitude|).
DETREND_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HocProfile:
    """Per-fiber-point statistic over a window of consecutive traces."""

    values: np.ndarray
    window: int
    meters_per_point: float
    method: str

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError(f"values must be a non-empty vector, got shape {arr.shape}")
        if self.window < 2:
            raise ValueError(f"window must be >= 2 traces, got {self.window}")
        if self.meters_per_point <= 0:
            raise ValueError("meters_per_point must be > 0")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def fiber_points(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class DetectionReport:
    """Localization result for one profile."""

    peak_index: int
    peak_position_m: float
    location_snr_db: float
    spatial_resolution_m: float | None
    method: str

    def __post_init__(self) -> None:
        if self.peak_index < 0:
            raise ValueError("peak_index must be >= 0")
        if not math.isfinite(self.location_snr_db):
            raise ValueError("location_snr_db must be finite")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


def detrend(traces: TraceMatrix) -> TraceMatrix:
    """Subtract each fiber point's mean over all traces."""
    if traces.num_traces < 2:
        raise TooFewTracesError("detrending needs at least two traces")
    residuals = traces.amplitudes - traces.amplitudes.mean(axis=0, keepdims=True)
    return TraceMatrix(
        amplitudes=residuals,
        meters_per_point=traces.meters_per_point,
        trace_rate_hz=traces.trace_rate_hz,
        provenance=traces.provenance,
    )


def _check_window(traces: TraceMatrix, window: int) -> None:
    if window > traces.num_traces:
        raise WindowExceedsTracesError(
            f"window {window} exceeds {traces.num_traces} traces"
        )


def hoc_profile(traces: TraceMatrix, window: int) -> HocProfile:
    """Zero-lag third cumulant of the first `window` residuals per point.

    Input must already be detrended; per-point column means are verified
    against a tight tolerance so raw traces fail fast.
    """
    _check_window(traces, window)
    amps = traces.amplitudes
    scale = max(1.0, float(np.max(np.abs(amps))))
    if float(np.max(np.abs(amps.mean(axis=0)))) > DETREND_TOL * scale:
        raise NotDetrendedError("per-point means are not zero; run detrend first")
    values = np.mean(amps[:window] ** 3, axis=0)
    return HocProfile(values, window, traces.meters_per_point, METHOD_HOC)


def moving_differential_profile(traces: TraceMatrix, window: int) -> HocProfile:
    """Mean absolute difference of consecutive traces per point."""
    _check_window(traces, window)
    diffs = np.abs(np.diff(traces.amplitudes[:window], axis=0))
    values = diffs.mean(axis=0)
    return HocProfile(values, window, traces.meters_per_point, METHOD_MOVING_DIFFERENTIAL)


def moving_average_profile(traces: TraceMatrix, window: int, avg_len: int) -> HocProfile:
    """Block-average avg_len consecutive traces, then difference the blocks.

    avg_len = 1 reduces exactly to the moving differential.
    """
    _check_window(traces, window)
    if not 1 <= avg_len <= window:
        raise BadAverageLengthError(f"avg_len must be in [1, {window}], got {avg_len}")
    blocks = window // avg_len
    if blocks < 2:
        raise BadAverageLengthError(
            f"avg_len {avg_len} leaves {blocks} block(s); need at least 2"
        )
    m = traces.fiber_points
    averaged = traces.amplitudes[: blocks * avg_len].reshape(blocks, avg_len, m).mean(axis=1)
    values = np.abs(np.diff(averaged, axis=0)).mean(axis=0)
    return HocProfile(values, window, traces.meters_per_point, METHOD_MOVING_AVERAGE)


def locate_peak(profile: HocProfile) -> tuple[int, float]:
    """Index and position of the largest |value|; ties go to the lowest index."""
    vals = profile.values
    finite = np.isfinite(vals)
    if not finite.any():
        raise NoPeakError("profile has no finite values")
    mags = np.where(finite, np.abs(vals), -np.inf)
    idx = int(np.argmax(mags))
    if mags[idx] == 0.0:
        raise NoPeakError("profile is identically zero")
    return idx, idx * profile.meters_per_point


def location_snr(profile: HocProfile, peak_index: int, guard: int) -> float:
    """dB ratio of the squared peak to the mean squared background.

    Background is every point farther than `guard` from the peak; guard
    should cover at least the pulse width so the event's own skirt stays
    out of the noise estimate.
    """
    vals = profile.values
    m = profile.fiber_points
    if not 0 <= peak_index < m:
        raise ValueError(f"peak_index {peak_index} outside profile of {m} points")
    if guard < 0:
        raise BadGuardError(f"guard must be >= 0, got {guard}")
    background = vals[np.abs(np.arange(m) - peak_index) > guard]
    if background.size == 0:
        raise BadGuardError(f"guard {guard} leaves no background samples")
    bg_power = float(np.mean(background**2))
    if bg_power == 0.0:
        raise ZeroBackgroundError("background is exactly zero")
    peak_val = float(vals[peak_index])
    if peak_val == 0.0:
        raise NoPeakError("value at peak_index is zero")
    return 10.0 * math.log10(peak_val**2 / bg_power)


def spatial_resolution(
    profile: HocProfile,
    peak_index: int,
    *,
    background: float | None = None,
    max_search_points: int | None = None,
) -> float:
    """Distance between the 10% and 90% crossings of the rising edge.

    Walks left from the peak and linearly interpolates the first segments
    where |values| crosses 90% and then 10% of the peak-to-background
    span. Background defaults to the profile-wide median of |values|.
    max_search_points bounds how far left of the peak the edge may extend.
    """
    vals = np.abs(profile.values)
    m = profile.fiber_points
    if not 0 <= peak_index < m:
        raise ValueError(f"peak_index {peak_index} outside profile of {m} points")
    peak_val = float(vals[peak_index])
    bg = float(np.median(vals)) if background is None else float(background)
    span = peak_val - bg
    if span <= 0.0:
        raise NoEdgeError("peak does not rise above the background level")
    hi_level = bg + 0.9 * span
    lo_level = bg + 0.1 * span

    first = 0 if max_search_points is None else max(0, peak_index - max_search_points)
    x_hi: float | None = None
    x_lo: float | None = None
    for left in range(peak_index - 1, first - 1, -1):
        lower = float(vals[left])
        upper = float(vals[left + 1])
        if x_hi is None and lower < hi_level <= upper:
            x_hi = left + (hi_level - lower) / (upper - lower)
        if x_hi is not None and lower < lo_level <= upper:
            x_lo = left + (lo_level - lower) / (upper - lower)
            break
    if x_hi is None or x_lo is None:
        raise NoEdgeError("no monotone rising edge with both crossings found")
    return (x_hi - x_lo) * profile.meters_per_point
