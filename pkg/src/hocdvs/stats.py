"""Moment and cumulant estimators on finite real sequences.

The third-order cumulant of a zero-mean sequence is the mean of triple
products; it vanishes for any distribution that is symmetric about zero,
so it separates skewed signals from Gaussian-like noise. Every estimator
here demands explicitly centered input: centering travels with the data
as a flag, and a forgotten centering step fails loudly instead of
silently biasing the estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadRangeError,
    DegenerateNoiseReferenceError,
    EmptySequenceError,
    LagTooLargeError,
    LengthMismatchError,
    NonPositiveNoiseError,
    NotCenteredError,
    PowerMismatchError,
    ZeroSignalError,
)

# |mean| must stay below this times max(1, max|sample|) for centered data.
CENTER_TOL = 1e-12

# Degenerate-reference floor: |c3(noise)| must exceed this times power^(3/2).
NOISE_C3_FLOOR = 1e-3


@dataclass(frozen=True, eq=False)
class Sequence:
    """A finite real-valued time series with an explicit centering flag."""

    samples: np.ndarray
    centered: bool = False

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1:
            raise ValueError(f"samples must be one-dimensional, got shape {arr.shape}")
        if arr.size == 0:
            raise EmptySequenceError("sequence must contain at least one sample")
        if self.centered:
            scale = max(1.0, float(np.max(np.abs(arr))))
            mean = float(arr.mean())
            if abs(mean) > CENTER_TOL * scale:
                raise NotCenteredError(
                    f"sequence flagged centered but mean is {mean:.3e}"
                )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class LaggedCumulantRequest:
    """Pair of non-negative sample lags for the lagged third cumulant."""

    tau1: int
    tau2: int

    def __post_init__(self) -> None:
        for name, tau in (("tau1", self.tau1), ("tau2", self.tau2)):
            if int(tau) != tau or tau < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {tau!r}")


@dataclass(frozen=True, eq=False)
class Histogram:
    """Equal-width histogram; out-of-range samples are counted separately."""

    bin_edges: np.ndarray
    counts: np.ndarray
    total: int
    out_of_range: int = 0

    def __post_init__(self) -> None:
        edges = np.asarray(self.bin_edges, dtype=float)
        counts = np.asarray(self.counts, dtype=int)
        if edges.size != counts.size + 1:
            raise ValueError("need exactly one more edge than bins")
        if not np.all(np.diff(edges) > 0):
            raise ValueError("bin edges must be strictly increasing")
        if np.any(counts < 0) or self.out_of_range < 0:
            raise ValueError("counts must be non-negative")
        if int(counts.sum()) + self.out_of_range != self.total:
            raise ValueError("counts plus out-of-range samples must equal total")
        for name, arr in (("bin_edges", edges), ("counts", counts)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def center(x: Sequence) -> Sequence:
    """Subtract the sample mean and mark the result centered."""
    return Sequence(x.samples - x.samples.mean(), centered=True)


def _require_centered(*seqs: Sequence) -> None:
    for i, s in enumerate(seqs):
        if not s.centered:
            raise NotCenteredError(f"argument {i + 1} is not centered")


def joint_cumulant3(x1: Sequence, x2: Sequence, x3: Sequence) -> float:
    """Third joint cumulant of zero-mean data: the mean of x1*x2*x3."""
    _require_centered(x1, x2, x3)
    n = len(x1)
    if len(x2) != n or len(x3) != n:
        raise LengthMismatchError(
            f"lengths differ: {n}, {len(x2)}, {len(x3)}"
        )
    return float(np.mean(x1.samples * x2.samples * x3.samples))


def third_cumulant_lagged(x: Sequence, req: LaggedCumulantRequest) -> float:
    """Lagged third-cumulant estimate of a centered sequence.

    Sums x[t] * x[t+tau1] * x[t+tau2] over every t for which all three
    indices are in range, and divides by that effective term count, so
    the zero-lag case coincides with the mean cube.
    """
    _require_centered(x)
    n = len(x)
    lag = max(req.tau1, req.tau2)
    if lag >= n:
        raise LagTooLargeError(f"lag {lag} >= sequence length {n}")
    n_eff = n - lag
    s = x.samples
    prod = s[:n_eff] * s[req.tau1 : req.tau1 + n_eff] * s[req.tau2 : req.tau2 + n_eff]
    return float(prod.sum() / n_eff)


def third_cumulant_zero_lag(x: Sequence) -> float:
    """Mean cube of a centered sequence (both lags zero)."""
    _require_centered(x)
    return float(np.mean(x.samples**3))


def power(x: Sequence) -> float:
    """Mean square of the samples."""
    return float(np.mean(x.samples**2))


def snr_db(p_signal: float, p_noise: float, *, strict: bool = False) -> float:
    """10*log10(p_signal / p_noise).

    Zero signal power yields -inf, or raises ZeroSignalError in strict mode.
    """
    if p_noise <= 0.0:
        raise NonPositiveNoiseError(f"noise power must be > 0, got {p_noise!r}")
    if p_signal < 0.0:
        raise ZeroSignalError(f"signal power must be >= 0, got {p_signal!r}")
    if p_signal == 0.0:
        if strict:
            raise ZeroSignalError("signal power is zero")
        return float("-inf")
    return 10.0 * math.log10(p_signal / p_noise)


def snr2_db(mixed: Sequence, noise_ref: Sequence) -> float:
    """Output SNR: dB ratio of cumulant magnitudes against equal-power noise.

    Both inputs must be centered and power-matched within 1% (callers
    normalize the reference). A reference whose own third cumulant sits
    below the stability floor cannot anchor the ratio; callers should
    average over noise realizations instead.
    """
    _require_centered(mixed, noise_ref)
    p_mixed = power(mixed)
    p_noise = power(noise_ref)
    if abs(p_mixed - p_noise) > 0.01 * max(p_mixed, p_noise):
        raise PowerMismatchError(
            f"powers differ by more than 1%: {p_mixed:.6g} vs {p_noise:.6g}"
        )
    c3_noise = third_cumulant_zero_lag(noise_ref)
    floor = NOISE_C3_FLOOR * p_noise**1.5
    if abs(c3_noise) <= floor:
        raise DegenerateNoiseReferenceError(
            f"|c3(noise)| = {abs(c3_noise):.3e} is below the floor {floor:.3e}"
        )
    c3_mixed = third_cumulant_zero_lag(mixed)
    if c3_mixed == 0.0:
        return float("-inf")
    return 10.0 * math.log10(abs(c3_mixed) / abs(c3_noise))


def histogram(x: Sequence, bins: int, lo: float, hi: float) -> Histogram:
    """Equal-width histogram over [lo, hi].

    Bins are half-open except the last, which is closed. Samples outside
    the range do not enter any bin but are reported in out_of_range.
    """
    if bins < 1:
        raise BadRangeError(f"need at least one bin, got {bins}")
    if not lo < hi:
        raise BadRangeError(f"invalid range [{lo!r}, {hi!r}]")
    counts, edges = np.histogram(x.samples, bins=bins, range=(lo, hi))
    total = len(x)
    return Histogram(
        bin_edges=edges,
        counts=counts,
        total=total,
        out_of_range=total - int(counts.sum()),
    )
