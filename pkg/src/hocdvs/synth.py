"""Seeded generators for synthetic sensing inputs.

One-dimensional references: truncated standard-normal sequences, the same
sequences with a chosen value interval mirrored to the opposite sign
(controlled asymmetry), offset square waves, and square-wave-plus-noise
mixtures at an exact realized input SNR.

Trace matrices follow an amplitude-level model of a coherently probed
fiber. Each fiber point carries a unit scatterer with a uniform random
phase; the static baseline at point m is the magnitude of the phasor sum
over the pulse window starting at m, which gives the usual speckle-like
(Rayleigh) amplitude statistics. A vibration at point p perturbs every
point the pulse overlap reaches, weighted by the triangular kernel
k(m) = 1 - |m - p| / pulse_width (largest when the event sits mid-pulse),
scaled by the baseline amplitude at the event itself and by a square-wave
drive sampled on the trace repetition clock. Detector noise is additive
white Gaussian per sample; polarization drift is a per-trace Gaussian
factor (1 + eta) multiplying the whole optical amplitude.

All generation is single-threaded per call and fully determined by the
config, including its seed.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, fields

import numpy as np

from .errors import (
    BadConfigError,
    BadIntervalError,
    EmptyRequestError,
    IoError,
    ZeroSignalError,
)
from .stats import Sequence, power

# Domain of the truncated standard normal; about 0.054% of raw draws fall
# outside and are rejected.
TRUNCATION_LIMIT = 3.46

PROVENANCE_SYNTHETIC = "synthetic"
PROVENANCE_RECORDED = "recorded"
_PROVENANCES = (PROVENANCE_SYNTHETIC, PROVENANCE_RECORDED)


@dataclass(frozen=True)
class AsymmetrySpec:
    """Half-open value interval [lo, hi) whose samples get sign-flipped."""

    interval_lo: float
    interval_hi: float

    def __post_init__(self) -> None:
        if not self.interval_lo < self.interval_hi:
            raise BadIntervalError(
                f"empty interval [{self.interval_lo!r}, {self.interval_hi!r})"
            )
        if self.interval_lo < -TRUNCATION_LIMIT or self.interval_hi > TRUNCATION_LIMIT:
            raise BadIntervalError(
                f"interval [{self.interval_lo}, {self.interval_hi}) exceeds "
                f"the truncation window [-{TRUNCATION_LIMIT}, {TRUNCATION_LIMIT}]"
            )


@dataclass(frozen=True)
class SquareWaveSpec:
    """Offset square wave: high for round(duty * period) samples per period."""

    duty: float
    period_samples: int
    amplitude: float
    phase_samples: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.duty < 1.0:
            raise ValueError(f"duty must be in (0, 1), got {self.duty!r}")
        if self.period_samples < 2:
            raise ValueError(f"period must be >= 2 samples, got {self.period_samples}")
        if self.high_samples < 1:
            raise ValueError(
                f"duty {self.duty} over period {self.period_samples} rounds "
                "to zero high samples"
            )

    @property
    def high_samples(self) -> int:
        return int(round(self.duty * self.period_samples))


@dataclass(frozen=True)
class SimConfig:
    """Full description of one synthetic acquisition."""

    fiber_points: int
    num_traces: int
    pulse_width_points: int
    meters_per_point: float
    trace_rate_hz: float
    vibration_point: int
    vibration: SquareWaveSpec
    vibration_depth: float
    noise_sigma: float
    sop_sigma: float
    seed: int

    def __post_init__(self) -> None:
        checks = [
            (self.fiber_points >= 1, "fiber_points must be >= 1"),
            (self.num_traces >= 1, "num_traces must be >= 1"),
            (self.pulse_width_points >= 1, "pulse_width_points must be >= 1"),
            (self.meters_per_point > 0, "meters_per_point must be > 0"),
            (self.trace_rate_hz > 0, "trace_rate_hz must be > 0"),
            (
                0 <= self.vibration_point < self.fiber_points,
                "vibration_point must lie on the fiber",
            ),
            (0.0 <= self.vibration_depth <= 1.0, "vibration_depth must be in [0, 1]"),
            (self.noise_sigma >= 0, "noise_sigma must be >= 0"),
            (self.sop_sigma >= 0, "sop_sigma must be >= 0"),
        ]
        for ok, message in checks:
            if not ok:
                raise BadConfigError(message)


@dataclass(frozen=True, eq=False)
class TraceMatrix:
    """W traces by M fiber points of backscattering amplitudes."""

    amplitudes: np.ndarray
    meters_per_point: float
    trace_rate_hz: float
    provenance: str = PROVENANCE_SYNTHETIC

    def __post_init__(self) -> None:
        arr = np.asarray(self.amplitudes, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"amplitudes must be a W x M matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("amplitudes must be finite")
        if self.meters_per_point <= 0 or self.trace_rate_hz <= 0:
            raise ValueError("meters_per_point and trace_rate_hz must be > 0")
        if self.provenance not in _PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def num_traces(self) -> int:
        return int(self.amplitudes.shape[0])

    @property
    def fiber_points(self) -> int:
        return int(self.amplitudes.shape[1])


def gen_truncated_gaussian(n: int, seed: int) -> Sequence:
    """n standard-normal draws, rejection-resampled into the truncation window."""
    if n < 1:
        raise EmptyRequestError(f"need at least one sample, got {n}")
    rng = np.random.default_rng(seed)
    out = np.empty(n)
    filled = 0
    while filled < n:
        draw = rng.standard_normal(n - filled)
        keep = draw[np.abs(draw) <= TRUNCATION_LIMIT]
        out[filled : filled + keep.size] = keep
        filled += keep.size
    return Sequence(out)


def asymmetrize(x: Sequence, spec: AsymmetrySpec) -> Sequence:
    """Mirror every sample in [lo, hi) to its negation.

    Length is preserved and exactly the interval's probability mass moves
    to the opposite sign, so the output distribution is asymmetric while
    staying on the truncated support.
    """
    out = x.samples.copy()
    flip = (out >= spec.interval_lo) & (out < spec.interval_hi)
    out[flip] = -out[flip]
    return Sequence(out)


def gen_square_wave(n: int, spec: SquareWaveSpec) -> Sequence:
    """Periodic offset square wave of n samples."""
    idx = (np.arange(n) - spec.phase_samples) % spec.period_samples
    samples = np.where(idx < spec.high_samples, float(spec.amplitude), 0.0)
    return Sequence(samples)


def mix_at_snr1(signal: Sequence, snr1_db: float, seed: int) -> Sequence:
    """Add white Gaussian noise scaled so the realized power ratio is exact.

    The noise gain is set from the realized sample powers, so
    10*log10(power(signal) / power(scaled noise)) equals snr1_db to
    rounding, not just in expectation.
    """
    p_signal = power(signal)
    if p_signal == 0.0:
        raise ZeroSignalError("cannot set an SNR against a zero-power signal")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(len(signal))
    p_raw = float(np.mean(noise**2))
    gain = np.sqrt(p_signal * 10.0 ** (-snr1_db / 10.0) / p_raw)
    return Sequence(signal.samples + gain * noise)


def synth_traces(cfg: SimConfig) -> TraceMatrix:
    """Generate one seeded trace matrix under the amplitude-level model.

    Draw order is fixed (scatterer phases, polarization factors, detector
    noise), so identical configs give bit-identical matrices.
    """
    rng = np.random.default_rng(cfg.seed)
    m, w, pw = cfg.fiber_points, cfg.num_traces, cfg.pulse_width_points

    phases = rng.uniform(0.0, 2.0 * np.pi, size=m)
    csum = np.concatenate([[0.0 + 0.0j], np.cumsum(np.exp(1j * phases))])
    stop = np.minimum(np.arange(m) + pw, m)
    baseline = np.abs(csum[stop] - csum[np.arange(m)])

    drive = gen_square_wave(w, cfg.vibration).samples
    offsets = np.abs(np.arange(m) - cfg.vibration_point)
    kernel = np.clip(1.0 - offsets / pw, 0.0, None)
    event_amplitude = cfg.vibration_depth * baseline[cfg.vibration_point]
    clean = baseline[None, :] + event_amplitude * kernel[None, :] * drive[:, None]

    sop = 1.0 + rng.normal(0.0, cfg.sop_sigma, size=w)
    noise = rng.normal(0.0, cfg.noise_sigma, size=(w, m))
    amplitudes = sop[:, None] * clean + noise
    return TraceMatrix(
        amplitudes=amplitudes,
        meters_per_point=cfg.meters_per_point,
        trace_rate_hz=cfg.trace_rate_hz,
        provenance=PROVENANCE_SYNTHETIC,
    )


# --- plain-text config files ---------------------------------------------------

_INT_KEYS = {
    "fiber_points",
    "num_traces",
    "pulse_width_points",
    "vibration_point",
    "seed",
    "vibration.period_samples",
    "vibration.phase_samples",
}
_FLOAT_KEYS = {
    "meters_per_point",
    "trace_rate_hz",
    "vibration_depth",
    "noise_sigma",
    "sop_sigma",
    "vibration.duty",
    "vibration.amplitude",
}
CONFIG_KEYS = _INT_KEYS | _FLOAT_KEYS

_INT_RE = re.compile(r"[+-]?[0-9]+")


def _parse_literal(key: str, literal: str):
    if key in _INT_KEYS:
        if not _INT_RE.fullmatch(literal):
            raise BadConfigError(f"key '{key}' needs a decimal integer, got {literal!r}")
        return int(literal)
    if "." not in literal:
        raise BadConfigError(f"key '{key}' needs a real with a decimal point, got {literal!r}")
    try:
        return float(literal)
    except ValueError:
        raise BadConfigError(f"key '{key}' has unparseable value {literal!r}") from None


def parse_sim_config(text: str) -> SimConfig:
    """Parse 'key = value' lines into a SimConfig.

    Every key is required exactly once; unknown keys are rejected. Blank
    lines and lines starting with '#' are ignored.
    """
    values: dict[str, float | int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise BadConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, literal = line.partition("=")
        key = key.strip()
        literal = literal.strip()
        if key not in CONFIG_KEYS:
            raise BadConfigError(f"unknown key '{key}'")
        if key in values:
            raise BadConfigError(f"duplicate key '{key}'")
        values[key] = _parse_literal(key, literal)

    missing = sorted(CONFIG_KEYS - values.keys())
    if missing:
        raise BadConfigError(f"missing key(s): {', '.join(missing)}")

    try:
        wave = SquareWaveSpec(
            duty=values["vibration.duty"],
            period_samples=values["vibration.period_samples"],
            amplitude=values["vibration.amplitude"],
            phase_samples=values["vibration.phase_samples"],
        )
    except ValueError as exc:
        raise BadConfigError(str(exc)) from None
    return SimConfig(
        fiber_points=values["fiber_points"],
        num_traces=values["num_traces"],
        pulse_width_points=values["pulse_width_points"],
        meters_per_point=values["meters_per_point"],
        trace_rate_hz=values["trace_rate_hz"],
        vibration_point=values["vibration_point"],
        vibration=wave,
        vibration_depth=values["vibration_depth"],
        noise_sigma=values["noise_sigma"],
        sop_sigma=values["sop_sigma"],
        seed=values["seed"],
    )


def load_sim_config(path) -> SimConfig:
    """Read and parse a config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    return parse_sim_config(text)


def format_sim_config(cfg: SimConfig) -> str:
    """Canonical 'key = value' rendering; parse_sim_config round-trips it."""
    flat: dict[str, float | int] = {}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, SquareWaveSpec):
            for g in fields(value):
                flat[f"{f.name}.{g.name}"] = getattr(value, g.name)
        else:
            flat[f.name] = value
    lines = []
    for key in sorted(flat):
        value = flat[key]
        if key in _INT_KEYS:
            rendered = str(value)
        else:
            rendered = repr(float(value))
            if "." not in rendered:
                # keep the strict "reals carry a decimal point" rule parseable
                mantissa, sep, exponent = rendered.partition("e")
                rendered = f"{mantissa}.0{sep}{exponent}" if sep else f"{rendered}.0"
        lines.append(f"{key} = {rendered}")
    return "\n".join(lines) + "\n"


def config_digest(cfg: SimConfig) -> str:
    """Stable hex digest of the canonical config text."""
    return hashlib.sha256(format_sim_config(cfg).encode("utf-8")).hexdigest()
