"""Distributed-vibration-sensing toolkit built on third-order cumulants.

Detects and localizes non-Gaussian vibration events in (simulated or
recorded) fiber backscattering trace matrices: symmetric noise averages
out of the per-point mean-cube statistic while a skewed drive does not.
"""

from .detect import (
    METHOD_HOC,
    METHOD_MOVING_AVERAGE,
    METHOD_MOVING_DIFFERENTIAL,
    DetectionReport,
    HocProfile,
    detrend,
    hoc_profile,
    locate_peak,
    location_snr,
    moving_average_profile,
    moving_differential_profile,
    spatial_resolution,
)
from .io_formats import (
    export_profile_csv,
    read_profile_csv,
    read_report_json,
    read_traces,
    write_report_json,
    write_traces,
)
from .stats import (
    Histogram,
    LaggedCumulantRequest,
    Sequence,
    center,
    histogram,
    joint_cumulant3,
    power,
    snr2_db,
    snr_db,
    third_cumulant_lagged,
    third_cumulant_zero_lag,
)
from .synth import (
    AsymmetrySpec,
    SimConfig,
    SquareWaveSpec,
    TraceMatrix,
    asymmetrize,
    config_digest,
    format_sim_config,
    gen_square_wave,
    gen_truncated_gaussian,
    load_sim_config,
    mix_at_snr1,
    parse_sim_config,
    synth_traces,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetrySpec",
    "DetectionReport",
    "Histogram",
    "HocProfile",
    "LaggedCumulantRequest",
    "METHOD_HOC",
    "METHOD_MOVING_AVERAGE",
    "METHOD_MOVING_DIFFERENTIAL",
    "Sequence",
    "SimConfig",
    "SquareWaveSpec",
    "TraceMatrix",
    "asymmetrize",
    "center",
    "config_digest",
    "detrend",
    "export_profile_csv",
    "format_sim_config",
    "gen_square_wave",
    "gen_truncated_gaussian",
    "histogram",
    "hoc_profile",
    "joint_cumulant3",
    "load_sim_config",
    "locate_peak",
    "location_snr",
    "mix_at_snr1",
    "moving_average_profile",
    "moving_differential_profile",
    "parse_sim_config",
    "power",
    "read_profile_csv",
    "read_report_json",
    "read_traces",
    "snr2_db",
    "snr_db",
    "spatial_resolution",
    "synth_traces",
    "third_cumulant_lagged",
    "third_cumulant_zero_lag",
    "write_report_json",
    "write_traces",
]
