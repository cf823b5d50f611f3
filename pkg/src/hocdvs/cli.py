"""Command-line entry point.

Exit codes: 0 success, 2 config/usage error, 3 no detection, 4 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from . import detect, experiments, io_formats
from .errors import (
    BadAverageLengthError,
    BadConfigError,
    BadGuardError,
    CorruptHeaderError,
    HocdvsError,
    IoError,
    NoPeakError,
    NotATraceFileError,
    TooFewTracesError,
    TruncatedPayloadError,
    UnknownPresetError,
    WindowExceedsTracesError,
)
from .synth import config_digest, load_sim_config, synth_traces

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_DETECTION = 3
EXIT_IO = 4

_METHOD_ALIASES = {
    "hoc": detect.METHOD_HOC,
    "mdiff": detect.METHOD_MOVING_DIFFERENTIAL,
    "mavg": detect.METHOD_MOVING_AVERAGE,
}

_CONFIG_ERRORS = (
    BadConfigError,
    UnknownPresetError,
    WindowExceedsTracesError,
    TooFewTracesError,
    BadAverageLengthError,
    BadGuardError,
)
_IO_ERRORS = (IoError, NotATraceFileError, CorruptHeaderError, TruncatedPayloadError)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hocdvs",
        description="Simulate fiber backscattering traces and localize "
        "non-Gaussian vibration events with third-order cumulant profiles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="synthesize a trace file from a config")
    p_sim.add_argument("--config", required=True, help="key = value config file")
    p_sim.add_argument("--out", required=True, help="output trace file path")

    p_ana = sub.add_parser("analyze", help="detect and localize an event in a trace file")
    p_ana.add_argument("--traces", required=True, help="input trace file")
    p_ana.add_argument("--method", required=True, choices=sorted(_METHOD_ALIASES))
    p_ana.add_argument("--window", required=True, type=int, help="traces per window")
    p_ana.add_argument("--out", required=True, help="output directory")
    p_ana.add_argument("--avg-len", type=int, default=5,
                       help="block length for mavg (default 5)")
    p_ana.add_argument("--guard", type=int, default=experiments.TRACE_GUARD,
                       help="background guard band in points (default %(default)s)")
    p_ana.add_argument("--min-snr-db", type=float, default=None,
                       help="treat detections below this location SNR as none (exit 3)")

    p_exp = sub.add_parser("experiment", help="run a named preset")
    p_exp.add_argument("--preset", required=True, choices=experiments.PRESET_NAMES)
    p_exp.add_argument("--out", required=True, help="output directory")
    p_exp.add_argument("--seeds", default=None,
                       help="inclusive seed range a..b overriding the preset default")
    return parser


def _parse_seed_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise BadConfigError(f"seed range must look like a..b, got {text!r}")
    try:
        start, stop = int(lo), int(hi)
    except ValueError:
        raise BadConfigError(f"seed range must use integers, got {text!r}") from None
    if stop < start:
        raise BadConfigError(f"empty seed range {text!r}")
    return range(start, stop + 1)


def cmd_simulate(config_path: str, out_path: str) -> int:
    cfg = load_sim_config(config_path)
    traces = synth_traces(cfg)
    io_formats.write_traces(out_path, traces)
    print(f"config_digest={config_digest(cfg)}")
    print(f"seed={cfg.seed}")
    print(f"wrote {traces.num_traces}x{traces.fiber_points} traces to {out_path}")
    return EXIT_OK


def cmd_analyze(
    trace_path: str,
    method_alias: str,
    window: int,
    out_dir: str,
    *,
    avg_len: int = 5,
    guard: int = experiments.TRACE_GUARD,
    min_snr_db: float | None = None,
) -> int:
    method = _METHOD_ALIASES[method_alias]
    traces = io_formats.read_traces(trace_path)
    profile, report = experiments.analyze_traces(
        traces, method, window, avg_len=avg_len, guard=guard
    )

    digest_src = hashlib.sha256()
    digest_src.update(Path(trace_path).read_bytes())
    digest_src.update(
        f"|method={method}|window={window}|guard={guard}|avg_len={avg_len}".encode()
    )
    digest = digest_src.hexdigest()

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    io_formats.export_profile_csv(profile, out / f"profile_{method_alias}.csv")
    io_formats.write_report_json(
        out / f"report_{method_alias}.json", report, window=window, config_digest=digest
    )
    print(
        f"method={method} peak_index={report.peak_index} "
        f"peak_position_m={report.peak_position_m:.6g} "
        f"location_snr_db={report.location_snr_db:.6g}"
    )
    if min_snr_db is not None and report.location_snr_db < min_snr_db:
        print(f"location SNR below threshold {min_snr_db:g} dB; treating as no detection")
        return EXIT_NO_DETECTION
    return EXIT_OK


def cmd_experiment(preset: str, out_dir: str, seeds=None) -> int:
    paths = experiments.run_preset(preset, out_dir, seeds=seeds)
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config, args.out)
        if args.command == "analyze":
            return cmd_analyze(
                args.traces,
                args.method,
                args.window,
                args.out,
                avg_len=args.avg_len,
                guard=args.guard,
                min_snr_db=args.min_snr_db,
            )
        seeds = _parse_seed_range(args.seeds) if args.seeds else None
        return cmd_experiment(args.preset, args.out, seeds=seeds)
    except NoPeakError as exc:
        print(f"no detection: {exc}", file=sys.stderr)
        return EXIT_NO_DETECTION
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _IO_ERRORS as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HocdvsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
