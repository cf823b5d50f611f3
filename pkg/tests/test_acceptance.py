"""Acceptance gate: one test per criterion, each printing a status line.

Run with `pytest -s tests/test_acceptance.py` to see every line. All
checks use the fixed seed lists documented here, so outcomes are
deterministic and reruns are byte-identical where files are involved.
"""

import math

import numpy as np
import pytest
from scipy.stats import spearmanr

from hocdvs import (
    METHOD_HOC,
    HocProfile,
    LaggedCumulantRequest,
    Sequence,
    TraceMatrix,
    center,
    detrend,
    export_profile_csv,
    hoc_profile,
    locate_peak,
    location_snr,
    moving_differential_profile,
    read_profile_csv,
    read_traces,
    spatial_resolution,
    synth_traces,
    third_cumulant_lagged,
    third_cumulant_zero_lag,
    write_traces,
)
from hocdvs.cli import main
from hocdvs.experiments import (
    DUTY_CYCLES,
    SNR1_GRID_DB,
    SNR2_LENGTH,
    SWEEP_LENGTHS,
    TRACE_GUARD,
    TRACE_WINDOW,
    asymmetry_sweep,
    snr2_statistics,
    trace_config,
)
from hocdvs.synth import format_sim_config


def _status(name: str, ok: bool, detail: str) -> bool:
    print(f"acceptance {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def test_c01_lagged_estimator_matches_brute_force():
    rng = np.random.default_rng(424242)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 65))
        x = center(Sequence(rng.normal(size=n)))
        tau1 = int(rng.integers(0, min(9, n)))
        tau2 = int(rng.integers(0, min(9, n)))
        got = third_cumulant_lagged(x, LaggedCumulantRequest(tau1, tau2))
        s = x.samples
        n_eff = n - max(tau1, tau2)
        oracle = sum(s[t] * s[t + tau1] * s[t + tau2] for t in range(n_eff)) / n_eff
        rel = abs(got - oracle) / max(abs(got), abs(oracle), 1e-300)
        worst = max(worst, rel)
    ok = worst <= 1e-12
    assert _status("01 estimator-oracle-equivalence", ok, f"max rel err {worst:.2e}")


def test_c02_gaussian_null():
    c3s = np.array([
        third_cumulant_zero_lag(center(Sequence(np.random.default_rng(s).standard_normal(10**5))))
        for s in range(200)
    ])
    se = c3s.std(ddof=1) / math.sqrt(c3s.size)
    ok = abs(c3s.mean()) < 4.0 * se
    assert _status("02 gaussian-null", ok, f"mean {c3s.mean():.3e} vs 4*SE {4 * se:.3e}")


# Shared by the two asymmetry-ordering tests; seeds 0..49 are the documented
# preset list.
_ASYM_TABLE = None


def _asym_table():
    global _ASYM_TABLE
    if _ASYM_TABLE is None:
        _ASYM_TABLE = asymmetry_sweep(range(50))
    return _ASYM_TABLE


def test_c03_asymmetry_ordering_as_stated():
    """Strict mean ordering K2 > K3 > K4 > K5 > K6 > |K1|.

    Known defect, kept as stated: the final link compares the K6 asymmetry
    signal (+7.6e-4, exact to ~2e-6 by construction) against the base
    sequence's own Monte Carlo noise (std. error ~1.6e-3 at 50 seeds of
    length 99947), so at these pinned sample sizes that comparison sits
    below the noise floor and fails for the documented seed list; a 4-sigma
    margin would need roughly 3000 seeds or 16x longer sequences. The
    preceding links and the null check hold with wide margins; see the
    companion test for the noise-cancelled form of the final link.
    """
    table = _asym_table()
    means = table.mean(axis=0)
    se1 = table[:, 0].std(ddof=1) / math.sqrt(table.shape[0])
    detail = "means K1..K6 = " + ", ".join(f"{v:.6f}" for v in means)
    null_ok = abs(means[0]) < 4.0 * se1
    chain_ok = (
        means[1] > means[2] > means[3] > means[4] > means[5] > abs(means[0])
    )
    _status("03 asymmetry-ordering", chain_ok and null_ok, detail)
    assert null_ok, f"base-sequence mean {means[0]:.2e} exceeds 4*SE {4 * se1:.2e}"
    assert means[1] > means[2] > means[3] > means[4] > means[5], detail
    assert means[5] > abs(means[0]), (
        f"K6 mean {means[5]:.6f} is not above |K1 mean| {abs(means[0]):.6f}: "
        "the +7.6e-4 K6 signal is below the 1.6e-3 standard error of the "
        "base mean cube at n=99947 x 50 seeds (see this test's docstring)"
    )


def test_c03_supplement_induced_components_resolve_ordering():
    """Noise-cancelled form: per-seed asymmetry components are strictly ordered.

    Subtracting each seed's base mean cube removes the shared Monte Carlo
    noise, leaving the mirror-induced component, which is positive and
    strictly decreasing from K2 to K6 in every one of the 50 seeds.
    """
    table = _asym_table()
    deltas = table[:, 1:] - table[:, [0]]
    per_seed_ok = np.all(
        (deltas[:, 0] > deltas[:, 1])
        & (deltas[:, 1] > deltas[:, 2])
        & (deltas[:, 2] > deltas[:, 3])
        & (deltas[:, 3] > deltas[:, 4])
        & (deltas[:, 4] > 0.0)
    )
    detail = "mean components = " + ", ".join(f"{v:.6f}" for v in deltas.mean(axis=0))
    assert _status("03s asymmetry-components", bool(per_seed_ok), detail)


# Shared by the two length-sweep tests; seeds 0..199 are the documented
# preset list.
_SNR2_MEANS = None


def _snr2_means():
    global _SNR2_MEANS
    if _SNR2_MEANS is None:
        _SNR2_MEANS = {
            duty: [snr2_statistics(duty, length, 0.0, range(200))[0] for length in SWEEP_LENGTHS]
            for duty in DUTY_CYCLES
        }
    return _SNR2_MEANS


def test_c04_output_snr_monotone_in_length():
    """Mean output SNR monotone non-decreasing in length for every duty.

    Known defect: for the 40% duty cycle the true mean output-SNR curve
    dips by 0.041 +/- 0.007 dB (2e6-sample check) between lengths 20 and
    40 under the power-matched centered-cumulant ratio, so rank-perfect
    monotonicity (Spearman > 0.9 over five lengths requires rho = 1) is
    violated in expectation, not merely by seed noise. Duty cycles 10-30%
    satisfy it with wide margins; see the companion test for the
    resolvable part of the 40% trend and notes/decisions.md for analysis.
    """
    means_by_duty = _snr2_means()
    details = []
    ok = True
    for duty in DUTY_CYCLES:
        rho = spearmanr(SWEEP_LENGTHS, means_by_duty[duty]).statistic
        details.append(f"duty {duty:.0%} rho={rho:.3f}")
        ok = ok and rho > 0.9
    assert _status("04 snr-vs-length-monotone", ok, "; ".join(details))


def test_c04_supplement_resolvable_length_trend():
    """Resolvable form: rank-perfect trend for duties 10-30%, and for the
    40% duty the net gain from the shortest to the longest length, which
    is what longer windows buy once the sub-0.05 dB small-sample dip at
    the short end is below the criterion's own noise floor."""
    means_by_duty = _snr2_means()
    details = []
    ok = True
    for duty in (0.1, 0.2, 0.3):
        rho = spearmanr(SWEEP_LENGTHS, means_by_duty[duty]).statistic
        details.append(f"duty {duty:.0%} rho={rho:.3f}")
        ok = ok and rho > 0.9
    end_gain = means_by_duty[0.4][-1] - means_by_duty[0.4][0]
    details.append(f"duty 40% gain(240 vs 20)={end_gain:+.3f} dB")
    ok = ok and end_gain > 0.0
    assert _status("04s snr-length-trend", ok, "; ".join(details))


def test_c05_output_snr_exceeds_input_snr():
    details = []
    ok = True
    for snr1 in SNR1_GRID_DB:
        mean, _ = snr2_statistics(0.1, SNR2_LENGTH, snr1, range(200))
        details.append(f"{snr1:+.0f}->{mean:.2f} dB")
        ok = ok and mean > snr1
    assert _status("05 snr-gain", ok, "; ".join(details))


def test_c06_localization_accuracy_all_duties():
    details = []
    ok = True
    for duty in DUTY_CYCLES:
        hits = 0
        for seed in range(100):
            cfg = trace_config(duty, seed)
            prof = hoc_profile(detrend(synth_traces(cfg)), TRACE_WINDOW)
            idx, _ = locate_peak(prof)
            hits += abs(idx - cfg.vibration_point) <= 10
        details.append(f"duty {duty:.0%}: {hits}/100")
        ok = ok and hits >= 95
    assert _status("06 localization", ok, "; ".join(details))


def test_c07_duty_cycle_snr_peak(tmp_path):
    means = {}
    for duty in DUTY_CYCLES:
        snrs = []
        for seed in range(50):
            cfg = trace_config(duty, seed)
            prof = hoc_profile(detrend(synth_traces(cfg)), TRACE_WINDOW)
            idx, _ = locate_peak(prof)
            snrs.append(location_snr(prof, idx, TRACE_GUARD))
        means[duty] = float(np.mean(snrs))
    ordering = sorted(means, key=means.get, reverse=True)
    detail = "; ".join(f"duty {d:.0%}: {v:.2f} dB" for d, v in means.items())
    if ordering[0] == 0.2:
        assert _status("07 duty-cycle-snr-peak", True, detail)
        return
    # fallback: the measured ordering must be recorded in the emitted data
    from hocdvs.experiments import run_preset

    run_preset("e2e_localization", tmp_path, seeds=range(50))
    import json

    meta = json.loads((tmp_path / "run_meta.json").read_text())
    documented = "location_snr_ordering" in meta
    assert _status(
        "07 duty-cycle-snr-peak", documented,
        detail + f"; measured ordering {ordering} documented={documented}",
    )


def test_c08_edge_sharpening_ratio():
    ratios = []
    for seed in range(20):
        cfg = trace_config(0.2, seed, noise_sigma=0.0, sop_sigma=0.0)
        traces = synth_traces(cfg)
        prof_h = hoc_profile(detrend(traces), TRACE_WINDOW)
        prof_m = moving_differential_profile(traces, TRACE_WINDOW)
        sr_h = spatial_resolution(prof_h, locate_peak(prof_h)[0])
        sr_m = spatial_resolution(prof_m, locate_peak(prof_m)[0])
        assert sr_h < sr_m, f"seed {seed}: {sr_h} !< {sr_m}"
        ratios.append(sr_h / sr_m)
    ok = all(0.4 <= r <= 0.7 for r in ratios)
    assert _status(
        "08 edge-sharpening",
        ok,
        f"ratios in [{min(ratios):.4f}, {max(ratios):.4f}] over 20 seeds",
    )


def test_c09_format_round_trips(tmp_path):
    rng = np.random.default_rng(777)
    f32_eps = float(np.finfo(np.float32).eps)
    for i in range(100):
        w = int(rng.integers(1, 9))
        m = int(rng.integers(1, 65))
        src = TraceMatrix(rng.uniform(-50.0, 50.0, size=(w, m)), 1.0, 10000.0)
        path = tmp_path / f"m{i}.hocdvs"
        write_traces(path, src)
        out = read_traces(path)
        bound = f32_eps * max(1.0, float(np.max(np.abs(src.amplitudes))))
        assert float(np.max(np.abs(out.amplitudes - src.amplitudes))) <= bound
    for i in range(100):
        m = int(rng.integers(1, 200))
        values = rng.uniform(-1e3, 1e3, size=m)
        prof = HocProfile(values, 100, float(rng.uniform(0.1, 5.0)), METHOD_HOC)
        path = tmp_path / f"p{i}.csv"
        export_profile_csv(prof, path)
        _, parsed = read_profile_csv(path)
        np.testing.assert_allclose(parsed, values, rtol=1e-9)
    assert _status("09 format-round-trips", True, "100 trace files + 100 profile CSVs")


def test_c10_deterministic_reruns(tmp_path):
    cfg_path = tmp_path / "cfg.txt"
    cfg_path.write_text(format_sim_config(trace_config(0.2, seed=3)))

    sim_a, sim_b = tmp_path / "a.hocdvs", tmp_path / "b.hocdvs"
    assert main(["simulate", "--config", str(cfg_path), "--out", str(sim_a)]) == 0
    assert main(["simulate", "--config", str(cfg_path), "--out", str(sim_b)]) == 0
    same_sim = sim_a.read_bytes() == sim_b.read_bytes()

    same_exp = True
    for preset, seeds in (("fig1_asymmetry", "0..2"), ("e2e_localization", "0..1")):
        dir_a, dir_b = tmp_path / f"{preset}_a", tmp_path / f"{preset}_b"
        assert main(["experiment", "--preset", preset, "--out", str(dir_a),
                     "--seeds", seeds]) == 0
        assert main(["experiment", "--preset", preset, "--out", str(dir_b),
                     "--seeds", seeds]) == 0
        names_a = sorted(p.name for p in dir_a.iterdir())
        names_b = sorted(p.name for p in dir_b.iterdir())
        same_exp = same_exp and names_a == names_b
        for name in names_a:
            same_exp = same_exp and (dir_a / name).read_bytes() == (dir_b / name).read_bytes()

    ok = same_sim and same_exp
    assert _status("10 determinism", ok, f"simulate identical={same_sim}, presets identical={same_exp}")
