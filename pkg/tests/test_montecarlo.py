import math

import numpy as np
import pytest

from riscomp.channel import substream
from riscomp.montecarlo import (
    SINR_KINDS,
    TrialBatch,
    empirical_cdf,
    estimate_ergodic_rate,
    estimate_outage,
    ks_statistic,
    run_trials,
)
from riscomp.noma import RateThresholds
from riscomp.scenarios import CoordinatedScenario

SCN = CoordinatedScenario(p_t_dbm=-20.0)


def _synthetic_batch(arrays: dict) -> TrialBatch:
    n = len(next(iter(arrays.values())))
    full = {k: np.asarray(arrays.get(k, np.ones(n)), dtype=float) for k in SINR_KINDS}
    return TrialBatch(sinr=full, n_trials=n, seed=0, coupling="physical")


def test_empty_batch():
    batch = run_trials(SCN, 0, seed=1)
    assert batch.n_trials == 0
    with pytest.raises(ValueError):
        estimate_ergodic_rate(batch)


def test_determinism_both_couplings():
    for coupling in ("physical", "fitted"):
        a = run_trials(SCN, 5000, seed=3, coupling=coupling)
        b = run_trials(SCN, 5000, seed=3, coupling=coupling)
        for kind in SINR_KINDS:
            assert np.array_equal(a.sinr[kind], b.sinr[kind]), (coupling, kind)


def test_chunking_invariance():
    # Results must not depend on how many chunks the trial range spans.
    a = run_trials(SCN, 5000, seed=9)
    b = run_trials(SCN, 4096, seed=9)
    for kind in SINR_KINDS:
        assert np.array_equal(a.sinr[kind][:4096], b.sinr[kind])


def test_vanishing_power_means_outage_everywhere():
    # Degenerate scenario: transmit power so low every link is effectively
    # blocked; all SINRs ~ 0 and every outage indicator is true.
    scn = SCN.with_overrides(p_t_dbm=-200.0)
    batch = run_trials(scn, 500, seed=5)
    thr = RateThresholds(0.5, 0.5)
    for kind in SINR_KINDS:
        assert np.all(batch.sinr[kind] < 1e-9)
    outage = estimate_outage(batch, thr)
    assert all(v == 1.0 for v in outage.values())


def test_empirical_cdf_steps():
    cdf = empirical_cdf([2.0])
    assert cdf(1.9999) == 0.0
    assert cdf(2.0) == 1.0
    samples = substream(1, 1).exponential(1.0, 100_000)
    cdf = empirical_cdf(samples)
    assert cdf(np.max(samples)) == 1.0
    median = np.sort(samples)[50_000]
    assert median == pytest.approx(math.log(2.0), abs=0.01)


def test_ks_calibration():
    # Samples from the tested CDF itself pass at alpha = 0.01 in >= 19/20 runs.
    passes = 0
    for seed in range(20):
        samples = substream(seed, 2).exponential(1.0, 10_000)
        _, ok, _ = ks_statistic(samples, lambda x: 1.0 - math.exp(-x), alpha=0.01)
        passes += ok
    assert passes >= 19


def test_ks_power_against_shift():
    samples = substream(3, 3).exponential(1.0, 10_000) + 0.05
    d, ok, crit = ks_statistic(samples, lambda x: 1.0 - math.exp(-x), alpha=0.01)
    assert not ok and d > crit


def test_ks_zero_distance_against_own_step_cdf():
    samples = substream(4, 4).exponential(1.0, 500)
    d, ok, _ = ks_statistic(samples, empirical_cdf(samples), alpha=0.01)
    assert d == 0.0 and ok


def test_ks_needs_samples():
    with pytest.raises(ValueError):
        ks_statistic(np.ones(50), lambda x: x)


def test_estimate_outage_extremes():
    thr = RateThresholds(1.0, 1.0)
    n = 100
    all_out = _synthetic_batch({k: np.zeros(n) for k in SINR_KINDS})
    assert all(v == 1.0 for v in estimate_outage(all_out, thr).values())
    none_out = _synthetic_batch({k: np.full(n, 100.0) for k in SINR_KINDS})
    assert all(v == 0.0 for v in estimate_outage(none_out, thr).values())


def test_estimate_outage_binomial():
    rng = substream(6, 6)
    n = 10_000
    # Edge SINR below the threshold with probability 0.3.
    edge = np.where(rng.uniform(size=n) < 0.3, 0.0, 10.0)
    batch = _synthetic_batch({"edge": edge})
    out = estimate_outage(batch, RateThresholds(1.0, 1.0))
    assert out["edge"] == pytest.approx(0.30, abs=0.015)


def test_estimate_ergodic_rate_constant():
    batch = _synthetic_batch({k: np.ones(64) for k in SINR_KINDS})
    er = estimate_ergodic_rate(batch)
    assert er["center1"] == 1.0
    assert er["edge"] == 1.0


def test_estimator_consistency_sqrt_n():
    # Doubling n shrinks the standard error of the outage estimate by
    # ~1/sqrt(2); 40 seeds keep the std-of-std noise inside the 20% band.
    thr = RateThresholds(1.0, 1.0)
    scn = SCN.with_overrides(p_t_dbm=-22.0)
    est1, est2 = [], []
    for seed in range(40):
        est1.append(estimate_outage(run_trials(scn, 1000, seed=seed), thr)["center1"])
        est2.append(estimate_outage(run_trials(scn, 2000, seed=1000 + seed), thr)["center1"])
    ratio = np.std(est2) / np.std(est1)
    assert ratio == pytest.approx(1 / math.sqrt(2), rel=0.20)


def test_outage_monotone_in_power_common_random_numbers():
    thr = RateThresholds(1.0, 1.0)
    prev = None
    for p_t in (-20, -15, -10, -5, 0, 5):
        out = estimate_outage(run_trials(SCN.with_overrides(p_t_dbm=float(p_t)), 10_000, seed=11), thr)
        if prev is not None:
            assert out["edge"] <= prev + 1e-12
        prev = out["edge"]


def test_invalid_coupling():
    with pytest.raises(ValueError):
        run_trials(SCN, 10, seed=0, coupling="other")


def test_write_batch_csv(tmp_path):
    from riscomp.montecarlo import write_batch_csv

    batch = run_trials(SCN, 50, seed=13)
    per_trial = tmp_path / "trials.csv"
    write_batch_csv(per_trial, batch)
    lines = per_trial.read_text().splitlines()
    assert lines[0].startswith("trial,")
    assert len(lines) == 51
    agg = tmp_path / "agg.csv"
    write_batch_csv(agg, batch, aggregated=True, thr=RateThresholds(1.0, 1.0))
    lines = agg.read_text().splitlines()
    assert lines[0] == "user,ergodic_rate,outage"
    assert len(lines) == 4
    with pytest.raises(ValueError):
        write_batch_csv(agg, batch, aggregated=True)
