"""Monte Carlo trial engine and goodness-of-fit statistics.

Trials for the coordinated two-cell scenario are generated under the
moment-matching model assumptions: Nakagami magnitudes with the co-phased
cascade K sqrt(beta) |h_iR| |h_Ru|. Two coupling modes are supported:

- "physical": within a trial, every SINR expression shares the same channel
  draws (the simulation view of the network).
- "fitted": every moment-matched building block (each Z, each interference
  term, numerator vs denominator) is drawn independently, mirroring the
  independence assumptions under which the closed forms are derived. This is
  the oracle the analytic framework is exact against, up to Gamma-fit error.

Reproducibility: trials are partitioned into fixed chunks of CHUNK trials;
chunk j draws from substream (seed, label, j), so results are independent of
worker count and scheduling.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .channel import substream
from .noma import RateThresholds, achievable_rate
from .scenarios import CoordinatedScenario

CHUNK = 4096

# Stream labels (part of the documented substream scheme).
_STREAM_TRIALS = 101

USERS = ("center1", "center2", "edge")
SINR_KINDS = ("center1_own", "center1_sic", "center2_own", "center2_sic",
              "edge", "edge_nocomp")

_KS_COEFF = {0.1: 1.22, 0.05: 1.36, 0.01: 1.63}


@dataclass(frozen=True)
class TrialBatch:
    """Per-kind SINR sample arrays plus the (n, seed) that reproduce them."""

    sinr: dict[str, np.ndarray]
    n_trials: int
    seed: int
    coupling: str

    def __post_init__(self):
        for name, arr in self.sinr.items():
            if arr.shape != (self.n_trials,):
                raise ValueError(f"sample array {name} does not match n_trials")

    def rates(self) -> dict[str, np.ndarray]:
        return {k: achievable_rate(v) for k, v in self.sinr.items()}


def _nakagami_pow(rng, p, size):
    """Squared-magnitude draws: Gamma(m, omega/m)."""
    return rng.gamma(p.m, p.omega / p.m, size)


def _fill_z_rows(rng, z_pow, rows, links, n, shared):
    """Fill kernel Z rows for one (BS,user) block.

    shared=True draws once and copies into every row; otherwise each row gets
    independent draws.
    """
    if shared:
        h = _nakagami_pow(rng, links["direct"], n)
        a = _nakagami_pow(rng, links["bs_ris"], n)
        b = _nakagami_pow(rng, links["ris_user"], n)
        for r in rows:
            z_pow[r, 0] = h
            z_pow[r, 1] = a
            z_pow[r, 2] = b
    else:
        for r in rows:
            z_pow[r, 0] = _nakagami_pow(rng, links["direct"], n)
            z_pow[r, 1] = _nakagami_pow(rng, links["bs_ris"], n)
            z_pow[r, 2] = _nakagami_pow(rng, links["ris_user"], n)


def run_trials(
    scenario: CoordinatedScenario,
    n: int,
    seed: int,
    coupling: str = "physical",
) -> TrialBatch:
    """n independent channel realizations evaluated through every SINR."""
    if n < 0:
        raise ValueError("trial count must be >= 0")
    if coupling not in ("physical", "fitted"):
        raise ValueError("coupling must be 'physical' or 'fitted'")
    shared = coupling == "physical"
    out = {k: np.empty(n) for k in SINR_KINDS}
    amp = np.empty(kernels.N_Z_ROWS)
    amp[:6] = scenario.cascade_amp_center()
    amp[6:] = scenario.cascade_amp_edge()
    c1 = scenario.center_links(1)
    c2 = scenario.center_links(2)
    e1 = scenario.edge_links(1)
    e2 = scenario.edge_links(2)
    start = 0
    while start < n:
        chunk_index = start // CHUNK
        m = min(CHUNK, n - start)
        rng = substream(seed, _STREAM_TRIALS, chunk_index)
        z_pow = np.empty((kernels.N_Z_ROWS, 3, m))
        x_pow = np.empty((kernels.N_X_ROWS, m))
        _fill_z_rows(rng, z_pow, (kernels.Z_CF1_S, kernels.Z_CF1_I, kernels.Z_C1_S),
                     c1, m, shared)
        _fill_z_rows(rng, z_pow, (kernels.Z_CF2_S, kernels.Z_CF2_I, kernels.Z_C2_S),
                     c2, m, shared)
        _fill_z_rows(rng, z_pow, (kernels.Z_F1_V, kernels.Z_F1_W, kernels.Z_NC1_V,
                                  kernels.Z_NC1_W), e1, m, shared)
        _fill_z_rows(rng, z_pow, (kernels.Z_F2_V, kernels.Z_F2_W, kernels.Z_NC2_W),
                     e2, m, shared)
        if shared:
            x1 = _nakagami_pow(rng, c1["ici"], m)
            x2 = _nakagami_pow(rng, c2["ici"], m)
            x_pow[kernels.X_CF1] = x1
            x_pow[kernels.X_C1] = x1
            x_pow[kernels.X_CF2] = x2
            x_pow[kernels.X_C2] = x2
        else:
            x_pow[kernels.X_CF1] = _nakagami_pow(rng, c1["ici"], m)
            x_pow[kernels.X_C1] = _nakagami_pow(rng, c1["ici"], m)
            x_pow[kernels.X_CF2] = _nakagami_pow(rng, c2["ici"], m)
            x_pow[kernels.X_C2] = _nakagami_pow(rng, c2["ici"], m)
        res = kernels.coordinated_sinr(
            z_pow, x_pow, amp,
            scenario.zeta_center, scenario.zeta_center, scenario.zeta_edge,
            scenario.rho,
        )
        sl = slice(start, start + m)
        out["center1_sic"][sl] = res[kernels.OUT_CF1]
        out["center1_own"][sl] = res[kernels.OUT_C1]
        out["center2_sic"][sl] = res[kernels.OUT_CF2]
        out["center2_own"][sl] = res[kernels.OUT_C2]
        out["edge"][sl] = res[kernels.OUT_F]
        out["edge_nocomp"][sl] = res[kernels.OUT_F_NC]
        start += m
    return TrialBatch(sinr=out, n_trials=n, seed=seed, coupling=coupling)


class EmpiricalCdf:
    """Right-continuous step function of a sample."""

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.size == 0:
            raise ValueError("empirical CDF needs at least one sample")
        self.sorted = np.sort(samples)
        self.n = samples.size

    def __call__(self, x):
        return np.searchsorted(self.sorted, np.asarray(x, dtype=float), side="right") / self.n

    def left_limit(self, x):
        return np.searchsorted(self.sorted, np.asarray(x, dtype=float), side="left") / self.n


def empirical_cdf(samples) -> EmpiricalCdf:
    return EmpiricalCdf(samples)


def ks_statistic(
    samples,
    cdf: Callable[[float], float],
    alpha: float = 0.01,
) -> tuple[float, bool, float]:
    """One-sample KS sup-distance against an analytic CDF.

    Returns (D, passed, critical) with critical = c(alpha)/sqrt(n).
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    if n < 100:
        raise ValueError("KS test needs at least 100 samples")
    if alpha not in _KS_COEFF:
        raise ValueError(f"alpha must be one of {sorted(_KS_COEFF)}")
    s = np.sort(samples)
    f = np.array([cdf(x) for x in s])
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    # The lower gap compares against the model's left limit; only step
    # functions (another empirical CDF) distinguish it from the value.
    f_left = cdf.left_limit(s) if isinstance(cdf, EmpiricalCdf) else f
    d = max(float(np.max(np.abs(hi - f))), float(np.max(np.abs(lo - f_left))))
    critical = _KS_COEFF[alpha] / math.sqrt(n)
    return d, d < critical, critical


def estimate_outage(batch: TrialBatch, thr: RateThresholds) -> dict[str, float]:
    """Per-user empirical outage frequencies (strict-threshold events)."""
    if batch.n_trials == 0:
        raise ValueError("cannot estimate from an empty batch")
    s = batch.sinr
    out = {}
    for i in (1, 2):
        sic_fail = s[f"center{i}_sic"] < thr.gamma_edge
        own_fail = s[f"center{i}_own"] < thr.gamma_center
        out[f"center{i}"] = float(np.mean(sic_fail | own_fail))
    out["edge"] = float(np.mean(s["edge"] < thr.gamma_edge))
    out["edge_nocomp"] = float(np.mean(s["edge_nocomp"] < thr.gamma_edge))
    return out


def estimate_ergodic_rate(batch: TrialBatch) -> dict[str, float]:
    """Per-user mean achievable rate log2(1 + sinr)."""
    if batch.n_trials == 0:
        raise ValueError("cannot estimate from an empty batch")
    s = batch.sinr
    return {
        "center1": float(np.mean(achievable_rate(s["center1_own"]))),
        "center2": float(np.mean(achievable_rate(s["center2_own"]))),
        "edge": float(np.mean(achievable_rate(s["edge"]))),
        "edge_nocomp": float(np.mean(achievable_rate(s["edge_nocomp"]))),
    }


def write_batch_csv(path, batch: TrialBatch, aggregated: bool = False,
                    thr: RateThresholds | None = None) -> None:
    """Serialize a batch: one row per trial, or one aggregated row."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if aggregated:
            if thr is None:
                raise ValueError("aggregated output needs thresholds")
            er = estimate_ergodic_rate(batch)
            po = estimate_outage(batch, thr)
            w.writerow(["user", "ergodic_rate", "outage"])
            for user in ("center1", "center2", "edge"):
                w.writerow([user, f"{er[user]:.17g}", f"{po[user]:.17g}"])
        else:
            w.writerow(["trial", *SINR_KINDS])
            for t in range(batch.n_trials):
                w.writerow([t, *(f"{batch.sinr[k][t]:.17g}" for k in SINR_KINDS)])
