"""Experiment orchestration: run a validated config, write CSV artifacts and
a manifest that reproduces the run byte-for-byte, and provide the
figure-style presets.
"""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    analytic_ergodic_rates,
    analytic_outage,
    coordinated_distributions,
)
from .config import ConfigError, ExperimentConfig, dump_config, from_mapping
from .energy import ee_sweep, osum_sweep, split_sweep
from .montecarlo import (
    estimate_ergodic_rate,
    estimate_outage,
    ks_statistic,
    run_trials,
)
from .moppo import (
    TrainConfig,
    evaluate,
    load_params,
    save_params,
    train,
)
from .noma import RateThresholds


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])


def _manifest(cfg: ExperimentConfig, outdir: Path) -> Path:
    body = dump_config(cfg)
    digest = hashlib.sha256(body.encode()).hexdigest()[:16]
    header = (
        f"run manifest (re-run with: riscomp run <this file>)\n"
        f"version = {__version__}\n"
        f"config sha256/16 = {digest}"
    )
    path = outdir / "manifest.cfg"
    path.write_text(dump_config(cfg, header=header))
    return path


def _trials(cfg: ExperimentConfig, default: int) -> int:
    return cfg.trials if cfg.trials is not None else default


def _run_pdf_validation(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.coordinated_scenario()
    n = _trials(cfg, 10_000)
    dists = coordinated_distributions(scn)
    analytic = {
        "center1_own": dists.center_own[0],
        "center1_sic": dists.center_sic[0],
        "center2_own": dists.center_own[1],
        "center2_sic": dists.center_sic[1],
        "edge": dists.edge,
    }
    rows = []
    for coupling in ("fitted", "physical"):
        batch = run_trials(scn, n, cfg.seed, coupling=coupling)
        for kind, dist in analytic.items():
            d, passed, crit = ks_statistic(batch.sinr[kind], dist.cdf, alpha=0.01)
            rows.append((coupling, kind, n, d, crit, int(passed)))
    path = outdir / "ks_table.csv"
    _write_csv(path, ["coupling", "sinr", "n", "ks_stat", "critical", "pass"], rows)
    return [path]


def _run_er_sweep(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.coordinated_scenario()
    n = _trials(cfg, 100_000)
    p_values = cfg.sweep.get("p_t_dbm", [-20, -15, -10, -5, 0, 5, 10])
    rows = []
    for p_t in p_values:
        scn_p = scn.with_overrides(p_t_dbm=float(p_t))
        er = analytic_ergodic_rates(scn_p)
        batch = run_trials(scn_p, n, cfg.seed, coupling="fitted")
        mc = estimate_ergodic_rate(batch)
        for user in ("center1", "center2", "edge"):
            rel = abs(er[user] / mc[user] - 1.0) if mc[user] else float("inf")
            rows.append((p_t, user, er[user], mc[user], rel))
        rows.append((p_t, "edge_high_snr", er["edge_high_snr"], mc["edge"],
                     abs(er["edge_high_snr"] / mc["edge"] - 1.0)))
    path = outdir / "ergodic_rates.csv"
    _write_csv(path, ["p_t_dbm", "user", "er_analytic", "er_mc", "rel_err"], rows)
    return [path]


def _run_outage_sweep(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.coordinated_scenario()
    n = _trials(cfg, 10_000)
    p_values = cfg.sweep.get("p_t_dbm", [-15, -10, -5, 0, 5, 10, 15, 20])
    thr = RateThresholds(
        r_center_min=float(np.log2(1 + scn.threshold_center)),
        r_edge_min=float(np.log2(1 + scn.threshold_edge)),
    )
    rows = []
    for p_t in p_values:
        scn_p = scn.with_overrides(p_t_dbm=float(p_t))
        closed = analytic_outage(scn_p)
        batch = run_trials(scn_p, n, cfg.seed, coupling="fitted")
        mc = estimate_outage(batch, thr)
        for user in ("center1", "center2", "edge"):
            rows.append((p_t, user, closed[user], mc[user],
                         abs(closed[user] - mc[user])))
        rows.append((p_t, "edge_nocomp", float("nan"), mc["edge_nocomp"], float("nan")))
    path = outdir / "outage.csv"
    _write_csv(path, ["p_t_dbm", "user", "outage_closed", "outage_mc", "abs_err"], rows)
    return [path]


def _run_exhaustive_star(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.coordinated_scenario()
    k = scn.k_elements
    k1_values = cfg.sweep.get("assignment_values", list(range(0, k + 1, max(1, k // 8))))
    beta_values = cfg.sweep.get("beta_t_values", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    rows = []
    for k1 in k1_values:
        for beta_t in beta_values:
            scn_v = scn.with_overrides(
                assignment=(int(k1), k - int(k1)),
                beta_t=float(beta_t), beta_r=1.0 - float(beta_t),
            )
            er = analytic_ergodic_rates(scn_v)
            rows.append((int(k1), k - int(k1), beta_t, 1.0 - beta_t,
                         er["center1"], er["center2"], er["edge"],
                         er["center1"] + er["center2"] + er["edge"]))
    path = outdir / "exhaustive_star.csv"
    _write_csv(
        path,
        ["k1", "k2", "beta_t", "beta_r", "er_center1", "er_center2", "er_edge", "er_sum"],
        rows,
    )
    return [path]


def _run_ee_sweep(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.multicell_scenario()
    n = _trials(cfg, scn.n_trials)
    outputs = []
    # Joint power/threshold grid (contour) when both axes are requested.
    if "r_th_values" in cfg.sweep and "p_t_dbm" in cfg.sweep:
        rows = []
        for p_t in cfg.sweep["p_t_dbm"]:
            scn_p = scn.with_overrides(p_t_dbm=float(p_t))
            for r in ee_sweep(scn_p, "R_th", cfg.sweep["r_th_values"], n=n, seed=cfg.seed):
                rows.append((p_t, r["value"], r["mode"], r["ee"], r["outage_sum_rate"]))
        path = outdir / "ee_grid.csv"
        _write_csv(path, ["p_t_dbm", "r_th", "mode", "ee", "outage_sum_rate"], rows)
        return [path]
    sweeps = []
    if "j_values" in cfg.sweep:
        sweeps.append(("J", cfg.sweep["j_values"]))
    if "k_values" in cfg.sweep:
        sweeps.append(("K", cfg.sweep["k_values"]))
    if "p_t_dbm" in cfg.sweep:
        sweeps.append(("P_t", cfg.sweep["p_t_dbm"]))
    if "r_th_values" in cfg.sweep:
        sweeps.append(("R_th", cfg.sweep["r_th_values"]))
    if not sweeps:
        sweeps = [("J", list(range(1, scn.n_cells + 1)))]
    for axis, values in sweeps:
        rows = [
            (r["axis"], r["value"], r["mode"], r["ee"], r["outage_sum_rate"],
             r["edge_outage"], r["mean_center_outage"])
            for r in ee_sweep(scn, axis, values, n=n, seed=cfg.seed)
        ]
        path = outdir / f"ee_sweep_{axis.lower()}.csv"
        _write_csv(
            path,
            ["axis", "value", "mode", "ee", "outage_sum_rate", "edge_outage",
             "mean_center_outage"],
            rows,
        )
        outputs.append(path)
    return outputs


def _run_osum_sweep(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.multicell_scenario()
    n = _trials(cfg, scn.n_trials)
    p_values = cfg.sweep.get("p_t_dbm", [-10, -5, 0, 5, 10, 15, 20])
    rows = [
        (r["p_t_dbm"], r["mode"], r["outage_sum_rate"])
        for r in osum_sweep(scn, p_values, n=n, seed=cfg.seed)
    ]
    path = outdir / "outage_sum_rate.csv"
    _write_csv(path, ["p_t_dbm", "mode", "outage_sum_rate"], rows)
    return [path]


def _run_split_sweep(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.multicell_scenario()
    n = _trials(cfg, scn.n_trials)
    splits = cfg.sweep.get("splits", [0.0, 0.25, 0.5, 0.75, 1.0])
    coop_counts = cfg.sweep.get("j_values", [1, scn.n_cells // 2, scn.n_cells])
    rows = [
        (r["split"], r["J"], r["outage_sum_rate"])
        for r in split_sweep(scn, splits, coop_counts, n=n, seed=cfg.seed)
    ]
    path = outdir / "split_sweep.csv"
    _write_csv(path, ["split", "J", "outage_sum_rate"], rows)
    return [path]


def _train_config(cfg: ExperimentConfig) -> TrainConfig:
    return TrainConfig(**cfg.train)


def _run_drl_train(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.aerial_scenario()
    tc = _train_config(cfg)
    result = train(scn, tc, seed=cfg.seed)
    ma = result.moving_average(100)
    rows = []
    for ep, r in enumerate(result.rewards):
        ma_val = ma[ep - (len(result.rewards) - len(ma))] if ep >= len(result.rewards) - len(ma) else float("nan")
        rows.append((ep, float(r), float(ma_val)))
    curve = outdir / "learning_curve.csv"
    _write_csv(curve, ["episode", "reward", "ma100"], rows)
    ckpt = outdir / "policy.bin"
    save_params(ckpt, result.params)
    return [curve, ckpt]


def _run_drl_eval(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    scn = cfg.aerial_scenario()
    tc = _train_config(cfg)
    if not cfg.checkpoint:
        raise ConfigError("drl-eval requires checkpoint = <policy.bin path>")
    params = load_params(cfg.checkpoint)
    ev = evaluate(scn, params, tc, seed=cfg.seed, episodes=10)
    rows = [tuple(t) for t in ev["traces"]]
    path = outdir / "trajectory.csv"
    user_cols = [f"rate_center{i + 1}" for i in range(scn.n_bs)] + ["rate_edge"]
    _write_csv(
        path,
        ["t", "x", "y", "reward", *user_cols, "safety_violation", "qos_violations"],
        rows,
    )
    summary = outdir / "eval_summary.csv"
    _write_csv(summary, ["mean_sum_rate", "mean_reward"],
               [(ev["mean_sum_rate"], ev["mean_reward"])])
    return [path, summary]


_RUNNERS = {
    "pdf-validation": _run_pdf_validation,
    "er-sweep": _run_er_sweep,
    "outage-sweep": _run_outage_sweep,
    "exhaustive-star": _run_exhaustive_star,
    "ee-sweep": _run_ee_sweep,
    "osum-sweep": _run_osum_sweep,
    "split-sweep": _run_split_sweep,
    "drl-train": _run_drl_train,
    "drl-eval": _run_drl_eval,
}


def run_experiment(cfg: ExperimentConfig) -> list[Path]:
    """Execute the experiment, returning the written artifact paths.

    The output directory receives the result CSVs plus manifest.cfg; running
    the manifest reproduces the CSVs byte-for-byte.
    """
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = _manifest(cfg, outdir)
    outputs = _RUNNERS[cfg.kind](cfg, outdir)
    return [manifest, *outputs]


# Figure-style presets -------------------------------------------------------

PRESETS: dict[str, dict] = {
    # SINR distribution validation: K=34, m_direct=1, m_ris=2, P_t=-40 dBm
    # (noise-dominated operating point; KS pass for all three SINRs).
    "fig3.2": {
        "kind": "pdf-validation",
        "seed": 1,
        "trials": 10_000,
        "scenario.p_t_dbm": -40.0,
        "scenario.k_elements": 34,
        "scenario.m_direct": 1.0,
        "scenario.m_bs_ris": 2.0,
        "scenario.m_ris_user": 2.0,
    },
    # Ergodic-rate consistency sweep, quadrature vs model-assumption MC.
    "fig3.3": {
        "kind": "er-sweep",
        "seed": 1,
        "trials": 100_000,
        "sweep.p_t_dbm": [-20, -15, -10, -5, 0, 5, 10],
    },
    # Outage probability vs transmit power at 0 dB thresholds.
    "fig3.4": {
        "kind": "outage-sweep",
        "seed": 1,
        "trials": 10_000,
        "scenario.threshold_center_db": 0.0,
        "scenario.threshold_edge_db": 0.0,
        "sweep.p_t_dbm": [-15, -10, -5, 0, 5, 10, 15, 20],
    },
    # Ergodic-rate surface over element assignment and amplitude split.
    "fig3.5": {
        "kind": "exhaustive-star",
        "seed": 1,
        "scenario.p_t_dbm": -10.0,
        "scenario.k_elements": 34,
    },
    # Energy efficiency vs number of cooperative BSs (I=6, K=70, 0 dBm).
    "fig4.2": {
        "kind": "ee-sweep",
        "seed": 1,
        "scenario.n_cells": 6,
        "scenario.k_elements": 70,
        "scenario.p_t_dbm": 0.0,
        "sweep.j_values": [1, 2, 3, 4, 5, 6],
    },
    # Outage sum rate vs transmit power with J=4, K=70, OMA baseline included.
    "fig4.3": {
        "kind": "osum-sweep",
        "seed": 1,
        "scenario.n_coop": 4,
        "scenario.k_elements": 70,
        "sweep.p_t_dbm": [-10, -5, 0, 5, 10, 15, 20],
    },
    # Energy efficiency vs element count at J=4, 0 dBm.
    "fig4.4": {
        "kind": "ee-sweep",
        "seed": 1,
        "scenario.n_coop": 4,
        "scenario.p_t_dbm": 0.0,
        "sweep.k_values": [30, 50, 70, 90, 110, 130, 150],
    },
    # Energy-efficiency contour axes: joint rate threshold sweep at J=4, K=70.
    "fig4.5": {
        "kind": "ee-sweep",
        "seed": 1,
        "scenario.n_coop": 4,
        "scenario.k_elements": 70,
        "sweep.r_th_values": [0.25, 0.5, 0.75, 1.0, 1.25, 1.5],
        "sweep.p_t_dbm": [-10, -5, 0, 5, 10],
    },
    # Outage sum rate vs cancellation/enhancement split (K=72).
    "fig4.6": {
        "kind": "split-sweep",
        "seed": 1,
        "scenario.k_elements": 72,
        "sweep.splits": [0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0],
        "sweep.j_values": [1, 3, 6],
    },
    # Full-scale MO-PPO training (K=120, T=250, table hyperparameters).
    "fig5.2": {
        "kind": "drl-train",
        "seed": 1,
        "scenario.k_elements": 120,
        "scenario.t_slots": 250,
        "scenario.p_t_dbm": 20.0,
        "train.episodes": 750,
        "train.epochs": 20,
        "train.batch": 128,
        "train.rollout": 128,
    },
    # Desk-scale training variant (tiny instance, minutes not hours).
    "fig5.2-tiny": {
        "kind": "drl-train",
        "seed": 1,
        "scenario.tiny": True,
        "scenario.k_elements": 4,
        "scenario.t_slots": 40,
        "train.episodes": 300,
        "train.rollout": 4,
        "train.learning_rate": 3e-4,
        "train.entropy_coef": 0.005,
        "train.episodes_per_update": 6,
        "train.kl_stop": 0.02,
        "train.gamma": 0.95,
    },
    # Trajectory trace of a trained policy (expects checkpoint=...).
    "fig5.5": {
        "kind": "drl-eval",
        "seed": 1,
        "scenario.k_elements": 120,
        "scenario.t_slots": 250,
        "scenario.p_t_dbm": 20.0,
    },
}


def reproduce(figure_id: str) -> ExperimentConfig:
    """Preset config for a figure-style experiment id (e.g. 'fig4.2')."""
    if figure_id not in PRESETS:
        raise ConfigError(
            f"unknown figure id {figure_id!r}; available: {', '.join(sorted(PRESETS))}"
        )
    return from_mapping(dict(PRESETS[figure_id]))
