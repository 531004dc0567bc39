import filecmp

from riscomp.config import from_mapping, load_config
from riscomp.experiments import PRESETS, reproduce, run_experiment


def _run(tmp_path, name, mapping):
    cfg = from_mapping(dict(mapping))
    cfg.out = str(tmp_path / name)
    return cfg, run_experiment(cfg)


def test_manifest_rerun_byte_identical(tmp_path):
    base = {
        "kind": "pdf-validation",
        "seed": 4,
        "trials": 1200,
    }
    cfg, outputs = _run(tmp_path, "first", base)
    manifest = outputs[0]
    # Re-run from the manifest into a second directory.
    cfg2 = load_config(manifest)
    cfg2.out = str(tmp_path / "second")
    outputs2 = run_experiment(cfg2)
    first_csv = [p for p in outputs if p.suffix == ".csv"]
    second_csv = [p for p in outputs2 if p.suffix == ".csv"]
    assert len(first_csv) == len(second_csv) == 1
    assert filecmp.cmp(first_csv[0], second_csv[0], shallow=False)


def test_er_sweep_artifacts(tmp_path):
    cfg, outputs = _run(tmp_path, "er", {
        "kind": "er-sweep",
        "seed": 1,
        "trials": 4000,
        "sweep.p_t_dbm": [-10, 0],
    })
    csv = [p for p in outputs if p.name == "ergodic_rates.csv"][0]
    text = csv.read_text().splitlines()
    assert text[0] == "p_t_dbm,user,er_analytic,er_mc,rel_err"
    assert len(text) == 1 + 2 * 4  # three users + high-SNR row per point


def test_exhaustive_star_grid(tmp_path):
    cfg, outputs = _run(tmp_path, "star", {
        "kind": "exhaustive-star",
        "seed": 1,
        "scenario.k_elements": 8,
        "sweep.assignment_values": [0, 4, 8],
        "sweep.beta_t_values": [0.25, 0.75],
    })
    csv = [p for p in outputs if p.name == "exhaustive_star.csv"][0]
    rows = csv.read_text().splitlines()
    assert len(rows) == 1 + 3 * 2


def test_ee_and_split_sweeps(tmp_path):
    _, outputs = _run(tmp_path, "ee", {
        "kind": "ee-sweep",
        "seed": 1,
        "trials": 400,
        "scenario.n_cells": 3,
        "scenario.n_coop": 2,
        "scenario.k_elements": 8,
        "sweep.j_values": [1, 3],
    })
    assert any(p.name == "ee_sweep_j.csv" for p in outputs)
    _, outputs = _run(tmp_path, "split", {
        "kind": "split-sweep",
        "seed": 1,
        "trials": 300,
        "scenario.n_cells": 3,
        "scenario.n_coop": 2,
        "scenario.k_elements": 8,
        "sweep.splits": [0.0, 1.0],
        "sweep.j_values": [1],
    })
    assert any(p.name == "split_sweep.csv" for p in outputs)


def test_drl_roundtrip(tmp_path):
    _, outputs = _run(tmp_path, "train", {
        "kind": "drl-train",
        "seed": 1,
        "scenario.tiny": True,
        "scenario.k_elements": 2,
        "scenario.t_slots": 8,
        "train.episodes": 4,
        "train.epochs": 2,
        "train.rollout": 4,
    })
    curve = [p for p in outputs if p.name == "learning_curve.csv"][0]
    ckpt = [p for p in outputs if p.name == "policy.bin"][0]
    assert curve.read_text().startswith("episode,reward,ma100")
    cfg = from_mapping({
        "kind": "drl-eval",
        "seed": 1,
        "checkpoint": str(ckpt),
        "scenario.tiny": True,
        "scenario.k_elements": 2,
        "scenario.t_slots": 8,
    })
    cfg.out = str(tmp_path / "eval")
    outputs = run_experiment(cfg)
    names = {p.name for p in outputs}
    assert {"trajectory.csv", "eval_summary.csv"} <= names


def test_presets_all_validate():
    for figure in PRESETS:
        cfg = reproduce(figure)
        assert cfg.kind in PRESETS[figure]["kind"]


def test_preset_parameters():
    fig42 = reproduce("fig4.2")
    scn = fig42.multicell_scenario()
    assert scn.n_cells == 6
    assert scn.k_elements == 70
    assert scn.p_t_dbm == 0.0
    fig34 = reproduce("fig3.4")
    scn34 = fig34.coordinated_scenario()
    assert scn34.thresholds_db == (0.0, 0.0)
    assert scn34.threshold_edge == 1.0
    fig52 = reproduce("fig5.2")
    aerial = fig52.aerial_scenario()
    assert aerial.k_elements == 120
    assert aerial.t_slots == 250
    assert fig52.train["episodes"] == 750
    assert fig52.train["batch"] == 128


def test_ee_joint_grid(tmp_path):
    _, outputs = _run(tmp_path, "grid", {
        "kind": "ee-sweep",
        "seed": 1,
        "trials": 300,
        "scenario.n_cells": 3,
        "scenario.n_coop": 2,
        "scenario.k_elements": 8,
        "sweep.r_th_values": [0.5, 1.0],
        "sweep.p_t_dbm": [0, 10],
    })
    grid = [p for p in outputs if p.name == "ee_grid.csv"][0]
    rows = grid.read_text().splitlines()
    assert rows[0] == "p_t_dbm,r_th,mode,ee,outage_sum_rate"
    assert len(rows) == 1 + 2 * 2 * 4  # P_t x R_th x four modes
