import math

import numpy as np
import pytest

from riscomp.channel import sample_rayleigh, substream
from riscomp.energy import (
    CoopStructure,
    PowerModel,
    assign_pbf,
    co_eo_split_assign,
    energy_efficiency,
    ee_sweep,
    network_coop,
    osum_sweep,
    outage_rate,
    simulate_network,
    split_sweep,
)
from riscomp.ris import effective_channel
from riscomp.scenarios import MultiCellScenario

PM = PowerModel(amp_efficiency=0.4, static_cell_power=1.0, per_element_power=3.16e-3,
                tx_power=1.0)
SCN = MultiCellScenario(n_trials=2000)


def test_outage_rate_examples():
    assert outage_rate(5.0, 1.0) == 0.0
    assert outage_rate(5.0, 0.0) == 5.0
    assert outage_rate(2.0, 0.25) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        outage_rate(2.0, 1.5)


def test_energy_efficiency_single_cell():
    cs = CoopStructure((1,), 1, ("off",))
    val = energy_efficiency([1.0], 0.0, PM, cs, k_elements=0)
    assert val == pytest.approx(1.0 / 3.5)


def test_energy_efficiency_linearity_and_zero():
    cs = CoopStructure((1, 2), 3, ("eo", "eo", "ec"))
    base = energy_efficiency([1.0, 2.0, 0.5], 1.5, PM, cs, 70)
    doubled = energy_efficiency([2.0, 4.0, 1.0], 3.0, PM, cs, 70)
    assert doubled == pytest.approx(2.0 * base)
    assert energy_efficiency([0.0, 0.0, 0.0], 0.0, PM, cs, 70) == 0.0


def test_energy_efficiency_decreasing_in_power_overheads():
    cs = CoopStructure((1,), 2, ("eo", "ec"))
    rates = [1.0, 1.0]
    lo = energy_efficiency(rates, 1.0, PM, cs, 10)
    hi_pq = PowerModel(0.4, 2.0, 3.16e-3, 1.0)
    hi_pele = PowerModel(0.4, 1.0, 6.32e-3, 1.0)
    assert energy_efficiency(rates, 1.0, hi_pq, cs, 10) < lo
    assert energy_efficiency(rates, 1.0, hi_pele, cs, 10) < lo


def test_coop_structure_validation():
    with pytest.raises(ValueError):
        CoopStructure((), 2, ("eo", "eo"))
    with pytest.raises(ValueError):
        CoopStructure((3,), 2, ("eo", "eo"))
    with pytest.raises(ValueError):
        CoopStructure((1,), 2, ("eo", "bogus"))


def _channels(rng, cells, k):
    out = {"rng": rng}
    for i in range(1, cells + 1):
        out[i] = {
            "direct": complex(sample_rayleigh(rng)),
            "ris_user": sample_rayleigh(rng, k),
            "bs_ris": sample_rayleigh(rng, k) * 0.05,
        }
    return out


def test_assign_pbf_modes():
    rng = substream(1, 1)
    ch = _channels(rng, 4, 1)
    cs = CoopStructure((1, 2), 4, ("eo", "eo", "ec", "off"))
    mats = assign_pbf(cs, ch)
    # Cooperative single-element surface reaches (|h| + |cascade|)^2.
    c1 = ch[1]
    got = abs(effective_channel(c1["direct"], c1["ris_user"], mats[0], c1["bs_ris"])) ** 2
    want = (abs(c1["direct"]) + abs(c1["ris_user"][0]) * abs(c1["bs_ris"][0])) ** 2
    assert got == pytest.approx(want, rel=1e-12)
    # Cancellation surface reaches (|h| - |cascade|)^2.
    c3 = ch[3]
    got = abs(effective_channel(c3["direct"], c3["ris_user"], mats[2], c3["bs_ris"])) ** 2
    want = (abs(c3["direct"]) - abs(c3["ris_user"][0]) * abs(c3["bs_ris"][0])) ** 2
    assert got == pytest.approx(want, rel=1e-10)
    # Off surfaces have zero amplitude.
    assert np.all(mats[3].amplitudes == 0.0)


def test_network_modes_coincide_at_full_cooperation():
    scn = SCN.with_overrides(n_coop=SCN.n_cells)
    eo = network_coop(scn, "eo")
    ec = network_coop(scn, "ec")
    assert eo.ris_mode == ec.ris_mode


def test_co_eo_split_assign():
    rng = substream(2, 2)
    k = 72
    h = complex(sample_rayleigh(rng))
    h_ru = sample_rayleigh(rng, k)
    h_br = sample_rayleigh(rng, k)
    pure_eo = co_eo_split_assign(0.0, h, h_ru, h_br)
    val = abs(effective_channel(h, h_ru, pure_eo, h_br))
    assert val == pytest.approx(abs(h) + np.sum(np.abs(h_ru) * np.abs(h_br)), rel=1e-12)
    pure_co = co_eo_split_assign(1.0, h, h_ru, h_br)
    val = abs(effective_channel(h, h_ru, pure_co, h_br))
    assert val == pytest.approx(abs(abs(h) - np.sum(np.abs(h_ru) * np.abs(h_br))), rel=1e-9)
    half = co_eo_split_assign(0.5, h, h_ru, h_br)
    eo_ref = co_eo_split_assign(0.0, h, h_ru, h_br)
    flipped = np.isclose(np.abs((half.phases - eo_ref.phases + math.pi) % (2 * math.pi) - math.pi), math.pi, atol=1e-9)
    assert np.sum(flipped) == 36


def test_simulate_network_deterministic():
    a = simulate_network(SCN, "ec", n=1000, seed=4)
    b = simulate_network(SCN, "ec", n=1000, seed=4)
    assert a.edge_rate == b.edge_rate
    assert np.array_equal(a.center_rates, b.center_rates)


def test_eo_ec_identical_at_full_cooperation():
    scn = SCN.with_overrides(n_coop=SCN.n_cells)
    eo = simulate_network(scn, "eo", n=1000, seed=5)
    ec = simulate_network(scn, "ec", n=1000, seed=5)
    assert eo.edge_rate == ec.edge_rate
    assert eo.outage_sum_rate == ec.outage_sum_rate


def test_ec_not_worse_than_eo():
    for j in (1, 3, 5):
        scn = SCN.with_overrides(n_coop=j)
        eo = simulate_network(scn, "eo", n=4000, seed=6)
        ec = simulate_network(scn, "ec", n=4000, seed=6)
        assert ec.outage_sum_rate >= eo.outage_sum_rate


def test_osum_monotone_in_power_per_seed():
    rows = osum_sweep(SCN, [-10, 0, 10, 20], modes=("ec",), include_oma=True, n=1500, seed=7)
    by_mode = {}
    for r in rows:
        by_mode.setdefault(r["mode"], []).append((r["p_t_dbm"], r["outage_sum_rate"]))
    for mode, vals in by_mode.items():
        vals.sort()
        osr = [v for _, v in vals]
        assert all(b >= a - 1e-12 for a, b in zip(osr, osr[1:])), mode


def test_ee_sweep_axes():
    rows = ee_sweep(SCN, "R_th", [0.5, 1.0], modes=("ec",), n=500, seed=8)
    assert len(rows) == 2
    assert rows[0]["ee"] > 0
    with pytest.raises(ValueError):
        ee_sweep(SCN, "bogus", [1], n=10, seed=0)


def test_split_sweep_runs():
    rows = split_sweep(SCN, [0.0, 1.0], [1, 6], n=500, seed=9)
    assert len(rows) == 4
    # Full cooperation loses sum rate as cancellation elements grow.
    full = {r["split"]: r["outage_sum_rate"] for r in rows if r["J"] == 6}
    assert full[0.0] > full[1.0]
