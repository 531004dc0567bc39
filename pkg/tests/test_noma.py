import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riscomp.noma import (
    LinkBudget,
    NomaPair,
    RateThresholds,
    achievable_rate,
    outage_event_center,
    outage_event_edge,
    sinr_center_decode_edge,
    sinr_center_own,
    sinr_edge_comp,
    sum_rate,
)

PAIR = NomaPair(zeta_center=0.3, zeta_edge=0.7, tx_power=1.0)


def test_pair_validation():
    with pytest.raises(ValueError):
        NomaPair(0.6, 0.4, 1.0)
    with pytest.raises(ValueError):
        NomaPair(0.3, 0.6, 1.0)
    with pytest.raises(ValueError):
        NomaPair(0.3, 0.7, 0.0)


def test_budget_validation():
    with pytest.raises(ValueError):
        LinkBudget([-1.0], noise_power=1.0)
    with pytest.raises(ValueError):
        LinkBudget([1.0], noise_power=0.0)


def test_sinr_center_decode_edge_examples():
    assert sinr_center_decode_edge(PAIR, LinkBudget([0.0], noise_power=0.1)) == 0.0
    val = sinr_center_decode_edge(PAIR, LinkBudget([1.0], noise_power=0.1))
    assert val == pytest.approx(0.7 / 0.4)
    # Saturation as SNR grows without interference.
    val = sinr_center_decode_edge(PAIR, LinkBudget([1e12], noise_power=1.0))
    assert val == pytest.approx(7.0 / 3.0, rel=1e-9)


def test_sinr_center_own_examples():
    assert sinr_center_own(PAIR, LinkBudget([0.0], noise_power=1.0)) == 0.0
    pair = NomaPair(0.3, 0.7, 10.0)
    assert sinr_center_own(pair, LinkBudget([1.0], noise_power=1.0)) == pytest.approx(3.0)
    lo = sinr_center_own(pair, LinkBudget([1.0], [2.0], 1.0))
    hi = sinr_center_own(pair, LinkBudget([1.0], [4.0], 1.0))
    assert hi < lo


def test_sinr_edge_comp_examples():
    pairs = [PAIR, PAIR]
    assert sinr_edge_comp(pairs, LinkBudget([0.0, 0.0], noise_power=1.0)) == 0.0
    val = sinr_edge_comp(pairs, LinkBudget([1e9, 1e9], noise_power=1e-3))
    assert val == pytest.approx(7.0 / 3.0, rel=1e-6)
    val = sinr_edge_comp(pairs, LinkBudget([1.0, 2.0], noise_power=1.0))
    assert val == pytest.approx(2.1 / 1.9)


def test_achievable_rate_examples():
    assert achievable_rate(0.0) == 0.0
    assert achievable_rate(1.0) == pytest.approx(1.0)
    assert achievable_rate(3.0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        achievable_rate(-0.5)


def test_outage_center_examples():
    thr = RateThresholds(1.0, 1.0)  # both SINR thresholds = 1
    ok = LinkBudget([100.0], noise_power=1.0)
    assert not outage_event_center(PAIR, ok, thr)
    # SIC failure regardless of own-message SINR.
    sic_fail = LinkBudget([0.1], noise_power=1.0)
    assert outage_event_center(PAIR, sic_fail, thr)
    # SIC passes (gamma_cf > 1) but the own message fails (gamma_c < 1).
    mid = LinkBudget([10.0], [2.5], 1.0)
    g_cf = sinr_center_decode_edge(PAIR, mid)
    g_c = sinr_center_own(PAIR, mid)
    assert g_cf > 1.0 > g_c
    assert outage_event_center(PAIR, mid, thr)


def test_outage_edge_boundary_is_non_outage():
    # Exact tie in binary floating point: 0.75/(0.25 + 0.5) == 1.0 == 2^1 - 1.
    thr = RateThresholds(1.0, 1.0)
    pair = NomaPair(0.25, 0.75, 1.0)
    budget = LinkBudget([1.0], noise_power=0.5)
    assert sinr_edge_comp(pair, budget) == thr.gamma_edge == 1.0
    assert not outage_event_edge(pair, budget, thr)
    assert outage_event_edge(pair, LinkBudget([0.0], noise_power=1.0), thr)
    # Threshold derived from R = 0.5 bps/Hz.
    assert RateThresholds(0.5, 0.5).gamma_edge == pytest.approx(2**0.5 - 1)


def test_sum_rate():
    assert sum_rate([]) == 0.0
    assert sum_rate([achievable_rate(3.0)]) == pytest.approx(2.0)
    assert sum_rate([1.0, 2.0]) + sum_rate([3.0]) == pytest.approx(sum_rate([1.0, 2.0, 3.0]))


@given(
    g1=st.floats(0.0, 1e6), g2=st.floats(0.0, 1e6),
    ici=st.floats(0.0, 1e6), noise=st.floats(1e-9, 1e3),
    scale=st.floats(1e-3, 1e3),
)
@settings(max_examples=300, deadline=None)
def test_scale_invariance_and_saturation(g1, g2, ici, noise, scale):
    pairs = [PAIR, PAIR]
    budget = LinkBudget([g1, g2], [ici], noise)
    val = sinr_edge_comp(pairs, budget)
    assert val >= 0.0
    #

    scaled = LinkBudget([g1, g2], [ici * scale], noise * scale)
    pairs_s = [NomaPair(0.3, 0.7, scale) for _ in range(2)]
    assert sinr_edge_comp(pairs_s, scaled) == pytest.approx(val, rel=1e-9, abs=1e-12)
    # NOMA saturation bound with no ICI.
    no_ici = LinkBudget([g1, g2], noise_power=noise)
    assert sinr_edge_comp(pairs, no_ici) <= 0.7 / 0.3 + 1e-12


@given(
    g=st.floats(1e-6, 1e6), ici=st.floats(0.0, 1e3), noise=st.floats(1e-6, 1e3),
    r_base=st.floats(0.01, 3.0), r_delta=st.floats(0.0, 2.0),
)
@settings(max_examples=200, deadline=None)
def test_outage_threshold_monotonicity(g, ici, noise, r_base, r_delta):
    # Lowering either threshold alone never turns a non-outage into one.
    budget = LinkBudget([g], [ici], noise)
    hi_center = RateThresholds(r_base + r_delta, r_base)
    hi_edge = RateThresholds(r_base, r_base + r_delta)
    lo = RateThresholds(r_base, r_base)
    if outage_event_center(PAIR, budget, lo):
        assert outage_event_center(PAIR, budget, hi_center)
        assert outage_event_center(PAIR, budget, hi_edge)


def test_edge_comp_monotonicity():
    pairs = [PAIR, PAIR]
    base = sinr_edge_comp(pairs, LinkBudget([1.0, 1.0], [1.0], 1.0))
    assert sinr_edge_comp(pairs, LinkBudget([2.0, 1.0], [1.0], 1.0)) >= base
    assert sinr_edge_comp(pairs, LinkBudget([1.0, 1.0], [2.0], 1.0)) <= base
