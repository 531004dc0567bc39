import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riscomp.channel import sample_rayleigh, substream
from riscomp.ris import (
    PhaseMatrix,
    StarRisConfig,
    ec_phases,
    effective_channel,
    element_split,
    eo_phases,
    es_matrices,
    wrap_phase,
)


def _random_instance(rng, k):
    h = complex(sample_rayleigh(rng))
    h_ru = sample_rayleigh(rng, k)
    h_br = sample_rayleigh(rng, k)
    return h, h_ru, h_br


def test_es_matrices_zero_reflection():
    t, r = es_matrices(StarRisConfig(3, beta_t=1.0, beta_r=0.0))
    assert np.all(r.amplitudes == 0.0)
    assert np.allclose(r.apply(np.ones(3)), 0.0)
    assert np.allclose(np.abs(t.values), 1.0)


def test_es_matrices_even_split():
    cfg = StarRisConfig(4, 0.5, 0.5)
    t, r = es_matrices(cfg)
    assert np.allclose(t.values, math.sqrt(0.5))
    assert np.allclose(r.values, math.sqrt(0.5))


def test_es_matrices_amplitude_phase():
    cfg = StarRisConfig(1, beta_t=0.64, beta_r=0.36, phases_t=[math.pi / 2])
    t, _ = es_matrices(cfg)
    assert t.values[0] == pytest.approx(0.8 * np.exp(1j * math.pi / 2))


def test_energy_conservation_validation():
    with pytest.raises(ValueError):
        StarRisConfig(2, beta_t=0.6, beta_r=0.3)


@given(bt=st.floats(0.0, 1.0))
@settings(max_examples=100, deadline=None)
def test_energy_split_exact(bt):
    cfg = StarRisConfig(5, beta_t=bt, beta_r=1.0 - bt)
    t, r = es_matrices(cfg)
    assert np.all(t.amplitudes == math.sqrt(bt))
    assert np.all(r.amplitudes == math.sqrt(1.0 - bt))


def test_effective_channel_empty():
    theta = PhaseMatrix(np.zeros(0), np.zeros(0))
    assert effective_channel(0.3 + 0.1j, [], theta, []) == 0.3 + 0.1j


def test_effective_channel_identity_cascade():
    theta = PhaseMatrix(np.ones(1), np.zeros(1))
    assert effective_channel(0.0, [1.0], theta, [1.0]) == pytest.approx(1.0 + 0.0j)


def test_effective_channel_cophased_sum():
    rng = substream(3, 1)
    h = 1.0 + 0.0j
    h_ru = 0.5 * np.exp(1j * rng.uniform(-math.pi, math.pi, 2))
    h_br = np.exp(1j * rng.uniform(-math.pi, math.pi, 2))
    phases = eo_phases(h, h_ru, h_br)
    theta = PhaseMatrix(np.ones(2), phases)
    val = effective_channel(h, h_ru, theta, h_br)
    assert abs(val) == pytest.approx(2.0, abs=1e-12)


def test_effective_channel_shape_error():
    theta = PhaseMatrix(np.ones(2), np.zeros(2))
    with pytest.raises(ValueError):
        effective_channel(0.0, [1.0], theta, [1.0, 2.0])


def test_effective_channel_linearity():
    rng = substream(4, 2)
    h, h_ru, h_br = _random_instance(rng, 3)
    theta = PhaseMatrix(np.ones(3), h_br.real)  # arbitrary valid phases
    base = effective_channel(0.0, h_ru, theta, h_br)
    assert effective_channel(h, h_ru, theta, h_br) == pytest.approx(h + base)
    doubled = effective_channel(0.0, h_ru, theta, 2.0 * h_br)
    assert doubled == pytest.approx(2.0 * base)


def test_eo_phase_example():
    # Cascade product argument pi/2 against a real direct link.
    phases = eo_phases(1.0 + 0.0j, [-1.0j], [1.0])
    # conj(h_ru) * h_br = +1j, so the phase must rotate by -pi/2.
    assert phases[0] == pytest.approx(-math.pi / 2)
    theta = PhaseMatrix(np.ones(1), phases)
    assert abs(effective_channel(1.0, [-1.0j], theta, [1.0])) == pytest.approx(2.0)


def test_eo_blocked_direct_link():
    rng = substream(5, 3)
    _, h_ru, h_br = _random_instance(rng, 4)
    phases = eo_phases(0.0, h_ru, h_br)
    theta = PhaseMatrix(np.ones(4), phases)
    val = effective_channel(0.0, h_ru, theta, h_br)
    target = np.sum(np.abs(h_ru) * np.abs(h_br))
    assert val == pytest.approx(target, abs=1e-12)
    assert abs(np.angle(val)) < 1e-12


def test_eo_zero_cascade_entry():
    phases = eo_phases(1.0, [0.0, 1.0], [1.0, 1.0])
    assert phases[0] == 0.0


def test_ec_examples():
    theta = PhaseMatrix(np.ones(1), ec_phases(1.0, [1.0], [1.0]))
    assert abs(effective_channel(1.0, [1.0], theta, [1.0])) == pytest.approx(0.0, abs=1e-12)
    theta = PhaseMatrix(np.ones(1), ec_phases(1.0, [0.3], [1.0]))
    assert abs(effective_channel(1.0, [0.3], theta, [1.0])) == pytest.approx(0.7, abs=1e-12)


def test_eo_dominates_random_search():
    rng = substream(6, 4)
    for k in (1, 2, 4, 16):
        h, h_ru, h_br = _random_instance(rng, k)
        best = abs(effective_channel(h, h_ru, PhaseMatrix(np.ones(k), eo_phases(h, h_ru, h_br)), h_br))
        target = abs(h) + np.sum(np.abs(h_ru) * np.abs(h_br))
        assert best == pytest.approx(target, abs=1e-12)
        draws = rng.uniform(-math.pi, math.pi, (10_000, k))
        casc = np.conj(h_ru) * h_br
        vals = np.abs(h + (np.exp(1j * draws) * casc).sum(axis=1))
        assert np.all(vals <= best + 1e-12)


def test_ec_dominates_random_search_when_feasible():
    # Anti-phasing is the global minimizer when the cascade budget cannot
    # exceed the direct magnitude.
    rng = substream(7, 5)
    for k in (1, 2, 4, 16):
        h, h_ru, h_br = _random_instance(rng, k)
        scale = 0.9 * abs(h) / np.sum(np.abs(h_ru) * np.abs(h_br))
        h_br = h_br * scale
        worst = abs(effective_channel(h, h_ru, PhaseMatrix(np.ones(k), ec_phases(h, h_ru, h_br)), h_br))
        target = abs(abs(h) - np.sum(np.abs(h_ru) * np.abs(h_br)))
        assert worst == pytest.approx(target, abs=1e-12)
        draws = rng.uniform(-math.pi, math.pi, (10_000, k))
        casc = np.conj(h_ru) * h_br
        vals = np.abs(h + (np.exp(1j * draws) * casc).sum(axis=1))
        assert np.all(vals >= worst - 1e-12)


def test_element_split_examples():
    cfg = StarRisConfig(34, 0.5, 0.5, assignment=(34, 0))
    assert element_split(cfg, 2) == slice(34, 34)
    cfg = StarRisConfig(34, 0.5, 0.5, assignment=(17, 17))
    s = element_split(cfg, 1)
    assert s.stop - s.start == 17
    cfg = StarRisConfig(10, 0.5, 0.5, assignment=(3, 7))
    assert element_split(cfg, 2) == slice(3, 10)
    with pytest.raises(IndexError):
        element_split(cfg, 3)


def test_assignment_validation():
    with pytest.raises(ValueError):
        StarRisConfig(10, 0.5, 0.5, assignment=(4, 7))
    with pytest.raises(ValueError):
        StarRisConfig(10, 0.5, 0.5, assignment=(-1, 11))


@given(st.floats(-50.0, 50.0))
@settings(max_examples=200, deadline=None)
def test_wrap_phase_interval(x):
    w = float(wrap_phase(x))
    assert -math.pi <= w < math.pi
    assert math.cos(w) == pytest.approx(math.cos(x), abs=1e-9)
    assert math.sin(w) == pytest.approx(math.sin(x), abs=1e-9)
