"""Coherent-state thresholds: phase averaging, maximization, crossings."""

import math

import numpy as np
import pytest

from qnd_hom.fock import QND_11_ARGMAX, closed_form_qnd_11, hom_element_mixture_ideal
from qnd_hom.gates import build_optomech_gate, OptomechParams, ideal_gate_model
from qnd_hom.thresholds import (
    ACCURACY_WARNING,
    BOUNDARY_WARNING,
    PhaseAverageOptions,
    ThresholdResult,
    find_crossing,
    input_threshold,
    output_threshold,
    phase_averaged_element,
    verify_output_threshold,
)


def test_options_validation():
    with pytest.raises(ValueError):
        PhaseAverageOptions(phase_samples=8)
    with pytest.raises(ValueError):
        PhaseAverageOptions(phase_samples=65)  # must be even
    with pytest.raises(ValueError):
        PhaseAverageOptions(domain=2.0)
    with pytest.raises(ValueError):
        PhaseAverageOptions(coarse_grid=1)


def test_output_threshold_value():
    assert output_threshold() == math.exp(-2.0)


def test_output_threshold_brute_force():
    val = verify_output_threshold(grid_points=120, amplitude_max=4.0)
    assert val == pytest.approx(math.exp(-2.0), abs=1e-4)


def test_input_threshold_ideal_anchor():
    res = input_threshold(QND_11_ARGMAX)
    assert isinstance(res, ThresholdResult)
    assert res.value == pytest.approx(0.068560, abs=2e-4)
    assert res.converged
    assert not res.warnings
    # symmetric gate ⇒ symmetric amplitude optimum
    assert res.argmax[0] == pytest.approx(res.argmax[1], abs=5e-3)
    assert 0.0 <= res.value <= 1.0


def test_input_threshold_zero_gain_equals_output_threshold():
    # at G=0 the best phase-averaged coherent pair is one mode in vacuum
    # and one at |β|² = 2: the input threshold degenerates to e^{−2}
    res = input_threshold(0.0)
    assert res.value == pytest.approx(math.exp(-2.0), abs=2e-4)
    assert min(res.argmax) == pytest.approx(0.0, abs=5e-2)


def test_input_threshold_below_output_threshold_for_working_gate():
    res = input_threshold(QND_11_ARGMAX)
    assert res.value < output_threshold()


def test_phase_average_convergence_64_to_128():
    # doubling the trapezoid samples moves the average by < 1e−6
    for G in (0.0, 1.0, 2.0):
        v64 = phase_averaged_element(G, 1.8, 1.7, phase_samples=64)
        v128 = phase_averaged_element(G, 1.8, 1.7, phase_samples=128)
        assert abs(v64 - v128) < 1e-6, G


def test_threshold_stable_under_base_sample_doubling():
    r64 = input_threshold(1.0, PhaseAverageOptions(phase_samples=64))
    r128 = input_threshold(1.0, PhaseAverageOptions(phase_samples=128))
    assert abs(r64.value - r128.value) < 1e-6


def test_phase_offset_invariance():
    v0 = phase_averaged_element(0.9, 1.4, 1.2, phase_offset=0.0)
    v1 = phase_averaged_element(0.9, 1.4, 1.2, phase_offset=0.37)
    assert v0 == pytest.approx(v1, abs=1e-9)


def test_phase_average_accepts_gate_models():
    model = build_optomech_gate(OptomechParams(0.06, 100.0, 1.0, 0.02))
    res = input_threshold(model)
    assert 0.0 < res.value < 1.0


def test_determinism_bit_identical():
    a = input_threshold(0.9)
    b = input_threshold(0.9)
    assert a.value == b.value
    assert a.argmax == b.argmax
    assert a.phase_samples == b.phase_samples


def test_cap_detection_on_monotone_objective():
    # a monotone objective pushes the simplex onto the amplitude cap,
    # which must be flagged rather than silently accepted
    from qnd_hom.thresholds import _maximize

    opts = PhaseAverageOptions(domain=6.0, coarse_grid=9)
    value, argmax, hit_cap = _maximize(lambda Ra, Rb: Ra + Rb, opts)
    assert hit_cap
    assert max(argmax) > 6.0 - 1e-3
    assert BOUNDARY_WARNING  # exported, non-empty message


def test_interior_optimum_not_flagged():
    res = input_threshold(QND_11_ARGMAX)
    assert all(BOUNDARY_WARNING not in w for w in res.warnings)


def test_crossing_of_ideal_mixture_with_input_threshold():
    G = QND_11_ARGMAX
    thr = input_threshold(G).value

    def curve(p):
        return hom_element_mixture_ideal(G, p, p)

    p_cross = find_crossing(curve, thr, 0.0, 1.0)
    assert p_cross is not None
    assert 0.45 <= p_cross <= 0.52
    assert curve(p_cross) == pytest.approx(thr, abs=1e-3)


def test_crossing_none_when_curve_stays_below():
    def curve(p):
        return 0.01 * p

    assert find_crossing(curve, 0.5, 0.0, 1.0) is None


def test_crossing_bisection_tolerance():
    # linear curve: crossing of 0.5 at exactly x = 0.625
    got = find_crossing(lambda x: 0.8 * x, 0.5, 0.0, 1.0, xtol=1e-4)
    assert got == pytest.approx(0.625, abs=2e-4)
