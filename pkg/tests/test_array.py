import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from siwfiltenna.array import (
    PAPER_ARRAY,
    ArraySpec,
    array_factor,
    grating_lobe_onset,
    pattern_csv,
    scan_sweep,
    scanned_filter_response,
    theta_grid,
)
from siwfiltenna.cavity import C0
from siwfiltenna.coupling import PRESETS, SParamSweep, synthesize_response, transmission_zeros
from siwfiltenna.errors import DomainError, IndexRangeError

F = 28e9
LAM = C0 / F


def test_coherent_sum():
    spec = ArraySpec(8, 0.6 * LAM, F)
    for t0 in np.radians([-50, 0, 33]):
        assert abs(array_factor(spec, t0, t0)) == pytest.approx(8.0, rel=1e-12)


def test_matches_brute_force():
    spec = ArraySpec(5, 0.7 * LAM, F, weights=(1, 0.5j, -0.3, 2, 1 - 1j))
    theta = np.linspace(-1.5, 1.5, 41)
    ref = oracles.brute_af(5, 0.7, 0.3, theta, spec.w)
    assert np.allclose(np.abs(array_factor(spec, 0.3, theta)), ref, rtol=1e-10)


def test_peak_at_steering_angle():
    spec = ArraySpec(8, 7e-3, F)
    theta = np.radians(np.arange(-900, 901) / 10)
    ref = oracles.brute_af(8, 7e-3 / LAM, math.radians(40), theta)
    assert math.degrees(theta[np.argmax(ref)]) == pytest.approx(40.0, abs=0.1)
    ours = np.abs(array_factor(spec, math.radians(40), theta))
    assert math.degrees(theta[np.argmax(ours)]) == pytest.approx(40.0, abs=0.1)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 4), st.floats(-1.5, 1.5))
def test_single_element_is_element_pattern(q, theta):
    spec = ArraySpec(1, 5e-3, F, q=q)
    assert abs(array_factor(spec, 0.2, theta)) == pytest.approx(math.cos(theta) ** (q / 2), rel=1e-12, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=4, max_size=4),
       st.floats(-math.pi, math.pi))
def test_global_phase_invariance(w, alpha):
    theta = np.linspace(-1.5, 1.5, 31)
    a = ArraySpec(4, 6e-3, F, weights=tuple(w))
    b = ArraySpec(4, 6e-3, F, weights=tuple(x * complex(math.cos(alpha), math.sin(alpha)) for x in w))
    assert np.allclose(np.abs(array_factor(a, 0.1, theta)), np.abs(array_factor(b, 0.1, theta)), atol=1e-9)


def test_parseval_at_half_wave():
    rng = np.random.default_rng(3)
    w = rng.normal(size=6) + 1j * rng.normal(size=6)
    spec = ArraySpec(6, LAM / 2, F, weights=tuple(w))
    u = np.linspace(-1, 1, 4001)
    power = np.abs(array_factor(spec, 0.0, np.arcsin(u))) ** 2
    assert power.mean() == pytest.approx(np.sum(np.abs(w) ** 2), rel=0.01)


def test_spec_validation():
    with pytest.raises(DomainError):
        ArraySpec(0, 1e-3, F)
    with pytest.raises(DomainError):
        ArraySpec(2, 0.0, F)
    with pytest.raises(DomainError):
        ArraySpec(2, 1e-3, F, weights=(1,))
    with pytest.raises(DomainError):
        ArraySpec(2, 1e-3, F, q=-1)
    with pytest.raises(DomainError):
        array_factor(ArraySpec(2, 1e-3, F), 0.0, 2.0)


def test_scan_loss_and_self_reference():
    results = scan_sweep(PAPER_ARRAY, np.radians([-40, -20, 0, 20, 40]))
    assert results[2].scan_loss == 0.0
    assert results[0].scan_loss < 3.0 and results[-1].scan_loss < 3.0
    assert results[0].scan_loss == pytest.approx(results[-1].scan_loss, abs=1e-9)
    for r in results:
        assert r.sll <= 0
        assert r.pattern.max() == pytest.approx(-r.scan_loss, abs=1e-9)


def test_uniform_first_sidelobe():
    res = scan_sweep(ArraySpec(8, LAM / 2, F), [0.0])[0]
    theta = theta_grid()
    ref = oracles.brute_af(8, 0.5, 0.0, theta) ** 2
    db = 10 * np.log10(ref / ref.max())
    # first sidelobe of the brute pattern: highest peak outside the first nulls
    i0 = int(np.argmax(ref))
    j = i0
    while ref[j + 1] < ref[j]:
        j += 1
    side = db[j:].max()
    assert side == pytest.approx(-12.8, abs=0.05)
    assert res.sll == pytest.approx(side, abs=0.01)


def test_grating_lobe_examples():
    for t0 in np.radians([0, 30, 60, 90]):
        assert not grating_lobe_onset(LAM / 2, F, t0).visible
    assert not grating_lobe_onset(8e-3, F, 0.0).visible
    gl = grating_lobe_onset(8e-3, F, math.radians(40))
    assert gl.visible
    expected = math.degrees(math.asin(math.sin(math.radians(40)) - LAM / 8e-3))
    assert math.degrees(gl.angle) == pytest.approx(expected, abs=1e-9)
    assert math.degrees(gl.angle) == pytest.approx(-44.07, abs=0.01)
    # brute-force AF confirms a full-height lobe there
    theta = np.radians(np.linspace(-60, -30, 3001))
    af = oracles.brute_af(8, 8e-3 / LAM, math.radians(40), theta)
    assert math.degrees(theta[np.argmax(af)]) == pytest.approx(math.degrees(gl.angle), abs=0.02)
    assert af.max() == pytest.approx(8.0, rel=1e-6)
    with pytest.raises(DomainError):
        grating_lobe_onset(0.0, F, 0.0)


def test_grating_lobe_random_agreement():
    rng = np.random.default_rng(7)
    for _ in range(100):
        ratio = rng.uniform(0.2, 1.5)
        t0 = rng.uniform(-1.2, 1.2)
        ours = grating_lobe_onset(ratio * LAM, F, t0).visible
        assert ours == oracles.brute_grating_lobe(8, ratio, t0, points=8001)


def _filtenna2_element():
    p = PRESETS["filtenna2"]
    f = np.linspace(24e9, 36e9, 601)
    return synthesize_response(p.matrix, p.band, f), p


def test_scanned_response_single_element_equals_element():
    element, _ = _filtenna2_element()
    f, g = scanned_filter_response(element, ArraySpec(1, 7e-3, F), 0.0)
    p = np.abs(element.s21) ** 2
    assert np.allclose(g, np.maximum(10 * np.log10(p / p.max()), -80.0), atol=1e-9)


def test_scanned_response_flat_model_is_beam_independent():
    element, _ = _filtenna2_element()
    spec = ArraySpec(8, 7e-3, F)
    _, a = scanned_filter_response(element, spec, 0.0, true_time_delay=True)
    _, b = scanned_filter_response(element, spec, math.radians(40), true_time_delay=True)
    assert np.allclose(a, b, atol=1e-6)


def test_scanned_response_zero_suppression():
    element, p = _filtenna2_element()
    fz = transmission_zeros(p.matrix, p.band, (15e9, 45e9))[0]
    for t0 in np.radians([-40, -20, 0, 20, 40]):
        f, g = scanned_filter_response(element, PAPER_ARRAY, t0)
        assert g[np.argmin(np.abs(f - fz))] <= -15.0


def test_scanned_response_band_mismatch():
    element, _ = _filtenna2_element()
    with pytest.raises(IndexRangeError):
        scanned_filter_response(element, PAPER_ARRAY, 0.0, band=(20e9, 30e9))
    f, _ = scanned_filter_response(element, PAPER_ARRAY, 0.0, band=(27e9, 31e9))
    assert f[0] >= 27e9 and f[-1] <= 31e9


def test_pattern_csv_format():
    res = scan_sweep(PAPER_ARRAY, [0.0], step_deg=30.0)[0]
    text = pattern_csv(res)
    lines = text.split("\r\n")
    assert lines[0] == "theta_deg,gain_db"
    assert lines[1].startswith("-90.0000,")
    assert len(lines) == 1 + 7 + 1 and lines[-1] == ""
