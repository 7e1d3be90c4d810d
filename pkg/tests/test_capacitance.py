import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbattery.capacitance import (
    CurveKind,
    capacitance_bounds,
    chi,
    concave_envelope,
    curve,
    dephasing_regime,
    energy_grid,
    max_output_ergotropy,
    max_output_ergotropy_fixed,
    optimal_input_energy,
)
from qbattery.channels import H_QUBIT, adc, apply, coherent_state, dephadc, gadc, output_energy
from qbattery.ergotropy import ergotropy
from qbattery.linalg import ValidationError

CHANNELS = [adc(0.0), adc(0.2), adc(0.6), adc(1.0), gadc(0.5, 0.3), gadc(0.9, 0.5), gadc(0.3, 0.05),
            dephadc(0.2, 0.5), dephadc(0.8, 0.2), dephadc(0.0, 0.9)]


def dense_fixed(ch, e):
    return ergotropy(apply(ch, coherent_state(e)), H_QUBIT).ergotropy


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
def test_fixed_curve_vs_dense(ch):
    for e in np.linspace(0, 1, 41):
        assert max_output_ergotropy_fixed(ch, e) == pytest.approx(dense_fixed(ch, e), abs=1e-12)


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
def test_coherent_inputs_are_optimal(rng, ch):
    # random mixed inputs at the same diagonal energy never do better
    for _ in range(200):
        e = rng.uniform(0, 1)
        r = rng.uniform(0, 1) * math.sqrt(e * (1 - e))
        rho = np.array([[1 - e, r], [r, e]])
        assert dense_fixed(ch, e) >= ergotropy(apply(ch, rho), H_QUBIT).ergotropy - 1e-12


def test_adc_closed_form():
    g = 0.36
    for e in np.linspace(0, 1, 11):
        lam_minus = 0.5 * (1 - math.sqrt(1 - 4 * g * (1 - g) * e * e))
        assert max_output_ergotropy_fixed(adc(g), e) == pytest.approx((1 - g) * e - lam_minus, abs=1e-14)


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
@pytest.mark.parametrize("budget", [0.3, 0.7, 1.0])
def test_optimal_energy_vs_fine_grid(ch, budget):
    grid = np.linspace(0, budget, 20001)
    vals = np.array([max_output_ergotropy_fixed(ch, e) for e in grid])
    assert max_output_ergotropy(ch, budget) == pytest.approx(vals.max(), abs=1e-8)
    assert max_output_ergotropy(ch, budget) >= vals.max() - 1e-14
    if vals.max() - vals.min() > 1e-6 and np.sum(vals > vals.max() - 1e-12) == 1:
        assert optimal_input_energy(ch, budget) == pytest.approx(grid[vals.argmax()], abs=1e-3)


def test_adc_maximizer_line():
    for g in (0.3, 0.5, 0.8):
        assert optimal_input_energy(adc(g), 1.0) == pytest.approx(min(1, 1 / (2 * math.sqrt(g))))
    assert optimal_input_energy(adc(0.0), 0.4) == 0.4


def test_dephasing_maximizer_at_gamma_equals_kappa():
    # removable singularity of the unrationalized formula
    ch = dephadc(0.4, 0.4)
    grid = np.linspace(0, 1, 200001)
    vals = [max_output_ergotropy_fixed(ch, e) for e in grid]
    assert optimal_input_energy(ch, 1.0) == pytest.approx(grid[int(np.argmax(vals))], abs=1e-4)


@pytest.mark.parametrize("kappa,gamma,regime", [
    (0.1, 0.5, "concave"), (0.25, 0.2, "linear"), (0.6, 0.2, "convex"), (0.0, 0.0, "linear"),
])
def test_dephasing_regimes(kappa, gamma, regime):
    ch = dephadc(kappa, gamma)
    assert dephasing_regime(ch) == regime
    e = np.linspace(0, 1, 201)
    d2 = np.diff([max_output_ergotropy_fixed(ch, x) for x in e], 2)
    if regime == "concave":
        assert d2.max() <= 1e-8
    elif regime == "convex":
        assert d2.min() >= -1e-8
    else:
        assert np.abs(d2).max() <= 1e-8


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
def test_chi_matches_envelope_of_fine_grid(ch):
    grid = np.linspace(0, 1, 4001)
    vals = np.array([max_output_ergotropy_fixed(ch, e) for e in grid])
    env = concave_envelope(grid, vals)
    ours = np.array([chi(ch, e) for e in grid])
    assert np.max(np.abs(env - ours)) < 1e-6
    assert np.all(ours >= vals - 1e-12)


def test_capacitance_bounds_ordered():
    for ch in CHANNELS:
        for e in (0.1, 0.5, 1.0):
            lo, hi = capacitance_bounds(ch, e)
            assert lo <= hi + 1e-15
            assert hi == output_energy(ch, e)


def test_envelope_of_concave_increasing_is_identity():
    x = np.linspace(0, 1, 50)
    y = np.sqrt(x)
    assert np.array_equal(concave_envelope(x, y), y)


def test_envelope_nondecreasing_flag():
    x = np.linspace(0, 1, 5)
    y = np.array([0.0, 1.0, 0.5, 0.2, 0.1])
    assert list(concave_envelope(x, y)) == [0.0, 1.0, 1.0, 1.0, 1.0]
    bare = concave_envelope(x, y, nondecreasing=False)
    assert bare[1] == 1.0 and bare[-1] == pytest.approx(0.1)


def test_envelope_validation():
    with pytest.raises(ValidationError):
        concave_envelope([0, 0.5, 0.5], [0, 1, 2])
    with pytest.raises(ValidationError):
        concave_envelope([0, 1], [0, np.nan])
    with pytest.raises(ValidationError):
        concave_envelope([0, 1], [0])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=30))
def test_envelope_properties(ys):
    y = np.array(ys)
    x = np.linspace(0, 1, y.size)
    env = concave_envelope(x, y)
    assert np.all(env >= y - 1e-12)
    assert np.all(np.diff(env) >= -1e-12)
    if y.size >= 3:
        slopes = np.diff(env) / np.diff(x)
        assert np.all(np.diff(slopes) <= 1e-7 * (1 + np.abs(slopes[:-1])))
    assert np.allclose(concave_envelope(x, env), env, atol=1e-12)


def test_curve_metadata():
    c = curve(adc(0.6), "E_max", energy_grid(11))
    assert c.kind is CurveKind.E_MAX and len(c.branch_labels) == 11
    assert c.branch_labels[0] == "uncapped" and c.branch_labels[-1] == "capped"
    assert curve(dephadc(0.6, 0.2), CurveKind.CHI, [0, 1]).branch_labels == ("convex", "convex")
    with pytest.raises(ValidationError):
        energy_grid(1)
