import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbattery.capacitance import max_output_ergotropy, max_output_ergotropy_fixed
from qbattery.channels import adc, dephadc, gadc
from qbattery.linalg import ValidationError, hamming_energies
from qbattery.multicell import (
    ProductInputSpec,
    classical_state_analysis,
    dense_output_ergotropy,
    estimate_max_ergotropy,
    monotonicity_check,
    product_input_state,
    product_output_ergotropy,
    random_pure_states_below,
    superadditivity_search,
    two_qubit_coefficients,
    two_qubit_gap,
)

CHANNELS = [adc(0.3), gadc(0.5, 0.3), dephadc(0.2, 0.5), dephadc(0.7, 0.1)]


def test_single_site_reduces_to_fixed_curve():
    ch = gadc(0.4, 0.2)
    assert product_output_ergotropy(ch, ProductInputSpec((0.6,))) == pytest.approx(
        max_output_ergotropy_fixed(ch, 0.6), abs=1e-14)


def test_mixed_energy_example():
    ch = adc(0.3)
    spec = ProductInputSpec((0.2, 0.5, 0.9), (0.1, 1.2, 2.3))
    assert product_output_ergotropy(ch, spec) == pytest.approx(
        dense_output_ergotropy(ch, product_input_state(spec)), abs=1e-10)


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
def test_fast_vs_dense_random(rng, ch):
    for n in range(1, 7):
        spec = ProductInputSpec(rng.uniform(0, 1, n), rng.uniform(0, 2 * np.pi, n))
        fast = product_output_ergotropy(ch, spec)
        assert fast == pytest.approx(dense_output_ergotropy(ch, product_input_state(spec)), abs=1e-10)


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
def test_equal_energies_additive(ch):
    single = max_output_ergotropy_fixed(ch, 0.45)
    for n in (2, 5, 12):
        assert product_output_ergotropy(ch, ProductInputSpec.uniform(n, 0.45)) == pytest.approx(n * single, abs=1e-10)


def test_phase_invariance(rng):
    ch = gadc(0.3, 0.1)
    es = (0.1, 0.4, 0.8)
    base = dense_output_ergotropy(ch, product_input_state(ProductInputSpec(es)))
    for _ in range(5):
        spec = ProductInputSpec(es, rng.uniform(0, 2 * np.pi, 3))
        assert dense_output_ergotropy(ch, product_input_state(spec)) == pytest.approx(base, abs=1e-12)


def test_product_spec_validation():
    with pytest.raises(ValidationError):
        ProductInputSpec(())
    with pytest.raises(ValidationError):
        ProductInputSpec((0.5, 1.5))
    with pytest.raises(ValidationError):
        ProductInputSpec((0.5,), (0.0, 1.0))
    with pytest.raises(ValidationError):
        product_output_ergotropy(adc(0.1), ProductInputSpec.uniform(21, 0.1))
    assert ProductInputSpec((0.2, 0.4)).mean_energy == pytest.approx(0.3)


def test_coherent_local_rate_beats_classical():
    # product coherent inputs at e = E/n: local rate approaches 1 - gamma
    g, E = 0.2, 1.0
    rates = [product_output_ergotropy(adc(g), ProductInputSpec.uniform(n, E / n)) / E for n in (2, 8, 20)]
    assert rates[0] < rates[1] < rates[2]
    assert rates[-1] > 1 - 2 * g


def test_classical_state_adc():
    res = classical_state_analysis(adc(0.3), 2, 6)
    assert 2 * 0.7 - 1 <= res.ergotropy <= 2 * 0.7
    assert res.local_ergotropy == pytest.approx(0.8, abs=1e-10)
    assert res.rank_bound_applies


def test_classical_state_lossless():
    res = classical_state_analysis(adc(0.0), 3.7, 5)
    assert res.ergotropy == pytest.approx(3.0, abs=1e-12)
    with pytest.raises(ValidationError):
        classical_state_analysis(adc(0.1), 4, 3)


def test_random_states_respect_budget(rng):
    psi = random_pure_states_below(3, 0.8, 500, rng)
    assert np.allclose(np.linalg.norm(psi, axis=1), 1.0)
    energy = (np.abs(psi) ** 2) @ hamming_energies(3)
    assert energy.max() <= 0.8 + 1e-12


def test_estimate_lossless_reaches_energy(rng):
    val, ket, _ = estimate_max_ergotropy(adc(0.0), 1.0, 2, 200, rng)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_monotonicity_examples():
    assert monotonicity_check(adc(0.0), 1.0, 3, samples=500)
    r = monotonicity_check(adc(0.5), 1.0, 3, samples=2000)
    assert r.ok and r.seed == 42 and len(r.estimates) == 3
    assert r.estimates[0] == pytest.approx(max_output_ergotropy(adc(0.5), 1.0), abs=1e-4)
    assert monotonicity_check(gadc(0.5, 0.3), 1.0, 3, samples=2000)


def test_monotonicity_deterministic():
    a = monotonicity_check(dephadc(0.2, 0.5), 0.5, 3, samples=300, seed=7)
    b = monotonicity_check(dephadc(0.2, 0.5), 0.5, 3, samples=300, seed=7)
    assert a.estimates == b.estimates


def test_monotonicity_limits():
    with pytest.raises(ValidationError):
        monotonicity_check(adc(0.1), 1.0, 9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0, 1), st.floats(0, 1), st.sampled_from([1.0, -1.0]))
def test_two_qubit_coefficients_constraints(e, s_frac, t, sign):
    s = s_frac * min(2 * e, 2 - 2 * e)
    c = two_qubit_coefficients(e, s, t, sign)
    assert np.sum(c**2) == pytest.approx(1.0, abs=1e-12)
    assert (c**2) @ np.array([0, 1, 1, 2]) == pytest.approx(2 * e, abs=1e-12)


def test_superadditivity_lossless_zero_gap():
    res = superadditivity_search(adc(0.0), 0.5, 40)
    assert res.best_gap == pytest.approx(0.0, abs=1e-12)


def test_product_points_never_beat_single_shot(rng):
    ch = gadc(0.5, 0.3)
    for _ in range(20):
        a, b = rng.uniform(0, 1, 2)
        ka = np.array([math.sqrt(1 - a), math.sqrt(a)])
        kb = np.array([math.sqrt(1 - b), math.sqrt(b)])
        assert two_qubit_gap(ch, np.kron(ka, kb)) <= 1e-12


def test_search_reproducible_from_argmax():
    ch = gadc(0.5, 0.3)
    res = superadditivity_search(ch, 0.6, 120)
    assert not res.violation
    assert res.best_gap <= 1e-9
    assert two_qubit_gap(ch, res.argmax_params["coefficients"]) == pytest.approx(res.best_gap, abs=1e-10)
    assert res.grid_spec["points"] == 2 * 120 * 120
    assert res.family_gap <= res.best_gap + 1e-12


def test_search_errors():
    with pytest.raises(ValidationError):
        superadditivity_search(adc(0.1), 0.0)
    with pytest.raises(ValidationError):
        superadditivity_search(adc(0.1), 0.5, 1)
