import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbattery.channels import (
    ChannelKind,
    adc,
    apply,
    beta_thermal,
    coherent_state,
    dephadc,
    dephasing_superoperator,
    gadc,
    output_eigenvalues,
    output_energy,
    output_entropy,
    parse_channel,
    pure_dephasing,
    superoperator,
)
from qbattery.linalg import (
    ValidationError,
    apply_superop,
    is_completely_positive,
    is_trace_preserving,
    random_density,
)


def kraus(ch):
    """Textbook Kraus operators, used as an independent oracle."""
    g = ch.gamma
    a0 = np.array([[1, 0], [0, math.sqrt(1 - g)]])
    a1 = np.array([[0, math.sqrt(g)], [0, 0]])
    if ch.kind is ChannelKind.ADC:
        return [a0, a1]
    if ch.kind is ChannelKind.GADC:
        eta = ch.eta
        b0 = np.array([[math.sqrt(1 - g), 0], [0, 1]])
        b1 = np.array([[0, 0], [math.sqrt(g), 0]])
        return [math.sqrt(1 - eta) * a0, math.sqrt(1 - eta) * a1, math.sqrt(eta) * b0, math.sqrt(eta) * b1]
    f = math.sqrt(1 - ch.kappa)
    z = [math.sqrt((1 + f) / 2) * np.eye(2), math.sqrt((1 - f) / 2) * np.diag([1, -1])]
    return [zk @ ak for zk in z for ak in (a0, a1)]


CHANNELS = [adc(0.0), adc(0.37), adc(1.0), gadc(0.4, 0.2), gadc(1.0, 0.5), gadc(0.8, 0.0),
            dephadc(0.3, 0.6), dephadc(1.0, 0.2), dephadc(0.0, 0.5)]


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
def test_apply_matches_kraus(rng, ch):
    for _ in range(10):
        rho = random_density(2, rng)
        expect = sum(k @ rho @ k.conj().T for k in kraus(ch))
        assert np.allclose(apply(ch, rho), expect, atol=1e-14)
        assert np.allclose(apply_superop(superoperator(ch), rho), expect, atol=1e-14)


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
def test_cptp(ch):
    s = superoperator(ch)
    assert is_completely_positive(s)
    assert is_trace_preserving(s)


def test_adc_matrix_form():
    g = 0.3
    rho = np.array([[0.4, 0.1 + 0.2j], [0.1 - 0.2j, 0.6]])
    out = apply(adc(g), rho)
    assert out[0, 0] == pytest.approx(0.4 + g * 0.6)
    assert out[0, 1] == pytest.approx(math.sqrt(1 - g) * (0.1 + 0.2j))


def test_gadc_thermal_images():
    ch = gadc(0.6, 0.3)
    p = ch.thermal_population
    assert np.allclose(apply(ch, np.diag([1.0, 0.0])), np.diag([1 - p, p]))
    assert math.exp(-beta_thermal(ch)) == pytest.approx(p / (1 - p))
    # the fixed point sits at population eta, not gamma * eta
    fixed = np.diag([0.7, 0.3])
    assert np.allclose(apply(ch, fixed), fixed)
    assert beta_thermal(adc(0.5)) == math.inf


def test_dephasing_commutes_with_adc(rng):
    rho = random_density(2, rng)
    ch = dephadc(0.45, 0.3)
    a = pure_dephasing(0.45, apply(adc(0.3), rho))
    b = apply(adc(0.3), pure_dephasing(0.45, rho))
    assert np.allclose(a, b) and np.allclose(a, apply(ch, rho))
    assert np.allclose(apply_superop(dephasing_superoperator(0.45), rho), pure_dephasing(0.45, rho))


@pytest.mark.parametrize("ch", CHANNELS, ids=str)
@pytest.mark.parametrize("e", [0.0, 1e-9, 0.1, 0.5, 0.77, 1.0])
def test_output_eigenvalues_vs_eigensolver(ch, e):
    out = apply(ch, coherent_state(e, 0.3))
    lo, hi = np.linalg.eigvalsh(out)
    lp, lm = output_eigenvalues(ch, e)
    assert lp == pytest.approx(hi, abs=1e-13)
    assert lm == pytest.approx(lo, abs=1e-13)
    assert output_energy(ch, e) == pytest.approx(out[1, 1].real, abs=1e-15)


def test_small_lambda_minus_relative_accuracy():
    # det / lambda+ keeps full relative precision where 1/2 - sqrt(...)/2 would not
    lp, lm = output_eigenvalues(adc(0.5), 1e-9)
    assert lm == pytest.approx(0.25e-18, rel=1e-12)


def test_output_entropy_bases():
    ch = gadc(0.5, 0.3)
    assert output_entropy(ch, 0.4, "bits") == pytest.approx(output_entropy(ch, 0.4) / math.log(2))
    assert output_entropy(gadc(1.0, 0.5), 0.7, "bits") == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        output_entropy(ch, 0.4, "hartleys")


@pytest.mark.parametrize("text,expect", [
    ("adc:gamma=0.5", adc(0.5)),
    ("gadc:gamma=0.5,eta=0.3", gadc(0.5, 0.3)),
    ("dephadc:kappa=0.2,gamma=0.5", dephadc(0.2, 0.5)),
    ("GADC: eta=0.1 , gamma=1", gadc(1.0, 0.1)),
])
def test_parse_channel(text, expect):
    ch = parse_channel(text)
    assert ch == expect
    assert parse_channel(str(ch)) == ch


@pytest.mark.parametrize("text", [
    "adc", "adc:gamma=2", "gadc:gamma=0.5", "gadc:gamma=0.5,eta=0.6", "adc:gamma=0.1,eta=0.2",
    "dephadc:kappa=x,gamma=0.5", "foo:gamma=0.1", "adc:gamma=0.1,gamma=0.2", "adc:gamma",
])
def test_parse_channel_errors(text):
    with pytest.raises(ValidationError):
        parse_channel(text)


def test_constructor_validation():
    with pytest.raises(ValidationError):
        adc(-0.1)
    with pytest.raises(ValidationError):
        gadc(0.5, 0.51)
    with pytest.raises(ValidationError):
        output_energy(adc(0.5), 1.2)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 1), st.floats(0, 0.5), st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_phase_covariance(g, eta, e, phi):
    ch = gadc(g, eta)
    u = np.diag([1.0, np.exp(1j * phi)])
    rho = coherent_state(e, 0.9)
    lhs = apply(ch, u @ rho @ u.conj().T)
    rhs = u @ apply(ch, rho) @ u.conj().T
    assert np.max(np.abs(lhs - rhs)) < 1e-14
