"""Qubit noise channels for battery cells with h = |1><1|.

Three families are supported:

* ``ADC``      amplitude damping, decay |1> -> |0> with probability gamma;
* ``GADC``     generalized amplitude damping, partial thermalization towards a
               Gibbs state with excited population gamma*eta, eta in [0, 1/2];
* ``DephADC``  amplitude damping followed by dephasing that scales coherences
               by sqrt(1 - kappa).

All maps are applied through their linear matrix-element action, which
coincides with the familiar trace-one formulas on density matrices and lets
the 4x4 superoperator be read off from the images of |i><j|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import ValidationError, vec, von_neumann_entropy

H_QUBIT = np.diag([0.0, 1.0]).astype(complex)


class ChannelKind(str, Enum):
    ADC = "adc"
    GADC = "gadc"
    DEPHADC = "dephadc"


def _check_unit(name: str, x: float, hi: float = 1.0) -> float:
    x = float(x)
    if not (0.0 <= x <= hi):
        raise ValidationError(f"{name} must lie in [0, {hi:g}], got {x!r}")
    return x


@dataclass(frozen=True)
class QubitChannel:
    kind: ChannelKind
    gamma: float
    eta: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind(self.kind))
        object.__setattr__(self, "gamma", _check_unit("gamma", self.gamma))
        object.__setattr__(self, "eta", _check_unit("eta", self.eta, 0.5))
        object.__setattr__(self, "kappa", _check_unit("kappa", self.kappa))
        if self.kind is not ChannelKind.GADC and self.eta != 0.0:
            raise ValidationError("eta is only meaningful for the GADC")
        if self.kind is not ChannelKind.DEPHADC and self.kappa != 0.0:
            raise ValidationError("kappa is only meaningful for the dephasing ADC")

    def __str__(self) -> str:
        if self.kind is ChannelKind.ADC:
            return f"adc:gamma={self.gamma!r}"
        if self.kind is ChannelKind.GADC:
            return f"gadc:gamma={self.gamma!r},eta={self.eta!r}"
        return f"dephadc:kappa={self.kappa!r},gamma={self.gamma!r}"

    @property
    def thermal_population(self) -> float:
        """Excited population of the image of the ground state."""
        return self.gamma * self.eta

    @property
    def coherence_factor(self) -> float:
        return math.sqrt(1.0 - self.kappa) * math.sqrt(1.0 - self.gamma)


def adc(gamma: float) -> QubitChannel:
    return QubitChannel(ChannelKind.ADC, gamma)


def gadc(gamma: float, eta: float) -> QubitChannel:
    return QubitChannel(ChannelKind.GADC, gamma, eta=eta)


def dephadc(kappa: float, gamma: float) -> QubitChannel:
    return QubitChannel(ChannelKind.DEPHADC, gamma, kappa=kappa)


_PARAMS = {
    ChannelKind.ADC: {"gamma"},
    ChannelKind.GADC: {"gamma", "eta"},
    ChannelKind.DEPHADC: {"gamma", "kappa"},
}


def parse_channel(text: str) -> QubitChannel:
    """Parse ``adc:gamma=0.5``, ``gadc:gamma=0.5,eta=0.3`` or ``dephadc:kappa=0.2,gamma=0.5``."""
    head, sep, body = text.strip().partition(":")
    try:
        kind = ChannelKind(head.strip().lower())
    except ValueError:
        raise ValidationError(f"unknown channel kind {head!r} in {text!r}") from None
    params: dict[str, float] = {}
    for item in filter(None, (p.strip() for p in body.split(","))) if sep else ():
        key, eq, val = item.partition("=")
        key = key.strip().lower()
        if not eq or key not in _PARAMS[kind]:
            raise ValidationError(f"bad parameter {item!r} for {kind.value}")
        if key in params:
            raise ValidationError(f"parameter {key!r} given twice")
        try:
            params[key] = float(val)
        except ValueError:
            raise ValidationError(f"parameter {key!r} is not a number: {val!r}") from None
    missing = _PARAMS[kind] - params.keys()
    if missing:
        raise ValidationError(f"missing parameter(s) {sorted(missing)} for {kind.value}")
    return QubitChannel(kind, **params)


def apply(ch: QubitChannel, rho) -> np.ndarray:
    """Image of a 2x2 matrix under the channel (linear in ``rho``)."""
    r = np.asarray(rho, dtype=complex)
    if r.shape[-2:] != (2, 2):
        raise ValidationError(f"expected 2x2 input, got shape {r.shape}")
    g, p = ch.gamma, ch.thermal_population
    r00, r11 = r[..., 0, 0], r[..., 1, 1]
    out = np.empty_like(r)
    # Tr(rho) replaces the literal 1 of the trace-one formulas
    out[..., 0, 0] = (1.0 - p) * r00 + (g - p) * r11
    out[..., 1, 1] = p * r00 + (1.0 - g + p) * r11
    c = ch.coherence_factor
    out[..., 0, 1] = c * r[..., 0, 1]
    out[..., 1, 0] = c * r[..., 1, 0]
    return out


def pure_dephasing(kappa: float, rho) -> np.ndarray:
    """Dephasing alone: coherences scaled by sqrt(1 - kappa)."""
    kappa = _check_unit("kappa", kappa)
    r = np.array(rho, dtype=complex)
    f = math.sqrt(1.0 - kappa)
    r[..., 0, 1] *= f
    r[..., 1, 0] *= f
    return r


def _superop_from_map(fn) -> np.ndarray:
    s = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            s[:, i + 2 * j] = vec(fn(e))
    return s


def superoperator(ch: QubitChannel) -> np.ndarray:
    """Column-stacking 4x4 superoperator of the channel."""
    return _superop_from_map(lambda e: apply(ch, e))


def dephasing_superoperator(kappa: float) -> np.ndarray:
    return _superop_from_map(lambda e: pure_dephasing(kappa, e))


def coherent_ket(e: float, phi: float = 0.0) -> np.ndarray:
    """sqrt(1-e)|0> + exp(i phi) sqrt(e)|1>."""
    e = _check_unit("energy", e)
    return np.array([math.sqrt(1.0 - e), np.exp(1j * phi) * math.sqrt(e)], dtype=complex)


def coherent_state(e: float, phi: float = 0.0) -> np.ndarray:
    k = coherent_ket(e, phi)
    return np.outer(k, k.conj())


def output_energy(ch: QubitChannel, e_in: float) -> float:
    e_in = _check_unit("energy", e_in)
    return (1.0 - ch.gamma) * e_in + ch.thermal_population


def output_determinant(ch: QubitChannel, e: float) -> float:
    """lambda+ * lambda- for the output of the energy-e coherent input."""
    g, eta, k = ch.gamma, ch.eta, ch.kappa
    if ch.kind is ChannelKind.ADC:
        return g * (1.0 - g) * e * e
    if ch.kind is ChannelKind.GADC:
        p = g * eta
        return max(p * (1.0 - p) - g * (1.0 - g) * (2.0 * eta - e) * e, 0.0)
    return (1.0 - g) * e * (e * (g - k) + k)


def output_eigenvalues(ch: QubitChannel, e: float) -> tuple[float, float]:
    """(lambda+, lambda-) of the channel output for the energy-e coherent input.

    Uses lambda+- = (1 +- sqrt(1 - 4 det)) / 2 with the closed-form determinant;
    lambda- is taken as det / lambda+ to avoid cancellation at small e.
    """
    e = _check_unit("energy", e)
    det = output_determinant(ch, e)
    root = math.sqrt(max(1.0 - 4.0 * det, 0.0))
    lam_plus = 0.5 * (1.0 + root)
    lam_minus = det / lam_plus
    return lam_plus, lam_minus


def output_entropy(ch: QubitChannel, e: float, base: str = "nats") -> float:
    """Von Neumann entropy of the channel output for the energy-e coherent input."""
    if base not in ("nats", "bits"):
        raise ValidationError(f"base must be 'nats' or 'bits', got {base!r}")
    s = von_neumann_entropy(output_eigenvalues(ch, e))
    return s / math.log(2.0) if base == "bits" else s


def beta_thermal(ch: QubitChannel) -> float:
    """-ln(p/(1-p)) with p = gamma*eta, the temperature of the image of |0><0|.

    This is not the temperature of the channel's fixed point, whose excited
    population is eta.
    """
    p = ch.thermal_population
    if p == 0.0:
        return math.inf
    return -math.log(p / (1.0 - p))
