"""Maximal asymptotic work/energy ratios (MAWERs).

Closed forms are authoritative. ``mawer_numeric`` recomputes the local
MAWER as the small-energy slope of chi, lim_{e->0} chi(e)/e, by Richardson
extrapolation, which serves as an independent consistency check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional

import numpy as np

from .capacitance import chi, max_output_ergotropy, optimal_input_energy
from .channels import H_QUBIT, ChannelKind, QubitChannel, apply, beta_thermal, gadc
from .ergotropy import thermal_extractable_work
from .linalg import ValidationError

RICHARDSON_START = 1e-2
RICHARDSON_LEVELS = 5
RICHARDSON_SHRINK = 4.0
RICHARDSON_RESTARTS = 6
RICHARDSON_AGREE = 1e-10
VANISHING_TOL = 1e-12


class Flavor(str, Enum):
    UNRESTRICTED = "unrestricted"
    SEP = "sep"
    LOC = "loc"
    LOC_SEP = "loc_sep"


class OpenValueError(ValidationError):
    """The requested MAWER has no established closed form (only a lower bound)."""


@dataclass(frozen=True)
class MawerResult:
    channel: QubitChannel
    closed_form: float
    numeric_limit: float
    classical_ratio: Optional[float]
    flavor: Flavor


def mawer_closed_form(ch: QubitChannel, flavor: Flavor | str = Flavor.LOC) -> float:
    flavor = Flavor(flavor)
    g = ch.gamma
    if ch.kind is ChannelKind.ADC:
        return 1.0 - g
    if ch.kind is ChannelKind.GADC:
        if flavor is Flavor.UNRESTRICTED:
            raise OpenValueError(
                "unrestricted MAWER of the GADC is open; it is bounded below by the loc_sep value"
            )
        denom = 1.0 - 2.0 * ch.eta * g
        # gamma = 1 erases every input, so the ratio is 0 even when eta = 1/2
        return 0.0 if g == 1.0 else (1.0 - g) / denom
    if flavor not in (Flavor.LOC, Flavor.LOC_SEP):
        raise OpenValueError(
            f"{flavor.value} MAWER of the dephasing ADC is open; it is bounded below by the loc value"
        )
    if ch.kappa * (1.0 - g) >= g:
        return max(0.0, 1.0 - 2.0 * g)
    return (1.0 - g) * (1.0 - ch.kappa)


def richardson_limit(f: Callable[[float], float], h0: float = RICHARDSON_START,
                     levels: int = RICHARDSON_LEVELS) -> float:
    """Estimate lim_{h->0} f(h) assuming f(h) = L + a1 h + a2 h^2 + ..."""
    table = [f(h0 / 2**k) for k in range(levels)]
    for order in range(1, levels):
        factor = 2.0**order
        table = [(factor * table[k + 1] - table[k]) / (factor - 1.0) for k in range(len(table) - 1)]
    return table[0]


def slope_at_zero(curve: Callable[[float], float], h0: float = RICHARDSON_START,
                  levels: int = RICHARDSON_LEVELS) -> float:
    """lim_{e->0} curve(e)/e; +inf when curve(0) does not vanish.

    The starting step shrinks until two successive extrapolations agree, so
    curves that bend on a short energy scale are still resolved.
    """
    if abs(curve(0.0)) > VANISHING_TOL:
        return math.inf
    ratio = lambda e: curve(e) / e  # noqa: E731
    est = richardson_limit(ratio, h0, levels)
    for _ in range(RICHARDSON_RESTARTS):
        h0 /= RICHARDSON_SHRINK
        nxt = richardson_limit(ratio, h0, levels)
        if abs(nxt - est) < RICHARDSON_AGREE:
            return nxt
        est = nxt
    return est


def mawer_numeric(ch: QubitChannel) -> float:
    return slope_at_zero(lambda e: chi(ch, e))


def classical_strategy_ratio(ch: QubitChannel, local: bool = False) -> float:
    """Work/energy ratio reached by incoherent inputs |1>^k |0>^(n-k).

    For the ADC: ``local`` extraction gives max(0, 1 - 2 gamma), nonlocal
    extraction reaches 1 - gamma. For the GADC the returned value is the
    thermal-bath upper bound W_beta(Phi(|1><1|)) at the channel's own beta.
    """
    g = ch.gamma
    if ch.kind is ChannelKind.ADC:
        return max(0.0, 1.0 - 2.0 * g) if local else 1.0 - g
    if ch.kind is not ChannelKind.GADC:
        raise ValidationError(f"classical strategy ratio is not defined for {ch.kind.value}")
    if local:
        raise ValidationError("only the nonlocal thermal-bath bound is available for the GADC")
    beta = beta_thermal(ch)
    if g == 1.0:
        # output is the channel's Gibbs state itself
        return 0.0
    if math.isinf(beta):
        return 1.0 - g
    excited = np.diag([0.0, 1.0]).astype(complex)
    return thermal_extractable_work(apply(ch, excited), H_QUBIT, beta)


def relative_gap(ch: QubitChannel) -> float:
    """(J_loc,sep - r) / r with r the full-budget single-shot ergotropy per unit optimal input energy.

    Returns NaN when r vanishes (gamma = 1).
    """
    if ch.kind is not ChannelKind.GADC:
        raise ValidationError("relative_gap is defined for the GADC")
    e_star = optimal_input_energy(ch, 1.0)
    erg = max_output_ergotropy(ch, 1.0)
    if e_star == 0.0 or erg <= VANISHING_TOL:
        return math.nan
    r = erg / e_star
    return (mawer_closed_form(ch, Flavor.LOC_SEP) - r) / r


def mawer_result(ch: QubitChannel, flavor: Flavor | str = Flavor.LOC) -> MawerResult:
    classical = None
    if ch.kind in (ChannelKind.ADC, ChannelKind.GADC):
        classical = classical_strategy_ratio(ch)
    return MawerResult(
        channel=ch,
        closed_form=mawer_closed_form(ch, flavor),
        numeric_limit=mawer_numeric(ch),
        classical_ratio=classical,
        flavor=Flavor(flavor),
    )


def gadc_heatmap(values: Callable[[QubitChannel], float], gammas: Iterable[float],
                 etas: Iterable[float]) -> list[tuple[float, float, float]]:
    """Rows (gamma, eta, value) over a GADC parameter grid."""
    etas = list(etas)
    return [(float(g), float(eta), values(gadc(g, eta))) for g in gammas for eta in etas]


def gadc_classical_gap(ch: QubitChannel) -> float:
    return mawer_closed_form(ch, Flavor.LOC_SEP) - classical_strategy_ratio(ch)


def dephadc_coherence_advantage(kappa: float, gamma: float) -> float:
    """(1-gamma)(1-kappa) - max(0, 1-2gamma): coherent minus incoherent local MAWER."""
    return (1.0 - gamma) * (1.0 - kappa) - max(0.0, 1.0 - 2.0 * gamma)
