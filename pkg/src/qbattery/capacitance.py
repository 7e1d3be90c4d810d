"""Single-shot output ergotropy curves, their concave envelope and the
capacitance bounds for the three qubit channel families."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .channels import (
    ChannelKind,
    QubitChannel,
    _check_unit,
    output_eigenvalues,
    output_energy,
)
from .linalg import ValidationError

DEFAULT_GRID = 1001


class CurveKind(str, Enum):
    E_BAR = "E_bar"
    E_MAX = "E_max"
    CHI = "chi"
    UPPER_BOUND = "upper_bound"


@dataclass(frozen=True)
class CapacitanceCurve:
    channel: QubitChannel
    grid: np.ndarray
    values: np.ndarray
    kind: CurveKind
    branch_labels: Optional[tuple[str, ...]] = field(default=None)


def max_output_ergotropy_fixed(ch: QubitChannel, e: float) -> float:
    """Best output ergotropy over single-qubit inputs of energy exactly ``e``.

    Pure coherent inputs are optimal, so this is the output energy minus the
    smaller output eigenvalue.
    """
    e = _check_unit("energy", e)
    return output_energy(ch, e) - output_eigenvalues(ch, e)[1]


def dephasing_regime(ch: QubitChannel) -> str:
    """Shape of the fixed-energy curve of a dephasing ADC: concave, linear or convex."""
    if ch.kind is not ChannelKind.DEPHADC:
        return "concave"
    lhs, rhs = ch.kappa * (1.0 - ch.gamma), ch.gamma
    if lhs > rhs:
        return "convex"
    if lhs == rhs:
        return "linear"
    return "concave"


def unconstrained_maximizer(ch: QubitChannel) -> float:
    """Stationary point of the fixed-energy curve (may exceed 1)."""
    g = ch.gamma
    if g == 0.0:
        return math.inf
    if ch.kind is ChannelKind.ADC:
        return 1.0 / (2.0 * math.sqrt(g))
    if ch.kind is ChannelKind.GADC:
        eta = ch.eta
        return eta + math.sqrt(1.0 - 4.0 * g * eta * (1.0 - eta)) / (2.0 * math.sqrt(g))
    k = ch.kappa
    # (-k + sqrt(g - k(1-g))) / (2(g-k)) rationalized, so g == k needs no special case
    root = math.sqrt(max(g - k * (1.0 - g), 0.0))
    denom = 2.0 * (k + root)
    return math.inf if denom == 0.0 else (1.0 + k) / denom


def optimal_input_energy(ch: QubitChannel, e_budget: float) -> float:
    """Input energy in [0, e_budget] that maximizes the fixed-energy output ergotropy."""
    e_budget = _check_unit("energy", e_budget)
    if ch.gamma == 0.0:
        return e_budget
    if ch.kind is ChannelKind.DEPHADC and ch.kappa >= 4.0 * ch.gamma - 1.0:
        return e_budget
    return min(e_budget, unconstrained_maximizer(ch))


def max_output_ergotropy(ch: QubitChannel, e: float) -> float:
    """Best single-shot output ergotropy with input energy at most ``e``."""
    return max_output_ergotropy_fixed(ch, optimal_input_energy(ch, e))


def concave_envelope(grid, values, nondecreasing: bool = True) -> np.ndarray:
    """Upper concave envelope of sampled points, evaluated back on ``grid``.

    With ``nondecreasing`` (the default) mixtures may spend less than the
    budget, so the result is the least concave non-decreasing majorant; this
    is what the chi functional needs. Pass ``False`` for the bare hull.
    """
    x = np.asarray(grid, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValidationError("grid and values must be 1-D arrays of equal length")
    if x.size == 0:
        return y.copy()
    if np.any(np.diff(x) <= 0):
        raise ValidationError("grid must be strictly ascending")
    if not np.all(np.isfinite(y)):
        raise ValidationError("values must be finite")
    # Andrew's monotone chain, upper half only
    hull: list[int] = []
    for i in range(x.size):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    env = np.interp(x, x[hull], y[hull])
    env = np.maximum(env, y)
    if nondecreasing:
        env = np.maximum.accumulate(env)
    return env


def chi(ch: QubitChannel, e: float) -> float:
    """Concave envelope of the single-shot curve: the local work capacitance."""
    e = _check_unit("energy", e)
    if dephasing_regime(ch) == "convex":
        return e * max(0.0, 1.0 - 2.0 * ch.gamma)
    return max_output_ergotropy(ch, e)


def capacitance_bounds(ch: QubitChannel, e: float) -> tuple[float, float]:
    """(chi, output energy): bounds on the unrestricted ergotropic capacitance."""
    return chi(ch, e), output_energy(ch, e)


def energy_grid(points: int = DEFAULT_GRID) -> np.ndarray:
    if points < 2:
        raise ValidationError("a grid needs at least two points")
    return np.linspace(0.0, 1.0, points)


_CURVE_FUNCS = {
    CurveKind.E_BAR: max_output_ergotropy_fixed,
    CurveKind.E_MAX: max_output_ergotropy,
    CurveKind.CHI: chi,
    CurveKind.UPPER_BOUND: output_energy,
}


def _branch_label(ch: QubitChannel, kind: CurveKind, e: float) -> str:
    if ch.kind is ChannelKind.DEPHADC:
        regime = dephasing_regime(ch)
        if regime != "concave" or kind is CurveKind.E_BAR:
            return regime
    if kind in (CurveKind.E_MAX, CurveKind.CHI):
        return "capped" if optimal_input_energy(ch, e) < e else "uncapped"
    return "closed-form"


def curve(ch: QubitChannel, kind: CurveKind | str, grid: Optional[Sequence[float]] = None) -> CapacitanceCurve:
    kind = CurveKind(kind)
    xs = energy_grid() if grid is None else np.asarray(grid, dtype=float)
    if np.any(np.diff(xs) <= 0):
        raise ValidationError("grid must be strictly ascending")
    fn = _CURVE_FUNCS[kind]
    vals = np.array([fn(ch, float(e)) for e in xs])
    labels = tuple(_branch_label(ch, kind, float(e)) for e in xs)
    return CapacitanceCurve(channel=ch, grid=xs, values=vals, kind=kind, branch_labels=labels)
