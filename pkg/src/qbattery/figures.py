"""Tabulated data behind each figure: every builder returns (header, rows)."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .capacitance import max_output_ergotropy, max_output_ergotropy_fixed, optimal_input_energy
from .channels import adc, dephadc, gadc, output_entropy
from .mawer import dephadc_coherence_advantage, gadc_classical_gap, relative_gap

Table = tuple[list[str], list[list[float]]]

ADC_GAMMAS = (0.0, 0.2, 0.4, 0.6, 0.8)
GADC_ETAS = (0.0, 0.15, 0.25, 0.35, 0.5)
ENTROPY_GAMMAS = (0.2, 0.4, 0.6, 0.8, 1.0)
ENTROPY_ETAS = (0.1, 0.4)
GAP_ETAS = (0.1, 0.2, 0.3, 0.4, 0.5)


def _label(**params) -> str:
    return " ".join(f"{k}={v!r}" for k, v in params.items())


def _energy_series(grid: int, series: list[tuple[str, callable]]) -> Table:
    es = np.linspace(0.0, 1.0, grid)
    header = ["e"] + [name for name, _ in series]
    rows = [[float(e)] + [fn(float(e)) for _, fn in series] for e in es]
    return header, rows


def adc_ergotropy(gammas: Sequence[float] = ADC_GAMMAS, grid: int = 200, quantity: str = "fixed") -> Table:
    """Single-shot ADC output ergotropy vs input energy (fixed energy or energy budget)."""
    fn = max_output_ergotropy_fixed if quantity == "fixed" else max_output_ergotropy
    series = [(_label(gamma=g), lambda e, ch=adc(g): fn(ch, e)) for g in gammas]
    return _energy_series(grid, series)


def adc_optimal_energy(gammas: Sequence[float] = ADC_GAMMAS, grid: int = 200) -> Table:
    series = [(_label(gamma=g), lambda e, ch=adc(g): optimal_input_energy(ch, e)) for g in gammas]
    return _energy_series(grid, series)


def gadc_ergotropy(gammas: Sequence[float] = (0.5,), etas: Sequence[float] = GADC_ETAS,
                   grid: int = 200, quantity: str = "fixed") -> Table:
    fn = max_output_ergotropy_fixed if quantity == "fixed" else max_output_ergotropy
    series = [(_label(gamma=g, eta=eta), lambda e, ch=gadc(g, eta): fn(ch, e)) for g in gammas for eta in etas]
    return _energy_series(grid, series)


def gadc_entropy(gammas: Sequence[float] = ENTROPY_GAMMAS, etas: Sequence[float] = ENTROPY_ETAS,
                 grid: int = 200, base: str = "bits") -> Table:
    series = [(_label(gamma=g, eta=eta), lambda e, ch=gadc(g, eta): output_entropy(ch, e, base))
              for eta in etas for g in gammas]
    return _energy_series(grid, series)


def _heatmap(fn, n_gamma: int, n_other: int, other_max: float, other_name: str) -> Table:
    gammas = np.linspace(0.0, 1.0, n_gamma)
    others = np.linspace(0.0, other_max, n_other)
    rows = [[float(g), float(o), fn(float(g), float(o))] for g in gammas for o in others]
    return ["gamma", other_name, "value"], rows


def gadc_optimal_energy(n_gamma: int = 100, n_eta: int = 50, energy: float = 1.0) -> Table:
    return _heatmap(lambda g, eta: optimal_input_energy(gadc(g, eta), energy), n_gamma, n_eta, 0.5, "eta")


def gadc_chi_full(n_gamma: int = 100, n_eta: int = 50) -> Table:
    return _heatmap(lambda g, eta: max_output_ergotropy(gadc(g, eta), 1.0), n_gamma, n_eta, 0.5, "eta")


def gadc_delta(n_gamma: int = 100, n_eta: int = 50) -> Table:
    return _heatmap(lambda g, eta: relative_gap(gadc(g, eta)), n_gamma, n_eta, 0.5, "eta")


def gadc_mawer_gap(etas: Sequence[float] = GAP_ETAS, grid: int = 200) -> Table:
    gammas = np.linspace(0.0, 1.0, grid)
    header = ["gamma"] + [_label(eta=eta) for eta in etas]
    rows = [[float(g)] + [gadc_classical_gap(gadc(float(g), eta)) for eta in etas] for g in gammas]
    return header, rows


def dephadc_heatmap(n_gamma: int = 100, n_kappa: int = 100, quantity: str = "ergotropy",
                    energy: float = 1.0) -> Table:
    if quantity == "ergotropy":
        fn = lambda g, k: max_output_ergotropy(dephadc(k, g), energy)  # noqa: E731
    else:
        fn = lambda g, k: optimal_input_energy(dephadc(k, g), energy)  # noqa: E731
    return _heatmap(fn, n_gamma, n_kappa, 1.0, "kappa")


def dephadc_mawer_diff(n_gamma: int = 100, n_kappa: int = 100) -> Table:
    return _heatmap(lambda g, k: dephadc_coherence_advantage(k, g), n_gamma, n_kappa, 1.0, "kappa")
