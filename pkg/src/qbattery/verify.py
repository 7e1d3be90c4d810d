"""Property suites driven by ``qbattery verify``.

Each suite returns a :class:`SuiteResult`; ``passed`` is False exactly when
some check failed, and ``witness`` then names the offending input.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .capacitance import concave_envelope, dephasing_regime
from .channels import (
    H_QUBIT,
    QubitChannel,
    adc,
    apply,
    dephadc,
    gadc,
    superoperator,
)
from .ergotropy import ergotropy
from .linalg import (
    is_completely_positive,
    is_trace_preserving,
    random_density,
    tensor,
    total_hamiltonian,
)
from .mawer import Flavor, mawer_closed_form, mawer_numeric
from .multicell import monotonicity_check, superadditivity_search

DEFAULT_SEED = 42
THEOREM1_TOL = 1e-6
ADDITIVITY_TOL = 1e-8
ENVELOPE_TOL = 1e-8
COVARIANCE_TOL = 1e-12
BOUNDARY_BAND = 1e-3

SUITES = ("covariance", "additivity", "monotonicity", "envelope", "theorem1", "superadditivity")

SUPERADDITIVITY_GAMMAS = (0.2, 0.5, 0.8)
SUPERADDITIVITY_ETAS = (0.0, 0.2, 0.4)
SUPERADDITIVITY_ENERGIES = (0.3, 0.6, 0.9)

MONOTONICITY_CHANNELS = (
    adc(0.3), adc(0.5),
    gadc(0.5, 0.3), gadc(0.2, 0.1),
    dephadc(0.2, 0.5), dephadc(0.6, 0.3),
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        return asdict(self)


def max_workers() -> int:
    """Thread cap from QBATTERY_THREADS (default: CPU count)."""
    raw = os.environ.get("QBATTERY_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(fn: Callable, items: Iterable) -> list:
    """Order-preserving map over a thread pool capped by QBATTERY_THREADS."""
    items = list(items)
    workers = min(max_workers(), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _channel_family_grid() -> list[QubitChannel]:
    chans = [adc(g) for g in (0.0, 0.3, 0.7, 1.0)]
    chans += [gadc(g, eta) for g in (0.2, 0.6, 1.0) for eta in (0.1, 0.5)]
    chans += [dephadc(k, g) for k in (0.0, 0.4, 1.0) for g in (0.2, 0.8)]
    return chans


def covariance_suite(seed: int = DEFAULT_SEED, samples: int = 50) -> SuiteResult:
    """Phase covariance, complete positivity and trace preservation of every family."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    witness = None
    chans = _channel_family_grid()
    for ch in chans:
        s = superoperator(ch)
        if not (is_completely_positive(s) and is_trace_preserving(s)):
            return SuiteResult("covariance", False, {"channels": len(chans)},
                               {"channel": str(ch), "reason": "not CPTP"})
        for _ in range(samples):
            rho = random_density(2, rng)
            phi = rng.uniform(0.0, 2.0 * math.pi)
            u = np.diag([1.0, np.exp(1j * phi)])
            lhs = apply(ch, u @ rho @ u.conj().T)
            rhs = u @ apply(ch, rho) @ u.conj().T
            dev = float(np.max(np.abs(lhs - rhs)))
            if dev > worst:
                worst = dev
                if dev > COVARIANCE_TOL:
                    witness = {"channel": str(ch), "phi": phi, "deviation": dev}
    return SuiteResult("covariance", witness is None,
                       {"channels": len(chans), "samples": samples, "max_deviation": worst}, witness)


def additivity_suite(n_max: int = 8, seed: int = DEFAULT_SEED, states: int = 100) -> SuiteResult:
    """ergotropy(rho^{(x)n}) == n ergotropy(rho) for random qubit rho, via dense 2^n matrices."""
    rng = np.random.default_rng(seed)
    hams = {n: total_hamiltonian(n) for n in range(1, n_max + 1)}
    worst = 0.0
    witness = None
    for idx in range(states):
        rho = random_density(2, rng)
        single = ergotropy(rho, H_QUBIT).ergotropy
        big = rho
        for n in range(2, n_max + 1):
            big = tensor(big, rho)
            dev = abs(ergotropy(big, hams[n]).ergotropy - n * single)
            if dev > worst:
                worst = dev
                if dev > ADDITIVITY_TOL and witness is None:
                    witness = {"state_index": idx, "n": n, "deviation": dev}
    return SuiteResult("additivity", witness is None,
                       {"states": states, "n_max": n_max, "max_deviation": worst}, witness)


def monotonicity_suite(seed: int = DEFAULT_SEED, n_max: int = 3, energies: Sequence[float] = (0.5, 1.0),
                       samples: int = 10_000, channels: Sequence[QubitChannel] = MONOTONICITY_CHANNELS) -> SuiteResult:
    cases = [(ch, E) for ch in channels for E in energies]
    results = parallel_map(lambda c: monotonicity_check(c[0], c[1], n_max, samples, seed), cases)
    rows = []
    witness = None
    for (ch, E), res in zip(cases, results):
        rows.append({"channel": str(ch), "E": E, "estimates": list(res.estimates), "ok": res.ok})
        if not res.ok and witness is None:
            witness = {"channel": str(ch), "E": E, **res.witness}
    return SuiteResult("monotonicity", witness is None,
                       {"n_max": n_max, "samples": samples, "cases": rows}, witness)


def random_piecewise_curve(rng: np.random.Generator, points: int = 41) -> tuple[np.ndarray, np.ndarray]:
    """Random curve on [0, 1] with f(0) = 0, built from a few random linear/quadratic pieces."""
    x = np.linspace(0.0, 1.0, points)
    knots = np.sort(rng.uniform(0.0, 1.0, rng.integers(1, 5)))
    y = np.zeros_like(x)
    for k in knots:
        y += rng.normal() * np.clip(x - k, 0.0, None) + rng.normal() * np.clip(x - k, 0.0, None) ** 2
    y += rng.normal() * x + 0.3 * rng.normal() * x**2
    y[0] = 0.0
    return x, y


def brute_force_envelope(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """max over two-point mixtures p f(a) + (1-p) f(b) with p a + (1-p) b <= x."""
    out = np.empty_like(y)
    a, b = x[:, None], x[None, :]
    ya, yb = y[:, None], y[None, :]
    for k, e in enumerate(x):
        best = y[x <= e].max()
        # budget binding: p a + (1 - p) b = e with a <= e < b
        ok = (a <= e) & (b > e)
        if ok.any():
            p = np.where(ok, (b - e) / np.where(ok, b - a, 1.0), 0.0)
            best = max(best, float(np.max(np.where(ok, p * ya + (1.0 - p) * yb, -np.inf))))
        out[k] = best
    return out


def envelope_suite(seed: int = DEFAULT_SEED, curves: int = 100, points: int = 41) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    witness = None
    for idx in range(curves):
        x, y = random_piecewise_curve(rng, points)
        dev = float(np.max(np.abs(concave_envelope(x, y) - brute_force_envelope(x, y))))
        if dev > worst:
            worst = dev
            if dev > ENVELOPE_TOL and witness is None:
                witness = {"curve_index": idx, "deviation": dev}
    return SuiteResult("envelope", witness is None,
                       {"curves": curves, "points": points, "max_deviation": worst}, witness)


def theorem1_suite(n_gamma: int = 20, n_other: int = 10) -> SuiteResult:
    """Closed-form MAWERs vs the numeric small-energy slope of chi.

    ADC on ``n_gamma`` damping values, GADC on an ``n_gamma`` x ``n_other``
    (gamma, eta) grid and dephasing ADC on an ``n_gamma`` x ``n_gamma``
    (kappa, gamma) grid that skips a thin band around the regime boundary.
    """
    gammas = np.linspace(0.0, 1.0, n_gamma)
    cases: list[tuple[QubitChannel, Flavor]] = [(adc(float(g)), Flavor.LOC) for g in gammas]
    cases += [(gadc(float(g), float(eta)), Flavor.LOC_SEP)
              for g in gammas for eta in np.linspace(0.0, 0.5, n_other)]
    skipped = 0
    for k in np.linspace(0.0, 1.0, n_gamma):
        for g in gammas:
            if abs(k * (1.0 - g) - g) < BOUNDARY_BAND:
                skipped += 1
                continue
            cases.append((dephadc(float(k), float(g)), Flavor.LOC))
    devs = parallel_map(lambda c: abs(mawer_numeric(c[0]) - mawer_closed_form(c[0], c[1])), cases)
    i = int(np.argmax(devs))
    worst = float(devs[i])
    witness = None
    if worst >= THEOREM1_TOL:
        ch = cases[i][0]
        witness = {"channel": str(ch), "closed_form": mawer_closed_form(ch, cases[i][1]),
                   "numeric": mawer_numeric(ch), "regime": dephasing_regime(ch)}
    return SuiteResult("theorem1", witness is None,
                       {"cases": len(cases), "skipped_boundary": skipped, "max_deviation": worst}, witness)


def superadditivity_suite(channels: Optional[Sequence[QubitChannel]] = None,
                          energies: Optional[Sequence[float]] = None,
                          resolution: int = 500) -> SuiteResult:
    if channels is None:
        channels = [gadc(g, eta) for g in SUPERADDITIVITY_GAMMAS for eta in SUPERADDITIVITY_ETAS]
    if energies is None:
        energies = SUPERADDITIVITY_ENERGIES
    cases = [(ch, e) for ch in channels for e in energies]
    results = parallel_map(lambda c: superadditivity_search(c[0], c[1], resolution), cases)
    rows = []
    witness = None
    best = -math.inf
    for (ch, e), res in zip(cases, results):
        rows.append({"channel": str(ch), "energy": e, "best_gap": res.best_gap, "family_gap": res.family_gap})
        best = max(best, res.best_gap)
        if res.violation and witness is None:
            witness = {"channel": str(ch), "energy": e, "best_gap": res.best_gap, **res.argmax_params}
    return SuiteResult("superadditivity", witness is None,
                       {"resolution": resolution, "best_gap": best, "cells": rows}, witness)


def run_suite(name: str, *, seed: int = DEFAULT_SEED, n: int = 8, grid: tuple[int, int] = (20, 10),
              channel: Optional[QubitChannel] = None, energy: Optional[float] = None,
              resolution: int = 500, samples: int = 10_000) -> list[SuiteResult]:
    if name == "all":
        out: list[SuiteResult] = []
        for suite in SUITES:
            out += run_suite(suite, seed=seed, n=n, grid=grid, channel=channel, energy=energy,
                             resolution=resolution, samples=samples)
        return out
    if name == "covariance":
        return [covariance_suite(seed)]
    if name == "additivity":
        return [additivity_suite(n, seed)]
    if name == "monotonicity":
        chans = MONOTONICITY_CHANNELS if channel is None else (channel,)
        energies = (0.5, 1.0) if energy is None else (energy,)
        return [monotonicity_suite(seed, energies=energies, samples=samples, channels=chans)]
    if name == "envelope":
        return [envelope_suite(seed)]
    if name == "theorem1":
        return [theorem1_suite(*grid)]
    if name == "superadditivity":
        chans = None if channel is None else [channel]
        energies = None if energy is None else [energy]
        return [superadditivity_suite(chans, energies, resolution)]
    raise ValueError(f"unknown suite {name!r}")
