"""Ergotropy-family functionals: passive energy, ergotropy, total ergotropy,
local ergotropy and work extractable with a thermal bath.

Entropies are in nats throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    ValidationError,
    as_matrix,
    check_density,
    check_hermitian,
    eigvals_hermitian,
    num_qubits,
    partial_trace,
    von_neumann_entropy,
)


@dataclass(frozen=True)
class ErgotropyReport:
    """Result of one ergotropy evaluation.

    ``input_energy`` is the mean energy fed into a channel when the report
    describes a channel output; for a bare state it equals ``output_energy``.
    """

    input_energy: float
    output_energy: float
    ergotropy: float
    passive_energy: float
    entropy_nats: float


@dataclass(frozen=True)
class GibbsState:
    populations: np.ndarray
    energy: float
    entropy_nats: float


def energy_spectrum(h) -> np.ndarray:
    """Ascending eigenvalues of a Hamiltonian, shifted so the ground level is 0."""
    e = _levels(h)
    return e - e[0]


def _levels(h) -> np.ndarray:
    a = np.asarray(h)
    if a.ndim == 2:
        a = check_hermitian(a)
        if np.count_nonzero(a - np.diag(np.diagonal(a))) == 0:
            e = np.sort(np.diagonal(a).real)
        else:
            e = eigvals_hermitian(a)
    else:
        e = np.sort(np.asarray(a, dtype=float))
    return e


def passive_energy(state_spectrum, energies) -> float:
    """Energy of the passive state: populations descending against levels ascending."""
    lam = np.asarray(state_spectrum, dtype=float)
    en = np.asarray(energies, dtype=float)
    if lam.shape != en.shape:
        raise ValidationError(f"spectrum length {lam.size} != number of levels {en.size}")
    if abs(lam.sum() - 1.0) > 1e-9:
        raise ValidationError(f"state spectrum sums to {lam.sum()!r}, expected 1")
    return float(np.dot(np.sort(lam)[::-1], np.sort(en)))


def _mean_energy(rho: np.ndarray, h: np.ndarray) -> float:
    return float(np.real(np.einsum("ij,ji->", rho, h)))


def ergotropy(rho, h, input_energy: Optional[float] = None) -> ErgotropyReport:
    """Mean energy minus passive energy of ``rho`` under Hamiltonian ``h``."""
    rho = check_density(rho)
    h = check_hermitian(h)
    if rho.shape != h.shape:
        raise ValidationError(f"state {rho.shape} and Hamiltonian {h.shape} differ in dimension")
    lam = np.clip(eigvals_hermitian(rho), 0.0, None)
    lam = lam / lam.sum()
    raw = _levels(h)
    levels = raw - raw[0]
    e_out = _mean_energy(rho, h) - float(raw[0])
    pas = passive_energy(lam, levels)
    return ErgotropyReport(
        input_energy=e_out if input_energy is None else float(input_energy),
        output_energy=e_out,
        ergotropy=e_out - pas,
        passive_energy=pas,
        entropy_nats=von_neumann_entropy(lam),
    )


def ergotropy_qubit(rho11: float, lambda_min: float) -> float:
    """Qubit ergotropy under h = |1><1|: excited population minus smallest eigenvalue."""
    if not 0.0 <= rho11 <= 1.0:
        raise ValidationError(f"rho11 must be in [0, 1], got {rho11}")
    if not 0.0 <= lambda_min <= 0.5:
        raise ValidationError(f"lambda_min must be in [0, 1/2], got {lambda_min}")
    return rho11 - lambda_min


def gibbs_state(beta: float, energies) -> GibbsState:
    """Thermal populations, mean energy and entropy at inverse temperature ``beta``.

    ``beta = math.inf`` gives the ground state (uniform over a degenerate ground level).
    """
    en = np.sort(np.asarray(energies, dtype=float))
    en = en - en[0]
    if beta < 0:
        raise ValidationError(f"beta must be >= 0, got {beta}")
    if math.isinf(beta):
        w = (en == 0.0).astype(float)
    else:
        w = np.exp(-beta * en)
    p = w / w.sum()
    return GibbsState(populations=p, energy=float(np.dot(p, en)), entropy_nats=von_neumann_entropy(p))


def _beta_for_entropy(target: float, levels: np.ndarray) -> float:
    """Inverse temperature whose Gibbs entropy equals ``target`` (bisection)."""
    s_max = math.log(levels.size)
    s_inf = math.log(int(np.count_nonzero(levels == 0.0)))
    if target >= s_max:
        return 0.0
    if target <= s_inf:
        return math.inf
    lo, hi = 0.0, 1.0
    while gibbs_state(hi, levels).entropy_nats >= target:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            return math.inf
    # run to full float resolution: near beta=0 the entropy is flat in beta,
    # so an entropy-residual stopping rule alone leaves ~1e-6 energy error
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if gibbs_state(mid, levels).entropy_nats > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def total_ergotropy(rho, h) -> float:
    """Regularized (many-copy) ergotropy: energy minus Gibbs energy at equal entropy."""
    rep = ergotropy(rho, h)
    levels = energy_spectrum(h)
    beta = _beta_for_entropy(rep.entropy_nats, levels)
    return rep.output_energy - gibbs_state(beta, levels).energy


def local_ergotropy_product(rho, h=None) -> float:
    """Sum of single-site ergotropies of the marginals of an n-qubit state."""
    rho = as_matrix(rho)
    n = num_qubits(rho.shape[0])
    h = np.diag([0.0, 1.0]).astype(complex) if h is None else check_hermitian(h)
    total = 0.0
    for site in range(n):
        marg = partial_trace(rho, [2] * n, [site])
        total += ergotropy(marg, h).ergotropy
    return total


def thermal_extractable_work(rho, h, beta: float) -> float:
    """Work extractable with a perfect bath at ``beta``: free-energy excess over equilibrium."""
    if not beta > 0:
        raise ValidationError(f"beta must be > 0, got {beta}")
    rep = ergotropy(rho, h)
    levels = energy_spectrum(h)
    if math.isinf(beta):
        return rep.output_energy
    log_z = float(np.log(np.sum(np.exp(-beta * levels))))
    return rep.output_energy - (rep.entropy_nats - log_z) / beta
