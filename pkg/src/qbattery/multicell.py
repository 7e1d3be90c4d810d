"""Finite-n brute force for batteries of n qubit cells under Lambda^(x)n.

Two evaluation paths are provided for product inputs: a fast one that only
sorts products of per-site output eigenvalues (no 2^n matrices), and a dense
one that builds the full output density matrix. They are cross-checked in
the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Optional, Sequence

import numpy as np

from .capacitance import max_output_ergotropy, optimal_input_energy
from .channels import (
    QubitChannel,
    coherent_ket,
    coherent_state,
    output_eigenvalues,
    output_energy,
    superoperator,
)
from .ergotropy import ergotropy, local_ergotropy_product
from .linalg import (
    MAX_QUBITS,
    ValidationError,
    apply_all_sites,
    hamming_energies,
    tensor,
)

MAX_FAST_SITES = 20
GAP_THRESHOLD = 1e-9


@dataclass(frozen=True)
class ProductInputSpec:
    per_site_energies: tuple[float, ...]
    per_site_phases: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        es = tuple(float(e) for e in self.per_site_energies)
        if not es:
            raise ValidationError("a product input needs at least one site")
        if any(not 0.0 <= e <= 1.0 for e in es):
            raise ValidationError(f"per-site energies must lie in [0, 1], got {es}")
        object.__setattr__(self, "per_site_energies", es)
        if self.per_site_phases is None:
            object.__setattr__(self, "per_site_phases", (0.0,) * len(es))
        else:
            ph = tuple(float(p) for p in self.per_site_phases)
            if len(ph) != len(es):
                raise ValidationError("need one phase per site")
            object.__setattr__(self, "per_site_phases", ph)

    @property
    def n(self) -> int:
        return len(self.per_site_energies)

    @property
    def mean_energy(self) -> float:
        return sum(self.per_site_energies) / self.n

    @classmethod
    def uniform(cls, n: int, e: float) -> "ProductInputSpec":
        return cls((e,) * n)


def _sorted_levels(n: int) -> np.ndarray:
    return np.repeat(np.arange(n + 1, dtype=float), [comb(n, k) for k in range(n + 1)])


def product_output_ergotropy(ch: QubitChannel, spec: ProductInputSpec) -> float:
    """Ergotropy of the channel output of a pure product input under H^(n).

    The output is a product of qubit states, so its spectrum is the set of
    products of per-site (lambda+, lambda-) pairs; the phases do not enter.
    """
    n = spec.n
    if n > MAX_FAST_SITES:
        raise ValidationError(f"fast path supports at most {MAX_FAST_SITES} sites, got {n}")
    spectrum = np.ones(1)
    for e in spec.per_site_energies:
        spectrum = np.outer(spectrum, output_eigenvalues(ch, e)).ravel()
    energy = sum(output_energy(ch, e) for e in spec.per_site_energies)
    passive = float(np.dot(np.sort(spectrum)[::-1], _sorted_levels(n)))
    return energy - passive


def product_input_state(spec: ProductInputSpec) -> np.ndarray:
    if spec.n > MAX_QUBITS:
        raise ValidationError(f"dense path supports at most {MAX_QUBITS} qubits")
    return tensor(*(coherent_state(e, p) for e, p in zip(spec.per_site_energies, spec.per_site_phases)))


def dense_output_state(ch: QubitChannel, rho_in) -> np.ndarray:
    """Lambda^(x)n applied to an arbitrary (possibly entangled) n-qubit state."""
    return apply_all_sites(superoperator(ch), rho_in)


def dense_output_ergotropy(ch: QubitChannel, rho_in) -> float:
    out = dense_output_state(ch, rho_in)
    n = int(np.log2(out.shape[0]))
    return ergotropy(out, np.diag(hamming_energies(n))).ergotropy


def _batch_ergotropy(rho_out: np.ndarray, n: int) -> np.ndarray:
    """Ergotropies of a stack of n-qubit states, shape (N, 2^n, 2^n)."""
    levels = _sorted_levels(n)
    diag = hamming_energies(n)
    lam = np.linalg.eigvalsh(rho_out)[:, ::-1]
    energy = np.einsum("nii,i->n", rho_out, diag).real
    return energy - lam @ levels


# --------------------------------------------------------------------------
# classical (coherence-free) inputs


@dataclass(frozen=True)
class ClassicalAnalysis:
    ergotropy: float
    local_ergotropy: float
    excited_sites: int
    n: int

    @property
    def rank_bound_applies(self) -> bool:
        k = self.excited_sites
        return self.n >= 2**k + k


def classical_input_state(E: float, n: int) -> np.ndarray:
    k = int(math.floor(E))
    if n < k:
        raise ValidationError(f"n = {n} cannot host floor(E) = {k} excited cells")
    one = np.diag([0.0, 1.0]).astype(complex)
    zero = np.diag([1.0, 0.0]).astype(complex)
    return tensor(*([one] * k + [zero] * (n - k)))


def classical_state_analysis(ch: QubitChannel, E: float, n: int) -> ClassicalAnalysis:
    """Global and local output ergotropy of |1>^floor(E) |0>^(n - floor(E)) (dense path)."""
    if E <= 0:
        raise ValidationError(f"E must be positive, got {E}")
    if n > MAX_QUBITS:
        raise ValidationError(f"dense path supports at most {MAX_QUBITS} qubits")
    k = int(math.floor(E))
    rho_in = classical_input_state(E, n)
    out = dense_output_state(ch, rho_in)
    glob = ergotropy(out, np.diag(hamming_energies(n))).ergotropy
    loc = local_ergotropy_product(out)
    return ClassicalAnalysis(ergotropy=glob, local_ergotropy=loc, excited_sites=k, n=n)


# --------------------------------------------------------------------------
# monotonicity in n


@dataclass(frozen=True)
class MonotonicityResult:
    ok: bool
    estimates: tuple[float, ...]
    witness: Optional[dict] = None
    seed: int = 0
    samples: int = 0

    def __bool__(self) -> bool:
        return self.ok


def random_pure_states_below(n: int, E: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Random n-qubit pure states with mean H^(n) energy at most E.

    Weights over Hamming-weight sectors are Dirichlet-drawn and, when their
    mean exceeds E, mixed with the ground sector so the energy lands on E;
    within each sector the amplitude vector is Haar-random.
    """
    dim = 1 << n
    weight = hamming_energies(n).astype(int)
    w = rng.dirichlet(np.ones(n + 1), size=count)
    mean = w @ np.arange(n + 1)
    scale = np.where(mean > E, E / np.where(mean > 0, mean, 1.0), 1.0)
    w = w * scale[:, None]
    w[:, 0] += 1.0 - w.sum(axis=1)
    psi = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    for k in range(n + 1):
        mask = weight == k
        norm = np.linalg.norm(psi[:, mask], axis=1)
        psi[:, mask] *= (np.sqrt(np.clip(w[:, k], 0.0, None)) / norm)[:, None]
    return psi


def _product_grid_best(ch: QubitChannel, n: int, E: float, resolution: int) -> tuple[float, tuple[float, ...]]:
    ticks = np.linspace(0.0, 1.0, resolution + 1)
    candidates = {tuple(sorted(c, reverse=True)) for c in product(ticks, repeat=n) if sum(c) <= E + 1e-12}
    e_star = optimal_input_energy(ch, min(E, 1.0))
    candidates.add((e_star,) + (0.0,) * (n - 1))
    candidates.add((E / n,) * n)
    best, arg = -math.inf, None
    for c in sorted(candidates):
        val = product_output_ergotropy(ch, ProductInputSpec(c))
        if val > best:
            best, arg = val, c
    return best, arg


def estimate_max_ergotropy(ch: QubitChannel, E: float, n: int, samples: int,
                           rng: np.random.Generator, product_resolution: int = 20,
                           seed_state: Optional[np.ndarray] = None) -> tuple[float, np.ndarray, str]:
    """Sampled lower estimate of the n-cell maximum output ergotropy at energy <= E.

    Returns (value, arg-max input ket, origin). ``seed_state`` is an extra
    candidate ket (typically the previous n's winner padded with |0>).
    """
    if n > 8:
        raise ValidationError("sampled n-cell estimates are limited to n <= 8")
    if E > n:
        raise ValidationError(f"E = {E} exceeds the capacity of {n} cells")
    best, spec = _product_grid_best(ch, n, E, product_resolution)
    best_ket = tensor(*(coherent_ket(e) for e in spec)).reshape(-1) if n > 1 else coherent_ket(spec[0])
    origin = "product"
    kets = []
    if samples and n > 1:
        kets.append(random_pure_states_below(n, E, samples, rng))
    if seed_state is not None:
        kets.append(np.asarray(seed_state, dtype=complex).reshape(1, -1))
    if kets:
        psi = np.concatenate(kets)
        rho = np.einsum("ni,nj->nij", psi, psi.conj())
        vals = _batch_ergotropy(apply_all_sites(superoperator(ch), rho), n)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_ket = float(vals[i]), psi[i]
            origin = "seed" if seed_state is not None and i == len(psi) - 1 else "sampled"
    return best, best_ket, origin


def monotonicity_check(ch: QubitChannel, E: float, n_max: int = 3, samples: int = 10_000,
                       seed: int = 42, tol: float = 1e-6, product_resolution: int = 20) -> MonotonicityResult:
    """Check that the sampled n-cell optimum is non-decreasing for n = ceil(E) .. n_max.

    The estimate for each n is a lower bound on the true optimum (product
    grid + random entangled inputs + previous winner padded with |0>), not
    the true supremum.
    """
    if n_max > 8:
        raise ValidationError("n_max is limited to 8")
    rng = np.random.default_rng(seed)
    n_min = max(1, math.ceil(E))
    estimates: list[float] = []
    prev_ket = None
    witness = None
    for n in range(n_min, n_max + 1):
        seed_ket = None if prev_ket is None else np.kron(prev_ket, np.array([1.0, 0.0]))
        val, ket, _ = estimate_max_ergotropy(ch, E, n, samples, rng, product_resolution, seed_ket)
        if estimates and val < estimates[-1] - tol and witness is None:
            witness = {"n": n, "estimate": val, "previous": estimates[-1]}
        estimates.append(val)
        prev_ket = ket
    return MonotonicityResult(ok=witness is None, estimates=tuple(estimates), witness=witness,
                              seed=seed, samples=samples)


# --------------------------------------------------------------------------
# two-qubit superadditivity search


@dataclass(frozen=True)
class SearchResult:
    best_gap: float
    argmax_params: dict
    grid_spec: dict
    family_gap: float = field(default=math.nan)

    @property
    def violation(self) -> bool:
        return self.best_gap > GAP_THRESHOLD


_H2 = np.diag([0.0, 1.0, 1.0, 2.0])


def two_qubit_coefficients(e: float, s, t, sign=1.0) -> np.ndarray:
    """Real amplitudes (c00, c01, c10, c11) with sum c^2 = 1 and <H^(2)> = 2e.

    ``s`` = |c01|^2 + |c10|^2 in [0, min(2e, 2 - 2e)], ``t`` splits s between
    |01> and |10>, ``sign`` is the sign of c11 relative to the others.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    p11 = np.clip(e - s / 2.0, 0.0, None)
    p00 = np.clip(1.0 - e - s / 2.0, 0.0, None)
    c = np.stack([np.sqrt(p00), np.sqrt(t * s), np.sqrt((1.0 - t) * s), sign * np.sqrt(p11)], axis=-1)
    return c


def two_qubit_gap(ch: QubitChannel, coeffs) -> float:
    """Output ergotropy of the two-qubit input minus twice the single-shot optimum at half its energy."""
    c = np.asarray(coeffs, dtype=complex).reshape(4)
    c = c / np.linalg.norm(c)
    rho = np.outer(c, c.conj())
    e_total = float(np.real(np.vdot(c, _H2 @ c)))
    erg = dense_output_ergotropy(ch, rho)
    return erg - 2.0 * max_output_ergotropy(ch, min(max(e_total / 2.0, 0.0), 1.0))


def superadditivity_search(ch: QubitChannel, e: float, grid_resolution: int = 500,
                           signs: Sequence[float] = (1.0, -1.0), chunk: int = 65_536) -> SearchResult:
    """Deterministic grid scan for two-qubit inputs that beat two single-shot uses.

    Scans every real-amplitude pure state at per-cell energy ``e`` on a
    ``grid_resolution`` x ``grid_resolution`` grid for each sign of c11; with
    local Z rotations removed this sign is the only remaining real phase.
    """
    if not 0.0 < e <= 1.0:
        raise ValidationError(f"per-cell energy must lie in (0, 1], got {e}")
    if grid_resolution < 2:
        raise ValidationError("grid_resolution must be at least 2")
    s_max = min(2.0 * e, 2.0 - 2.0 * e)
    s_axis = np.linspace(0.0, s_max, grid_resolution)
    t_axis = np.linspace(0.0, 1.0, grid_resolution)
    S, T = np.meshgrid(s_axis, t_axis, indexing="ij")
    S, T = S.ravel(), T.ravel()
    single = 2.0 * max_output_ergotropy(ch, e)
    sup = superoperator(ch)
    best, best_arg = -math.inf, None
    for sign in signs:
        coeffs = two_qubit_coefficients(e, S, T, sign).astype(complex)
        for lo in range(0, coeffs.shape[0], chunk):
            c = coeffs[lo:lo + chunk]
            rho = np.einsum("ni,nj->nij", c, c.conj())
            gaps = _batch_ergotropy(apply_all_sites(sup, rho), 2) - single
            i = int(np.argmax(gaps))
            if gaps[i] > best:
                k = lo + i
                best = float(gaps[i])
                best_arg = {
                    "coefficients": tuple(float(x) for x in c[i].real),
                    "energy": e,
                    "s": float(S[k]),
                    "t": float(T[k]),
                    "sign": float(sign),
                }
    family = two_qubit_gap(ch, two_qubit_coefficients(e, 0.0, 0.0, 1.0))
    grid_spec = {"resolution": grid_resolution, "signs": tuple(float(x) for x in signs),
                 "s_range": (0.0, s_max), "t_range": (0.0, 1.0), "points": len(signs) * S.size}
    return SearchResult(best_gap=best, argmax_params=best_arg, grid_spec=grid_spec, family_gap=family)
