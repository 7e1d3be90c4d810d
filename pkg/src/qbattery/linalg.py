"""Dense Hermitian linear algebra for small multi-qubit registers.

Matrices are plain ``numpy`` complex arrays. Superoperators act on
column-stacked vectorizations: ``vec(A)[i + d*j] = A[i, j]``, so that
``vec(A @ X @ B) = kron(B.T, A) @ vec(X)``.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
MAX_QUBITS = 12


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = as_matrix(m)
    err = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if err > tol:
        raise ValidationError(f"matrix is not Hermitian (max asymmetry {err:.3g})")
    return a


def check_density(rho, tol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, eigenvalues >= -tol."""
    a = check_hermitian(rho)
    tr = np.trace(a).real
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
    lam_min = np.linalg.eigvalsh(a)[0]
    if lam_min < -tol:
        raise ValidationError(f"density matrix has negative eigenvalue {lam_min!r}")
    return a


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValidationError(f"dimension {dim} is not a power of 2")
    if n > MAX_QUBITS:
        raise ValidationError(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
    return n


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and a unitary whose columns are the
    matching eigenvectors, so ``m == V @ diag(w) @ V.conj().T``.
    The LAPACK driver is deterministic, so tied eigenvalues come back in a
    reproducible order.
    """
    a = check_hermitian(m)
    if a.shape[0] > 1 << MAX_QUBITS:
        raise ValidationError(f"dimension {a.shape[0]} exceeds 2**{MAX_QUBITS}")
    # symmetrize so round-off in the lower triangle cannot leak in
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return w, v


def eigvals_hermitian(m) -> np.ndarray:
    a = check_hermitian(m)
    return np.linalg.eigvalsh(0.5 * (a + a.conj().T))


def tensor(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices (left factor = site 0)."""
    if not ops:
        raise ValidationError("tensor() needs at least one operand")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def hamming_energies(n: int) -> np.ndarray:
    """Diagonal of H^(n) = sum_i |1><1|_i in the computational basis."""
    idx = np.arange(1 << n)
    return np.array([bin(i).count("1") for i in idx], dtype=float)


def total_hamiltonian(n: int, h=None) -> np.ndarray:
    """Non-interacting Hamiltonian h_1 + ... + h_n (default h = |1><1|)."""
    if n < 1 or n > MAX_QUBITS:
        raise ValidationError(f"n must be in [1, {MAX_QUBITS}], got {n}")
    if h is None:
        return np.diag(hamming_energies(n)).astype(complex)
    h = check_hermitian(h)
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    total = np.zeros((d**n, d**n), dtype=complex)
    for site in range(n):
        total += tensor(*[h if k == site else eye for k in range(n)])
    return total


def partial_trace(rho, site_dims: Sequence[int], keep) -> np.ndarray:
    """Reduced state on the sites listed in ``keep`` (kept in ascending order)."""
    a = as_matrix(rho)
    dims = [int(d) for d in site_dims]
    if int(np.prod(dims)) != a.shape[0]:
        raise ValidationError(f"site dims {dims} do not multiply to {a.shape[0]}")
    keep = sorted({int(k) for k in keep})
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"keep indices {keep} out of range for {n} sites")
    t = a.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # contract traced sites pairwise, highest first so axis numbers stay valid
    for k in sorted(traced, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + m)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def vec(m) -> np.ndarray:
    return np.asarray(m).T.reshape(-1)


def unvec(v) -> np.ndarray:
    v = np.asarray(v)
    d = int(round(np.sqrt(v.size)))
    return v.reshape(d, d).T


def superop_tensor(s) -> np.ndarray:
    """Reshape a d^2 x d^2 superoperator into T[i, j, k, l] with out[i,j] = sum T rho[k,l]."""
    s = np.asarray(s, dtype=complex)
    d = int(round(np.sqrt(s.shape[0])))
    # flat column-stacked index i + d*j reshapes C-order to axes (j, i)
    return s.reshape(d, d, d, d).transpose(1, 0, 3, 2)


def apply_superop(s, rho) -> np.ndarray:
    return unvec(np.asarray(s, dtype=complex) @ vec(as_matrix(rho)))


def apply_on_site(s, rho, site: int) -> np.ndarray:
    """Apply a single-qubit superoperator to one site of an n-qubit state.

    ``rho`` may also carry leading batch axes, shape (..., 2**n, 2**n).
    """
    s = np.asarray(s, dtype=complex)
    if s.shape != (4, 4):
        raise ValidationError(f"single-site superoperator must be 4x4, got {s.shape}")
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[-1]
    n = num_qubits(dim)
    if not 0 <= site < n:
        raise ValidationError(f"site {site} out of range for {n} qubits")
    batch = rho.shape[:-2]
    t = rho.reshape(batch + (2,) * (2 * n))
    nb = len(batch)
    out = np.tensordot(t, superop_tensor(s), axes=([nb + site, nb + n + site], [2, 3]))
    # tensordot appends the (i, j) output legs last; move them back into place
    out = np.moveaxis(out, [-2, -1], [nb + site, nb + n + site])
    return out.reshape(rho.shape)


def apply_all_sites(s, rho) -> np.ndarray:
    """Apply the same single-qubit superoperator independently on every site."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[-1])
    for site in range(n):
        rho = apply_on_site(s, rho, site)
    return rho


def choi_matrix(s) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) S(|i><j|) of a superoperator."""
    s = np.asarray(s, dtype=complex)
    d = int(round(np.sqrt(s.shape[0])))
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            choi += np.kron(e, apply_superop(s, e))
    return choi


def is_completely_positive(s, tol: float = 1e-10) -> bool:
    return bool(eigvals_hermitian(choi_matrix(s))[0] >= -tol)


def is_trace_preserving(s, tol: float = 1e-10) -> bool:
    s = np.asarray(s, dtype=complex)
    d = int(round(np.sqrt(s.shape[0])))
    # Tr[S(X)] = vec(I)^dagger S vec(X) for all X  <=>  vec(I)^T S == vec(I)^T
    ident = vec(np.eye(d))
    return bool(np.max(np.abs(ident @ s - ident)) <= tol)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix from the induced (Ginibre) measure."""
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def von_neumann_entropy(spectrum, base: float | None = None) -> float:
    """Entropy of a probability vector; 0 ln 0 = 0, negatives clipped."""
    p = np.clip(np.asarray(spectrum, dtype=float), 0.0, None)
    p = p[p > 0]
    s = float(-np.sum(p * np.log(p)))
    return s / np.log(base) if base else s
