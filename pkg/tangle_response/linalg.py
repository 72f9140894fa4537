"""
Small-dimension complex dense linear algebra.

Everything here works on at most 8x8 matrices: tensor products, partial
traces, Hermitian spectra, PSD square roots and the Takagi factorization of
complex symmetric matrices. Qubit 1 is the leftmost tensor factor, i.e. the
most significant bit of a basis index (|abc> -> 4a + 2b + c).
"""

import logging
from typing import Iterable, List, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

logger = logging.getLogger(__name__)

# Tolerances shared by the whole package
HERMITIAN_TOL = 1e-10
CLIP_TOL = 1e-12
NORM_TOL = 1e-12
RECON_TOL = 1e-8
DEGENERACY_TOL = 1e-9

SeedLike = Union[int, np.random.Generator]

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# The three-tangle uses sigma_0 = i * identity
SIGMA_0 = 1j * I2


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"Expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("Matrix entries must be finite")
    return m


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {m.shape}")


def kron(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def kron_all(*factors) -> np.ndarray:
    """Kronecker product of several factors, leftmost factor = qubit 1."""
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    m = _as_matrix(h)
    return m.shape[0] == m.shape[1] and float(np.max(np.abs(m - m.conj().T), initial=0.0)) <= tol


def partial_trace(rho, n_qubits: int, traced: Iterable[int]) -> np.ndarray:
    """
    Trace out a set of qubits.

    Args:
        rho: 2^n x 2^n operator
        n_qubits: number of qubits n
        traced: 1-based indices of the qubits to trace out

    Returns:
        Reduced operator on the remaining qubits, in their original order
    """
    m = _as_matrix(rho)
    _require_square(m)
    dim = 2 ** n_qubits
    if m.shape[0] != dim:
        raise ValueError(f"Operator of shape {m.shape} does not act on {n_qubits} qubits")

    indices = sorted(set(int(k) for k in traced), reverse=True)
    for k in indices:
        if not 1 <= k <= n_qubits:
            raise ValueError(f"Qubit index {k} out of range 1..{n_qubits}")

    t = m.reshape([2] * (2 * n_qubits))
    remaining = n_qubits
    for k in indices:
        axis = k - 1
        t = np.trace(t, axis1=axis, axis2=axis + remaining)
        remaining -= 1

    d = 2 ** remaining
    return t.reshape(d, d)


def _fix_column_phases(vecs: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component of every column real positive."""
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            lead = col[nz[0]]
            out[:, j] = col * (abs(lead) / lead)
    return out


def herm_eig(h) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix.

    Returns:
        (ascending real eigenvalues, matrix whose columns are orthonormal
        eigenvectors with the first nonzero component real positive)
    """
    m = _as_matrix(h)
    _require_square(m)
    if not is_hermitian(m):
        raise ValueError("herm_eig requires a Hermitian matrix")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w, _fix_column_phases(v)


def sqrt_psd(h, cutoff: float = 0.0) -> np.ndarray:
    """
    Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues at or below cutoff * max(1, |w|_max) are treated as zero.
    """
    w, v = herm_eig(h)
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    if w.size and w[0] < -CLIP_TOL * scale:
        raise ValueError(f"Matrix is not positive semidefinite (eigenvalue {w[0]:.3e})")
    root = np.sqrt(np.where(w > cutoff * scale, w, 0.0))
    return (v * root) @ v.conj().T


def takagi(s) -> Tuple[np.ndarray, np.ndarray]:
    """
    Takagi factorization s = u^T diag(omega) u of a complex symmetric matrix.

    The singular vectors of s are paired up within each (numerically)
    degenerate singular subspace; the symmetric unitary relating the left and
    right bases is square-rooted to obtain the Takagi vectors.

    Args:
        s: complex symmetric matrix

    Returns:
        (unitary u, omega) with omega the descending singular values of s
        stored as complex numbers (their phases are absorbed in u)
    """
    m = _as_matrix(s)
    _require_square(m)
    if float(np.max(np.abs(m - m.T), initial=0.0)) >= HERMITIAN_TOL:
        raise ValueError("takagi requires a complex symmetric matrix")
    m = (m + m.T) / 2

    v, sv, wh = np.linalg.svd(m)
    w = wh.conj().T
    n = sv.size
    scale = max(1.0, float(sv[0])) if n else 1.0

    groups: List[List[int]] = []
    for i in range(n):
        if groups and sv[groups[-1][-1]] - sv[i] <= DEGENERACY_TOL * scale:
            groups[-1].append(i)
        else:
            groups.append([i])

    q = np.zeros((n, n), dtype=complex)
    for idx in groups:
        vb = v[:, idx]
        if sv[idx[0]] <= DEGENERACY_TOL * scale:
            # null space: any orthonormal basis will do
            q[:, idx] = vb
            continue
        z = vb.T @ w[:, idx]
        q[:, idx] = vb @ np.asarray(scipy.linalg.sqrtm(z)).conj()

    u = q.T
    residual = float(np.max(np.abs((u.T * sv) @ u - m), initial=0.0))
    if residual > RECON_TOL * scale:
        logger.warning(f"takagi reconstruction residual {residual:.3e}")
    return u, sv.astype(complex)


def make_rng(seed: SeedLike, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, stream); streams are independent."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def haar_isometry(m: int, r: int, seed: SeedLike) -> np.ndarray:
    """
    First r columns of a Haar-random m x m unitary.

    Args:
        m: number of rows
        r: number of orthonormal columns (r <= m)
        seed: integer seed or an existing generator

    Returns:
        m x r complex matrix V with V^dagger V = identity
    """
    if r > m:
        raise ValueError(f"Cannot build an isometry with {r} columns in dimension {m}")
    rng = make_rng(seed)
    if m == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1), dtype=complex)
    u = unitary_group.rvs(m, random_state=rng)
    return np.ascontiguousarray(u[:, :r])


def orthonormalize(z: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning z, with the QR phase ambiguity removed."""
    qm, rm = np.linalg.qr(z)
    d = np.diagonal(rm)
    phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return qm * phases


def trace_norm(a) -> float:
    return float(np.sum(np.linalg.svd(_as_matrix(a), compute_uv=False)))
