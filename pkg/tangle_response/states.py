"""
Pure states, W-type noise operators and mixed states.

Two-qubit states live on |00>,|01>,|10>,|11>; three-qubit states on
|000>..|111> with qubit 1 the leftmost factor.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
import scipy.linalg

from .linalg import (
    CLIP_TOL, HERMITIAN_TOL, I2, NORM_TOL, SIGMA_X, SIGMA_Z, kron_all,
)
from .models import NoiseSpec, SymParams

logger = logging.getLogger(__name__)

_ANGLE_SLACK = 1e-12
_TWO_PI_THIRDS = 2 * math.pi / 3


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized state vector of an n-qubit register."""
    amplitudes: np.ndarray
    n_qubits: int = field(default=0)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        n = self.n_qubits or int(round(math.log2(max(amps.size, 1))))
        if amps.size != 2 ** n:
            raise ValueError(f"Ket of dimension {amps.size} is not a {n}-qubit state")
        if not np.all(np.isfinite(amps)):
            raise ValueError("Ket amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"Ket is not normalized (norm {norm:.15f})")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def normalized(cls, amplitudes) -> "Ket":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("Cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def inner(self, other: "Ket") -> complex:
        """<self|other>"""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class MixedState:
    """Density matrix (Hermitian, PSD, unit trace) of an n-qubit register."""
    rho: np.ndarray
    n_qubits: int = field(default=0)

    def __post_init__(self):
        m = np.asarray(self.rho, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"Density matrix must be square, got shape {m.shape}")
        n = self.n_qubits or int(round(math.log2(max(m.shape[0], 1))))
        if m.shape[0] != 2 ** n:
            raise ValueError(f"Density matrix of shape {m.shape} is not a {n}-qubit operator")
        if not np.all(np.isfinite(m)):
            raise ValueError("Density matrix entries must be finite")
        if float(np.max(np.abs(m - m.conj().T))) > HERMITIAN_TOL:
            raise ValueError("Density matrix is not Hermitian")
        m = (m + m.conj().T) / 2
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"Density matrix trace is {tr:.15f}, expected 1")
        w = np.linalg.eigvalsh(m)
        if w[0] < -CLIP_TOL * max(1.0, float(w[-1])):
            raise ValueError(f"Density matrix has a negative eigenvalue {w[0]:.3e}")
        object.__setattr__(self, "rho", _frozen(m))
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def pure(cls, ket: Ket) -> "MixedState":
        return cls(ket.projector(), ket.n_qubits)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)

    def rank(self, tol: float = 1e-12) -> int:
        return int(np.sum(self.eigenvalues() > tol))


def check_theta(theta: float) -> float:
    if not -_ANGLE_SLACK <= theta <= math.pi / 4 + _ANGLE_SLACK:
        raise ValueError(f"theta must lie in [0, pi/4], got {theta}")
    return float(theta)


def basis_ket(bits: str) -> Ket:
    """Computational basis state, e.g. basis_ket('011')."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"Invalid basis label {bits!r}")
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return Ket(amps, len(bits))


# --------------------------------------------------------------------------
# Two qubits
# --------------------------------------------------------------------------

def phi(theta: float) -> Ket:
    """cos(theta)|00> + sin(theta)|11>, theta in [0, pi/4]."""
    theta = check_theta(theta)
    return Ket(np.array([math.cos(theta), 0, 0, math.sin(theta)]), 2)


def phi_perp(k: int, theta: float = 0.0) -> Ket:
    """States orthogonal to phi(theta): Phi_0, Phi_1 = |01>, Phi_2 = |10>."""
    theta = check_theta(theta)
    if k == 0:
        return Ket(np.array([math.sin(theta), 0, 0, -math.cos(theta)]), 2)
    if k == 1:
        return basis_ket("01")
    if k == 2:
        return basis_ket("10")
    raise ValueError(f"phi_perp index must be 0, 1 or 2, got {k}")


def noise_op_2q() -> MixedState:
    """Two-qubit W-type noise (|01><01| + |10><10|) / 2."""
    rho = (phi_perp(1).projector() + phi_perp(2).projector()) / 2
    return MixedState(rho, 2)


# --------------------------------------------------------------------------
# Three qubits
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _w_vectors() -> Tuple[np.ndarray, np.ndarray]:
    w = np.zeros(8, dtype=complex)
    w[[1, 2, 4]] = 1 / math.sqrt(3)
    flip = kron_all(SIGMA_X, SIGMA_X, SIGMA_X)
    return _frozen(w), _frozen(flip @ w)


def w_state() -> Ket:
    """(|001> + |010> + |100>) / sqrt(3)"""
    return Ket(_w_vectors()[0], 3)


def w_bar() -> Ket:
    """Flipped W state (|110> + |101> + |011>) / sqrt(3)"""
    return Ket(_w_vectors()[1], 3)


def _rz(angle: float) -> np.ndarray:
    """exp(i * angle * sigma_z)"""
    return scipy.linalg.expm(1j * angle * SIGMA_Z)


@lru_cache(maxsize=None)
def _noise_basis_vectors() -> np.ndarray:
    w, wb = _w_vectors()
    a, b = _rz(_TWO_PI_THIRDS), _rz(-_TWO_PI_THIRDS)
    cols = [
        kron_all(a, b, I2) @ w,
        kron_all(b, a, I2) @ w,
        kron_all(I2, a, b) @ wb,
        kron_all(I2, b, a) @ wb,
    ]
    return _frozen(np.stack(cols, axis=1))


def noise_basis_matrix() -> np.ndarray:
    """8 x 4 matrix whose columns are Psi_1..Psi_4."""
    return _noise_basis_vectors()


def noise_basis(k: int) -> Ket:
    """
    Zero-tangle state Psi_k (k = 1..4) orthogonal to every symmetric state.

    Psi_1, Psi_2 are phase-rotated W states on qubits (1, 2); Psi_3, Psi_4
    are phase-rotated flipped W states on qubits (2, 3).
    """
    if k not in (1, 2, 3, 4):
        raise ValueError(f"noise_basis index must be 1..4, got {k}")
    return Ket(_noise_basis_vectors()[:, k - 1], 3)


def noise_op_3q(p: float = 0.5) -> MixedState:
    """Pi_W(p) = [p(P_1 + P_2) + (1 - p)(P_3 + P_4)] / 2; p = 1/2 is the plain W-type noise."""
    p = NoiseSpec(q=0.0, p=p).p
    basis = _noise_basis_vectors()
    weights = np.array([p, p, 1 - p, 1 - p]) / 2
    return MixedState((basis * weights) @ basis.conj().T, 3)


def sym_state(params: SymParams) -> Ket:
    """cos(a)|Wbar> + sin(a)(cos(b)|000> + sin(b) e^{i g}|111>)"""
    a, b, g = params.alpha, params.beta, params.gamma
    amps = math.cos(a) * _w_vectors()[1]
    amps[0] += math.sin(a) * math.cos(b)
    amps[7] += math.sin(a) * math.sin(b) * np.exp(1j * g)
    return Ket.normalized(amps)


def g_state(beta: float, gamma: float = 0.0) -> Ket:
    """Generalized GHZ state cos(b)|000> + sin(b) e^{i g}|111>."""
    return sym_state(SymParams(alpha=math.pi / 2, beta=beta, gamma=gamma))


def j_state(alpha: float) -> Ket:
    """W-like state cos(a)|Wbar> + sin(a)|000>."""
    return sym_state(SymParams(alpha=alpha, beta=0.0, gamma=0.0))


def g_tilde() -> Ket:
    """(|000> + |111>) / sqrt(2)"""
    amps = np.zeros(8, dtype=complex)
    amps[[0, 7]] = 1 / math.sqrt(2)
    return Ket(amps, 3)


def j_tilde() -> Ket:
    """(|000> + |110> + |101> + |011>) / 2"""
    amps = np.zeros(8, dtype=complex)
    amps[[0, 3, 5, 6]] = 0.5
    return Ket(amps, 3)


# --------------------------------------------------------------------------
# Mixing and rescaling
# --------------------------------------------------------------------------

def mix(pure: Ket, noise: MixedState, q: float) -> MixedState:
    """(1 - q)|pure><pure| + q * noise"""
    q = NoiseSpec(q=q).q
    if pure.dim != noise.dim:
        raise ValueError(f"Dimension mismatch: ket {pure.dim} vs noise {noise.dim}")
    return MixedState((1 - q) * pure.projector() + q * noise.rho, pure.n_qubits)


def local_A(x: complex) -> np.ndarray:
    """[x|0><0| + (1/x)|1><1|] on each of three qubits (determinant one)."""
    x = complex(x)
    if x == 0:
        raise ValueError("Rescaling parameter x must be nonzero")
    d = np.diag([x, 1 / x])
    return kron_all(d, d, d)


def rescale(rho: Union[MixedState, Ket], x: complex) -> MixedState:
    """A rho A^dagger / tr(A rho A^dagger)"""
    if isinstance(rho, Ket):
        rho = MixedState.pure(rho)
    a = local_A(x)
    out = a @ rho.rho @ a.conj().T
    out = (out + out.conj().T) / 2
    return MixedState(out / np.real(np.trace(out)), rho.n_qubits)
