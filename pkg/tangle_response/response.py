"""
Linear response of entanglement to weak W-type noise.

Two qubits: the response of the concurrence of cos(t)|00> + sin(t)|11>.
Three qubits: the coupling matrix Omega of the three-tangle amplitude to
the noise subspace, its analytic R = conj(Omega) Omega, the response
eta = 2 tau + sum|omega_k| / 4 and the ensembles that attain it.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .linalg import CLIP_TOL, takagi
from .measures import (
    Ensemble, concurrence_amplitude_rows, negativity_one_rest,
    tangle_amplitude, tangle_amplitude_rows, tangle_param,
)
from .models import ResponseReport, SymParams
from .states import (
    check_theta, noise_basis_matrix, phi, phi_perp, sym_state,
)

logger = logging.getLogger(__name__)

# Interpolation nodes for the quartic in s
_NODES = np.array([-2.0, -1.0, 1.0, 2.0, 3.0])
_VANDERMONDE = np.vander(_NODES, 5, increasing=True)

MAX_PERTURBATIVE_Q = 0.05


def _check_q(q: float) -> float:
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"Noise strength q must lie in [0, 1], got {q}")
    return float(q)


def _series(amplitude: Callable[[np.ndarray], np.ndarray], base: np.ndarray,
            directions: np.ndarray) -> np.ndarray:
    """Coefficients c_0..c_4 (ascending) of amplitude(base + s * d) for each row d."""
    points = base[None, None, :] + _NODES[None, :, None] * directions[:, None, :]
    values = amplitude(points)  # (n_dirs, 5)
    return np.linalg.solve(_VANDERMONDE, values.T).T


def _polarize(amplitude: Callable[[np.ndarray], np.ndarray], base: np.ndarray,
              basis: np.ndarray) -> np.ndarray:
    """
    Symmetric matrix M with s^2-coefficient of amplitude(base + s chi) = -chi^T M chi.

    Diagonal elements come from the basis directions, off-diagonal ones from
    the pairwise sums of basis directions.
    """
    n = basis.shape[1]
    pairs = list(itertools.combinations(range(n), 2))
    dirs = [basis[:, k] for k in range(n)] + [basis[:, k] + basis[:, l] for k, l in pairs]
    c2 = _series(amplitude, base, np.stack(dirs))[:, 2]

    m = np.zeros((n, n), dtype=complex)
    m[np.diag_indices(n)] = -c2[:n]
    for (k, l), c in zip(pairs, c2[n:]):
        m[k, l] = m[l, k] = (-c - m[k, k] - m[l, l]) / 2
    return m


# --------------------------------------------------------------------------
# Two qubits
# --------------------------------------------------------------------------

def lrc(theta: float) -> float:
    """Linear response of the concurrence, sin(2 theta) + 1."""
    theta = check_theta(theta)
    return math.sin(2 * theta) + 1.0


def exact_concurrence_curve(theta: float, q: float) -> float:
    """max(0, sin(2 theta) - q (1 + sin(2 theta)))"""
    s = math.sin(2 * check_theta(theta))
    q = _check_q(q)
    return max(0.0, s - q * (1 + s))


# Coefficients (A_j, B_j) of the four equally weighted members
_A_2Q = np.array([1.0, 1.0, -1.0, -1.0]) / math.sqrt(2)
_B_2Q = np.array([1.0, -1.0, 1.0, -1.0]) / math.sqrt(2)


def optimal_ensemble_2q(theta: float, q: float) -> Ensemble:
    """
    Four-member decomposition of (1 - q)|phi><phi| + q * noise.

    Members are sqrt(1-q)|phi> + sqrt(q)(A_j |phi_+> + B_j |phi_->) with
    phi_+ = (|01> + |10>)/sqrt2, phi_- = i(|01> - |10>)/sqrt2 and
    probability 1/4 each; member j has concurrence |(1-q) sin2t - q|.
    """
    q = _check_q(q)
    base = phi(theta).amplitudes
    p1, p2 = phi_perp(1).amplitudes, phi_perp(2).amplitudes
    plus = (p1 + p2) / math.sqrt(2)
    minus = 1j * (p1 - p2) / math.sqrt(2)
    rows = (math.sqrt(1 - q) * base[None, :]
            + math.sqrt(q) * (_A_2Q[:, None] * plus[None, :] + _B_2Q[:, None] * minus[None, :]))
    return Ensemble(np.full(4, 0.25), rows)


def omega_matrix_2q(theta: float) -> np.ndarray:
    """2 x 2 coupling of the concurrence amplitude to {|01>, |10>}; singular values (1, 1)."""
    base = phi(theta).amplitudes
    basis = np.stack([phi_perp(1).amplitudes, phi_perp(2).amplitudes], axis=1)
    return _polarize(concurrence_amplitude_rows, base, basis)


# --------------------------------------------------------------------------
# Three qubits
# --------------------------------------------------------------------------

def expansion_coefficients(p: SymParams, chi: np.ndarray) -> np.ndarray:
    """
    Coefficients c_0..c_4 of T(Psi + s * sum_k chi_k Psi_k) as a polynomial in s.

    c_0 is the tangle amplitude of Psi and c_1 vanishes for every chi.
    """
    chi = np.asarray(chi, dtype=complex).reshape(-1)
    if chi.size != 4:
        raise ValueError(f"chi must have four components, got {chi.size}")
    direction = noise_basis_matrix() @ chi
    return _series(tangle_amplitude_rows, sym_state(p).amplitudes, direction[None, :])[0]


def omega_matrix(p: SymParams) -> np.ndarray:
    """Complex symmetric Omega: the s^2 term of T(Psi + s chi) is -chi^T Omega chi."""
    return _polarize(tangle_amplitude_rows, sym_state(p).amplitudes, noise_basis_matrix())


@dataclass(frozen=True)
class RMatrixElements:
    X: float
    Y: float
    Z_plus: complex
    Z_minus: complex

    def matrix(self) -> np.ndarray:
        """R with blocks (1, 4) and (2, 3) coupled by Z_+ and Z_-."""
        r = np.diag([self.X, self.X, self.Y, self.Y]).astype(complex)
        r[0, 3], r[3, 0] = self.Z_plus, np.conj(self.Z_plus)
        r[1, 2], r[2, 1] = self.Z_minus, np.conj(self.Z_minus)
        return r


def r_matrix(p: SymParams) -> RMatrixElements:
    ca, sa = math.cos(p.alpha), math.sin(p.alpha)
    cb, sb = math.cos(p.beta), math.sin(p.beta)
    g = p.gamma
    x = 64 / 9 * ca ** 4 + 4 * sa ** 4 * math.sin(2 * p.beta) ** 2
    y = 64 / 3 * ca ** 2 * sa ** 2 * cb ** 2 + 16 * sa ** 4 * cb ** 2 * sb ** 2

    def z(sign: int) -> complex:
        return complex(
            32 / 3 * np.exp(1j * (g + sign * math.pi / 3)) * ca ** 2 * sa ** 2 * cb * sb
            - 32 / math.sqrt(3) * np.exp(1j * (-g + sign * math.pi / 3)) * ca * sa ** 3 * cb ** 2 * sb
        )

    return RMatrixElements(X=x, Y=y, Z_plus=z(+1), Z_minus=z(-1))


def omega_moduli(p: SymParams) -> np.ndarray:
    """Descending |omega_k|, square roots of the eigenvalues of R."""
    w = np.linalg.eigvalsh(r_matrix(p).matrix())
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def lrt(p: SymParams) -> ResponseReport:
    """
    Linear response of the three-tangle.

    eta = 2 tau + sqrt(N^2 - sqrt(N^4 - tau^2)) + sqrt(N^2 + sqrt(N^4 - tau^2))
    with N the one-versus-rest negativity.

    Raises:
        ArithmeticError: if N^4 - tau^2 is negative beyond rounding
    """
    tau = abs(tangle_param(p))
    neg = negativity_one_rest(sym_state(p), 1)
    radicand = neg ** 4 - tau ** 2
    if radicand < -CLIP_TOL:
        raise ArithmeticError(f"N^4 - tau^2 = {radicand:.3e} is negative at {p}")
    root = math.sqrt(max(0.0, radicand))
    n2 = neg ** 2
    eta = 2 * tau + math.sqrt(max(0.0, n2 - root)) + math.sqrt(n2 + root)

    moduli = omega_moduli(p)
    spectral = 2 * tau + float(moduli.sum()) / 4
    if abs(eta - spectral) > 1e-9:
        logger.debug(f"LRT closed form {eta:.12f} and spectral form {spectral:.12f} disagree at {p}")

    return ResponseReport(tau=tau, negativity=neg, omega_moduli=[float(w) for w in moduli],
                          eta=eta, params=p)


def first_order_tangle(p: SymParams, q: float) -> float:
    """(1 - 2q) tau - (q/4) sum|omega_k|, the minimal average tangle to first order in q."""
    q = _check_q(q)
    return (1 - 2 * q) * abs(tangle_param(p)) - q * float(omega_moduli(p).sum()) / 4


_SIGNS_3Q = np.array(list(itertools.product((1.0, -1.0), repeat=4)))


def _ensemble_3q(psi: np.ndarray, u: np.ndarray, omega: np.ndarray, xi: float,
                 zeta_sign: float, q: float) -> Ensemble:
    zeta = zeta_sign * 0.5 * np.angle(omega)
    mu = 0.5 * np.exp(1j * (xi + zeta))[None, :] * _SIGNS_3Q  # (16, 4)
    chi = mu @ u.conj()  # rows of U^dagger mu
    rows = math.sqrt(1 - q) * psi[None, :] + math.sqrt(q) * chi @ noise_basis_matrix().T
    return Ensemble(np.full(16, 1 / 16), rows)


def optimal_ensemble_3q(p: SymParams, q: float) -> Ensemble:
    """
    Sixteen-member decomposition of (1 - q)|Psi><Psi| + q * Pi_W.

    In the Takagi basis of Omega the member coefficients are
    (1/2) e^{i(xi + zeta_k)} (+-1), xi = arg(T)/2 and zeta_k = -arg(omega_k)/2,
    all sign patterns equally likely. The opposite zeta sign is evaluated as
    well and the lower average tangle is kept.

    Raises:
        ValueError: for tau = 0 (xi undefined) or q above the perturbative range
    """
    q = _check_q(q)
    if q > MAX_PERTURBATIVE_Q:
        raise ValueError(f"q = {q} is outside the perturbative range (q <= {MAX_PERTURBATIVE_Q})")
    psi = sym_state(p).amplitudes
    amp = tangle_amplitude(psi)
    if abs(amp) < 1e-12:
        raise ValueError(f"Three-tangle vanishes at {p}; the ensemble phase is undefined")
    xi = 0.5 * float(np.angle(amp))
    u, omega = takagi(omega_matrix(p))

    chosen = _ensemble_3q(psi, u, omega, xi, -1.0, q)
    other = _ensemble_3q(psi, u, omega, xi, +1.0, q)
    avg_chosen, avg_other = chosen.average("tangle"), other.average("tangle")
    if avg_other < avg_chosen - 1e-12:
        logger.warning(f"zeta = +arg(omega)/2 gives a lower average tangle "
                       f"({avg_other:.12f} < {avg_chosen:.12f}) at {p}")
        return other
    return chosen


def optimal_ensemble_average(p: SymParams, q: float) -> float:
    return optimal_ensemble_3q(p, q).average("tangle")


def ghz_curve(tau: float) -> float:
    """Response of the generalized GHZ states, 2 tau + 2 sqrt(tau)."""
    if not -CLIP_TOL <= tau <= 1.0 + CLIP_TOL:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    tau = min(max(tau, 0.0), 1.0)
    return 2 * tau + 2 * math.sqrt(tau)


def jcurve_point(alpha: float) -> Tuple[float, float]:
    """(tau, eta) of the W-like state cos(a)|Wbar> + sin(a)|000>."""
    report = lrt(SymParams(alpha=alpha, beta=0.0, gamma=0.0))
    return report.tau, report.eta


def sudden_death_rate(negativity: float) -> float:
    """sqrt(2) N, the response in the tau -> 0 limit."""
    if negativity < 0:
        raise ValueError(f"Negativity must be nonnegative, got {negativity}")
    return math.sqrt(2) * negativity
