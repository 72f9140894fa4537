"""
Critical W-type noise that washes out the three-tangle of the G and J states.

The noisy state is mapped by the local filter A = diag(x, 1/x)^{x3} onto
(1 - q~)|Psi~><Psi~| + q~ Pi_W(p) with Psi~ the GHZ-equivalent states
G~ or J~. For those the minimal tangle over the characteristic family of
pure states is known in closed form; its first zero q~_c is mapped back to
the critical q of the original state.
"""

import logging
import math
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np
from scipy.optimize import bisect, least_squares

from .measures import Ensemble, tangle_amplitude_rows, tangle_param, tangle_rows
from .models import CriticalResult, Family, RescaledParams, SymParams
from .states import (
    g_tilde, j_tilde, local_A, mix, noise_basis_matrix, noise_op_3q, sym_state,
)

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-12
SCAN_POINTS = 256

# Index maps (printed label -> basis column) for the two labelings of Psi_1..Psi_4
LABELINGS: Dict[str, Tuple[int, int, int, int]] = {
    "printed": (0, 1, 2, 3),
    "exchanged": (1, 0, 3, 2),
}


def _check_unit(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


def _family(family: Union[Family, str]) -> Family:
    try:
        return Family(family)
    except ValueError:
        raise ValueError(f"Unknown state family {family!r}; expected 'G' or 'J'") from None


def family_params(family: Union[Family, str], param: float, gamma: float = 0.0) -> SymParams:
    """SymParams of G(beta=param, gamma) or J(alpha=param)."""
    if _family(family) is Family.G:
        return SymParams(alpha=math.pi / 2, beta=param, gamma=gamma)
    return SymParams(alpha=param, beta=0.0, gamma=0.0)


def _check_interior(param: float) -> None:
    if not 0.0 < param < math.pi / 2:
        raise ValueError(f"Parameter must lie strictly inside (0, pi/2), got {param}")


# --------------------------------------------------------------------------
# Rescaling
# --------------------------------------------------------------------------

def rescaling_x(family: Union[Family, str], param: float, gamma: float = 0.0) -> complex:
    """
    Filter parameter x with A|G> ~ |G~> or A|J> ~ |J~>.

    G: x = (tan(beta) e^{i gamma})^{1/6}; J: x = (cot(alpha)/sqrt3)^{1/4}.
    Principal branches.
    """
    _check_interior(param)
    if _family(family) is Family.G:
        return complex(np.power(complex(math.tan(param) * np.exp(1j * gamma)), 1 / 6))
    return complex((1 / math.tan(param) / math.sqrt(3)) ** 0.25)


def p_of_x(x: complex) -> float:
    """Solution of p = |x|^4 (1 - p)."""
    x4 = abs(x) ** 4
    return x4 / (1 + x4)


def rescaled_params(family: Union[Family, str], param: float, q: float,
                    gamma: float = 0.0) -> RescaledParams:
    """
    (q~, p) of the filtered noisy state.

    q~ = q (|x|^2 + 1/|x|^2) / (2 tr(A rho A^dagger)), p = |x|^4 / (1 + |x|^4).
    """
    q = _check_unit("q", q)
    x = rescaling_x(family, param, gamma)
    a = local_A(x)
    rho = mix(sym_state(family_params(family, param, gamma)), noise_op_3q(), q)
    norm = float(np.real(np.trace(a @ rho.rho @ a.conj().T)))
    q_tilde = q * (abs(x) ** 2 + abs(x) ** -2) / (2 * norm)
    return RescaledParams(q_tilde=min(max(q_tilde, 0.0), 1.0), p=p_of_x(x))


def q_from_qtilde(q_tilde: float, tau: float, x: complex) -> float:
    """Closed-form inverse of the q~ relation, q = 2 q~ sqrt(tau) / (k (1 - q~) + 2 q~ sqrt(tau))."""
    k = abs(x) ** 2 + abs(x) ** -2
    st = math.sqrt(tau)
    return 2 * q_tilde * st / (k * (1 - q_tilde) + 2 * q_tilde * st)


# --------------------------------------------------------------------------
# Minimal tangle of the characteristic family
# --------------------------------------------------------------------------

def tau_tilde_G_bracket(q_tilde: float, p: float) -> float:
    """Unclipped closed form whose positive part is tau_tilde_G."""
    q, p = _check_unit("q_tilde", q_tilde), _check_unit("p", p)
    r = math.sqrt(1 - q)
    s6 = math.sqrt(6)
    value = (
        9 * (1 - q) ** 2
        - 12 * (1 - p) * p * q ** 2
        - 8 * s6 * r * q ** 1.5 * (1 - p) ** 1.5
        - 2 * math.sqrt(p) * (18 * math.sqrt(1 - p) * (1 - q) * q + 4 * p * s6 * r * q ** 1.5)
    )
    return value / 9


def tau_tilde_J_bracket(q_tilde: float, p: float) -> float:
    """Unclipped closed form whose positive part is tau_tilde_J."""
    q, p = _check_unit("q_tilde", q_tilde), _check_unit("p", p)
    s6 = math.sqrt(6)
    root = math.sqrt((1 - p) * (1 - q) * q ** 3)
    value = 9 - 36 * q + 3 * (9 - 4 * p + 4 * p ** 2) * q ** 2 - 4 * s6 * root - 8 * s6 * p * root
    return value / 9


def tau_tilde_G(q_tilde: float, p: float) -> float:
    return max(0.0, tau_tilde_G_bracket(q_tilde, p))


def tau_tilde_J(q_tilde: float, p: float) -> float:
    return max(0.0, tau_tilde_J_bracket(q_tilde, p))


_BRACKETS = {Family.G: tau_tilde_G_bracket, Family.J: tau_tilde_J_bracket}
_TILDE_STATES = {Family.G: g_tilde, Family.J: j_tilde}


def tau_tilde(family: Union[Family, str], q_tilde: float, p: float) -> float:
    return max(0.0, _BRACKETS[_family(family)](q_tilde, p))


def _characteristic_states(base: np.ndarray, q_tilde: float, p: float,
                           angles: np.ndarray) -> np.ndarray:
    """Rows of the family for angles (..., 6) = (a, b, phi_1..phi_4)."""
    a, b = angles[..., 0], angles[..., 1]
    ph = np.exp(1j * angles[..., 2:])
    sp, sq = math.sqrt(p), math.sqrt(1 - p)
    d = np.stack([sp * np.cos(a) * ph[..., 0], sp * np.sin(a) * ph[..., 1],
                  sq * np.cos(b) * ph[..., 2], sq * np.sin(b) * ph[..., 3]], axis=-1)
    return math.sqrt(1 - q_tilde) * base + math.sqrt(q_tilde) * d @ noise_basis_matrix().T


def characteristic_min(family: Union[Family, str], q_tilde: float, p: float,
                       grid: int = 16, polish: int = 4) -> float:
    """
    Brute-force minimal tangle over the characteristic family of pure states.

    The six angles (two amplitude angles, four phases) are seeded on a
    regular grid; the best `polish` seeds are refined by least squares on
    the real and imaginary parts of the tangle amplitude.

    Args:
        family: G or J
        q_tilde: noise weight of the filtered state
        p: weight of the {Psi_1, Psi_2} sector
        grid: grid points per angle
        polish: number of seeds refined locally

    Returns:
        Minimal three-tangle found (an upper bound of the true minimum)
    """
    fam = _family(family)
    q_tilde, p = _check_unit("q_tilde", q_tilde), _check_unit("p", p)
    if q_tilde == 0.0:
        return 1.0
    base = _TILDE_STATES[fam]().amplitudes

    amp_axis = np.linspace(0.0, math.pi / 2, grid)
    phase_axis = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    phases = np.stack(np.meshgrid(*([phase_axis] * 4), indexing="ij"), axis=-1).reshape(-1, 4)

    best_vals: List[float] = []
    best_pts: List[np.ndarray] = []
    # one (a, b) slice of the grid at a time
    for a in amp_axis:
        for b in amp_axis:
            angles = np.concatenate([np.tile([a, b], (phases.shape[0], 1)), phases], axis=1)
            vals = tangle_rows(_characteristic_states(base, q_tilde, p, angles))
            k = min(polish, vals.size)
            idx = np.argpartition(vals, k - 1)[:k]
            best_vals.extend(vals[idx].tolist())
            best_pts.extend(angles[idx])

    order = np.argsort(best_vals)[:polish]
    result = float(best_vals[order[0]])

    def residuals(x: np.ndarray) -> np.ndarray:
        t = tangle_amplitude_rows(_characteristic_states(base, q_tilde, p, x))
        return np.array([t.real, t.imag])

    for i in order:
        res = least_squares(residuals, best_pts[i], method="trf",
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        val = float(tangle_rows(_characteristic_states(base, q_tilde, p, res.x)))
        result = min(result, val)

    logger.debug(f"characteristic minimum {fam.value}(q~={q_tilde}, p={p}) = {result:.12f}")
    return result


# --------------------------------------------------------------------------
# Six-state ensembles
# --------------------------------------------------------------------------

_G_PHASES = (math.pi / 3, math.pi, -math.pi / 3)


def _g_coefficients(p: float) -> np.ndarray:
    """Printed-label coefficients of the six G~ members."""
    sp, sq = math.sqrt(p), math.sqrt(1 - p)
    rows = []
    for t in _G_PHASES:
        rows.append([sp * np.exp(1j * t), 0.0, sq * np.exp(1j * (2 * math.pi / 3 - t)), 0.0])
    for t in _G_PHASES:
        rows.append([0.0, sp * np.exp(1j * t), 0.0, sq * np.exp(1j * (-2 * math.pi / 3 - t))])
    return np.array(rows, dtype=complex)


def _j_coefficients(p: float) -> np.ndarray:
    """Printed-label coefficients of the six J~ members."""
    sp, sq = math.sqrt(p), math.sqrt(1 - p)
    rows = []
    for j in range(6):
        d1 = j * math.pi / 3
        d3 = 2 * d1 - math.pi / 3
        rows.append([sp * np.exp(1j * d1), sp * np.exp(1j * (math.pi - d1)),
                     sq * np.exp(1j * d3), sq * np.exp(-1j * d3)])
    return np.array(rows, dtype=complex) / math.sqrt(2)


def _six_state_ensemble(base: np.ndarray, coeffs: np.ndarray, q_tilde: float,
                        labeling: str) -> Ensemble:
    placed = np.zeros_like(coeffs)
    placed[:, list(LABELINGS[labeling])] = coeffs
    rows = math.sqrt(1 - q_tilde) * base + math.sqrt(q_tilde) * placed @ noise_basis_matrix().T
    return Ensemble(np.full(6, 1 / 6), rows)


def _lowest_labeling(family: Family, q_tilde: float, p: float) -> Ensemble:
    q_tilde, p = _check_unit("q_tilde", q_tilde), _check_unit("p", p)
    base = _TILDE_STATES[family]().amplitudes
    coeffs = _g_coefficients(p) if family is Family.G else _j_coefficients(p)
    candidates = {name: _six_state_ensemble(base, coeffs, q_tilde, name) for name in LABELINGS}
    averages = {name: ens.average("tangle") for name, ens in candidates.items()}
    name = min(averages, key=averages.get)
    logger.debug(f"{family.value}~ six-state averages {averages}; using {name} labeling")
    return candidates[name]


def optimal_ensemble_Gtilde(q_tilde: float, p: float) -> Ensemble:
    """Six equally weighted members (two types of three) composing the filtered G~ state."""
    return _lowest_labeling(Family.G, q_tilde, p)


def optimal_ensemble_Jtilde(q_tilde: float, p: float) -> Ensemble:
    """Six equally weighted members composing the filtered J~ state."""
    return _lowest_labeling(Family.J, q_tilde, p)


def filtered_state(family: Union[Family, str], q_tilde: float, p: float):
    """(1 - q~)|Psi~><Psi~| + q~ Pi_W(p)"""
    return mix(_TILDE_STATES[_family(family)](), noise_op_3q(p), q_tilde)


# --------------------------------------------------------------------------
# Critical noise
# --------------------------------------------------------------------------

def _first_root(f, lo: float, hi: float, points: int = SCAN_POINTS) -> float:
    """Smallest root of f on [lo, hi] located by a sign scan and refined by bisection."""
    xs = np.linspace(lo, hi, points)
    prev_x, prev_f = xs[0], f(xs[0])
    if prev_f == 0.0:
        return float(prev_x)
    for x in xs[1:]:
        fx = f(x)
        if fx == 0.0:
            return float(x)
        if np.sign(fx) != np.sign(prev_f):
            return float(bisect(f, prev_x, x, xtol=ROOT_XTOL))
        prev_x, prev_f = x, fx
    raise ArithmeticError(f"No sign change on [{lo}, {hi}] (f ends at {prev_f:.3e})")


def critical_qtilde(family: Union[Family, str], p: float) -> float:
    """Smallest q~ where the minimal characteristic tangle reaches zero."""
    bracket = _BRACKETS[_family(family)]
    p = _check_unit("p", p)
    return _first_root(lambda q: bracket(q, p), 0.0, 1.0)


def critical_curve(family: Union[Family, str], ps: Iterable[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(q~_c, q~_c p, q~_c (1 - p)) over a p-grid."""
    ps = np.asarray(list(ps), dtype=float)
    qc = np.array([critical_qtilde(family, p) for p in ps])
    return qc, qc * ps, qc * (1 - ps)


def is_convex(x: np.ndarray, y: np.ndarray, tol: float = 1e-9) -> bool:
    """True if the polyline turns counter-clockwise (within tol) at every interior point."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.size < 3:
        return True
    dx1, dy1 = x[1:-1] - x[:-2], y[1:-1] - y[:-2]
    dx2, dy2 = x[2:] - x[1:-1], y[2:] - y[1:-1]
    cross = dx1 * dy2 - dy1 * dx2
    return bool(np.all(cross >= -tol))


def critical_q(family: Union[Family, str], param: float, gamma: float = 0.0) -> CriticalResult:
    """
    Critical noise q_c of G(beta=param, gamma) or J(alpha=param).

    q~_c of the filtered state is mapped back by inverting q -> q~(q) on [0, 1]
    with bisection.

    Raises:
        ValueError: for boundary parameters
        ArithmeticError: if the inversion finds no root
    """
    fam = _family(family)
    _check_interior(param)
    tau = abs(tangle_param(family_params(fam, param, gamma)))
    p = p_of_x(rescaling_x(fam, param, gamma))
    qt_c = critical_qtilde(fam, p)

    def residual(q: float) -> float:
        return rescaled_params(fam, param, q, gamma).q_tilde - qt_c

    qs = np.linspace(0.0, 1.0, 65)
    values = np.array([residual(q) for q in qs])
    if np.any(np.diff(values) < -1e-12):
        roots = [qs[i] for i in range(64) if np.sign(values[i]) != np.sign(values[i + 1])]
        logger.warning(f"q -> q~ is not monotone for {fam.value}({param}); sign changes near {roots}")

    q_c = _first_root(residual, 0.0, 1.0, points=65)
    logger.info(f"critical noise {fam.value}({param:.6g}): q~_c={qt_c:.10f}, q_c={q_c:.10f}")
    return CriticalResult(family=fam, param=param, tau=tau, p=p, q_tilde_c=qt_c,
                          q_c=q_c, avg_decay=tau / q_c)


SIX_STATE_ENSEMBLES = {Family.G: optimal_ensemble_Gtilde, Family.J: optimal_ensemble_Jtilde}
