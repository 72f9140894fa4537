"""
Entanglement measures and the numerical convex-roof oracle.

Pure-state measures come in two flavours: functions taking a Ket, and
"row" functions taking an array of normalized state vectors (..., d) that
the convex-roof search evaluates in bulk.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from .linalg import (
    CLIP_TOL, SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z, herm_eig, haar_isometry, kron_all,
    make_rng, orthonormalize, partial_trace, sqrt_psd,
)
from .models import SymParams
from .states import Ket, MixedState

logger = logging.getLogger(__name__)

RowMeasure = Callable[[np.ndarray], np.ndarray]

_YY = kron_all(SIGMA_Y, SIGMA_Y)
_TANGLE_OPS = np.stack([kron_all(s, SIGMA_Y, SIGMA_Y) for s in (SIGMA_0, SIGMA_X, SIGMA_Z)])


# --------------------------------------------------------------------------
# Ensembles
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Ensemble:
    """Probability-weighted list of pure states (rows of `states`)."""
    probabilities: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).reshape(-1)
        s = np.atleast_2d(np.asarray(self.states, dtype=complex))
        if s.shape[0] != p.size:
            raise ValueError(f"{p.size} probabilities for {s.shape[0]} states")
        if np.any(p < -1e-15):
            raise ValueError("Ensemble probabilities must be nonnegative")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError(f"Ensemble probabilities sum to {p.sum():.15f}")
        norms = np.linalg.norm(s, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-10):
            raise ValueError("Ensemble members must be normalized")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "states", s)

    @classmethod
    def from_unnormalized(cls, rows: np.ndarray) -> "Ensemble":
        """Members |psi_j> given unnormalized; p_j = <psi_j|psi_j>. Empty rows are dropped."""
        rows = np.atleast_2d(np.asarray(rows, dtype=complex))
        p = np.sum(np.abs(rows) ** 2, axis=1)
        keep = p > 1e-300
        return cls(p[keep] / p[keep].sum(), rows[keep] / np.sqrt(p[keep])[:, None])

    @classmethod
    def uniform(cls, kets) -> "Ensemble":
        rows = np.stack([k.amplitudes if isinstance(k, Ket) else np.asarray(k) for k in kets])
        return cls(np.full(rows.shape[0], 1.0 / rows.shape[0]), rows)

    def __len__(self) -> int:
        return self.probabilities.size

    def __iter__(self) -> Iterator[Tuple[float, Ket]]:
        for p, row in zip(self.probabilities, self.states):
            yield float(p), Ket(row)

    def density_matrix(self) -> np.ndarray:
        return (self.states.T * self.probabilities) @ self.states.conj()

    def values(self, measure: Union[str, RowMeasure]) -> np.ndarray:
        return np.clip(_resolve_measure(measure)(self.states), 0.0, None)

    def average(self, measure: Union[str, RowMeasure]) -> float:
        return float(self.probabilities @ self.values(measure))


# --------------------------------------------------------------------------
# Two-qubit concurrence
# --------------------------------------------------------------------------

def concurrence_amplitude_rows(psi: np.ndarray) -> np.ndarray:
    """<psi*| sigma_y x sigma_y |psi> over the last axis (length 4)."""
    psi = np.asarray(psi, dtype=complex)
    return np.einsum("...a,ab,...b->...", psi, _YY, psi)


def concurrence_rows(psi: np.ndarray) -> np.ndarray:
    return np.abs(concurrence_amplitude_rows(psi))


def _require_qubits(k: Ket, n: int) -> None:
    if k.n_qubits != n:
        raise ValueError(f"Expected a {n}-qubit state, got {k.n_qubits} qubits")


def concurrence_pure(k: Ket) -> float:
    _require_qubits(k, 2)
    return float(concurrence_rows(k.amplitudes))


def concurrence_wootters(rho: Union[MixedState, np.ndarray]) -> float:
    """
    Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the singular values of sqrt(rho) sqrt(rho~), rho~ = (Y x Y) rho* (Y x Y),
    in decreasing order. Eigenvalues of rho and rho~ below CLIP_TOL count as zero.
    """
    if not isinstance(rho, MixedState):
        rho = MixedState(rho)
    if rho.n_qubits != 2:
        raise ValueError(f"Wootters concurrence needs a two-qubit state, got {rho.n_qubits} qubits")
    flipped = _YY @ rho.rho.conj() @ _YY
    lam = np.linalg.svd(sqrt_psd(rho.rho, CLIP_TOL) @ sqrt_psd(flipped, CLIP_TOL), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


# --------------------------------------------------------------------------
# Negativity
# --------------------------------------------------------------------------

def _check_cut(cut: int, n_qubits: int = 3) -> None:
    if cut not in range(1, n_qubits + 1):
        raise ValueError(f"Cut must name a qubit 1..{n_qubits}, got {cut}")


def negativity_one_rest(k: Ket, cut: int = 1) -> float:
    """sqrt(4 det rho_cut), rho_cut the one-qubit reduced state."""
    _require_qubits(k, 3)
    _check_cut(cut)
    others = [q for q in (1, 2, 3) if q != cut]
    rho1 = partial_trace(k.projector(), 3, others)
    det = float(np.real(np.linalg.det(rho1)))
    return math.sqrt(max(0.0, 4 * det))


def negativity_partial_transpose(rho: Union[MixedState, Ket], cut: int = 1) -> float:
    """Twice the absolute sum of the negative eigenvalues of rho^{T_cut}."""
    if isinstance(rho, Ket):
        rho = MixedState.pure(rho)
    n = rho.n_qubits
    _check_cut(cut, n)
    t = rho.rho.reshape([2] * (2 * n))
    t = np.swapaxes(t, cut - 1, cut - 1 + n).reshape(rho.dim, rho.dim)
    w = np.linalg.eigvalsh((t + t.conj().T) / 2)
    return float(2 * np.sum(np.abs(w[w < 0])))


# --------------------------------------------------------------------------
# Three-tangle
# --------------------------------------------------------------------------

def tangle_amplitude_rows(psi: np.ndarray) -> np.ndarray:
    """Sum_{j=0,x,z} <psi*| s_j x s_y x s_y |psi>^2 over the last axis (length 8)."""
    psi = np.asarray(psi, dtype=complex)
    m = np.einsum("...a,jab,...b->...j", psi, _TANGLE_OPS, psi)
    return np.sum(m ** 2, axis=-1)


def tangle_rows(psi: np.ndarray) -> np.ndarray:
    return np.abs(tangle_amplitude_rows(psi))


def tangle_amplitude(k: Union[Ket, np.ndarray]) -> complex:
    """
    Complex amplitude whose modulus is the three-tangle.

    Homogeneous of degree four, so unnormalized vectors are accepted.
    """
    if isinstance(k, Ket):
        _require_qubits(k, 3)
        vec = k.amplitudes
    else:
        vec = np.asarray(k, dtype=complex).reshape(-1)
        if vec.size != 8:
            raise ValueError(f"Expected a three-qubit vector, got dimension {vec.size}")
    return complex(tangle_amplitude_rows(vec))


def tangle_pure(k: Union[Ket, np.ndarray]) -> float:
    return abs(tangle_amplitude(k))


def tangle_param(p: SymParams) -> complex:
    """(16 sqrt3 / 9) cos^3 a sin a cos b + 4 e^{2ig} sin^4 a cos^2 b sin^2 b"""
    ca, sa = math.cos(p.alpha), math.sin(p.alpha)
    cb, sb = math.cos(p.beta), math.sin(p.beta)
    return complex(
        16 * math.sqrt(3) / 9 * ca ** 3 * sa * cb
        + 4 * np.exp(2j * p.gamma) * sa ** 4 * cb ** 2 * sb ** 2
    )


MEASURES: Dict[str, RowMeasure] = {
    "concurrence": concurrence_rows,
    "tangle": tangle_rows,
}


def _resolve_measure(measure: Union[str, RowMeasure]) -> RowMeasure:
    if callable(measure):
        return measure
    try:
        return MEASURES[measure]
    except KeyError:
        raise ValueError(f"Unknown measure {measure!r}; expected one of {sorted(MEASURES)}") from None


# --------------------------------------------------------------------------
# Convex roof
# --------------------------------------------------------------------------

class RoofResult(NamedTuple):
    value: float
    ensemble: Ensemble
    seed: int
    restarts: int


class _RoofObjective:
    """Average measure of the ensemble generated by an isometry V."""

    def __init__(self, rho: MixedState, measure: RowMeasure):
        w, e = herm_eig(rho.rho)
        keep = w > 1e-14
        self.factor = (e[:, keep] * np.sqrt(w[keep])).T  # r x d
        self.rank = int(keep.sum())
        self.measure = measure

    def rows(self, v: np.ndarray) -> np.ndarray:
        return v @ self.factor

    def __call__(self, v: np.ndarray) -> float:
        rows = self.rows(v)
        p = np.sum(np.abs(rows) ** 2, axis=1)
        mask = p > 1e-300
        vals = self.measure(rows[mask] / np.sqrt(p[mask])[:, None])
        return float(p[mask] @ np.clip(vals, 0.0, None))


def _search(objective: _RoofObjective, m: int, seed: int, restart: int,
            step0: float, max_evals: int) -> Tuple[float, np.ndarray]:
    rng = make_rng(seed, restart)
    v = haar_isometry(m, objective.rank, rng)
    best = objective(v)
    step, fails, evals = step0, 0, 0
    while step >= 1e-6 and evals < max_evals:
        kick = rng.standard_normal(v.shape) + 1j * rng.standard_normal(v.shape)
        cand = orthonormalize(v + step * kick / math.sqrt(2))
        val = objective(cand)
        evals += 1
        if val < best:
            v, best, fails = cand, val, 0
        else:
            fails += 1
            if fails >= 20:
                step *= 0.5
                fails = 0
    logger.debug(f"roof restart {restart}: value {best:.12f} after {evals} evaluations")
    return best, v


def _polish(objective: _RoofObjective, v: np.ndarray) -> Tuple[float, np.ndarray]:
    shape = v.shape

    def unpack(x: np.ndarray) -> np.ndarray:
        return orthonormalize((x[: x.size // 2] + 1j * x[x.size // 2:]).reshape(shape))

    x0 = np.concatenate([v.real.ravel(), v.imag.ravel()])
    res = minimize(lambda x: objective(unpack(x)), x0, method="L-BFGS-B",
                   options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-12})
    v_new = unpack(res.x)
    return objective(v_new), v_new


def convex_roof(rho: Union[MixedState, Ket], measure: Union[str, RowMeasure],
                m: Optional[int] = None, restarts: int = 64, seed: int = 0,
                polish: bool = True, workers: int = 1,
                step: float = 0.1, max_evals: int = 20000) -> RoofResult:
    """
    Numerical upper bound of the convex roof of a pure-state measure.

    Ensembles are generated as |psi_j> = sum_i V_ji sqrt(l_i)|e_i> from the
    spectral decomposition of rho and an m x r isometry V. Each restart draws
    V Haar-randomly from its own (seed, restart) stream and refines it by
    random perturbations kept on improvement; the step halves after 20
    consecutive failures and the search stops below 1e-6.

    Args:
        rho: state whose convex roof is bounded
        measure: 'concurrence', 'tangle' or a row measure
        m: ensemble size (default rank + 2)
        restarts: number of independent restarts
        seed: base seed of the restart streams
        polish: refine every restart with L-BFGS-B (kept only on improvement)
        workers: threads running restarts concurrently
        step: initial perturbation size
        max_evals: evaluation cap per restart

    Returns:
        RoofResult with the best value and its ensemble
    """
    if isinstance(rho, Ket):
        rho = MixedState.pure(rho)
    objective = _RoofObjective(rho, _resolve_measure(measure))
    r = objective.rank
    m = r + 2 if m is None else int(m)
    if m < r:
        raise ValueError(f"Ensemble size {m} is smaller than rank {r}")
    if restarts < 1:
        raise ValueError("At least one restart is required")

    def run(k: int) -> Tuple[float, np.ndarray]:
        val, v = _search(objective, m, seed, k, step, max_evals)
        if polish and r > 1:
            pol_val, pol_v = _polish(objective, v)
            if pol_val < val:
                logger.debug(f"restart {k}: polish improved {val:.12f} -> {pol_val:.12f}")
                val, v = pol_val, pol_v
        return val, v

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(k) for k in range(restarts)]

    # first minimum wins, so results do not depend on completion order
    best_val, best_v = min(results, key=lambda item: item[0])

    eigen_v = np.eye(m, r, dtype=complex)
    eigen_val = objective(eigen_v)
    if eigen_val < best_val:
        best_val, best_v = eigen_val, eigen_v

    logger.info(f"convex roof: value {best_val:.10f} (rank {r}, m {m}, restarts {restarts}, seed {seed})")
    return RoofResult(best_val, Ensemble.from_unnormalized(objective.rows(best_v)), seed, restarts)
