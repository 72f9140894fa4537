"""
Invariant suite behind the `verify` command, and the oracle-versus-ansatz
comparison behind `roof`.

Every check returns (residual, tolerance); a check passes when the residual
does not exceed tolerance * tol_scale. An exception inside a check counts as
a failure with an infinite residual.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from . import __version__
from .critical import (
    characteristic_min, critical_curve, critical_q, filtered_state,
    optimal_ensemble_Gtilde, optimal_ensemble_Jtilde, rescaling_x, tau_tilde,
)
from .linalg import make_rng, trace_norm
from .measures import (
    concurrence_wootters, convex_roof, negativity_one_rest, tangle_param,
)
from .models import CheckResult, Family, RoofReport, SymParams, VerifyReport
from .response import (
    expansion_coefficients, first_order_tangle, ghz_curve, lrt, omega_matrix,
    omega_matrix_2q, omega_moduli, optimal_ensemble_2q, optimal_ensemble_3q,
    r_matrix,
)
from .sweeps import FIG3_P_GRID
from .states import (
    g_tilde, j_tilde, local_A, mix, noise_op_2q, noise_op_3q, phi, sym_state,
)

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2


@dataclass
class SuiteConfig:
    """Sizes of the sampled checks."""
    seed: int = 0
    grid: int = 5
    oracle_samples: int = 4
    restarts: int = 16
    tol_scale: float = 1.0
    slope_q: Sequence[float] = (1e-3, 1e-4)
    random_params: int = 10_000
    omega_params: int = 1_000


Check = Callable[[SuiteConfig], Tuple[float, float]]
CHECKS: Dict[str, Check] = {}


def check(name: str) -> Callable[[Check], Check]:
    def register(fn: Check) -> Check:
        CHECKS[name] = fn
        return fn
    return register


def random_params(seed: int, n: int, stream: int = 1) -> List[SymParams]:
    """Uniform (alpha, beta, gamma) over the parameter box."""
    u = make_rng(seed, stream).random((n, 3))
    return [SymParams(alpha=HALF_PI * a, beta=HALF_PI * b, gamma=HALF_PI * (2 * g - 1))
            for a, b, g in u]


# --------------------------------------------------------------------------
# Two qubits
# --------------------------------------------------------------------------

_THETAS = np.linspace(0.05, math.pi / 4, 25)


@check("exact_concurrence")
def _exact_concurrence(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for theta in _THETAS:
        s = math.sin(2 * theta)
        for q in np.linspace(0.0, 0.9, 19):
            value = concurrence_wootters(mix(phi(theta), noise_op_2q(), q))
            worst = max(worst, abs(value - max(0.0, s - q * (1 + s))))
    return worst, 1e-10


def richardson_slope(measure: Callable[[float], float], h1: float, h2: float) -> float:
    """First-order decay rate of measure(q) at q = 0 from two step sizes."""
    s1 = (measure(0.0) - measure(h1)) / h1
    s2 = (measure(0.0) - measure(h2)) / h2
    return (h1 * s2 - h2 * s1) / (h1 - h2)


@check("lrc_slope")
def _lrc_slope(cfg: SuiteConfig) -> Tuple[float, float]:
    h1, h2 = cfg.slope_q[0], cfg.slope_q[1]
    worst = 0.0
    for theta in _THETAS:
        slope = richardson_slope(lambda q: concurrence_wootters(mix(phi(theta), noise_op_2q(), q)), h1, h2)
        worst = max(worst, abs(slope - (math.sin(2 * theta) + 1)))
    return worst, 1e-5


@check("two_qubit_unification")
def _two_qubit_unification(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for theta in _THETAS:
        sv = np.linalg.svd(omega_matrix_2q(theta), compute_uv=False)
        worst = max(worst, float(np.max(np.abs(sv - 1.0))))
    return worst, 1e-10


@check("ensemble_2q_reconstruction")
def _ensemble_2q(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for theta in _THETAS[::6]:
        for q in (0.01, 0.1, 0.3):
            target = mix(phi(theta), noise_op_2q(), q).rho
            worst = max(worst, trace_norm(optimal_ensemble_2q(theta, q).density_matrix() - target))
    return worst, 1e-10


# --------------------------------------------------------------------------
# Three qubits: response
# --------------------------------------------------------------------------

@check("r_identities")
def _r_identities(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for p in random_params(cfg.seed, cfg.random_params):
        r = r_matrix(p)
        tau = abs(tangle_param(p))
        n2 = negativity_one_rest(sym_state(p)) ** 2
        worst = max(worst, abs(r.X + r.Y - 8 * n2),
                    abs(r.X * r.Y - abs(r.Z_plus) ** 2 - 16 * tau ** 2),
                    abs(r.X * r.Y - abs(r.Z_minus) ** 2 - 16 * tau ** 2))
    return worst, 1e-10


@check("omega_oracle")
def _omega_oracle(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for p in random_params(cfg.seed, cfg.omega_params, stream=2):
        sv = np.linalg.svd(omega_matrix(p), compute_uv=False)
        worst = max(worst, float(np.max(np.abs(sv - omega_moduli(p)))))
    return worst, 1e-8


@check("expansion_first_order")
def _expansion_first_order(cfg: SuiteConfig) -> Tuple[float, float]:
    rng = make_rng(cfg.seed, 3)
    worst = 0.0
    for p in random_params(cfg.seed, cfg.omega_params, stream=3):
        chi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        chi /= np.linalg.norm(chi)
        worst = max(worst, abs(expansion_coefficients(p, chi)[1]))
    return worst, 1e-10


@check("lrt_consistency")
def _lrt_consistency(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for p in random_params(cfg.seed, cfg.random_params, stream=4):
        report = lrt(p)
        worst = max(worst, abs(report.eta - 2 * report.tau - sum(report.omega_moduli) / 4))
    return worst, 1e-10


@check("lrt_fixed_points")
def _lrt_fixed_points(cfg: SuiteConfig) -> Tuple[float, float]:
    cases = [
        (SymParams(alpha=HALF_PI, beta=math.pi / 4), 4.0),
        (SymParams(alpha=0.0, beta=0.0), 4 / 3),
        (SymParams(alpha=HALF_PI, beta=0.0), 0.0),
    ]
    return max(abs(lrt(p).eta - expected) for p, expected in cases), 1e-10


@check("radicand_nonnegative")
def _radicand(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for p in random_params(cfg.seed, cfg.random_params, stream=5):
        n = negativity_one_rest(sym_state(p))
        worst = max(worst, abs(tangle_param(p)) ** 2 - n ** 4)
    return max(worst, 0.0), 1e-12


@check("ghz_envelope")
def _ghz_envelope(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for p in random_params(cfg.seed, cfg.random_params, stream=6):
        report = lrt(p)
        worst = max(worst, ghz_curve(min(report.tau, 1.0)) - report.eta)
    return max(worst, 0.0), 1e-9


@check("sudden_death_limit")
def _sudden_death(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for alpha in (0.0, 1e-9, 1e-8):
        for beta in np.linspace(0.0, HALF_PI, 7):
            report = lrt(SymParams(alpha=alpha, beta=float(beta)))
            if report.tau < 1e-6 and report.negativity > 0.1:
                worst = max(worst, abs(report.eta - math.sqrt(2) * report.negativity))
    return worst, 1e-5


_ENSEMBLE_POINT = SymParams(alpha=math.pi / 3, beta=math.pi / 5, gamma=0.3)


@check("ensemble_3q_reconstruction")
def _ensemble_3q(cfg: SuiteConfig) -> Tuple[float, float]:
    q = 0.01
    target = mix(sym_state(_ENSEMBLE_POINT), noise_op_3q(), q).rho
    return trace_norm(optimal_ensemble_3q(_ENSEMBLE_POINT, q).density_matrix() - target), 1e-10


def second_order_ratio(p: SymParams, q1: float = 1e-2, q2: float = 1e-3) -> float:
    """Ratio of the deviations from the first-order tangle at two noise levels."""
    def deviation(q: float) -> float:
        return optimal_ensemble_3q(p, q).average("tangle") - first_order_tangle(p, q)
    return deviation(q1) / deviation(q2)


@check("ensemble_3q_second_order")
def _ensemble_3q_order(cfg: SuiteConfig) -> Tuple[float, float]:
    ratio = second_order_ratio(_ENSEMBLE_POINT)
    return abs(ratio / 100 - 1), 0.2


@check("roof_vs_wootters")
def _roof_vs_wootters(cfg: SuiteConfig) -> Tuple[float, float]:
    u = make_rng(cfg.seed, 7).random((cfg.oracle_samples, 2))
    worst = 0.0
    for i, (a, b) in enumerate(u):
        rho = mix(phi(math.pi / 4 * a), noise_op_2q(), 0.5 * b)
        oracle = convex_roof(rho, "concurrence", m=4, restarts=cfg.restarts, seed=cfg.seed + i).value
        worst = max(worst, abs(oracle - concurrence_wootters(rho)))
    return worst, 1e-4


@check("roof_vs_ansatz")
def _roof_vs_ansatz(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    params = [p for p in random_params(cfg.seed, 4 * cfg.oracle_samples, stream=8)
              if abs(tangle_param(p)) > 1e-3][: cfg.oracle_samples]
    for i, p in enumerate(params):
        report = roof_report(f"3q:{p.alpha},{p.beta},{p.gamma}", 0.01, None, cfg.restarts, cfg.seed + i)
        worst = max(worst, -report.gap)
    return max(worst, 0.0), 1e-4


# --------------------------------------------------------------------------
# Three qubits: critical noise
# --------------------------------------------------------------------------

def _unit_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n + 2)[1:-1]


@check("tau_tilde_bruteforce")
def _tau_tilde_bruteforce(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for family in Family:
        for qt in _unit_grid(cfg.grid):
            for p in _unit_grid(cfg.grid):
                closed = tau_tilde(family, qt, p)
                worst = max(worst, abs(characteristic_min(family, qt, p) - closed))
    return worst, 1e-8


@check("six_state_reconstruction")
def _six_state(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for qt in _unit_grid(cfg.grid):
        for p in _unit_grid(cfg.grid):
            for family, build in ((Family.G, optimal_ensemble_Gtilde), (Family.J, optimal_ensemble_Jtilde)):
                target = filtered_state(family, qt, p).rho
                worst = max(worst, trace_norm(build(qt, p).density_matrix() - target))
    return worst, 1e-10


@check("six_state_average")
def _six_state_average(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for qt in _unit_grid(cfg.grid):
        for p in _unit_grid(cfg.grid):
            g_closed = tau_tilde(Family.G, qt, p)
            if g_closed > 0:
                worst = max(worst, abs(optimal_ensemble_Gtilde(qt, p).average("tangle") - g_closed))
            j_closed = tau_tilde(Family.J, qt, p)
            if j_closed > 0:
                worst = max(worst, abs(optimal_ensemble_Jtilde(qt, p).average("tangle") - j_closed))
    return worst, 1e-8


@check("critical_convexity")
def _critical_convexity(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for family in Family:
        _, x, y = critical_curve(family, FIG3_P_GRID)
        cross = (x[1:-1] - x[:-2]) * (y[2:] - y[1:-1]) - (y[1:-1] - y[:-2]) * (x[2:] - x[1:-1])
        worst = max(worst, float(np.max(-cross)))
    return max(worst, 0.0), 1e-9


@check("rescaling_proportionality")
def _rescaling(cfg: SuiteConfig) -> Tuple[float, float]:
    worst = 0.0
    for beta in (0.2, math.pi / 4, 1.1):
        for gamma in (-1.0, 0.0, 0.7):
            p = SymParams(alpha=HALF_PI, beta=beta, gamma=gamma)
            tau = abs(tangle_param(p))
            mapped = local_A(rescaling_x(Family.G, beta, gamma)) @ sym_state(p).amplitudes
            expected = np.exp(0.5j * gamma) * tau ** 0.25 * g_tilde().amplitudes
            worst = max(worst, float(np.linalg.norm(mapped - expected)))
    for alpha in (0.1, math.pi / 6, 1.2):
        p = SymParams(alpha=alpha, beta=0.0)
        tau = abs(tangle_param(p))
        mapped = local_A(rescaling_x(Family.J, alpha)) @ sym_state(p).amplitudes
        worst = max(worst, float(np.linalg.norm(mapped - tau ** 0.25 * j_tilde().amplitudes)))
    return worst, 1e-10


@check("decay_endpoints")
def _decay_endpoints(cfg: SuiteConfig) -> Tuple[float, float]:
    g = critical_q(Family.G, math.pi / 4).avg_decay
    j = critical_q(Family.J, 1e-6).avg_decay
    return max(abs(g - 4) / 4, abs(j - 4 / 3) / (4 / 3)), 1e-2


# --------------------------------------------------------------------------
# Runner
# --------------------------------------------------------------------------

def run_check(name: str, cfg: SuiteConfig) -> CheckResult:
    try:
        residual, tolerance = CHECKS[name](cfg)
    except Exception as e:
        logger.error(f"Check {name} raised: {e}", exc_info=True)
        residual, tolerance = math.inf, 0.0
    tolerance *= cfg.tol_scale
    passed = bool(residual <= tolerance)
    logger.info(f"{'PASS' if passed else 'FAIL'} {name}: residual {residual:.3e} (tolerance {tolerance:.1e})")
    return CheckResult(name=name, residual=float(residual), tolerance=tolerance, passed=passed)


def run_suite(cfg: SuiteConfig, names: Sequence[str] = ()) -> VerifyReport:
    """Run the named checks (all when empty) in registration order."""
    unknown = set(names) - set(CHECKS)
    if unknown:
        raise ValueError(f"Unknown checks: {sorted(unknown)}")
    selected = [n for n in CHECKS if not names or n in names]
    results = [run_check(name, cfg) for name in selected]
    return VerifyReport(version=__version__, seed=cfg.seed,
                        passed=all(r.passed for r in results), checks=results)


# --------------------------------------------------------------------------
# Convex-roof oracle versus ansatz
# --------------------------------------------------------------------------

def parse_state_spec(spec: str) -> Tuple[str, Union[float, SymParams]]:
    """
    Parse '2q:THETA' or '3q:ALPHA,BETA[,GAMMA]' (radians).

    Raises:
        ValueError: for malformed specs or out-of-range angles
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise ValueError(f"State spec {spec!r} must look like '2q:THETA' or '3q:A,B,G'")
    try:
        values = [float(v) for v in rest.split(",")]
    except ValueError:
        raise ValueError(f"Non-numeric angle in state spec {spec!r}") from None
    if kind == "2q" and len(values) == 1:
        phi(values[0])
        return kind, values[0]
    if kind == "3q" and len(values) in (2, 3):
        return kind, SymParams(alpha=values[0], beta=values[1], gamma=values[2] if len(values) == 3 else 0.0)
    raise ValueError(f"State spec {spec!r} must look like '2q:THETA' or '3q:A,B,G'")


def roof_report(spec: str, q: float, m, restarts: int, seed: int) -> RoofReport:
    """
    Convex-roof search on the noisy state against the ansatz decomposition.

    The ensemble size defaults to the ansatz size (4 members for two
    qubits, 16 for three), so the search space contains the ansatz.
    """
    kind, params = parse_state_spec(spec)
    if kind == "2q":
        rho = mix(phi(params), noise_op_2q(), q)
        ansatz = optimal_ensemble_2q(params, q).average("concurrence")
        measure, default_m = "concurrence", 4
    else:
        rho = mix(sym_state(params), noise_op_3q(), q)
        if q == 0.0 or abs(tangle_param(params)) < 1e-12:
            ansatz = abs(tangle_param(params)) if q == 0.0 else first_order_tangle(params, q)
        else:
            ansatz = optimal_ensemble_3q(params, q).average("tangle")
        measure, default_m = "tangle", 16
    rank = rho.rank()
    m = max(default_m, rank) if m is None else int(m)
    if m < rank:
        raise ValueError(f"Ensemble size {m} is smaller than the rank {rank} of the state")
    oracle = convex_roof(rho, measure, m=m, restarts=restarts, seed=seed).value
    return RoofReport(state=spec, q=q, m=m, restarts=restarts, seed=seed,
                      oracle=oracle, ansatz=ansatz, gap=ansatz - oracle)
