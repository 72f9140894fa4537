"""
Figure data: response cloud and boundary curves, average decay rates and
critical curves, as pandas DataFrames.

Grid points are independent; with workers > 1 they are evaluated in a
process pool, and rows are always emitted in grid order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd

from .critical import critical_curve, critical_q, is_convex
from .linalg import make_rng
from .models import Family, SweepConfig, SymParams
from .response import lrt

logger = logging.getLogger(__name__)

FIG1_COLUMNS = ["alpha", "beta", "gamma", "tau", "negativity", "eta", "family"]
FIG2_COLUMNS = ["family", "param", "tau", "q_c", "avg_decay"]
FIG3_COLUMNS = ["family", "p", "q_tilde_c", "x", "y", "convex"]

FIG3_P_GRID = np.linspace(0.01, 0.99, 101)
J_ALPHA_MIN = 1e-6


def _pool_map(fn: Callable, items: Sequence, workers: int) -> List:
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# --------------------------------------------------------------------------
# Response cloud
# --------------------------------------------------------------------------

def _fig1_row(item: Tuple[float, float, float, str]) -> Dict:
    alpha, beta, gamma, tag = item
    report = lrt(SymParams(alpha=alpha, beta=beta, gamma=gamma))
    return {"alpha": alpha, "beta": beta, "gamma": gamma, "tau": report.tau,
            "negativity": report.negativity, "eta": report.eta, "family": tag}


def fig1_points(cfg: SweepConfig) -> List[Tuple[float, float, float, str]]:
    """Grid cloud, seeded random cloud, then the G and J boundary curves."""
    half = math.pi / 2
    axis = np.linspace(0.0, half, cfg.grid)
    gammas = np.linspace(-half, half, max(3, cfg.grid // 4))
    points = [(a, b, g, "grid") for a in axis for b in axis for g in gammas]

    rng = make_rng(cfg.seed, 0)
    n_random = cfg.grid * cfg.grid
    draws = rng.random((n_random, 3))
    points += [(half * d[0], half * d[1], half * (2 * d[2] - 1), "random") for d in draws]

    points += [(half, b, 0.0, "G") for b in np.linspace(0.0, math.pi / 4, cfg.grid)]
    points += [(a, 0.0, 0.0, "J") for a in axis]
    return [(float(a), float(b), float(g), tag) for a, b, g, tag in points]


def fig1_data(cfg: SweepConfig) -> pd.DataFrame:
    points = fig1_points(cfg)
    logger.info(f"fig1: {len(points)} states, {cfg.workers} worker(s)")
    return pd.DataFrame(_pool_map(_fig1_row, points, cfg.workers), columns=FIG1_COLUMNS)


# --------------------------------------------------------------------------
# Average decay rates
# --------------------------------------------------------------------------

def _fig2_row(item: Tuple[str, float]) -> Dict:
    family, param = item
    res = critical_q(family, param)
    return {"family": res.family.value, "param": param, "tau": res.tau,
            "q_c": res.q_c, "avg_decay": res.avg_decay}


def fig2_points(cfg: SweepConfig) -> List[Tuple[str, float]]:
    """G: beta up to pi/4 (tau -> 1); J: alpha geometric down to 1e-6 (tau -> 0)."""
    betas = np.linspace(math.pi / 4 / cfg.grid, math.pi / 4, cfg.grid)
    alphas = np.geomspace(J_ALPHA_MIN, math.pi / 6, cfg.grid)
    return ([(Family.G.value, float(b)) for b in betas]
            + [(Family.J.value, float(a)) for a in alphas])


def fig2_data(cfg: SweepConfig) -> pd.DataFrame:
    points = fig2_points(cfg)
    logger.info(f"fig2: {len(points)} states, {cfg.workers} worker(s)")
    return pd.DataFrame(_pool_map(_fig2_row, points, cfg.workers), columns=FIG2_COLUMNS)


# --------------------------------------------------------------------------
# Critical curves
# --------------------------------------------------------------------------

def fig3_data(cfg: SweepConfig, ps: Iterable[float] = FIG3_P_GRID) -> pd.DataFrame:
    ps = np.asarray(list(ps), dtype=float)
    frames = []
    for family in Family:
        qc, x, y = critical_curve(family, ps)
        convex = is_convex(x, y)
        if not convex:
            logger.warning(f"fig3: critical curve of {family.value}~ failed the convexity test")
        frames.append(pd.DataFrame({"family": family.value, "p": ps, "q_tilde_c": qc,
                                    "x": x, "y": y, "convex": convex}))
    return pd.concat(frames, ignore_index=True)[FIG3_COLUMNS]


FIGURES: Dict[str, Callable[[SweepConfig], pd.DataFrame]] = {
    "fig1": fig1_data,
    "fig2": fig2_data,
    "fig3": fig3_data,
}
