"""Test utilities and helper functions."""

from pathlib import Path
from typing import List

import numpy as np

from tangle_response.linalg import trace_norm


def assert_close(actual, expected, tol: float, what: str = "value"):
    """
    Helper: assert |actual - expected| <= tol elementwise.

    Args:
        actual: computed value or array
        expected: reference value or array
        tol: absolute tolerance
        what: label used in the failure message
    """
    diff = float(np.max(np.abs(np.asarray(actual) - np.asarray(expected))))
    assert diff <= tol, f"{what}: deviation {diff:.3e} exceeds {tol:.1e}"


def assert_reconstructs(ensemble, rho: np.ndarray, tol: float = 1e-10):
    """Helper: the ensemble mixes to rho within tol in trace norm."""
    err = trace_norm(ensemble.density_matrix() - rho)
    assert err <= tol, f"reconstruction error {err:.3e} exceeds {tol:.1e}"


def read_csv_lines(path: Path) -> List[str]:
    """Helper: lines of a CSV output, comment line included."""
    return path.read_text(encoding="utf-8").splitlines()
