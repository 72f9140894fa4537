"""
Pydantic models for validated parameters, reports and HTTP payloads.
"""

import math
from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

SCHEMA = "tangle-response/1"

# Slack on interval endpoints so that e.g. np.pi / 2 passes validation
_SLACK = 1e-12
HALF_PI = math.pi / 2


class Family(str, Enum):
    """Boundary state families of the symmetric three-qubit states."""
    G = "G"
    J = "J"


class SymParams(BaseModel):
    """Parameters (alpha, beta, gamma) of a symmetric three-qubit pure state."""
    model_config = {"frozen": True}

    alpha: float = Field(..., ge=-_SLACK, le=HALF_PI + _SLACK, description="Weight of the flipped W state, radians in [0, pi/2]")
    beta: float = Field(..., ge=-_SLACK, le=HALF_PI + _SLACK, description="GHZ-sector mixing angle, radians in [0, pi/2]")
    gamma: float = Field(0.0, ge=-HALF_PI - _SLACK, le=HALF_PI + _SLACK, description="Relative phase of |111>, radians in [-pi/2, pi/2]")


class NoiseSpec(BaseModel):
    """Noise strength q and W-sector weight p."""
    q: float = Field(..., ge=0.0, le=1.0, description="Noise strength")
    p: float = Field(0.5, ge=0.0, le=1.0, description="Weight of the {Psi_1, Psi_2} sector")


class ResponseReport(BaseModel):
    """Linear response of the three-tangle for one symmetric state."""
    tau: float
    negativity: float
    omega_moduli: List[float] = Field(..., min_length=4, max_length=4, description="Descending |omega_k|")
    eta: float
    params: Optional[SymParams] = None


class RescaledParams(BaseModel):
    """Parameters (q_tilde, p) of the rescaled noisy state."""
    q_tilde: float = Field(..., ge=0.0, le=1.0)
    p: float = Field(..., ge=0.0, le=1.0)


class CriticalResult(BaseModel):
    """Critical noise washing out the three-tangle of a G or J state."""
    family: Family
    param: float = Field(..., description="beta for the G family, alpha for the J family")
    tau: float
    p: float
    q_tilde_c: float
    q_c: float = Field(..., gt=0.0, lt=1.0)
    avg_decay: float


class SweepConfig(BaseModel):
    """Configuration of a figure-data sweep."""
    grid: int = Field(41, ge=2, description="Grid density per parameter")
    seed: int = Field(0, ge=0)
    out: Optional[str] = Field(None, description="Output path; stdout when omitted")
    format: Literal["csv", "json"] = "csv"
    slope_q: List[float] = Field(default_factory=lambda: [1e-3, 1e-4])
    workers: int = Field(1, ge=1)

    @field_validator("slope_q")
    @classmethod
    def _check_slope_q(cls, values: List[float]) -> List[float]:
        for q in values:
            if not 0.0 < q <= 0.05:
                raise ValueError(f"slope q values must lie in (0, 0.05], got {q}")
        return values


class CheckResult(BaseModel):
    """One entry of the verification suite."""
    name: str
    residual: float
    tolerance: float
    passed: bool


class VerifyReport(BaseModel):
    schema_: str = Field(SCHEMA, alias="schema")
    version: str
    seed: int
    passed: bool
    checks: List[CheckResult]

    model_config = {"populate_by_name": True}


class RoofReport(BaseModel):
    """Convex-roof oracle versus the ansatz decomposition."""
    schema_: str = Field(SCHEMA, alias="schema")
    state: str
    q: float
    m: int
    restarts: int
    seed: int
    oracle: float
    ansatz: float
    gap: float

    model_config = {"populate_by_name": True}


class RoofRequest(BaseModel):
    """Request for the convex-roof oracle."""
    state: str = Field(..., description="'2q:THETA' or '3q:ALPHA,BETA,GAMMA'")
    q: float = Field(..., ge=0.0, le=1.0)
    m: Optional[int] = Field(None, ge=1, description="Ensemble size; 4 for two qubits, 16 for three when omitted")
    restarts: int = Field(64, ge=1)
    seed: int = Field(0, ge=0)


class CriticalRequest(BaseModel):
    """Request for the critical noise of a G or J state."""
    family: Family
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: float = 0.0


class HealthResponse(BaseModel):
    """Health check response."""
    status: str
    version: str
    uptime: float
    requests: int
