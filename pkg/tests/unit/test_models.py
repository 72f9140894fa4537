"""Unit tests for Pydantic models."""

import math

import pytest
from pydantic import ValidationError

from tangle_response.models import (
    SCHEMA, CheckResult, CriticalRequest, CriticalResult, Family, NoiseSpec,
    RoofRequest, SweepConfig, SymParams, VerifyReport,
)


@pytest.mark.unit
class TestSymParams:
    """Parameter ranges of the symmetric states."""

    def test_defaults(self):
        p = SymParams(alpha=0.3, beta=0.2)
        assert p.gamma == 0.0

    def test_endpoints_accept_float_pi(self):
        # np.pi / 2 may exceed the mathematical endpoint by an ulp
        p = SymParams(alpha=math.pi / 2, beta=math.pi / 2, gamma=-math.pi / 2)
        assert p.alpha == math.pi / 2

    @pytest.mark.parametrize("field,value", [
        ("alpha", -0.1), ("alpha", 1.6), ("beta", 2.0), ("gamma", 1.6), ("gamma", -1.6),
    ])
    def test_out_of_range(self, field, value):
        kwargs = {"alpha": 0.3, "beta": 0.2, field: value}
        with pytest.raises(ValidationError):
            SymParams(**kwargs)

    def test_frozen(self):
        p = SymParams(alpha=0.3, beta=0.2)
        with pytest.raises(ValidationError):
            p.alpha = 0.4


@pytest.mark.unit
class TestNoiseSpec:
    """Noise strength and sector weight."""

    def test_default_weight(self):
        assert NoiseSpec(q=0.1).p == 0.5

    @pytest.mark.parametrize("q,p", [(-0.1, 0.5), (1.1, 0.5), (0.1, 1.5)])
    def test_ranges(self, q, p):
        with pytest.raises(ValidationError):
            NoiseSpec(q=q, p=p)


@pytest.mark.unit
class TestSweepConfig:
    """Sweep configuration validation."""

    def test_defaults(self):
        cfg = SweepConfig()
        assert cfg.grid == 41
        assert cfg.format == "csv"
        assert cfg.slope_q == [1e-3, 1e-4]

    @pytest.mark.parametrize("values", [[0.0], [0.1], [1e-3, -1e-4]])
    def test_slope_q_range(self, values):
        with pytest.raises(ValidationError):
            SweepConfig(slope_q=values)

    def test_format(self):
        with pytest.raises(ValidationError):
            SweepConfig(format="xml")

    def test_grid_minimum(self):
        with pytest.raises(ValidationError):
            SweepConfig(grid=1)


@pytest.mark.unit
class TestReports:
    """Report serialization."""

    def test_verify_report_schema_alias(self):
        report = VerifyReport(version="1.0.0", seed=0, passed=True,
                              checks=[CheckResult(name="x", residual=0.0, tolerance=1e-9, passed=True)])
        dumped = report.model_dump(by_alias=True)
        assert dumped["schema"] == SCHEMA
        assert "schema_" not in dumped

    def test_critical_result_range(self):
        with pytest.raises(ValidationError):
            CriticalResult(family=Family.G, param=0.3, tau=0.5, p=0.4,
                           q_tilde_c=0.2, q_c=0.0, avg_decay=1.0)

    def test_family_from_string(self):
        assert CriticalRequest(family="J", alpha=0.2).family is Family.J
        with pytest.raises(ValidationError):
            CriticalRequest(family="K")

    def test_roof_request(self):
        req = RoofRequest(state="2q:0.5", q=0.1)
        assert req.m is None and req.restarts == 64
        with pytest.raises(ValidationError):
            RoofRequest(state="2q:0.5", q=1.5)
