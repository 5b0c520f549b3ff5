"""Unit tests for the QCN delay lower bound.

Functions tested: QcnStabilityParams, qcn_delay_lower_bound, loop_gain,
loop_gain_crossover
"""
import pytest

from qausim.fluid import (
    FluidAnalysisError,
    QcnStabilityParams,
    loop_gain,
    loop_gain_crossover,
    qcn_delay_lower_bound,
)


class TestDelayBound:
    """tau_min against the cited figures."""

    def test_ten_gigabit(self):
        tau = qcn_delay_lower_bound(QcnStabilityParams(10e9))
        assert tau == pytest.approx(271e-6, rel=0.15), f"tau_min = {tau * 1e6:.1f} us"

    def test_hundred_gigabit(self):
        tau = qcn_delay_lower_bound(QcnStabilityParams(100e9))
        assert tau == pytest.approx(27e-6, rel=0.15), f"tau_min = {tau * 1e6:.1f} us"

    def test_shrinks_with_capacity(self):
        taus = [qcn_delay_lower_bound(QcnStabilityParams(c)) for c in (10e9, 25e9, 40e9, 100e9)]
        assert all(a > b for a, b in zip(taus, taus[1:])), f"not monotone: {taus}"

    def test_ten_sources(self):
        """N = 10 at 10 Gbps behaves like one source at 1 Gbps: ten times the bound."""
        one = qcn_delay_lower_bound(QcnStabilityParams(10e9))
        ten = qcn_delay_lower_bound(QcnStabilityParams(10e9, n=10))
        assert ten / one == pytest.approx(10.0, rel=0.05)

    def test_cubic_variant_runs(self):
        tau = qcn_delay_lower_bound(QcnStabilityParams(10e9, omega_star_quartic=False))
        assert tau > 0

    def test_invalid_sampling(self):
        with pytest.raises(FluidAnalysisError):
            QcnStabilityParams(10e9, p_s=1.0)

    def test_derived_constants(self):
        d = QcnStabilityParams(10e9).derived()
        assert d["b"] == pytest.approx(0.01 * 10e9 / 12000)
        assert d["a3"] == pytest.approx(2 / 128 * 10e9 / 12000)
        assert d["omega_bar"] > 0 and d["omega_star"] > d["omega_bar"]

    def test_with_capacity(self):
        base = QcnStabilityParams(10e9, n=10)
        fast = base.with_capacity(100e9)
        assert fast.n == 10 and fast.capacity_bps == 100e9
        assert qcn_delay_lower_bound(fast) < qcn_delay_lower_bound(base)


class TestLoopGain:
    """Open-loop magnitude and its 0-dB crossover."""

    def test_crossover_is_unit_gain(self):
        params = QcnStabilityParams(10e9)
        w = loop_gain_crossover(params)
        assert float(loop_gain(params, w)) == pytest.approx(1.0, abs=1e-6)
        assert params.omega_bar < w < params.omega_star

    def test_gain_falls_at_high_frequency(self):
        params = QcnStabilityParams(10e9)
        assert float(loop_gain(params, params.omega_star * 100)) < 1.0
