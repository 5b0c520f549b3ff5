"""Fluid-model acceptance checks.

Pass criteria:
- Default caps (N=3, 1 Gbps, p=0.01, w=32) satisfy the sliding condition; b- = 0 breaks it
- QCN delay bound within 15% of 271 us (10G) and 27 us (100G), decreasing in C
- Sliding trajectory matches the closed form within 2% RMS, e-fold w/(pC) within 5%
- Frozen-branch integration matches the eigen solution to 1e-6 over 50 draws
- Delayed right-hand side equals its drifted form at 1000 random states
"""
import time
from dataclasses import replace

import numpy as np
import pytest

from qausim.fluid import (
    FluidSystem,
    QcnStabilityParams,
    delayed_rhs,
    drifted_rhs,
    integrate_fluid,
    linear_solution,
    qcn_delay_lower_bound,
    sliding_condition,
    sliding_fit,
)
from qausim.rp import Branch, Regime
from qausim.topology import default_asm_params


class TestSlidingExistence:
    """Sliding condition on the shipped defaults."""

    @pytest.mark.parametrize("regime", list(Regime))
    def test_defaults_hold(self, regime):
        """SLIDING: cap-derived defaults satisfy both inequalities."""
        t0 = time.perf_counter()
        system = FluidSystem.from_asm(default_asm_params(1e9), 3, 1e9, regime=regime)
        check = sliding_condition(system)
        assert check.holds, f"{regime.value}: lhs_minus={check.lhs_minus}, lhs_plus={check.lhs_plus}"
        assert time.perf_counter() - t0 < 1.0

    def test_zero_b_minus_fails(self):
        """SLIDING: without b- the minus inequality cannot hold."""
        system = FluidSystem.from_asm(default_asm_params(1e9), 3, 1e9)
        check = sliding_condition(replace(system, b_minus=0.0))
        assert not check.holds
        assert check.lhs_minus > 0


class TestQcnBound:
    """Delay lower bound of QCN stability."""

    def test_cited_values(self):
        """QCN: 271 us at 10 Gbps and 27 us at 100 Gbps within 15%."""
        tau10 = qcn_delay_lower_bound(QcnStabilityParams(10e9))
        tau100 = qcn_delay_lower_bound(QcnStabilityParams(100e9))
        assert abs(tau10 - 271e-6) / 271e-6 <= 0.15, f"10G: {tau10 * 1e6:.1f} us"
        assert abs(tau100 - 27e-6) / 27e-6 <= 0.15, f"100G: {tau100 * 1e6:.1f} us"
        assert 8 <= tau10 / tau100 <= 12

    def test_strictly_decreasing(self):
        """QCN: faster links tolerate less delay."""
        taus = [qcn_delay_lower_bound(QcnStabilityParams(c * 1e9)) for c in (10, 25, 40, 100)]
        assert all(a > b for a, b in zip(taus, taus[1:])), f"taus: {taus}"


class TestSlidingPhase:
    """Closed form of the queue on the boundary line."""

    def test_matches_closed_form(self, normalized_system):
        """SLIDING: post-entry x1 follows the exponential decay."""
        traj = integrate_fluid(normalized_system, 10.0, 1e-3, x0=(50.0, 0.0))
        fit = sliding_fit(traj, normalized_system, band=1e-9)
        assert fit.rms_error <= 0.02, f"rms error {fit.rms_error:.4f}"
        assert fit.efold_time == pytest.approx(fit.expected_efold, rel=0.05), \
            f"e-fold {fit.efold_time:.4f}, expected {fit.expected_efold:.4f}"


def random_compliant_system(gen: np.random.Generator) -> FluidSystem:
    """Unit-scale system (N = p = C = 1) drawn inside the sliding condition."""
    w = gen.uniform(1.0, 4.0)
    a_minus = gen.uniform(0.0, 1.0)
    b_minus = (w * w * a_minus + 1) / w + gen.uniform(0.5, 2.0)
    a_plus = gen.uniform(0.5, 2.0)
    b_plus = gen.uniform(0.0, 0.5) * (w * w * a_plus + 1) / w
    return FluidSystem(n=1, C=1.0, p=1.0, w=w, a_plus=a_plus, a_minus=a_minus,
                       b_plus=b_plus, b_minus=b_minus)


class TestFrozenBranchOracle:
    """RK4 on one branch against the analytic linear solution."""

    def test_random_draws(self):
        """ORACLE: 50 compliant draws, both branches, relative error <= 1e-6."""
        gen = np.random.default_rng(2024)
        for draw in range(50):
            system = random_compliant_system(gen)
            assert sliding_condition(system).holds
            x0 = (gen.uniform(-50, 50), gen.uniform(-50, 50))
            for branch in Branch:
                traj = integrate_fluid(system, 5.0, 1e-3, x0=x0, branch=branch)
                x1, x2 = linear_solution(system, branch, x0, traj.t)
                scale = max(np.max(np.abs(x1)), np.max(np.abs(x2)))
                err = max(np.max(np.abs(traj.x1 - x1)), np.max(np.abs(traj.x2 - x2))) / scale
                assert err <= 1e-6, f"draw {draw} {branch.value}: relative error {err:.3g}"


class TestDriftIdentity:
    """Delayed model written as the undelayed one plus drift."""

    def test_identity(self):
        """DRIFT: both right-hand sides agree at 1000 random states."""
        gen = np.random.default_rng(7)
        for _ in range(1000):
            system = random_compliant_system(gen)
            x1, x2, e1, e2 = gen.uniform(-10, 10, size=4)
            direct = delayed_rhs(system, x1, x2, e1, e2)
            split = drifted_rhs(system, x1, x2, e1, e2)
            assert split == pytest.approx(direct, rel=1e-9, abs=1e-6)
