"""Sliding-mode existence, eigen structure and the sliding-phase solution."""
from dataclasses import dataclass

import numpy as np

from qausim.rp.switching import Branch, SwitchingRule, branch_for_region

from .system import FluidAnalysisError, FluidSystem


@dataclass(frozen=True)
class SlidingCheck:
    holds: bool
    lhs_minus: float
    lhs_plus: float


@dataclass(frozen=True)
class Spiral:
    lambda1: complex
    lambda2: complex


@dataclass(frozen=True)
class Parabola:
    """Real roots; trajectories approach the invariant lines x2 = slope*x1."""
    lambda1: float
    lambda2: float
    sigma_slope: float
    omega_slope: float
    degenerate: bool  # a zero root: the sigma line is a line of equilibria


def _lhs(sys: FluidSystem, a: float, b: float) -> float:
    scale = sys.n / (sys.p * sys.C) ** 2
    return sys.w ** 2 * scale * a - sys.w * scale * b + 1


def sliding_condition(sys: FluidSystem) -> SlidingCheck:
    """Both inequalities: minus pair gives < 0, plus pair gives > 0."""
    lhs_minus = _lhs(sys, sys.a_minus, sys.b_minus)
    lhs_plus = _lhs(sys, sys.a_plus, sys.b_plus)
    return SlidingCheck(lhs_minus < 0 and lhs_plus > 0, lhs_minus, lhs_plus)


def eigenvalues(sys: FluidSystem, branch: Branch) -> tuple[complex, complex]:
    """Roots of s^2 + (N*b/(pC))s + N*a, larger real part first."""
    d = sys.damping(branch)
    k = sys.alpha_eff(branch)
    root = np.emath.sqrt(d * d / 4 - k)
    lam1 = complex(-d / 2 + root)
    lam2 = complex(-d / 2 - root)
    if lam2.real > lam1.real:
        lam1, lam2 = lam2, lam1
    return lam1, lam2


def classify_trajectory(sys: FluidSystem, region_sign: int,
                        rule: SwitchingRule = SwitchingRule.WEDGE_DAMPED) -> Spiral | Parabola:
    """Trajectory shape in the region with sign(Q_f*F_b) = region_sign.

    The plus branch must spiral, the minus branch must have real roots.

    Raises:
        FluidAnalysisError: sliding condition fails, or roots contradict the branch
    """
    check = sliding_condition(sys)
    if not check.holds:
        raise FluidAnalysisError(
            f"sliding condition fails (lhs_minus={check.lhs_minus:.6g}, "
            f"lhs_plus={check.lhs_plus:.6g}); classification refused"
        )

    branch = branch_for_region(region_sign, rule)
    lam1, lam2 = eigenvalues(sys, branch)
    is_complex = abs(lam1.imag) > 0

    if branch is Branch.PLUS:
        if not is_complex or lam1.real > 0:
            raise FluidAnalysisError(f"plus branch roots {lam1}, {lam2} do not spiral inward")
        return Spiral(lam1, lam2)

    if is_complex:
        raise FluidAnalysisError(f"minus branch roots {lam1}, {lam2} are complex")
    return Parabola(
        lambda1=lam1.real,
        lambda2=lam2.real,
        sigma_slope=lam1.real,
        omega_slope=lam2.real,
        degenerate=lam1.real == 0.0,
    )


def sliding_queue_solution(q_init: float, sys: FluidSystem, t):
    """q0 + (q_init - q0) * exp(-pC t / w). Accepts scalars or arrays."""
    return sys.q0 + (q_init - sys.q0) * np.exp(-sys.pC * np.asarray(t) / sys.w)
