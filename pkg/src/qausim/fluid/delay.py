"""Delay robustness of the ASM fluid model.

With delay tau the model sees eps1 = x1(t-tau) - x1(t), eps2 = x2(t-tau) - x2(t).
This module bounds eps1, eps2, the disturbance E1 = A*eps1 + K*B*eps2 and the
parameter drift, and evaluates the width D of the region H0 around q0 in
which E1 may prevent ideal sliding.

The switched right-hand side is written in mean/half-difference form:

    dx2/dt = -A x1 - K B x2 - [K_A |x1| + K K_B |x2|] * sign(F_b)

with A = N(a+ + a-)/2, K_A = N(a+ - a-)/2, B and K_B likewise and K = 1/(pC).
"""
import math
from dataclasses import dataclass

import numpy as np

from .system import FluidAnalysisError, FluidSystem


@dataclass(frozen=True)
class DelayRobustnessParams:
    tau: float
    K: float
    A_bar: float
    K_A: float
    B_bar: float
    K_B: float
    gamma: float
    k_gamma: float
    nu1: float
    nu2: float
    L: float
    eps1_bound: float
    eps2_bound: float
    drift_amplitude: float
    e1_bound: float


@dataclass(frozen=True)
class H0Width:
    D: float
    minus_term: float
    plus_term: float


@dataclass(frozen=True)
class DriftedParameters:
    phi: float
    A_drift: float  # A-bar in the rewritten model
    B_drift: float  # B-bar in the rewritten model (already carries K)
    a_plus: float
    a_minus: float
    b_plus: float
    b_minus: float


def mean_and_spread(sys: FluidSystem) -> tuple[float, float, float, float]:
    """(A, K_A, B, K_B) of the system."""
    n = sys.n
    return (
        n * (sys.a_plus + sys.a_minus) / 2,
        n * (sys.a_plus - sys.a_minus) / 2,
        n * (sys.b_plus + sys.b_minus) / 2,
        n * (sys.b_plus - sys.b_minus) / 2,
    )


def bound_factors(gamma: float, k_gamma: float, tau: float) -> tuple[float, float]:
    """(nu1, nu2) for the given growth constants."""
    if tau < 0:
        raise FluidAnalysisError(f"tau must be >= 0, got {tau}")
    growth = math.exp((1 + gamma + k_gamma) * tau)
    return tau * growth, tau * (gamma + k_gamma) * growth


def delay_robustness_bounds(sys: FluidSystem, tau: float, L: float = 1.0) -> DelayRobustnessParams:
    """Bounds on eps1, eps2, E1 and the parameter drift for a delay tau.

    L is |x1| + |x2| at the state of interest; the default gives the
    per-unit bounds.
    """
    k = 1.0 / sys.pC
    a_bar, k_a, b_bar, k_b = mean_and_spread(sys)
    gamma = math.hypot(a_bar, b_bar)
    k_gamma = math.hypot(k_a, k_b)
    nu1, nu2 = bound_factors(gamma, k_gamma, tau)
    return DelayRobustnessParams(
        tau=tau,
        K=k,
        A_bar=a_bar,
        K_A=k_a,
        B_bar=b_bar,
        K_B=k_b,
        gamma=gamma,
        k_gamma=k_gamma,
        nu1=nu1,
        nu2=nu2,
        L=L,
        eps1_bound=nu1 * L,
        eps2_bound=nu2 * L,
        drift_amplitude=abs(k_a) * nu1 + k * abs(k_b) * nu2,
        e1_bound=(a_bar * nu1 + k * b_bar * nu2) * L,
    )


def h0_width(sys: FluidSystem, e1: float) -> H0Width:
    """Half-width D (packets) of the region around q0 where E1 can stall sliding.

    Raises:
        FluidAnalysisError: a branch denominator is zero
    """
    w, n, pc = sys.w, sys.n, sys.pC

    def term(a: float, b: float, label: str) -> float:
        den = abs(w * w * n * a - w * n * b + pc * pc)
        if den == 0:
            raise FluidAnalysisError(f"zero H0 denominator on the {label} branch")
        return w * w * abs(e1) / den

    minus_term = term(sys.a_minus, sys.b_minus, "minus")
    plus_term = term(sys.a_plus, sys.b_plus, "plus")
    return H0Width(max(minus_term, plus_term), minus_term, plus_term)


def delayed_fb(sys: FluidSystem, x1: float, x2: float, eps1: float, eps2: float) -> float:
    """Boundary value seen through the delay: F_b of the delayed state."""
    return -((x1 + eps1) + sys.w / sys.pC * (x2 + eps2))


def delayed_rhs(sys: FluidSystem, x1: float, x2: float,
                eps1: float, eps2: float) -> tuple[float, float]:
    """(dx1/dt, dx2/dt) of the delayed model, written on the delayed state."""
    k = 1.0 / sys.pC
    a_bar, k_a, b_bar, k_b = mean_and_spread(sys)
    s = np.sign(delayed_fb(sys, x1, x2, eps1, eps2))
    y1, y2 = x1 + eps1, x2 + eps2
    dx2 = -a_bar * y1 - k * b_bar * y2 - (k_a * abs(y1) + k * k_b * abs(y2)) * s
    return x2, float(dx2)


def drifted_parameters(sys: FluidSystem, x1: float, x2: float,
                       eps1: float, eps2: float) -> DriftedParameters:
    """Fold the delay into drifted A, B and drifted branch coefficients.

    Raises:
        FluidAnalysisError: x1 = x2 = 0 (L = 0)
    """
    L = abs(x1) + abs(x2)
    if L == 0:
        raise FluidAnalysisError("drift undefined at the origin (L = 0)")
    k = 1.0 / sys.pC
    a_bar, k_a, b_bar, k_b = mean_and_spread(sys)
    s = np.sign(delayed_fb(sys, x1, x2, eps1, eps2))
    phi = float((k_a * (abs(x1 + eps1) - abs(x1)) + k * k_b * (abs(x2 + eps2) - abs(x2))) * s)
    da = phi / L * np.sign(x1)
    db = phi / L * np.sign(x2)
    per_source_a = float(da) / sys.n
    per_source_b = float(db) * sys.pC / sys.n
    return DriftedParameters(
        phi=phi,
        A_drift=a_bar + float(da),
        B_drift=k * b_bar + float(db),
        a_plus=sys.a_plus + per_source_a,
        a_minus=sys.a_minus + per_source_a,
        b_plus=sys.b_plus + per_source_b,
        b_minus=sys.b_minus + per_source_b,
    )


def drifted_rhs(sys: FluidSystem, x1: float, x2: float,
                eps1: float, eps2: float) -> tuple[float, float]:
    """(dx1/dt, dx2/dt) of the drifted-parameter model plus the E1 disturbance.

    Agrees with `delayed_rhs` at every state with L > 0.
    """
    k = 1.0 / sys.pC
    a_bar, k_a, b_bar, k_b = mean_and_spread(sys)
    drift = drifted_parameters(sys, x1, x2, eps1, eps2)
    s = np.sign(delayed_fb(sys, x1, x2, eps1, eps2))
    e1 = a_bar * eps1 + k * b_bar * eps2
    dx2 = (-drift.A_drift * x1 - drift.B_drift * x2 - e1
           - (k_a * abs(x1) + k * k_b * abs(x2)) * s)
    return x2, float(dx2)
