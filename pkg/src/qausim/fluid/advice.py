"""Parameter advice for one ASM regime.

Reports the sliding inequalities, the H0 terms of both branches and the
drift amplitude, and names the coefficient moves that help: a large b- and
a+, a small b+ and a-.
"""
from dataclasses import dataclass

from .delay import delay_robustness_bounds, h0_width
from .sliding import sliding_condition
from .system import FluidSystem


@dataclass(frozen=True)
class ParameterAdvice:
    holds: bool
    lhs_minus: float
    lhs_plus: float
    h0_minus: float
    h0_plus: float
    drift_amplitude: float
    hints: tuple[str, ...]


def advise(sys: FluidSystem, tau: float = 0.0, L: float = 1.0) -> ParameterAdvice:
    check = sliding_condition(sys)
    bounds = delay_robustness_bounds(sys, tau, L)
    width = h0_width(sys, bounds.e1_bound)

    hints = []
    if check.lhs_minus >= 0:
        hints.append("raise b_minus or lower a_minus")
    if check.lhs_plus <= 0:
        hints.append("lower b_plus or raise a_plus")
    if width.minus_term > width.plus_term:
        hints.append("minus branch dominates H0: raise b_minus")
    elif width.plus_term > width.minus_term:
        hints.append("plus branch dominates H0: raise a_plus")
    if not hints:
        hints.append("ok")

    return ParameterAdvice(
        holds=check.holds,
        lhs_minus=check.lhs_minus,
        lhs_plus=check.lhs_plus,
        h0_minus=width.minus_term,
        h0_plus=width.plus_term,
        drift_amplitude=bounds.drift_amplitude,
        hints=tuple(hints),
    )
