"""Fluid-model analysis of ASM and QCN."""
from .advice import ParameterAdvice, advise
from .delay import (
    DelayRobustnessParams,
    DriftedParameters,
    H0Width,
    bound_factors,
    delay_robustness_bounds,
    delayed_fb,
    delayed_rhs,
    drifted_parameters,
    drifted_rhs,
    h0_width,
)
from .integrate import (
    DivergenceError,
    SlidingFit,
    Trajectory,
    integrate_fluid,
    linear_solution,
    sliding_fit,
)
from .qcn_stability import (
    QcnStabilityParams,
    loop_gain,
    loop_gain_crossover,
    qcn_delay_lower_bound,
)
from .sliding import (
    Parabola,
    SlidingCheck,
    Spiral,
    classify_trajectory,
    eigenvalues,
    sliding_condition,
    sliding_queue_solution,
)
from .system import FluidAnalysisError, FluidSystem

__all__ = [
    "ParameterAdvice",
    "advise",
    "DelayRobustnessParams",
    "DriftedParameters",
    "H0Width",
    "bound_factors",
    "delay_robustness_bounds",
    "delayed_fb",
    "delayed_rhs",
    "drifted_parameters",
    "drifted_rhs",
    "h0_width",
    "DivergenceError",
    "SlidingFit",
    "Trajectory",
    "integrate_fluid",
    "linear_solution",
    "sliding_fit",
    "QcnStabilityParams",
    "loop_gain",
    "loop_gain_crossover",
    "qcn_delay_lower_bound",
    "Parabola",
    "SlidingCheck",
    "Spiral",
    "classify_trajectory",
    "eigenvalues",
    "sliding_condition",
    "sliding_queue_solution",
    "FluidAnalysisError",
    "FluidSystem",
]
