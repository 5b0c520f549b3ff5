"""Reaction points: ASM and QCN rate limiters."""
from .asm import (
    COEFFICIENT_NAMES,
    AsmParams,
    AsmRpState,
    Regime,
    coefficients_from_caps,
    on_feedback,
    select_coefficients,
    select_regime,
)
from .qcn import (
    CycleTrigger,
    QcnParams,
    QcnPhase,
    QcnRpState,
    on_transmit,
    qcn_cycle_complete,
    qcn_rate_decrease,
)
from .switching import Branch, SwitchingRule, branch_for, branch_for_region

__all__ = [
    "COEFFICIENT_NAMES",
    "AsmParams",
    "AsmRpState",
    "Regime",
    "coefficients_from_caps",
    "on_feedback",
    "select_coefficients",
    "select_regime",
    "CycleTrigger",
    "QcnParams",
    "QcnPhase",
    "QcnRpState",
    "on_transmit",
    "qcn_cycle_complete",
    "qcn_rate_decrease",
    "Branch",
    "SwitchingRule",
    "branch_for",
    "branch_for_region",
]
