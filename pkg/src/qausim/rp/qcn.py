"""QCN reaction point: RD, FR binary search, AI and HAI.

The rate limiter is idle until its first rate decrease. After an RD it runs
cycles, each ended by the byte counter (bc_limit bytes sent, halved once in
AI) or by the companion timer. Phase is read from the counters:

    FR   byte cycles < fr_cycles
    AI   byte cycles >= fr_cycles
    HAI  byte cycles and timer cycles both >= fr_cycles
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

from qausim.config.features import (
    FEATURE_HAI_ENABLED,
    FEATURE_QCN_EFR_ENABLED,
    FEATURE_QCN_TRR_ENABLED,
)
from qausim.core.constants import (
    NS_PER_S,
    QCN_BC_LIMIT_BYTES,
    QCN_DEFAULT_GD,
    QCN_DEFAULT_P,
    QCN_DEFAULT_W,
    QCN_FB_MAX_CODE,
    QCN_FR_CYCLES,
    QCN_R_AI_BPS,
    QCN_R_HAI_BPS,
    QCN_R_MIN_BPS,
    QCN_TIMER_RATE_FRACTION,
    QCN_TRR_DIVISOR,
    QCN_TRR_RATIO,
)

logger = logging.getLogger("qausim.rp")


class QcnPhase(Enum):
    FR = "fr"
    AI = "ai"
    HAI = "hai"


class CycleTrigger(Enum):
    BYTES = "bytes"
    TIMER = "timer"


@dataclass(frozen=True)
class QcnParams:
    gd: float = QCN_DEFAULT_GD
    bc_limit: int = QCN_BC_LIMIT_BYTES
    fr_cycles: int = QCN_FR_CYCLES
    r_ai: float = QCN_R_AI_BPS
    r_hai: float = QCN_R_HAI_BPS
    timer_period_ns: int | None = None
    r_min: float = QCN_R_MIN_BPS
    w: float = QCN_DEFAULT_W
    p: float = QCN_DEFAULT_P
    trr: bool = FEATURE_QCN_TRR_ENABLED
    efr: bool = FEATURE_QCN_EFR_ENABLED
    hai: bool = FEATURE_HAI_ENABLED

    def __post_init__(self):
        if not math.isclose(self.gd * QCN_FB_MAX_CODE, 0.5, rel_tol=1e-9):
            raise ValueError(
                f"gd * {QCN_FB_MAX_CODE} must equal 1/2, got {self.gd * QCN_FB_MAX_CODE}"
            )
        if self.bc_limit <= 0 or self.fr_cycles <= 0:
            raise ValueError("bc_limit and fr_cycles must be positive")
        if not 0 < self.p <= 1:
            raise ValueError(f"p must be in (0, 1], got {self.p}")

    def timer_period_for(self, nic_capacity: float) -> int:
        """Configured timer, or the time to send bc_limit at 10% of the NIC rate."""
        if self.timer_period_ns is not None:
            return self.timer_period_ns
        return int(round(self.bc_limit * 8 * NS_PER_S / (QCN_TIMER_RATE_FRACTION * nic_capacity)))


@dataclass
class QcnRpState:
    r: float
    nic_capacity: float
    R: float = 0.0
    byte_count: int = 0
    cycle_index: int = 0
    timer_cycle_index: int = 0
    phase: QcnPhase = QcnPhase.FR
    active: bool = False
    rd_in_cycle: bool = False
    rd_count: int = 0
    ignored_frames: int = 0

    def __post_init__(self):
        if self.R == 0.0:
            self.R = self.r


def phase_for(cycle_index: int, timer_cycle_index: int, params: QcnParams) -> QcnPhase:
    if cycle_index < params.fr_cycles:
        return QcnPhase.FR
    if timer_cycle_index >= params.fr_cycles:
        return QcnPhase.HAI
    return QcnPhase.AI


def byte_limit(state: QcnRpState, params: QcnParams) -> int:
    return params.bc_limit if state.phase is QcnPhase.FR else params.bc_limit // 2


def timer_period_ns(state: QcnRpState, params: QcnParams) -> int:
    period = params.timer_period_for(state.nic_capacity)
    return period if state.phase is QcnPhase.FR else period // 2


def qcn_rate_decrease(state: QcnRpState, fb_magnitude: int, params: QcnParams) -> QcnRpState:
    """RD: R <- r, r <- r(1 - Gd|F_b|), counters back to FR start."""
    if fb_magnitude <= 0:
        return state
    if params.efr and state.rd_in_cycle:
        state.ignored_frames += 1
        return state

    if params.trr and state.active and state.R > QCN_TRR_RATIO * state.r:
        state.R = state.R / QCN_TRR_DIVISOR
    else:
        state.R = state.r
    state.r = max(state.r * (1 - params.gd * fb_magnitude), params.r_min)

    state.byte_count = 0
    state.cycle_index = 0
    state.timer_cycle_index = 0
    state.phase = QcnPhase.FR
    state.active = True
    state.rd_in_cycle = True
    state.rd_count += 1
    return state


def qcn_cycle_complete(state: QcnRpState, params: QcnParams,
                       trigger: CycleTrigger = CycleTrigger.BYTES) -> QcnRpState:
    """One FR/AI/HAI step, then advance the counter that fired."""
    phase = phase_for(state.cycle_index, state.timer_cycle_index, params)
    if phase is QcnPhase.AI or (phase is QcnPhase.HAI and not params.hai):
        state.R = min(state.R + params.r_ai, state.nic_capacity)
    elif phase is QcnPhase.HAI:
        state.R = min(state.R + params.r_hai, state.nic_capacity)
    state.r = min((state.r + state.R) / 2, state.nic_capacity)

    if trigger is CycleTrigger.BYTES:
        state.cycle_index += 1
        state.byte_count = 0
    else:
        state.timer_cycle_index += 1
    state.rd_in_cycle = False
    state.phase = phase_for(state.cycle_index, state.timer_cycle_index, params)
    return state


def on_transmit(state: QcnRpState, size: int, params: QcnParams) -> bool:
    """Count sent bytes; True when the byte counter closed a cycle."""
    if not state.active:
        return False
    state.byte_count += size
    if state.byte_count >= byte_limit(state, params):
        qcn_cycle_complete(state, params, CycleTrigger.BYTES)
        return True
    return False
