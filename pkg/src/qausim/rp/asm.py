"""ASM reaction point: rate r <- r - alpha*Q_f - beta*dQ.

Coefficients are bits/s per quantized code. Two regimes hold one (a, b)
pair per branch each: APPROACH (large, set initially and re-armed near the
stable point) and SLIDING (small, used once |F_b| drops under B_F).

Branch selection defaults to SwitchingRule.WEDGE_DAMPED: the minus pair acts
where Q_f*F_b > 0, the reverse of the literal product-sign assignment. See
qausim.rp.switching; set `switching = product_sign` for the literal rule.
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from qausim.core.constants import (
    ASM_DEFAULT_B0,
    ASM_DEFAULT_BF,
    ASM_DEFAULT_CAPS,
    ASM_DEFAULT_P,
    ASM_DEFAULT_W,
    ASM_R_MIN_BPS,
    DQ_SCALE_RATIO,
    QUANT_MAX_CODE,
    QUANT_MIN_CODE,
)
from qausim.cp.feedback import AsmFeedback, FeedbackFrame, compute_fb

from .switching import Branch, SwitchingRule, branch_for

logger = logging.getLogger("qausim.rp")

COEFFICIENT_NAMES = (
    "a_plus_A", "a_minus_A", "b_plus_A", "b_minus_A",
    "a_plus_S", "a_minus_S", "b_plus_S", "b_minus_S",
)


class Regime(Enum):
    APPROACH = "approach"
    SLIDING = "sliding"


def coefficients_from_caps(caps: Sequence[float], capacity_bps: float,
                           max_code: int = QUANT_MAX_CODE) -> dict[str, float]:
    """Turn per-adjustment caps (fractions of C) into per-code coefficients.

    A full-scale code moves the rate by exactly `fraction * C`.

    Raises:
        ValueError: wrong number of caps, a non-positive cap or max_code
    """
    if max_code <= 0:
        raise ValueError(f"max_code must be positive, got {max_code}")
    if len(caps) != len(COEFFICIENT_NAMES):
        raise ValueError(f"expected {len(COEFFICIENT_NAMES)} caps, got {len(caps)}")
    coeffs = {}
    for name, frac in zip(COEFFICIENT_NAMES, caps):
        if frac <= 0:
            raise ValueError(f"cap for {name} must be positive, got {frac}")
        coeffs[name] = frac * capacity_bps / max_code
    return coeffs


@dataclass(frozen=True)
class AsmParams:
    a_plus_A: float
    a_minus_A: float
    b_plus_A: float
    b_minus_A: float
    a_plus_S: float
    a_minus_S: float
    b_plus_S: float
    b_minus_S: float
    b_f: float = ASM_DEFAULT_BF
    b_0: float = ASM_DEFAULT_B0
    w: float = ASM_DEFAULT_W
    p: float = ASM_DEFAULT_P
    qf_scale: float = 1.0
    dq_scale: float = DQ_SCALE_RATIO
    switching: SwitchingRule = SwitchingRule.WEDGE_DAMPED
    r_min: float = ASM_R_MIN_BPS
    max_code: int = QUANT_MAX_CODE
    caps: tuple[float, ...] = field(default=ASM_DEFAULT_CAPS, compare=False)

    def __post_init__(self):
        for name in COEFFICIENT_NAMES:
            value = getattr(self, name)
            if value < 0 or (value == 0 and not name.startswith("a_minus")):
                raise ValueError(f"{name} must be positive, got {value}")
        if not 0 < self.p <= 1:
            raise ValueError(f"p must be in (0, 1], got {self.p}")
        if self.w <= 0:
            raise ValueError(f"w must be positive, got {self.w}")
        if self.max_code <= 0:
            raise ValueError(f"max_code must be positive, got {self.max_code}")

    @classmethod
    def from_caps(cls, capacity_bps: float, caps: Sequence[float] = ASM_DEFAULT_CAPS,
                  max_code: int = QUANT_MAX_CODE, **kwargs) -> "AsmParams":
        return cls(**coefficients_from_caps(caps, capacity_bps, max_code),
                   max_code=max_code, caps=tuple(caps), **kwargs)

    def pair(self, regime: Regime, branch: Branch) -> tuple[float, float]:
        suffix = "A" if regime is Regime.APPROACH else "S"
        sign = "plus" if branch is Branch.PLUS else "minus"
        return getattr(self, f"a_{sign}_{suffix}"), getattr(self, f"b_{sign}_{suffix}")

    def step_limit(self, alpha: float, beta: float) -> float:
        """Largest |delta r| the pair may apply: the larger of its two caps."""
        return max(alpha, beta) * self.max_code

    def coefficients(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in COEFFICIENT_NAMES}

    def scaled(self, **factors: float) -> "AsmParams":
        """Copy with named coefficients multiplied by the given factors."""
        return replace(self, **{name: getattr(self, name) * f for name, f in factors.items()})


@dataclass
class AsmRpState:
    r: float
    nic_capacity: float
    r_min: float = ASM_R_MIN_BPS
    stored_cpid: int | None = None
    regime: Regime = Regime.APPROACH
    adjustments: int = 0
    ignored_increases: int = 0
    malformed: int = 0

    def __post_init__(self):
        if not self.r_min <= self.r <= self.nic_capacity:
            raise ValueError(
                f"rate {self.r} outside [{self.r_min}, {self.nic_capacity}]"
            )


def select_regime(fb: float, qf: float, dq: float, params: AsmParams,
                  current: Regime) -> Regime:
    """Near the stable point re-arm APPROACH; near F_b = 0 switch to SLIDING.

    All arguments are in Q_f code units. The B_0 test wins.
    """
    if abs(qf) + abs(dq) < params.b_0:
        return Regime.APPROACH
    if abs(fb) < params.b_f:
        return Regime.SLIDING
    return current


def select_coefficients(qf: float, fb: float, regime: Regime, params: AsmParams,
                        rule: SwitchingRule | None = None) -> tuple[float, float]:
    branch = branch_for(qf, fb, params.switching if rule is None else rule)
    return params.pair(regime, branch)


def _valid_payload(frame: FeedbackFrame) -> bool:
    payload = frame.payload
    return (
        isinstance(payload, AsmFeedback)
        and QUANT_MIN_CODE <= payload.qf_code <= QUANT_MAX_CODE
        and QUANT_MIN_CODE <= payload.dq_code <= QUANT_MAX_CODE
    )


def on_feedback(frame: FeedbackFrame, state: AsmRpState, params: AsmParams) -> float:
    """Apply one feedback frame; returns (and stores) the new rate.

    The change is bounded by the larger cap of the active pair; a -128 code
    or two full-scale terms never exceed it. Decreases always apply and
    record the frame's CPID. Increases apply only when no CPID is stored or
    it matches. Malformed frames are counted and ignored.
    """
    if not _valid_payload(frame):
        state.malformed += 1
        return state.r

    payload = frame.payload
    assert isinstance(payload, AsmFeedback)
    qf = float(payload.qf_code)
    dq_units = payload.dq_code * params.dq_scale / params.qf_scale
    fb = compute_fb(qf, dq_units, params.w)

    regime = select_regime(fb, qf, dq_units, params, state.regime)
    alpha, beta = select_coefficients(qf, fb, regime, params)
    limit = params.step_limit(alpha, beta)
    delta = min(limit, max(-limit, -alpha * payload.qf_code - beta * payload.dq_code))

    if delta > 0 and state.stored_cpid is not None and state.stored_cpid != frame.cpid:
        state.ignored_increases += 1
        return state.r
    if delta < 0:
        state.stored_cpid = frame.cpid

    state.regime = regime
    if delta != 0:
        state.r = min(state.nic_capacity, max(state.r_min, state.r + delta))
        state.adjustments += 1
    return state.r
