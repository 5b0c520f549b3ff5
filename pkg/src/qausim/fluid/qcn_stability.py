"""Lower bound on the feedback delay that makes the QCN loop unstable.

Open-loop transfer function of the linearized QCN fluid model:

    G(s) = e^{tau s} * a3 (s + b)(s + gamma) / (s (s^2 + beta s + alpha))

Rates are in packets/s. The bound is

    tau_min = [atan(w*/b) + atan(w*/gamma) - atan(w_bar/beta - alpha/(beta w_bar))] / w_bar
"""
import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from qausim.config.features import FEATURE_OMEGA_STAR_QUARTIC
from qausim.core.constants import (
    FLUID_GAIN_SCAN_POINTS,
    QCN_STAB_BC_PACKETS,
    QCN_STAB_FR_PACKETS,
    QCN_STAB_GD,
    QCN_STAB_N,
    QCN_STAB_P,
    QCN_STAB_PACKET_BITS,
    QCN_STAB_R_AI_BPS,
    QCN_STAB_W,
)

from .system import FluidAnalysisError

logger = logging.getLogger("qausim.fluid")


@dataclass(frozen=True)
class QcnStabilityParams:
    capacity_bps: float
    n: int = QCN_STAB_N
    p_s: float = QCN_STAB_P
    gd: float = QCN_STAB_GD
    w: float = QCN_STAB_W
    r_ai_bps: float = QCN_STAB_R_AI_BPS
    packet_bits: int = QCN_STAB_PACKET_BITS
    bc_packets: int = QCN_STAB_BC_PACKETS
    fr_packets: int = QCN_STAB_FR_PACKETS
    omega_star_quartic: bool = FEATURE_OMEGA_STAR_QUARTIC

    def __post_init__(self):
        if not 0 < self.p_s < 1:
            raise FluidAnalysisError(f"p_s must be in (0, 1), got {self.p_s}")
        if self.capacity_bps <= 0 or self.n < 1:
            raise FluidAnalysisError("capacity and N must be positive")

    def with_capacity(self, capacity_bps: float) -> "QcnStabilityParams":
        return replace(self, capacity_bps=capacity_bps)

    @property
    def C(self) -> float:
        return self.capacity_bps / self.packet_bits

    @property
    def r_ai(self) -> float:
        return self.r_ai_bps / self.packet_bits

    @property
    def rc(self) -> float:
        return self.C / self.n

    @property
    def eta(self) -> float:
        return self.p_s / ((1 - self.p_s) ** (-self.bc_packets) - 1)

    @property
    def zeta(self) -> float:
        return self.eta * (1 - self.p_s) ** self.fr_packets

    @property
    def a1(self) -> float:
        return self.eta * self.rc / 2 + self.eta * self.zeta * self.r_ai / (2 * self.p_s)

    @property
    def a2(self) -> float:
        return self.eta * self.rc / 2

    @property
    def a3(self) -> float:
        return self.gd * self.w * self.rc

    @property
    def a4(self) -> float:
        return self.p_s * self.rc * self.gd

    @property
    def b(self) -> float:
        return self.p_s * self.rc

    @property
    def alpha(self) -> float:
        return self.b * (self.a1 - self.a2)

    @property
    def beta(self) -> float:
        return self.b + self.a1

    @property
    def gamma(self) -> float:
        return self.n * self.a4 / self.a3

    @property
    def omega_star(self) -> float:
        a3 = self.a3
        inner_term = a3 ** 4 if self.omega_star_quartic else self.a4 ** 3
        return math.sqrt(a3 ** 2 / 2 + math.sqrt(inner_term / 4 + self.gamma ** 2 * a3 ** 2))

    @property
    def omega_bar(self) -> float:
        a3, alpha, beta, gamma = self.a3, self.alpha, self.beta, self.gamma
        s = a3 ** 2 + 2 * alpha - beta ** 2
        inner = s ** 2 + 4 * (a3 ** 2 * gamma ** 2 - alpha ** 2)
        if inner < 0:
            raise FluidAnalysisError(f"negative radicand in omega_bar: inner={inner:.6g}")
        outer = (s + math.sqrt(inner)) / 2
        if outer < 0:
            raise FluidAnalysisError(f"negative radicand in omega_bar: outer={outer:.6g}")
        return math.sqrt(outer)

    def derived(self) -> dict[str, float]:
        names = ("rc", "eta", "zeta", "a1", "a2", "a3", "a4", "b", "alpha", "beta",
                 "gamma", "omega_star", "omega_bar")
        return {name: getattr(self, name) for name in names}


def qcn_delay_lower_bound(params: QcnStabilityParams) -> float:
    """Smallest delay (seconds) at which the QCN loop loses stability."""
    w_bar = params.omega_bar
    if w_bar == 0:
        raise FluidAnalysisError("omega_bar is zero")
    w_star = params.omega_star
    phase = (
        math.atan(w_star / params.b)
        + math.atan(w_star / params.gamma)
        - math.atan(w_bar / params.beta - params.alpha / (params.beta * w_bar))
    )
    return phase / w_bar


def loop_gain(params: QcnStabilityParams, omega):
    """|G(j omega)|; the delay term has unit magnitude."""
    w = np.asarray(omega, dtype=float)
    num = params.a3 * np.hypot(w, params.b) * np.hypot(w, params.gamma)
    den = w * np.hypot(params.alpha - w ** 2, params.beta * w)
    return num / den


def loop_gain_crossover(params: QcnStabilityParams) -> float:
    """0-dB crossover frequency, searched on [omega_bar, omega*] first.

    Raises:
        FluidAnalysisError: |G| never crosses 1 on the scanned range
    """
    lo, hi = params.omega_bar, params.omega_star

    def excess(w: float) -> float:
        return math.log(float(loop_gain(params, w)))

    if lo < hi and excess(lo) > 0 > excess(hi):
        return brentq(excess, lo, hi)

    grid = np.geomspace(min(lo, hi) / 100, max(lo, hi) * 100, FLUID_GAIN_SCAN_POINTS)
    values = np.log(loop_gain(params, grid))
    crossings = np.nonzero((values[:-1] > 0) & (values[1:] <= 0))[0]
    if len(crossings) == 0:
        raise FluidAnalysisError("loop gain never crosses 0 dB")
    i = int(crossings[0])
    return brentq(excess, grid[i], grid[i + 1])
