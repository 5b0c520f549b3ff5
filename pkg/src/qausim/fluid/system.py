"""Fluid model parameter bundle.

State: x1 = q - q0 (packets), x2 = N*r - C (packets/s).
Dynamics on a branch with pair (a, b):

    dx1/dt = x2
    dx2/dt = -N*a*x1 - (N*b/(p*C))*x2

`C` is in packets/s here. `from_asm` converts per-code coefficients in
bits/s into this form.
"""
from dataclasses import dataclass

from qausim.core.constants import PACKET_SIZE_BYTES
from qausim.rp.asm import AsmParams, Regime
from qausim.rp.switching import Branch


class FluidAnalysisError(ValueError):
    """Analysis precondition or numeric domain violated."""


@dataclass(frozen=True)
class FluidSystem:
    n: int
    C: float
    p: float
    w: float
    a_plus: float
    a_minus: float
    b_plus: float
    b_minus: float
    tau: float = 0.0
    q0: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise FluidAnalysisError(f"N must be >= 1, got {self.n}")
        if self.C <= 0:
            raise FluidAnalysisError(f"C must be positive, got {self.C}")
        if not 0 < self.p <= 1:
            raise FluidAnalysisError(f"p must be in (0, 1], got {self.p}")
        if self.w <= 0:
            raise FluidAnalysisError(f"w must be positive, got {self.w}")
        if self.tau < 0:
            raise FluidAnalysisError(f"tau must be >= 0, got {self.tau}")

    @property
    def pC(self) -> float:
        return self.p * self.C

    def pair(self, branch: Branch) -> tuple[float, float]:
        if branch is Branch.PLUS:
            return self.a_plus, self.b_plus
        return self.a_minus, self.b_minus

    def alpha_eff(self, branch: Branch) -> float:
        """Coefficient of x1 in dx2/dt (N*a)."""
        return self.n * self.pair(branch)[0]

    def damping(self, branch: Branch) -> float:
        """Coefficient of x2 in dx2/dt (N*b/(pC))."""
        return self.n * self.pair(branch)[1] / self.pC

    def fb(self, x1: float, x2: float) -> float:
        """Feedback value with dQ = x2/(pC)."""
        return -x1 - self.w * x2 / self.pC

    @classmethod
    def from_asm(cls, params: AsmParams, n_sources: int, capacity_bps: float,
                 packet_size: int = PACKET_SIZE_BYTES, regime: Regime = Regime.APPROACH,
                 tau: float = 0.0, q0: float = 0.0) -> "FluidSystem":
        """Fluid coefficients for one regime of a per-code ASM parameter set.

        Each sample moves one source by -a*Q_f - b*dQ; samples arrive at pC
        per second, so N*a_fluid = pC*a_pkt and N*b_fluid = pC*b_pkt.
        """
        pkt_bits = packet_size * 8
        c_pkts = capacity_bps / pkt_bits
        pc = params.p * c_pkts

        def fluid(code_coeff: float, scale: float) -> float:
            per_pkt = code_coeff / (scale * pkt_bits)
            return pc * per_pkt / n_sources

        a_p, b_p = params.pair(regime, Branch.PLUS)
        a_m, b_m = params.pair(regime, Branch.MINUS)
        return cls(
            n=n_sources,
            C=c_pkts,
            p=params.p,
            w=params.w,
            a_plus=fluid(a_p, params.qf_scale),
            a_minus=fluid(a_m, params.qf_scale),
            b_plus=fluid(b_p, params.dq_scale),
            b_minus=fluid(b_m, params.dq_scale),
            tau=tau,
            q0=q0,
        )
