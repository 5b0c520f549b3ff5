"""Fixed-step RK4 integration of the switched (and delayed) fluid model.

The branch is chosen once per step from the delayed state and held for all
four stages. With tau > 0 the feedback terms of dx2/dt read the delayed
state, obtained by linear interpolation of the stored history; before t = 0
the history is the constant x(0).
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from qausim.core.constants import FLUID_DELAY_STEP_RATIO, FLUID_DIVERGENCE_FACTOR
from qausim.core.receipt import StopRule, emit_receipt
from qausim.rp.switching import Branch, SwitchingRule, branch_for

from .sliding import sliding_queue_solution
from .system import FluidAnalysisError, FluidSystem

logger = logging.getLogger("qausim.fluid")


class DivergenceError(StopRule):
    """State norm grew past the divergence factor times its initial norm."""


@dataclass
class Trajectory:
    t: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    branch: np.ndarray  # +1 plus, -1 minus, per sampled step
    fb: np.ndarray

    def __len__(self) -> int:
        return len(self.t)


@dataclass(frozen=True)
class SlidingFit:
    t_entry: float
    rms_error: float
    efold_time: float
    expected_efold: float


def integrate_fluid(sys: FluidSystem, t_end: float, dt: float,
                    x0: tuple[float, float] = (0.0, 0.0),
                    branch: Branch | None = None,
                    rule: SwitchingRule = SwitchingRule.WEDGE_DAMPED,
                    sample_every: int = 1) -> Trajectory:
    """Integrate from x0 over [0, t_end].

    Args:
        branch: freeze the system on one branch (no switching)
        sample_every: keep every n-th step in the returned trajectory

    Raises:
        ValueError: dt <= 0, or dt > tau/10 when tau > 0
        DivergenceError: |x| > 1e9 * |x0|
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    tau = sys.tau
    if tau > 0 and dt > tau / FLUID_DELAY_STEP_RATIO * (1 + 1e-12):
        raise ValueError(f"dt={dt} exceeds tau/{FLUID_DELAY_STEP_RATIO}={tau / FLUID_DELAY_STEP_RATIO}")

    n_steps = int(math.ceil(t_end / dt - 1e-9))
    h1 = np.empty(n_steps + 1)
    h2 = np.empty(n_steps + 1)
    br = np.empty(n_steps + 1, dtype=np.int8)
    h1[0], h2[0] = x0
    norm0 = math.hypot(*x0)
    limit = FLUID_DIVERGENCE_FACTOR * norm0
    pc = sys.pC
    w_over_pc = sys.w / pc
    coeffs = {b: (sys.alpha_eff(b), sys.damping(b)) for b in Branch}
    x0_1, x0_2 = float(x0[0]), float(x0[1])

    def delayed(t: float) -> tuple[float, float]:
        s = t - tau
        if s <= 0:
            return x0_1, x0_2
        pos = s / dt
        i = int(pos)
        frac = pos - i
        if frac == 0.0:
            return h1[i], h2[i]
        return (h1[i] + frac * (h1[i + 1] - h1[i]),
                h2[i] + frac * (h2[i + 1] - h2[i]))

    x1, x2 = x0_1, x0_2
    for k in range(n_steps):
        t = k * dt
        if tau > 0:
            d1, d2 = delayed(t)
        else:
            d1, d2 = x1, x2
        active = branch if branch is not None else branch_for(d1, -d1 - w_over_pc * d2, rule)
        ka, kd = coeffs[active]
        br[k] = 1 if active is Branch.PLUS else -1

        if tau > 0:
            d1h, d2h = delayed(t + dt / 2)
            d1e, d2e = delayed(t + dt)
            f_now = -ka * d1 - kd * d2
            f_mid = -ka * d1h - kd * d2h
            f_end = -ka * d1e - kd * d2e
            k1x, k1v = x2, f_now
            k2x, k2v = x2 + dt / 2 * k1v, f_mid
            k3x, k3v = x2 + dt / 2 * k2v, f_mid
            k4x, k4v = x2 + dt * k3v, f_end
        else:
            k1x, k1v = x2, -ka * x1 - kd * x2
            y1, y2 = x1 + dt / 2 * k1x, x2 + dt / 2 * k1v
            k2x, k2v = y2, -ka * y1 - kd * y2
            y1, y2 = x1 + dt / 2 * k2x, x2 + dt / 2 * k2v
            k3x, k3v = y2, -ka * y1 - kd * y2
            y1, y2 = x1 + dt * k3x, x2 + dt * k3v
            k4x, k4v = y2, -ka * y1 - kd * y2

        x1 = x1 + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        x2 = x2 + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        h1[k + 1], h2[k + 1] = x1, x2

        if norm0 > 0 and math.hypot(x1, x2) > limit:
            stoprule_divergence(t + dt, math.hypot(x1, x2), norm0)

    br[n_steps] = br[n_steps - 1] if n_steps else 1
    idx = slice(None, None, max(1, sample_every))
    t_arr = np.arange(n_steps + 1, dtype=float) * dt
    x1_arr, x2_arr = h1[idx], h2[idx]
    return Trajectory(
        t=t_arr[idx],
        x1=x1_arr,
        x2=x2_arr,
        branch=br[idx],
        fb=-x1_arr - w_over_pc * x2_arr,
    )


def stoprule_divergence(t: float, norm: float, norm0: float):
    """Emit anomaly receipt and raise DivergenceError."""
    emit_receipt("anomaly", {
        "metric": "fluid_state_norm",
        "baseline": norm0,
        "delta": norm - norm0,
        "classification": "divergence",
        "action": "halt",
    })
    raise DivergenceError(f"fluid state diverged at t={t:.6g}: |x|={norm:.3g}, |x0|={norm0:.3g}")


def linear_solution(sys: FluidSystem, branch: Branch, x0: tuple[float, float],
                    t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form solution of the unswitched, undelayed system on one branch.

    Built from the eigen decomposition; repeated roots fall back to expm.
    """
    t = np.asarray(t, dtype=float)
    d, k = sys.damping(branch), sys.alpha_eff(branch)
    m = np.array([[0.0, 1.0], [-k, -d]])
    x0v = np.asarray(x0, dtype=float)
    if abs(d * d / 4 - k) <= 1e-12 * max(1.0, d * d / 4, abs(k)):
        out = np.array([scipy.linalg.expm(m * ti) @ x0v for ti in np.atleast_1d(t)])
        return out[:, 0], out[:, 1]
    lam, vec = np.linalg.eig(m)
    coef = np.linalg.solve(vec, x0v.astype(complex))
    modes = np.exp(np.outer(np.atleast_1d(t), lam)) * coef
    states = modes @ vec.T
    return states[:, 0].real, states[:, 1].real


def sliding_fit(traj: Trajectory, sys: FluidSystem, band: float) -> SlidingFit:
    """Compare the post-entry x1 against the sliding-phase closed form.

    Entry is the first sample with |F_b| <= band or a sign change of F_b.
    rms_error is RMS(x1 - closed form) / RMS(closed form) over the tail.

    Raises:
        FluidAnalysisError: the trajectory never reaches the boundary line
    """
    fb = traj.fb
    sign0 = np.sign(fb[0])
    hits = np.nonzero((np.abs(fb) <= band) | (np.sign(fb) != sign0))[0]
    if len(hits) == 0:
        raise FluidAnalysisError("trajectory never reaches F_b = 0")
    i = int(hits[0])
    t_tail = traj.t[i:] - traj.t[i]
    x_tail = traj.x1[i:]
    ref = sliding_queue_solution(x_tail[0] + sys.q0, sys, t_tail) - sys.q0
    rms_ref = float(np.sqrt(np.mean(ref ** 2)))
    rms_error = float(np.sqrt(np.mean((x_tail - ref) ** 2))) / rms_ref if rms_ref > 0 else 0.0

    usable = np.abs(x_tail) > 1e-6 * abs(x_tail[0])
    slope = np.polyfit(t_tail[usable], np.log(np.abs(x_tail[usable])), 1)[0]
    efold = -1.0 / slope if slope < 0 else math.inf
    return SlidingFit(float(traj.t[i]), rms_error, efold, sys.w / sys.pC)

