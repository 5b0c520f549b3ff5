"""Convergence and stability metrics over a bottleneck queue trace.

The convergence point is the first row of the final run of rows with
|q - q0| <= band. Amplitude, average queue, drains and throughput are
measured from there to the end of the window (or from a fixed warmup, when
one is given). A trace that never settles is measured over its whole
window.
"""
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from qausim.core.receipt import emit_receipt

from .recorder import Trace


@dataclass(frozen=True)
class MetricsReport:
    response_time_s: float
    max_amplitude_pkts: float
    avg_q_pkts: float
    drain_count: int
    throughput_ratio: float
    drop_count: int

    def as_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        """Flat key=value lines in field order."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            lines.append(f"{f.name}={value if isinstance(value, int) else repr(float(value))}")
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.to_text())
        return path

    @classmethod
    def from_text(cls, text: str) -> "MetricsReport":
        values = dict(line.split("=", 1) for line in text.splitlines() if "=" in line)
        kwargs = {}
        for f in fields(cls):
            raw = values[f.name]
            kwargs[f.name] = int(raw) if f.type in (int, "int") else float(raw)
        return cls(**kwargs)


def count_drains(q: np.ndarray) -> int:
    """Number of maximal runs of q == 0."""
    empty = np.asarray(q) == 0
    if not empty.any():
        return 0
    starts = empty & ~np.concatenate(([False], empty[:-1]))
    return int(starts.sum())


def settle_index(q: np.ndarray, q0: float, band: float) -> int | None:
    """Index of the first row of the final in-band run; None if the last row is out of band."""
    outside = np.abs(np.asarray(q) - q0) > band
    if outside[-1]:
        return None
    out_idx = np.nonzero(outside)[0]
    return 0 if len(out_idx) == 0 else int(out_idx[-1]) + 1


def metrics_from_series(t: np.ndarray, q: np.ndarray, q0: float, band: float,
                        tx_bytes: np.ndarray | None = None,
                        drops: np.ndarray | None = None,
                        capacity_bps: float | None = None,
                        warmup_s: float | None = None) -> MetricsReport:
    """Metrics for sampled bottleneck queue lengths `q` (packets) at times `t` (s).

    Raises:
        ValueError: empty or mismatched series
    """
    t = np.asarray(t, dtype=float)
    q = np.asarray(q, dtype=float)
    if len(t) == 0:
        raise ValueError("empty trace")
    if len(t) != len(q):
        raise ValueError(f"length mismatch: {len(t)} times, {len(q)} queue samples")

    i = settle_index(q, q0, band)
    response = math.inf if i is None else float(t[i] - t[0])

    if warmup_s is not None:
        start = int(np.searchsorted(t, t[0] + warmup_s, side="left"))
        start = min(start, len(t) - 1)
    else:
        start = 0 if i is None else i

    tail = q[start:]
    throughput = math.nan
    if tx_bytes is not None and capacity_bps:
        tx = np.asarray(tx_bytes, dtype=float)
        t_from = start if t[-1] > t[start] else 0
        span = t[-1] - t[t_from]
        if span > 0:
            throughput = (tx[-1] - tx[t_from]) * 8 / (capacity_bps * span)
            throughput = min(1.0, max(0.0, throughput))

    drop_count = 0 if drops is None else int(drops[-1] - drops[0])

    return MetricsReport(
        response_time_s=response,
        max_amplitude_pkts=float(np.max(np.abs(tail - q0))),
        avg_q_pkts=float(np.mean(tail)),
        drain_count=count_drains(tail),
        throughput_ratio=float(throughput),
        drop_count=drop_count,
    )


def compute_metrics(trace: Trace, band: float, window: tuple[float, float] | None = None,
                    warmup_s: float | None = None, scenario: str | None = None) -> MetricsReport:
    """Metrics of the bottleneck queue, optionally restricted to a [start, end] window (s)."""
    if len(trace) == 0:
        raise ValueError("empty trace")
    t = trace.times()
    keep = slice(None)
    if window is not None:
        lo, hi = window
        idx = np.nonzero((t >= lo) & (t <= hi))[0]
        if len(idx) == 0:
            raise ValueError(f"window {window} holds no trace rows")
        keep = slice(int(idx[0]), int(idx[-1]) + 1)

    report = metrics_from_series(
        t[keep],
        trace.queue()[keep],
        trace.q0_packets,
        band,
        tx_bytes=trace.tx_bytes()[keep],
        drops=trace.drops()[keep],
        capacity_bps=trace.capacity_bps,
        warmup_s=warmup_s,
    )
    if scenario is not None:
        emit_receipt("metrics", {"scenario": scenario, **report.as_dict()})
    return report
