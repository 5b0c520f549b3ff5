"""Periodic snapshots of the network and their CSV form.

CSV column order is fixed:

    t_s, A_bps, tx_bytes, drops, slope_k_bps_per_pkt,
    q_<port>_pkts ... (traced ports in cpid order),
    rate_<flow>_bps ... (flows in scenario order)

`A_bps` is the sum of the active flows' limiter rates, `tx_bytes` counts
bytes sent by the bottleneck port, `drops` counts tail drops at every
port. `slope_k` is dA/dq between consecutive rows on the bottleneck queue
and is blank when the queue did not change.
"""
import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from qausim.core.constants import NS_PER_S
from qausim.core.receipt import StopRule


class QueueView(Protocol):
    name: str
    q: int
    packet_size: int
    departed_bytes: int
    drop_count: int


class RateView(Protocol):
    active: bool

    @property
    def rate_bps(self) -> float: ...


@dataclass(frozen=True)
class TraceRow:
    t_ns: int
    agg_rate_bps: float
    tx_bytes: int
    drops: int
    port_q: tuple[float, ...]
    flow_rates: tuple[float, ...]
    slope_k: float | None = None

    @property
    def t(self) -> float:
        return self.t_ns / NS_PER_S


def _column_token(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_")


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return repr(float(value))


@dataclass
class Trace:
    ports: tuple[str, ...]
    flows: tuple[str, ...]
    bottleneck: int
    q0_packets: float
    capacity_bps: float
    rows: list[TraceRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> list[str]:
        return (
            ["t_s", "A_bps", "tx_bytes", "drops", "slope_k_bps_per_pkt"]
            + [f"q_{_column_token(p)}_pkts" for p in self.ports]
            + [f"rate_{_column_token(f)}_bps" for f in self.flows]
        )

    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.rows])

    def queue(self, port: int | None = None) -> np.ndarray:
        """Queue length in packets at a traced port (default: the bottleneck)."""
        i = self.bottleneck if port is None else port
        return np.array([r.port_q[i] for r in self.rows])

    def agg_rate(self) -> np.ndarray:
        return np.array([r.agg_rate_bps for r in self.rows])

    def tx_bytes(self) -> np.ndarray:
        return np.array([r.tx_bytes for r in self.rows], dtype=np.int64)

    def drops(self) -> np.ndarray:
        return np.array([r.drops for r in self.rows], dtype=np.int64)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for r in self.rows:
            writer.writerow(
                [f"{r.t_ns / NS_PER_S:.9f}", _fmt(r.agg_rate_bps), r.tx_bytes, r.drops,
                 _fmt(r.slope_k)]
                + [_fmt(q) for q in r.port_q]
                + [_fmt(rate) for rate in r.flow_rates]
            )
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.to_csv())
        return path


class TraceRecorder:
    """Appends one TraceRow per call to `sample`."""

    def __init__(self, port_names: Sequence[str], flow_ids: Sequence[str], bottleneck: int,
                 q0_packets: float, capacity_bps: float):
        self.trace = Trace(tuple(port_names), tuple(flow_ids), bottleneck, q0_packets,
                           capacity_bps)

    def sample(self, now_ns: int, ports: Sequence[QueueView],
               flows: Sequence[RateView]) -> TraceRow:
        """Snapshot queue lengths, rates and counters at now_ns.

        Raises:
            StopRule: now_ns does not advance past the previous row
        """
        rows = self.trace.rows
        if rows and now_ns <= rows[-1].t_ns:
            raise StopRule(f"trace time {now_ns} ns does not advance past {rows[-1].t_ns} ns")

        port_q = tuple(p.q / p.packet_size for p in ports)
        rates = tuple(f.rate_bps if f.active else 0.0 for f in flows)
        agg = float(sum(rates))
        bottleneck = ports[self.trace.bottleneck] if ports else None

        slope = None
        if rows and ports:
            dq = port_q[self.trace.bottleneck] - rows[-1].port_q[self.trace.bottleneck]
            if dq != 0:
                slope = (agg - rows[-1].agg_rate_bps) / dq

        row = TraceRow(
            t_ns=now_ns,
            agg_rate_bps=agg,
            tx_bytes=bottleneck.departed_bytes if bottleneck is not None else 0,
            drops=sum(p.drop_count for p in ports),
            port_q=port_q,
            flow_rates=rates,
            slope_k=slope,
        )
        rows.append(row)
        return row
