"""Run one scenario end to end and write its artifacts."""
import logging
import math
from dataclasses import dataclass
from pathlib import Path

from qausim.core.receipt import dual_hash, emit_receipt
from qausim.engine import SimSummary
from qausim.topology import ScenarioSpec, save_scenario
from qausim.trace import MetricsReport, Trace, compute_metrics

from .fabric import Network

logger = logging.getLogger("qausim.network")

TRACE_FILE = "trace.csv"
METRICS_FILE = "metrics.txt"
SCENARIO_FILE = "scenario.cfg"


@dataclass
class RunResult:
    """Outcome of run_scenario."""
    spec: ScenarioSpec
    trace: Trace
    metrics: MetricsReport
    summary: SimSummary
    trace_hash: str
    delivered_bytes: int
    out_dir: Path | None = None

    def row(self) -> dict:
        """Flat metrics row for aggregate tables."""
        return {"scenario": self.spec.name, "algorithm": self.spec.algorithm.value,
                "seed": self.spec.seed, **self.metrics.as_dict(), "trace_hash": self.trace_hash}


def build_network(spec: ScenarioSpec) -> Network:
    return Network(spec)


def run_scenario(spec: ScenarioSpec, out_dir: str | Path | None = None,
                 warmup_s: float | None = None) -> RunResult:
    """Simulate `spec` for its full duration and compute bottleneck metrics.

    When out_dir is given it receives trace.csv, metrics.txt and the
    scenario as run (scenario.cfg).
    """
    net = build_network(spec)
    summary = net.run()
    trace = net.trace
    csv_text = trace.to_csv()
    trace_hash = dual_hash(csv_text)

    metrics = compute_metrics(trace, spec.band_packets, warmup_s=warmup_s, scenario=spec.name)
    if metrics.drain_count > 0 and not math.isinf(metrics.response_time_s):
        stoprule_drain(spec.name, metrics.drain_count)

    emit_receipt("run", {
        "scenario": spec.name,
        "algorithm": spec.algorithm.value,
        "seed": spec.seed,
        "events": summary.events_dispatched,
        "sim_time_ns": summary.end_time_ns,
        "wall_ms": summary.wall_seconds * 1000,
        "trace_hash": trace_hash,
    })

    path = None
    if out_dir is not None:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / TRACE_FILE).write_text(csv_text)
        metrics.write(path / METRICS_FILE)
        save_scenario(spec, path / SCENARIO_FILE)
        logger.info("wrote %s", path)

    return RunResult(spec, trace, metrics, summary, trace_hash, net.delivered_bytes, path)


def stoprule_drain(scenario: str, drain_count: int):
    """Alert on buffer drains after convergence. Does not halt the run."""
    emit_receipt("anomaly", {
        "metric": "bottleneck_drain_count",
        "baseline": 0,
        "delta": drain_count,
        "classification": "degradation",
        "action": "alert",
        "scenario": scenario,
    })
