"""Experiment suites: shipped scenarios plus a sweep, run point by point.

Each point is an isolated single-threaded simulation. Points are shipped to
workers as dumped scenario text so any worker process can rebuild them, and
results are collected back in point order.
"""
import csv
import io
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from qausim.core.constants import (
    BANDWIDTH_SWEEP_BPS,
    DELAY_SWEEP_NS,
    DELAY_SWEEP_WARMUP_S,
    PARAM_SWEEP_FACTORS,
    SUITE_AGGREGATE_FILE,
)
from qausim.core.receipt import emit_receipt, get_receipt_sink, merkle, set_receipt_sink
from qausim.network import run_scenario
from qausim.topology import (
    Algorithm,
    ScenarioSpec,
    bundled_scenario,
    check_scenario,
    dump_scenario,
    load_scenario,
    loads_scenario,
    with_capacity,
    with_link_delay,
)

logger = logging.getLogger("qausim.experiments")

# Coefficients doubled or halved by param-sweep
SWEPT_COEFFICIENTS = ("a_plus_A", "a_minus_A", "b_plus_A", "b_minus_A")

AGGREGATE_COLUMNS = (
    "point", "scenario", "algorithm", "seed",
    "response_time_s", "max_amplitude_pkts", "avg_q_pkts", "drain_count",
    "throughput_ratio", "drop_count", "trace_hash",
)


@dataclass(frozen=True)
class SweepPoint:
    label: str
    spec: ScenarioSpec
    warmup_s: float | None = None


@dataclass
class SuitePlan:
    points: list[SweepPoint]
    excluded: list[dict] = field(default_factory=list)


@dataclass
class SuiteResult:
    suite: str
    rows: list[dict]
    excluded: list[dict]
    merkle_root: str
    out_dir: Path | None = None

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    def row(self, point: str) -> dict:
        for r in self.rows:
            if r["point"] == point:
                return r
        raise KeyError(point)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=AGGREGATE_COLUMNS, lineterminator="\n",
                                extrasaction="ignore")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
        return buf.getvalue()


def _cell(value):
    return repr(value) if isinstance(value, float) else value


# -----------------------------------------------------------------------------
# Sweep definitions
# -----------------------------------------------------------------------------

def _load(scenario: str, algorithm: Algorithm | None, seed: int | None,
          overrides: tuple[str, ...]) -> ScenarioSpec:
    extra = []
    if algorithm is not None:
        extra.append(f"scenario.algorithm={algorithm.value}")
    if seed is not None:
        extra.append(f"scenario.seed={seed}")
    return load_scenario(bundled_scenario(scenario), [*extra, *overrides], check=False)


def _per_algorithm(scenario: str, warmup_s: float | None = None):
    def sweep(suite: "ExperimentSuite") -> SuitePlan:
        points = []
        for algorithm in suite.algorithms(Algorithm.ASM, Algorithm.QCN):
            spec = suite.load(scenario, algorithm)
            points.append(SweepPoint(algorithm.value, spec, warmup_s))
        return SuitePlan(points)
    return sweep


def _sliding_sweep(suite: "ExperimentSuite") -> SuitePlan:
    spec = suite.load("dumbbell3", Algorithm.ASM)
    return SuitePlan([SweepPoint("asm", spec)])


def _param_sweep(suite: "ExperimentSuite") -> SuitePlan:
    base = suite.load("dumbbell3", Algorithm.ASM)
    plan = SuitePlan([])
    for factors in itertools.product(PARAM_SWEEP_FACTORS, repeat=len(SWEPT_COEFFICIENTS)):
        label = "_".join(f"x{f:g}" for f in factors)
        asm = base.asm.scaled(**dict(zip(SWEPT_COEFFICIENTS, factors)))
        spec = replace(base, name=f"{base.name}-{label}", asm=asm)
        check = check_scenario(spec)
        if not check.holds:
            failed = {regime: {"lhs_minus": c.lhs_minus, "lhs_plus": c.lhs_plus}
                      for regime, c in check.sliding.items() if not c.holds}
            plan.excluded.append({"point": label, "failed": failed})
            stoprule_sliding_excluded(label, failed)
            continue
        plan.points.append(SweepPoint(label, spec))
    return plan


def _bandwidth_sweep(suite: "ExperimentSuite") -> SuitePlan:
    base = suite.load("dumbbell3", Algorithm.ASM)
    return SuitePlan([SweepPoint(f"{c / 1e9:g}G", with_capacity(base, c))
                      for c in BANDWIDTH_SWEEP_BPS])


def _delay_sweep(suite: "ExperimentSuite") -> SuitePlan:
    points = []
    for algorithm in suite.algorithms(Algorithm.ASM, Algorithm.QCN):
        base = suite.load("highspeed", algorithm)
        for delay in DELAY_SWEEP_NS:
            points.append(SweepPoint(f"{algorithm.value}-{delay}ns",
                                     with_link_delay(base, delay), DELAY_SWEEP_WARMUP_S))
    return SuitePlan(points)


SWEEPS: dict[str, Callable[["ExperimentSuite"], SuitePlan]] = {
    "sliding": _sliding_sweep,
    "small-queue": _per_algorithm("smallqueue"),
    "convergence": _per_algorithm("convergence"),
    "param-sweep": _param_sweep,
    "bandwidth-sweep": _bandwidth_sweep,
    "delay-sweep": _delay_sweep,
    "parking-lot": _per_algorithm("parkinglot"),
}

SUITES = tuple(SWEEPS)


@dataclass
class ExperimentSuite:
    """A named suite. `algorithm` restricts two-algorithm suites to one."""
    name: str
    overrides: tuple[str, ...] = ()
    seed: int | None = None
    algorithm: Algorithm | None = None

    def __post_init__(self):
        if self.name not in SWEEPS:
            raise ValueError(f"unknown suite {self.name!r}; choose from {', '.join(SUITES)}")
        self.overrides = tuple(self.overrides)

    def algorithms(self, *default: Algorithm) -> tuple[Algorithm, ...]:
        return (self.algorithm,) if self.algorithm is not None else default

    def load(self, scenario: str, algorithm: Algorithm) -> ScenarioSpec:
        return _load(scenario, algorithm, self.seed, self.overrides)

    def plan(self) -> SuitePlan:
        return SWEEPS[self.name](self)


# -----------------------------------------------------------------------------
# Execution
# -----------------------------------------------------------------------------

def _run_point(args: dict) -> dict:
    """Module-level worker: rebuild the scenario from text and run it."""
    point_dir = args["out_dir"]
    spec = loads_scenario(args["scenario"], check=False)
    previous = get_receipt_sink()
    handle = None
    if point_dir is not None:
        Path(point_dir).mkdir(parents=True, exist_ok=True)
        handle = open(Path(point_dir) / "receipts.jsonl", "w")
        set_receipt_sink(handle)
    try:
        result = run_scenario(spec, point_dir, warmup_s=args["warmup_s"])
    finally:
        if handle is not None:
            set_receipt_sink(previous)
            handle.close()
    return {"index": args["index"], "point": args["label"], **result.row()}


def run_suite(suite: ExperimentSuite, out_dir: str | Path | None = None,
              workers: int = 1) -> SuiteResult:
    """Run every point of a suite and aggregate the metrics.

    Rows come back in plan order regardless of worker count.
    """
    plan = suite.plan()
    root = Path(out_dir) if out_dir is not None else None
    jobs = [{
        "index": i,
        "label": point.label,
        "scenario": dump_scenario(point.spec),
        "warmup_s": point.warmup_s,
        "out_dir": str(root / point.label) if root is not None else None,
    } for i, point in enumerate(plan.points)]
    logger.info("suite %s: %d points, %d excluded, %d workers",
                suite.name, len(jobs), len(plan.excluded), workers)

    if workers <= 1:
        rows = [_run_point(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_point, jobs))
    rows.sort(key=lambda r: r["index"])

    result = SuiteResult(suite.name, rows, plan.excluded,
                         merkle([r["trace_hash"] for r in rows]), root)
    if root is not None:
        root.mkdir(parents=True, exist_ok=True)
        (root / SUITE_AGGREGATE_FILE).write_text(result.to_csv())

    emit_receipt("suite", {
        "suite": suite.name,
        "n_points": len(rows),
        "excluded": [e["point"] for e in plan.excluded],
        "merkle_root": result.merkle_root,
    })
    return result


def stoprule_sliding_excluded(point: str, failed: dict):
    """Sweep points that violate the sliding condition are reported, not run."""
    worst = max((abs(v["lhs_minus"]) for v in failed.values()), default=0.0)
    emit_receipt("anomaly", {
        "metric": "sliding_condition",
        "baseline": 0,
        "delta": worst if math.isfinite(worst) else 0.0,
        "classification": "violation",
        "action": "exclude",
        "point": point,
    })
