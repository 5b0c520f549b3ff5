"""Run one scenario: trace.csv, metrics.txt, scenario.cfg, receipts.jsonl."""
import sys
import time
from pathlib import Path

import click

from qausim.core.constants import EXIT_CONFIG_ERROR, EXIT_OK

from .common import exit_code_for, receipts_to, resolve_scenario, scenario_overrides
from .output import error_box, success_box


@click.command()
@click.argument("scenario", required=False)
@click.option("--scenario", "scenario_opt", help="Scenario file or shipped name")
@click.option("--out", type=click.Path(file_okay=False), help="Output directory (default runs/<name>)")
@click.option("--seed", type=int, help="Override scenario.seed")
@click.option("--algorithm", type=click.Choice(["asm", "qcn"]), help="Override scenario.algorithm")
@click.option("--override", "overrides", multiple=True, help="section.key=value (repeatable)")
@click.option("--warmup-s", type=float, help="Fixed metrics warmup in seconds")
def run(scenario: str | None, scenario_opt: str | None, out: str | None, seed: int | None,
        algorithm: str | None, overrides: tuple[str, ...], warmup_s: float | None):
    """Simulate a scenario and write its trace and metrics."""
    t0 = time.perf_counter()
    name = scenario or scenario_opt
    if not name:
        error_box("Run: USAGE", "a scenario is required", "qausim run dumbbell3")
        sys.exit(EXIT_CONFIG_ERROR)
    try:
        from qausim.network import run_scenario
        from qausim.topology import load_scenario

        path = resolve_scenario(name)
        out_dir = Path(out) if out else Path("runs") / path.stem
        with receipts_to(out_dir):
            spec = load_scenario(path, scenario_overrides(seed, algorithm, overrides))
            result = run_scenario(spec, out_dir, warmup_s=warmup_s)

        m = result.metrics
        elapsed_ms = int((time.perf_counter() - t0) * 1000)
        success_box(f"Run: {spec.name} ({spec.algorithm.value})", [
            ("Simulated", f"{spec.duration_ns / 1e6:g} ms"),
            ("Events", str(result.summary.events_dispatched)),
            ("Response time", f"{m.response_time_s:.6g} s"),
            ("Max amplitude", f"{m.max_amplitude_pkts:.3f} pkts"),
            ("Avg queue", f"{m.avg_q_pkts:.3f} pkts"),
            ("Drains", str(m.drain_count)),
            ("Throughput", f"{m.throughput_ratio:.4f}"),
            ("Drops", str(m.drop_count)),
            ("Trace hash", result.trace_hash[:16]),
            ("Output", str(out_dir)),
            ("Duration", f"{elapsed_ms}ms"),
        ], f"qausim validate {name}")
        sys.exit(EXIT_OK)

    except Exception as e:
        code = exit_code_for(e)
        error_box("Run: ERROR" if code != EXIT_CONFIG_ERROR else "Run: CONFIG ERROR", str(e))
        sys.exit(code)
