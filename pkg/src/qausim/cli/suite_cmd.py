"""Run an experiment suite and write one directory per sweep point."""
import sys
import time
from pathlib import Path

import click

from qausim.core.constants import EXIT_OK, SUITE_AGGREGATE_FILE
from qausim.experiments import SUITES

from .common import exit_code_for, receipts_to
from .output import error_box, success_box, table


@click.command()
@click.argument("name", type=click.Choice(SUITES))
@click.option("--out", type=click.Path(file_okay=False), help="Output directory (default runs/<suite>)")
@click.option("--workers", default=1, show_default=True, help="Parallel worker processes")
@click.option("--seed", type=int, help="Override scenario.seed for every point")
@click.option("--algorithm", type=click.Choice(["asm", "qcn"]),
              help="Restrict two-algorithm suites to one")
@click.option("--override", "overrides", multiple=True, help="section.key=value (repeatable)")
def suite(name: str, out: str | None, workers: int, seed: int | None, algorithm: str | None,
          overrides: tuple[str, ...]):
    """Run a suite: sliding, small-queue, convergence, param-sweep, bandwidth-sweep,
    delay-sweep or parking-lot."""
    t0 = time.perf_counter()
    try:
        from qausim.experiments import ExperimentSuite, run_suite
        from qausim.topology import Algorithm

        out_dir = Path(out) if out else Path("runs") / name
        experiment = ExperimentSuite(
            name, overrides=overrides, seed=seed,
            algorithm=Algorithm(algorithm) if algorithm else None,
        )
        with receipts_to(out_dir):
            result = run_suite(experiment, out_dir, workers=workers)

        table(["point", "avg_q", "amplitude", "drains", "throughput"], [
            [r["point"], f"{r['avg_q_pkts']:.2f}", f"{r['max_amplitude_pkts']:.2f}",
             r["drain_count"], f"{r['throughput_ratio']:.4f}"]
            for r in result.rows
        ])
        elapsed_ms = int((time.perf_counter() - t0) * 1000)
        success_box(f"Suite: {name}", [
            ("Points", str(len(result.rows))),
            ("Excluded", str(len(result.excluded))),
            ("Merkle root", result.merkle_root[:16]),
            ("Aggregate", str(out_dir / SUITE_AGGREGATE_FILE)),
            ("Duration", f"{elapsed_ms}ms"),
        ])
        sys.exit(EXIT_OK)

    except Exception as e:
        error_box("Suite: ERROR", str(e))
        sys.exit(exit_code_for(e))
