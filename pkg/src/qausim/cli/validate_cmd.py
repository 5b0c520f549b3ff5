"""Validate a scenario: routing, NIC rates and the sliding condition."""
import sys

import click

from qausim.core.constants import EXIT_CHECK_FAILED, EXIT_OK

from .common import exit_code_for, resolve_scenario, scenario_overrides
from .output import error_box, success_box, table


@click.command()
@click.argument("scenario", required=False)
@click.option("--scenario", "scenario_opt", help="Scenario file or shipped name")
@click.option("--seed", type=int, help="Override scenario.seed")
@click.option("--algorithm", type=click.Choice(["asm", "qcn"]), help="Override scenario.algorithm")
@click.option("--override", "overrides", multiple=True, help="section.key=value (repeatable)")
def validate(scenario: str | None, scenario_opt: str | None, seed: int | None,
             algorithm: str | None, overrides: tuple[str, ...]):
    """Run every load-time check and print the sliding inequalities per regime."""
    name = scenario or scenario_opt
    if not name:
        raise click.UsageError("a scenario is required")
    try:
        from qausim.topology import check_scenario, load_scenario

        spec = load_scenario(resolve_scenario(name),
                             scenario_overrides(seed, algorithm, overrides), check=False)
        check = check_scenario(spec)

        if check.sliding:
            table(["regime", "lhs_minus (< 0)", "lhs_plus (> 0)", "holds"], [
                [regime, f"{c.lhs_minus:.6g}", f"{c.lhs_plus:.6g}", str(c.holds).lower()]
                for regime, c in check.sliding.items()
            ])
        for warning in check.warnings:
            print(f"Warning: {warning}")

        rows = [
            ("Algorithm", spec.algorithm.value),
            ("Links", str(len(spec.links))),
            ("Flows", str(len(spec.flows))),
            ("Bottleneck", check.bottleneck),
            ("Sources at bottleneck", str(check.n_sources)),
            ("Band", f"{spec.band_packets:g} pkts"),
        ]
        if check.holds:
            success_box(f"Validate: {spec.name} OK", rows, f"qausim run {name}")
            sys.exit(EXIT_OK)
        error_box(f"Validate: {spec.name} FAILED", "sliding condition does not hold")
        sys.exit(EXIT_CHECK_FAILED)

    except Exception as e:
        error_box("Validate: ERROR", str(e))
        sys.exit(exit_code_for(e))
