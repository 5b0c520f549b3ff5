"""qausim CLI entry point - assembles all commands."""
import logging

import click

from . import __version__
from .analyze_cmd import analyze
from .run_cmd import run
from .suite_cmd import suite
from .validate_cmd import validate

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


@click.group()
@click.version_option(version=__version__)
@click.option("--log-level", default="WARNING", show_default=True,
              type=click.Choice(LOG_LEVELS, case_sensitive=False))
def cli(log_level: str):
    """qausim: ASM and QCN congestion-control simulator and fluid analysis."""
    logging.basicConfig(level=getattr(logging, log_level.upper()),
                        format="%(levelname)s %(name)s: %(message)s")


cli.add_command(run)
cli.add_command(suite)
cli.add_command(analyze)
cli.add_command(validate)


if __name__ == "__main__":
    cli()
