"""Scenario resolution, receipt redirection and exit-code mapping."""
import contextlib
import logging
from pathlib import Path
from typing import Iterator

import click

from qausim.core.constants import EXIT_CONFIG_ERROR, EXIT_DIVERGENCE, EXIT_INTERNAL_ERROR
from qausim.core.receipt import StopRule, get_receipt_sink, set_receipt_sink
from qausim.topology import ConfigError, bundled_scenario

logger = logging.getLogger("qausim.cli")

RECEIPTS_FILE = "receipts.jsonl"


def resolve_scenario(name: str) -> Path:
    """A path on disk, else a shipped scenario name."""
    path = Path(name)
    if path.is_file():
        return path
    try:
        return bundled_scenario(path.name)
    except ConfigError:
        raise ConfigError(f"scenario not found: {name}", path=name) from None


def scenario_overrides(seed: int | None, algorithm: str | None,
                       overrides: tuple[str, ...]) -> list[str]:
    """--seed and --algorithm as dotted overrides, ahead of explicit ones."""
    extra = []
    if seed is not None:
        extra.append(f"scenario.seed={seed}")
    if algorithm is not None:
        extra.append(f"scenario.algorithm={algorithm}")
    return [*extra, *overrides]


@contextlib.contextmanager
def receipts_to(out_dir: Path) -> Iterator[None]:
    """Point the receipt sink at <out_dir>/receipts.jsonl for the block."""
    out_dir.mkdir(parents=True, exist_ok=True)
    previous = get_receipt_sink()
    with open(out_dir / RECEIPTS_FILE, "w") as handle:
        set_receipt_sink(handle)
        try:
            yield
        finally:
            set_receipt_sink(previous)


def exit_code_for(exc: BaseException) -> int:
    """2 for bad input (ConfigError, usage, rejected parameter values), 3 for
    StopRule, 4 with a logged traceback for anything else."""
    if isinstance(exc, (ConfigError, click.UsageError, ValueError)):
        return EXIT_CONFIG_ERROR
    if isinstance(exc, StopRule):
        return EXIT_DIVERGENCE
    logger.error("unexpected %s", type(exc).__name__, exc_info=exc)
    return EXIT_INTERNAL_ERROR
