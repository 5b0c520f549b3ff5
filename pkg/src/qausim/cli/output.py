"""Shared output formatting with ASCII boxes. NO class - just functions."""

import csv
import io
from pathlib import Path

import click

BOX_WIDTH = 60


def print_error(message: str) -> None:
    """Print error message in red on stderr."""
    click.echo(click.style(f"Error: {message}", fg="red"), err=True)


def _truncate(text: str, max_len: int = 50) -> str:
    """Truncate text with ellipsis if too long."""
    return text[:max_len-3] + "..." if len(text) > max_len else text


def success_box(title: str, rows: list[tuple[str, str]], next_cmd: str | None = None) -> None:
    """Print success box with an optional Next: suggestion."""
    print(f"╭─ {title} " + "─" * max(0, BOX_WIDTH - len(title) - 4) + "╮")
    for label, value in rows:
        line = f"│ {label}: {_truncate(str(value), BOX_WIDTH - len(label) - 6)}"
        print(line + " " * max(0, BOX_WIDTH - len(line)) + "│")
    print("╰" + "─" * (BOX_WIDTH - 1) + "╯")
    if next_cmd:
        print(f"Next: {next_cmd}")


def error_box(title: str, message: str, fix_cmd: str | None = None) -> None:
    """Print error box with optional fix suggestion."""
    text = _truncate(message, BOX_WIDTH - 4)
    print(f"╭─ {title} " + "─" * max(0, BOX_WIDTH - len(title) - 4) + "╮")
    print(f"│ {text}" + " " * max(0, BOX_WIDTH - len(text) - 4) + "│")
    print("╰" + "─" * (BOX_WIDTH - 1) + "╯")
    if len(message) > len(text):
        print(message)
    if fix_cmd:
        print(f"Fix: {fix_cmd}")


def table(headers: list[str], rows: list[list]) -> None:
    """Print simple table."""
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row[:len(widths)]):
            widths[i] = max(widths[i], len(str(cell)))

    header_line = "│ " + " │ ".join(h.ljust(widths[i]) for i, h in enumerate(headers)) + " │"
    sep_line = "├" + "─" + "─┼─".join("─" * w for w in widths) + "─┤"

    print("╭" + "─" * (len(header_line) - 2) + "╮")
    print(header_line)
    print(sep_line)
    for row in rows:
        cells = [str(row[i]).ljust(w) if i < len(row) else " " * w for i, w in enumerate(widths)]
        print("│ " + " │ ".join(cells) + " │")
    print("╰" + "─" * (len(header_line) - 2) + "╯")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(headers: list[str], rows: list[list], out: str | None = None) -> None:
    """CSV to `out`, or to stdout when out is None."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    if out is None:
        click.echo(buf.getvalue(), nl=False)
    else:
        Path(out).write_text(buf.getvalue())
