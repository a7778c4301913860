"""Console messages through rich, and the JSON and CSV report writers.

Reports on stdout must stay machine-readable, so every console helper is a
no-op in JSON mode and logs go to ``err_console``.
"""

import csv
import json
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any, TextIO

import typer
from rich.console import Console
from rich.table import Table

# Force UTF-8 encoding on Windows
if sys.platform == "win32":
    sys.stdout.reconfigure(encoding="utf-8", errors="replace")
    sys.stderr.reconfigure(encoding="utf-8", errors="replace")

console = Console(force_terminal=True if sys.platform == "win32" else None)
err_console = Console(stderr=True)

_json_mode = False


def set_json_mode(enabled: bool) -> None:
    global _json_mode
    _json_mode = enabled


def is_json_mode() -> bool:
    return _json_mode


def _say(markup: str) -> None:
    if not _json_mode:
        console.print(markup)


def print_success(message: str) -> None:
    _say(f"[green]✓[/green] {message}")


def print_error(message: str, details: str | None = None, tip: str | None = None) -> None:
    """Print an error with optional details (shown verbatim) and a tip."""
    if _json_mode:
        return
    console.print(f"[red]✗[/red] [bold]Error:[/bold] {message}")
    if details:
        console.print(f"  {details}", markup=False)
    if tip:
        console.print(f"\n  [dim]Tip: {tip}[/dim]")


def print_warning(message: str) -> None:
    _say(f"[yellow]![/yellow] {message}")


def print_info(message: str) -> None:
    _say(f"[blue]ℹ[/blue] {message}")


def print_fields(fields: Mapping[str, object]) -> None:
    """Print one bold label per line; None values are skipped."""
    for label, value in fields.items():
        if value is not None:
            _say(f"[bold]{label}:[/bold] {value}")


def to_json(data: dict[str, Any] | list[Any]) -> str:
    """Canonical report text: sorted keys, two-space indent."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, default=str)


def print_json(data: dict[str, Any] | list[Any]) -> None:
    # typer.echo, not console.print: rich would re-wrap long lines
    typer.echo(to_json(data))


def print_json_error(code: str, message: str, details: str | None = None) -> None:
    error_data = {"error": True, "code": code, "message": message}
    if details:
        error_data["details"] = details
    print_json(error_data)


def print_table(
    title: str | None,
    columns: Sequence[str],
    rows: Sequence[Sequence[str]],
    footer: str | None = None,
    numeric: Sequence[str] = (),
) -> None:
    """Print a rich table; columns named in ``numeric`` are right-aligned."""
    if _json_mode:
        return
    table = Table(title=title, show_header=True, header_style="bold")
    for column in columns:
        table.add_column(column, justify="right" if column in numeric else "left")
    for row in rows:
        table.add_row(*row)
    console.print(table)
    if footer:
        console.print(f"\n[dim]{footer}[/dim]")


def write_json(path: Path, data: dict[str, Any] | list[Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(data) + "\n", encoding="utf-8")


def _write_rows(stream: TextIO, columns: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)


def write_csv(path: Path | None, columns: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    """Write a CSV table to ``path``, or to stdout when ``path`` is None."""
    if path is None:
        _write_rows(sys.stdout, columns, rows)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        _write_rows(handle, columns, rows)
