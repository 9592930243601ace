#
# For licensing see accompanying LICENSE file.
#
"""Plain-text rendering of grids and reports with rich tables."""

import io
from collections.abc import Sequence

from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from heffter_loops.constants import EMPTY_TEXT


def _cell_text(value: int | None) -> str:
    return EMPTY_TEXT if value is None else str(value)


def _render(table: Table, width: int) -> str:
    buffer = io.StringIO()
    console = Console(file=buffer, width=width, color_system=None, markup=False, highlight=False)
    console.print(table)
    return "\n".join(line.rstrip() for line in buffer.getvalue().splitlines())


def render_grid(rows: Sequence[Sequence[int | None]]) -> str:
    """Right-aligned cells separated by spaces, "." for empty or undefined cells.

    Cayley tables are printed with their identity row and column, which double as
    the headers.
    """
    texts = [[_cell_text(value) for value in row] for row in rows]
    widths = [max(len(row[j]) for row in texts) for j in range(len(texts[0]))]
    table = Table(box=None, show_header=False, pad_edge=False, padding=(0, 1))
    for _ in widths:
        table.add_column(justify="right", no_wrap=True)
    for row in texts:
        table.add_row(*row)
    return _render(table, sum(widths) + 2 * len(widths) + 1)


def render_lines(lines: Sequence[str]) -> str:
    return "\n".join(lines)


def _summary(value) -> str:
    if isinstance(value, list):
        return str(len(value))
    if value is None:
        return EMPTY_TEXT
    return str(value)


def render_report(report: BaseModel) -> str:
    """Two columns: each top-level field and its value, lists shown by length."""
    fields = report.model_dump(mode="json")
    table = Table(box=None, show_header=False, pad_edge=False)
    table.add_column(no_wrap=True)
    table.add_column(no_wrap=True)
    for name, value in fields.items():
        if isinstance(value, dict):
            continue
        table.add_row(name, _summary(value))
    width = max(len(name) for name in fields) + max(
        (len(_summary(v)) for v in fields.values() if not isinstance(v, dict)), default=1
    )
    return _render(table, width + 4)
