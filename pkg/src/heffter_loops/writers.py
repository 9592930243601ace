#
# For licensing see accompanying LICENSE file.
#
import csv
import io
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from heffter_loops.constants import EMPTY_TEXT


def save_json(data: Any, path: str | Path, indent: int = 2):
    with open(path, "w") as f:
        json.dump(data, f, indent=indent)
        f.write("\n")


def model_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2)


def grid_csv(rows: Sequence[Sequence[int | None]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in rows:
        writer.writerow([EMPTY_TEXT if value is None else value for value in row])
    return buffer.getvalue()


def write_output(text: str, output: str | Path | None = None):
    """Write `text` to `output`, or to stdout when no path is given."""
    if not text.endswith("\n"):
        text += "\n"
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w") as f:
        f.write(text)
