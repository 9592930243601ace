#
# For licensing see accompanying LICENSE file.
#
import json
import logging
from pathlib import Path
from typing import Any, TypeVar

import importlib_resources as resources
from pydantic import BaseModel

from heffter_loops.aliases import FixtureName
from heffter_loops.arrays import (
    AffineDesign,
    CellBlock,
    ParallelClass,
    PartiallyFilledArray,
    PartitionKind,
    design_from_kinds,
)
from heffter_loops.constants import EMPTY_TEXT, FIXTURES_DIR, PACKAGE_NAME
from heffter_loops.constructions import IdempotentLatinSquare
from heffter_loops.exceptions import InputError
from heffter_loops.loops import PartialLoop
from heffter_loops.schema import (
    ArrayFile,
    ClassicalArrayFile,
    DesignFile,
    IdempotentFile,
    LoopFile,
    PolynomialSetFile,
)
from heffter_loops.sumpoly import PolynomialSet, parse_polynomial

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)


def load_json(path: str | Path):
    with open(path, "r") as f:
        data = json.load(f)
    return data


def load_model(path: str | Path, model: type[Model]) -> Model:
    return model.model_validate(load_json(path))


def load_array(path: str | Path) -> PartiallyFilledArray:
    return PartiallyFilledArray.from_rows(load_model(path, ArrayFile).cells)


def design_from_file(array: PartiallyFilledArray, design: DesignFile) -> AffineDesign:
    """Explicit cell classes when given, otherwise the canonical partitions named."""
    if design.classes is None:
        return design_from_kinds(array, design.names)
    names = design.names or [PartitionKind.CUSTOM.value] * len(design.classes)
    return AffineDesign(
        tuple(
            ParallelClass(
                name=name,
                blocks=tuple(CellBlock(tuple(tuple(cell) for cell in block)) for block in blocks),
            )
            for name, blocks in zip(names, design.classes)
        )
    )


def load_design(path: str | Path, array: PartiallyFilledArray) -> AffineDesign:
    return design_from_file(array, load_model(path, DesignFile))


def loop_from_file(loop: LoopFile) -> PartialLoop:
    return PartialLoop.from_table(loop.table)


def load_loop(path: str | Path) -> PartialLoop:
    return loop_from_file(load_model(path, LoopFile))


def load_polys(path: str | Path) -> PolynomialSet:
    texts = load_model(path, PolynomialSetFile).root
    return PolynomialSet(tuple(parse_polynomial(text) for text in texts))


def load_idempotent(path: str | Path) -> IdempotentLatinSquare:
    return IdempotentLatinSquare.from_rows(load_model(path, IdempotentFile).table)


def load_classical(path: str | Path) -> list[list[int | None]]:
    return load_model(path, ClassicalArrayFile).cells


def parse_text_table(text: str) -> list[list[int | None]]:
    """Read back a grid rendered as whitespace-separated cells, "." for empty."""
    rows = []
    for line in text.splitlines():
        tokens = line.split()
        if not tokens:
            continue
        try:
            rows.append([None if token == EMPTY_TEXT else int(token) for token in tokens])
        except ValueError:
            raise InputError(f"Cannot read table line {line!r}") from None
    if len({len(row) for row in rows}) > 1:
        raise InputError("Table rows have different lengths")
    return rows


def _fixtures_root():
    return resources.files(PACKAGE_NAME) / FIXTURES_DIR


def fixture_names() -> list[FixtureName]:
    return sorted(entry.name for entry in _fixtures_root().iterdir() if entry.is_dir())


def fixture_files(name: FixtureName) -> dict[str, Any]:
    """File name to parsed JSON content for the bundled instance `name`."""
    if name not in fixture_names():
        raise InputError(f"Unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    directory = _fixtures_root() / name
    logger.debug(f"Loading fixture {name} from {directory}")
    return {
        entry.name: json.loads(entry.read_text())
        for entry in sorted(directory.iterdir(), key=lambda e: e.name)
        if entry.name.endswith(".json")
    }


def fixture_path(name: FixtureName, file_name: str) -> Path:
    """A filesystem path to a bundled fixture file, for APIs that take paths."""
    path = Path(str(_fixtures_root() / name / file_name))
    if not path.exists():
        raise InputError(f"Fixture {name!r} has no file {file_name!r}")
    return path
