#
# For licensing see accompanying LICENSE file.
#
from pathlib import Path

import pytest
from pydantic import BaseModel, ValidationError

from heffter_loops.arrays import PartiallyFilledArray, partition, symb
from heffter_loops.display import render_grid, render_report
from heffter_loops.exceptions import InputError
from heffter_loops.loops import PartialLoop, validate_partial_loop
from heffter_loops.readers import (
    design_from_file,
    fixture_files,
    fixture_names,
    fixture_path,
    load_array,
    load_json,
    load_loop,
    parse_text_table,
)
from heffter_loops.schema import (
    ArrayFile,
    DesignFile,
    HprFile,
    IdempotentFile,
    LoopFile,
    LoopReport,
    PolynomialSetFile,
)
from heffter_loops.writers import grid_csv, save_json

MODELS: dict[str, type[BaseModel]] = {
    "array.json": ArrayFile,
    "design.json": DesignFile,
    "design_all.json": DesignFile,
    "loop.json": LoopFile,
    "partial.json": LoopFile,
    "completion.json": LoopFile,
    "polys.json": PolynomialSetFile,
    "idempotent.json": IdempotentFile,
    "hpr.json": HprFile,
}

LOOP_FILES = [
    (name, file_name)
    for name in fixture_names()
    for file_name in fixture_files(name)
    if MODELS[file_name] is LoopFile
]


def test_fixture_names():
    assert fixture_names() == [
        "example-2-1",
        "example-2-2",
        "example-3-1",
        "example-4-1",
        "example-4-2",
        "example-4-4",
        "example-5-1",
        "example-6-1",
    ]


@pytest.mark.parametrize("name", fixture_names(), ids="fixture={}".format)
def test_fixture_files_parse(name: str):
    for file_name, content in fixture_files(name).items():
        model = MODELS[file_name].model_validate(content)
        if hasattr(model, "source"):
            assert model.source


@pytest.mark.parametrize("name, file_name", LOOP_FILES, ids="{}".format)
def test_fixture_loops_are_valid(name: str, file_name: str):
    table = LoopFile.model_validate(fixture_files(name)[file_name]).table
    assert validate_partial_loop(table).valid


def test_shared_fixtures_agree(
    blocked_loop: PartialLoop, forced_partial: PartialLoop, forced_completion: PartialLoop
):
    assert load_loop(fixture_path("example-5-1", "loop.json")) == blocked_loop
    assert forced_completion == blocked_loop
    assert forced_completion.contains(forced_partial)
    assert load_array(fixture_path("example-6-1", "array.json")) == load_array(
        fixture_path("example-2-1", "array.json")
    )


def test_unknown_fixture():
    with pytest.raises(InputError):
        fixture_files("example-1-1")
    with pytest.raises(InputError):
        fixture_path("example-2-1", "missing.json")


def test_array_file_shape():
    with pytest.raises(ValidationError):
        ArrayFile.model_validate({"m": 2, "cells": [[1, 2], [3]]})


def test_loop_file_order_and_shape():
    with pytest.raises(ValidationError):
        LoopFile.model_validate({"n": 1, "order": "1..n", "table": [[0, 1, -1]] * 3})
    with pytest.raises(ValidationError):
        LoopFile.model_validate({"n": 2, "table": [[0, 1, -1]] * 3})


def test_design_file_needs_content():
    with pytest.raises(ValidationError):
        DesignFile.model_validate({"source": "empty"})
    with pytest.raises(ValidationError):
        DesignFile.model_validate({"names": ["row"], "classes": [[[[0, 0]]], [[[0, 1]]]]})


def test_explicit_design_classes(array_a: PartiallyFilledArray):
    rows = [[[i, j] for j in range(3)] for i in range(3)]
    design = design_from_file(array_a, DesignFile.model_validate({"classes": [rows]}))
    assert design.lam == 1
    assert design.classes[0].name == "custom"
    blocks = design.classes[0].blocks
    expected = partition(array_a, "row").blocks
    assert [symb(array_a, b) for b in blocks] == [symb(array_a, b) for b in expected]


def test_parse_text_table_errors():
    assert parse_text_table("1 .\n\n. 2\n") == [[1, None], [None, 2]]
    with pytest.raises(InputError):
        parse_text_table("1 2\n3\n")
    with pytest.raises(InputError):
        parse_text_table("1 x\n")


def test_render_grid_round_trip():
    rows = [[None, -10, 3], [4, None, -6], [7, 8, None]]
    text = render_grid(rows)
    assert "." in text
    assert parse_text_table(text) == rows


def test_render_report_summarises_lists():
    report = LoopReport(valid=True, is_total=True, weight=12)
    lines = render_report(report).splitlines()
    assert any(line.split() == ["violations", "0"] for line in lines)
    assert any(line.split() == ["associativity_counterexample", "."] for line in lines)


def test_save_json_round_trip(tmp_path: Path):
    target = tmp_path / "array.json"
    save_json({"m": 1, "cells": [[None]]}, target)
    assert load_json(target) == {"m": 1, "cells": [[None]]}
    assert load_array(target).weight == 0


def test_grid_csv():
    assert grid_csv([[1, None], [None, -2]]) == "1,.\n.,-2\n"
