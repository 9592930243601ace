#
# For licensing see accompanying LICENSE file.
#
import json
from pathlib import Path

import pytest

from heffter_loops.constants import EXIT_BUDGET, EXIT_FALSE, EXIT_INPUT_ERROR, EXIT_OK
from heffter_loops.constructions import build_hpr, build_lpr
from heffter_loops.endpoints.cli import main
from heffter_loops.readers import fixture_names, fixture_path, load_model, parse_text_table
from heffter_loops.schema import (
    AffineReport,
    CompletionReport,
    CompletionStatus,
    Evaluation,
    ForcedBlockReport,
    HeffterReport,
    HprFile,
    LoopFile,
    LoopReport,
    TheoremReport,
)


def _path(name: str, file_name: str) -> str:
    return f"'{fixture_path(name, file_name)}'"


def _run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_construct_hpr_text_table(capsys):
    code, out = _run(capsys, "construct", "hpr", "p=7", "r=3", "format=text-table")
    assert code == EXIT_OK
    golden = load_model(fixture_path("example-4-1", "hpr.json"), HprFile)
    assert parse_text_table(out) == golden.table


@pytest.mark.parametrize(
    "argv",
    [
        ["--p", "7", "--r", "3", "--format", "text-table"],
        ["--p=7", "--r=3", "--format=text-table"],
        ["--p", "7", "r=3", "--format=text-table"],
    ],
    ids=["separate", "equals", "mixed"],
)
def test_construct_hpr_flags(capsys, argv: list[str]):
    code, out = _run(capsys, "construct", "hpr", *argv)
    assert code == EXIT_OK
    golden = load_model(fixture_path("example-4-1", "hpr.json"), HprFile)
    assert parse_text_table(out) == golden.table


def test_check_affine_flags_reject_both_diagonals(capsys):
    code, out = _run(
        capsys,
        "check",
        "affine",
        "--array",
        str(fixture_path("example-2-2", "array.json")),
        "--design",
        str(fixture_path("example-2-2", "design_all.json")),
    )
    assert code == EXIT_FALSE
    report = AffineReport.model_validate_json(out)
    assert {
        frozenset((v.first.class_name, v.second.class_name))
        for v in report.intersection_violations
    } == {frozenset(("diag", "adiag"))}


def test_check_affine_kinds_flag(capsys):
    code, out = _run(
        capsys,
        "check",
        "affine",
        "--array",
        str(fixture_path("example-2-2", "array.json")),
        "--kinds",
        "row,col,diag",
    )
    assert code == EXIT_OK
    assert AffineReport.model_validate_json(out).in_aff


def test_enumerate_sumpoly_flags(capsys):
    code, out = _run(capsys, "enumerate", "sumpoly", "--symbols", "1,2,3")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 12
    assert len(set(lines)) == 12


def test_evaluate_sumpoly_flags(capsys):
    code, out = _run(
        capsys,
        "evaluate",
        "sumpoly",
        "--loop",
        str(fixture_path("example-4-2", "loop.json")),
        "--polynomial",
        "((1+2)+3)",
    )
    assert code == EXIT_OK
    assert out.strip() == "1"


def test_complete_budget_flag(capsys):
    code, out = _run(
        capsys,
        "complete",
        "loop",
        "--loop",
        str(fixture_path("example-6-1", "partial.json")),
        "--budget",
        "10",
    )
    assert code == EXIT_BUDGET
    assert CompletionReport.model_validate_json(out).status == CompletionStatus.BUDGET_EXHAUSTED


def test_check_heffter_all_polys(capsys, tmp_path: Path):
    polys = tmp_path / "polys.json"
    polys.write_text(json.dumps(["((1+2)+3)"]))
    argv = [
        "check",
        "heffter",
        "--array",
        str(fixture_path("example-5-1", "array.json")),
        "--design",
        str(fixture_path("example-5-1", "design.json")),
        "--loop",
        str(fixture_path("example-5-1", "loop.json")),
        "--polys",
        str(polys),
    ]
    code, _ = _run(capsys, *argv)
    assert code == EXIT_INPUT_ERROR
    code, out = _run(capsys, *argv, "--all-polys")
    assert code == EXIT_OK
    assert HeffterReport.model_validate_json(out).evaluated == 144


def test_derive_ld(capsys, tmp_path: Path):
    array = str(fixture_path("example-2-2", "array.json"))
    design = str(fixture_path("example-2-2", "design.json"))
    target = tmp_path / "ld.json"
    code, _ = _run(
        capsys, "derive", "ld", "--array", array, "--design", design, "--output", str(target)
    )
    assert code == EXIT_OK
    assert load_model(target, LoopFile).n == 12
    code, out = _run(
        capsys, "check", "heffter", "--array", array, "--design", design, "--loop", str(target)
    )
    assert code == EXIT_OK
    assert HeffterReport.model_validate_json(out).evaluated == 8 * 12 + 3 * 120


@pytest.mark.slow
def test_construct_theorem_budget_flag(capsys, tmp_path: Path):
    array = tmp_path / "array.json"
    cells = [[9 * i + j + 1 for j in range(9)] for i in range(9)]
    array.write_text(json.dumps({"m": 9, "cells": cells}))
    code, out = _run(
        capsys,
        "construct",
        "theorem",
        "--array",
        str(array),
        "--kinds",
        "row,col",
        "--budget",
        "200",
    )
    assert code == EXIT_OK
    report = TheoremReport.model_validate_json(out)
    assert report.p_heffter
    assert {(b.k, b.p) for b in report.blocks} == {(3, 3)}
    assert report.completion.status in (
        CompletionStatus.COMPLETED,
        CompletionStatus.BUDGET_EXHAUSTED,
    )


def test_construct_hpr_json_defaults_to_least_root(capsys):
    code, out = _run(capsys, "construct", "hpr", "p=5")
    assert code == EXIT_OK
    hpr = HprFile.model_validate_json(out)
    assert hpr.r == 2
    assert hpr.table == build_hpr(5, 2).tolist()


def test_construct_lpr_round_trip(capsys):
    code, out = _run(capsys, "construct", "lpr", "p=7", "r=3")
    assert code == EXIT_OK
    assert LoopFile.model_validate_json(out).table == build_lpr(7, 3).table()
    code, text = _run(capsys, "construct", "lpr", "p=7", "r=3", "format=text-table")
    assert parse_text_table(text) == build_lpr(7, 3).table()


def test_construct_lpr_csv(capsys):
    code, out = _run(capsys, "construct", "lpr", "p=3", "r=2", "format=csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 7
    assert lines[0] == "0,1,2,3,-3,-2,-1"


def test_construct_general(capsys):
    code, out = _run(
        capsys,
        "construct",
        "general",
        "p=3",
        "r=2",
        "k=3",
        f"idempotent={_path('example-4-4', 'idempotent.json')}",
    )
    assert code == EXIT_OK
    golden = load_model(fixture_path("example-4-4", "loop.json"), LoopFile)
    assert LoopFile.model_validate_json(out).table == golden.table


def test_construct_theorem(capsys):
    code, out = _run(
        capsys,
        "construct",
        "theorem",
        f"array={_path('example-2-1', 'array.json')}",
        "kinds=[row,col,diag,adiag]",
    )
    assert code == EXIT_OK
    report = TheoremReport.model_validate_json(out)
    assert report.p_heffter
    assert len(report.polys) == 72
    assert report.completion.status == CompletionStatus.COMPLETED


def test_output_file(capsys, tmp_path: Path):
    target = tmp_path / "hpr.json"
    code, out = _run(capsys, "construct", "hpr", "p=7", "r=3", f"output='{target}'")
    assert code == EXIT_OK
    assert out == ""
    assert load_model(target, HprFile).table == build_hpr(7, 3).tolist()


def test_check_affine_rejects_both_diagonals(capsys):
    code, out = _run(
        capsys,
        "check",
        "affine",
        f"array={_path('example-2-2', 'array.json')}",
        f"design={_path('example-2-2', 'design_all.json')}",
    )
    assert code == EXIT_FALSE
    report = AffineReport.model_validate_json(out)
    assert not report.is_affine_1_design
    assert {
        frozenset((v.first.class_name, v.second.class_name))
        for v in report.intersection_violations
    } == {frozenset(("diag", "adiag"))}


def test_check_affine_with_kinds(capsys):
    code, out = _run(
        capsys,
        "check",
        "affine",
        f"array={_path('example-2-2', 'array.json')}",
        "kinds=[row,col,diag]",
        "format=text-table",
    )
    assert code == EXIT_OK
    assert "in_aff" in out
    assert "True" in out


def test_check_loop(capsys):
    code, out = _run(capsys, "check", "loop", f"loop={_path('example-4-2', 'loop.json')}")
    assert code == EXIT_OK
    report = LoopReport.model_validate_json(out)
    assert report.is_total
    assert not report.is_associative


def test_check_heffter(capsys):
    code, out = _run(
        capsys,
        "check",
        "heffter",
        f"array={_path('example-5-1', 'array.json')}",
        f"design={_path('example-5-1', 'design.json')}",
        f"loop={_path('example-5-1', 'loop.json')}",
    )
    assert code == EXIT_OK
    assert HeffterReport.model_validate_json(out).evaluated == 144


def test_check_compatible_is_false_on_the_sparse_loop(capsys):
    code, _ = _run(
        capsys,
        "check",
        "compatible",
        f"loop={_path('example-3-1', 'loop.json')}",
        f"polys={_path('example-3-1', 'polys.json')}",
    )
    assert code == EXIT_FALSE


def test_derive_forced(capsys):
    code, out = _run(capsys, "derive", "forced", "symbols=[1,4,7,10]")
    assert code == EXIT_OK
    report = ForcedBlockReport.model_validate_json(out)
    assert report.unknowns == ["alpha", "beta", "gamma", "delta", "epsilon", "phi"]


def test_derive_forced_unsupported_size(capsys):
    code, _ = _run(capsys, "derive", "forced", "symbols=[1,2,3,4,5]")
    assert code == EXIT_INPUT_ERROR


def test_enumerate_sumpoly(capsys):
    code, out = _run(capsys, "enumerate", "sumpoly", "symbols=[1,2,3]")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 12
    assert "((1+2)+3)" in lines


def test_enumerate_sumpoly_cap(capsys):
    code, _ = _run(capsys, "enumerate", "sumpoly", "symbols=[1,2,3,4,5,6,7]")
    assert code == EXIT_INPUT_ERROR


def test_evaluate_sumpoly(capsys):
    loop = _path("example-4-2", "loop.json")
    code, out = _run(capsys, "evaluate", "sumpoly", f"loop={loop}", "polynomial='((1+2)+3)'")
    assert code == EXIT_OK
    assert out.strip() == "1"
    code, out = _run(
        capsys,
        "evaluate",
        "sumpoly",
        f"loop={_path('example-3-1', 'loop.json')}",
        "polynomial='((2+3)+1)'",
        "format=json",
    )
    assert Evaluation.model_validate_json(out).value is None


def test_evaluate_sumpoly_syntax_error(capsys):
    loop = _path("example-4-2", "loop.json")
    code, _ = _run(capsys, "evaluate", "sumpoly", f"loop={loop}", "polynomial='(1+2'")
    assert code == EXIT_INPUT_ERROR


def test_complete_total_loop(capsys):
    code, out = _run(capsys, "complete", "loop", f"loop={_path('example-4-2', 'loop.json')}")
    assert code == EXIT_OK
    report = CompletionReport.model_validate_json(out)
    assert report.nodes == 0
    assert report.loop.table == build_lpr(7, 3).table()


def test_complete_budget(capsys):
    code, out = _run(
        capsys, "complete", "loop", f"loop={_path('example-6-1', 'partial.json')}", "budget=10"
    )
    assert code == EXIT_BUDGET
    assert CompletionReport.model_validate_json(out).status == CompletionStatus.BUDGET_EXHAUSTED


def test_search_classical(capsys):
    code, out = _run(capsys, "search", "classical", "m=3", "n=3", "format=text-table")
    assert code == EXIT_OK
    grid = parse_text_table(out)
    assert sorted(abs(v) for row in grid for v in row) == list(range(1, 10))


def test_search_classical_without_solution(capsys):
    code, out = _run(capsys, "search", "classical", "m=2", "n=2")
    assert code == EXIT_FALSE
    assert out == ""


def test_search_classical_budget(capsys):
    code, _ = _run(capsys, "search", "classical", "m=3", "n=3", "budget=1")
    assert code == EXIT_BUDGET


def test_fixtures_list(capsys):
    code, out = _run(capsys, "fixtures", "list")
    assert code == EXIT_OK
    assert out.splitlines() == fixture_names()


def test_fixtures_print(capsys):
    code, out = _run(capsys, "fixtures", "example-4-2")
    assert code == EXIT_OK
    files = json.loads(out)
    assert LoopFile.model_validate(files["loop.json"]).table == build_lpr(7, 3).table()


def test_fixtures_write(capsys, tmp_path: Path):
    code, _ = _run(capsys, "fixtures", "example-6-1", f"output='{tmp_path}'")
    assert code == EXIT_OK
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "array.json",
        "completion.json",
        "design.json",
        "partial.json",
    ]


def test_fixtures_unknown(capsys):
    code, _ = _run(capsys, "fixtures", "example-9-9")
    assert code == EXIT_INPUT_ERROR


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "hpr", "p=7", "colour=red"],
        ["construct", "hpr", "--p", "7", "--colour", "red"],
        ["construct", "hpr", "--", "7"],
        ["evaluate", "sumpoly", "--loop", "x.json", "--polynomial", "(1'+\"2)"],
        ["construct", "hpr"],
        ["construct", "hpr", "p=9"],
        ["construct", "square", "p=7"],
        ["check", "loop", "loop='/nonexistent/loop.json'"],
        ["construct"],
        [],
    ],
    ids=[
        "unknown-key",
        "unknown-flag",
        "malformed-flag",
        "mixed-quotes",
        "missing-p",
        "not-prime",
        "unknown-action",
        "missing-file",
        "no-action",
        "no-args",
    ],
)
def test_input_errors(capsys, argv: list[str]):
    assert main(argv) == EXIT_INPUT_ERROR


def test_help(capsys):
    code, out = _run(capsys, "--help")
    assert code == EXIT_OK
    assert "construct hpr|lpr|general|theorem" in out
    assert "poly_cap: 6" in out


def test_output_is_deterministic(capsys):
    argv = ("construct", "general", "p=3", "r=2", "k=4", "format=text-table")
    first = _run(capsys, *argv)
    second = _run(capsys, *argv)
    assert first == second
    assert first[0] == EXIT_OK
