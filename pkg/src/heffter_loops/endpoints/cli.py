#
# For licensing see accompanying LICENSE file.
#
"""The ``heffter`` command line: ``heffter <group> <action> --key value ...``.

Options are hydra overrides of the group's config in
``heffter_loops.configs.cli``, given as ``--key value``, ``--key=value`` or
``key=value``; ``heffter --help`` prints every config.
"""

import json
import logging
import re
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from hydra import compose, initialize_config_module
from hydra.errors import HydraException
from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.logging import RichHandler

from heffter_loops.arrays import (
    AffineDesign,
    PartiallyFilledArray,
    design_from_kinds,
    validate_affine,
)
from heffter_loops.constants import (
    CONFIG_MODULE,
    EXIT_BUDGET,
    EXIT_FALSE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    ORDER_STRING,
    PACKAGE_NAME,
)
from heffter_loops.constructions import (
    build_general,
    build_hpr,
    build_lpr,
    idempotent_square,
)
from heffter_loops.display import render_grid, render_lines, render_report
from heffter_loops.exceptions import (
    BudgetExhaustedError,
    InputError,
    SearchTooLargeError,
)
from heffter_loops.heffter import (
    classify,
    derive_forced,
    forced_ld,
    is_d_heffter,
    is_p_heffter,
    search_classical,
    theorem_construct,
    validate_dsps,
    verify_classical,
)
from heffter_loops.loops import PartialLoop, complete, validate_partial_loop
from heffter_loops.readers import (
    fixture_files,
    fixture_names,
    load_array,
    load_classical,
    load_design,
    load_idempotent,
    load_loop,
    load_model,
    load_polys,
)
from heffter_loops.residues import least_primitive_root
from heffter_loops.schema import (
    ClassicalArrayFile,
    CompletionReport,
    CompletionStatus,
    Evaluation,
    HprFile,
    LoopFile,
    TheoremReport,
)
from heffter_loops.sumpoly import enumerate_all, evaluate, is_compatible, parse_polynomial
from heffter_loops.symbols import Undefined
from heffter_loops.writers import grid_csv, model_json, save_json, write_output

logger = logging.getLogger(__name__)

Command = Callable[[DictConfig], int]


def _setup_logging(level: str):
    package_logger = logging.getLogger(PACKAGE_NAME)
    package_logger.handlers.clear()
    package_logger.addHandler(
        RichHandler(console=Console(stderr=True), show_path=False, markup=False)
    )
    package_logger.setLevel(level)


def _emit(cfg: DictConfig, text: str):
    write_output(text, cfg.output)


def _emit_grid(cfg: DictConfig, rows: list[list[int | None]], model: BaseModel):
    """Grids honour all three formats; `model` is the JSON form."""
    match cfg.format:
        case "text-table":
            _emit(cfg, render_grid(rows))
        case "csv":
            _emit(cfg, grid_csv(rows))
        case "json":
            _emit(cfg, model_json(model))
        case other:
            raise InputError(f"Unknown format {other!r}")


def _emit_report(cfg: DictConfig, report: BaseModel):
    if cfg.format == "text-table":
        _emit(cfg, render_report(report))
    else:
        _emit(cfg, model_json(report))


def _exit(holds: bool) -> int:
    return EXIT_OK if holds else EXIT_FALSE


def _loop_file(loop: PartialLoop, source: str | None = None) -> LoopFile:
    return LoopFile(n=loop.n, order=ORDER_STRING, table=loop.table(), source=source)


def _require(cfg: DictConfig, key: str):
    value = cfg[key]
    if value is None:
        raise InputError(f"Missing required option --{key}")
    return value


def _array(cfg: DictConfig) -> PartiallyFilledArray:
    return load_array(_require(cfg, "array"))


def _design(cfg: DictConfig, array: PartiallyFilledArray) -> AffineDesign:
    if cfg.design is not None:
        return load_design(cfg.design, array)
    if cfg.kinds is not None:
        kinds = cfg.kinds
        if isinstance(kinds, str):
            kinds = kinds.split(",")
        return design_from_kinds(array, list(kinds))
    raise InputError("Pass --design PATH or --kinds row,col,...")


def _symbols(cfg: DictConfig) -> list[int]:
    symbols = cfg.symbols
    if isinstance(symbols, str | int):
        symbols = str(symbols).split(",")
    return [int(s) for s in symbols]


def construct_hpr(cfg: DictConfig) -> int:
    p = cfg.p
    r = cfg.r if cfg.r is not None else least_primitive_root(p)
    table = build_hpr(p, r).tolist()
    _emit_grid(cfg, table, HprFile(p=p, r=r, table=table))
    return EXIT_OK


def construct_lpr(cfg: DictConfig) -> int:
    p = cfg.p
    r = cfg.r if cfg.r is not None else least_primitive_root(p)
    loop = build_lpr(p, r)
    _emit_grid(cfg, loop.table(), _loop_file(loop, f"L_{p},{r}"))
    return EXIT_OK


def construct_general(cfg: DictConfig) -> int:
    p, k = cfg.p, cfg.k
    r = cfg.r if cfg.r is not None else least_primitive_root(p)
    square = load_idempotent(cfg.idempotent) if cfg.idempotent else idempotent_square(k)
    loop = build_general(p, r, k, square)
    _emit_grid(cfg, loop.table(), _loop_file(loop, f"L^[{k * p}],I_{p},{r}"))
    return EXIT_OK


def construct_theorem(cfg: DictConfig) -> int:
    array = _array(cfg)
    result = theorem_construct(
        array,
        _design(cfg, array),
        budget=cfg.budget,
        workers=cfg.threads,
        poly_cap=cfg.theorem_poly_cap,
    )
    completion = None
    if result.completion is not None:
        completion = CompletionReport(
            status=result.completion.status,
            nodes=result.completion.nodes,
            loop=_loop_file(result.completion.loop) if result.completion.loop else None,
        )
    report = TheoremReport(
        blocks=result.blocks,
        polys=result.polys.texts(),
        p_heffter=result.heffter.holds,
        loop=_loop_file(result.loop),
        completion=completion,
    )
    _emit(cfg, model_json(report))
    return _exit(result.heffter.holds)


def check_affine(cfg: DictConfig) -> int:
    array = _array(cfg)
    report = validate_affine(array, _design(cfg, array))
    _emit_report(cfg, report)
    return _exit(report.in_aff)


def check_loop(cfg: DictConfig) -> int:
    table = load_model(_require(cfg, "loop"), LoopFile).table
    report = validate_partial_loop(table)
    _emit_report(cfg, report)
    return _exit(report.valid)


def check_heffter(cfg: DictConfig) -> int:
    array = _array(cfg)
    design = _design(cfg, array)
    loop = load_loop(_require(cfg, "loop"))
    if cfg.polys is not None and not cfg.all_polys:
        report = is_p_heffter(array, design, load_polys(cfg.polys), loop)
    else:
        report = is_d_heffter(array, design, loop, cfg.poly_cap)
    _emit_report(cfg, report)
    return _exit(report.holds)


def check_classify(cfg: DictConfig) -> int:
    array = _array(cfg)
    report = classify(array, _design(cfg, array), load_loop(_require(cfg, "loop")), cfg.poly_cap)
    _emit_report(cfg, report)
    return _exit(report.d_heffter)


def check_classical(cfg: DictConfig) -> int:
    report = verify_classical(load_classical(_require(cfg, "array")), cfg.h, cfg.k)
    _emit_report(cfg, report)
    return _exit(report.valid)


def check_compatible(cfg: DictConfig) -> int:
    report = is_compatible(load_loop(_require(cfg, "loop")), load_polys(_require(cfg, "polys")))
    _emit_report(cfg, report)
    return _exit(report.compatible)


def check_dsps(cfg: DictConfig) -> int:
    array = _array(cfg)
    report = validate_dsps(array, _design(cfg, array), load_polys(_require(cfg, "polys")))
    _emit_report(cfg, report)
    return _exit(report.valid)


def derive_forced_block(cfg: DictConfig) -> int:
    _emit(cfg, model_json(derive_forced(_symbols(cfg)).report()))
    return EXIT_OK


def derive_ld(cfg: DictConfig) -> int:
    array = _array(cfg)
    loop = forced_ld(array, _design(cfg, array))
    _emit_grid(cfg, loop.table(), _loop_file(loop, "L_D from forced block fragments"))
    return EXIT_OK


def enumerate_sumpoly(cfg: DictConfig) -> int:
    texts = [str(f) for f in enumerate_all(_symbols(cfg), cfg.poly_cap)]
    if cfg.format == "json":
        _emit(cfg, json.dumps(texts, indent=2))
    else:
        _emit(cfg, render_lines(texts))
    return EXIT_OK


def evaluate_sumpoly(cfg: DictConfig) -> int:
    poly = parse_polynomial(str(cfg.polynomial))
    value = evaluate(poly, load_loop(cfg.loop))
    result = Evaluation(
        polynomial=str(poly), value=None if isinstance(value, Undefined) else value
    )
    if cfg.format == "json":
        _emit(cfg, model_json(result))
    else:
        _emit(cfg, str(value))
    return EXIT_OK


def complete_loop(cfg: DictConfig) -> int:
    loop = load_loop(cfg.loop)
    result = complete(loop, cfg.budget, cfg.threads)
    report = CompletionReport(
        status=result.status,
        nodes=result.nodes,
        loop=_loop_file(result.loop) if result.loop is not None else None,
    )
    if result.loop is not None and cfg.format in ("text-table", "csv"):
        _emit_grid(cfg, result.loop.table(), report)
    else:
        _emit(cfg, model_json(report))
    match result.status:
        case CompletionStatus.COMPLETED:
            return EXIT_OK
        case CompletionStatus.BUDGET_EXHAUSTED:
            return EXIT_BUDGET
    return EXIT_FALSE


def search_classical_array(cfg: DictConfig) -> int:
    grid = search_classical(cfg.m, cfg.n, cfg.budget)
    if grid is None:
        logger.warning(f"No totally filled Heffter array of shape {cfg.m}x{cfg.n} exists")
        return EXIT_FALSE
    _emit_grid(cfg, grid, ClassicalArrayFile(cells=grid, source=f"search classical {cfg.m}x{cfg.n}"))
    return EXIT_OK


def fixtures(cfg: DictConfig, name: str) -> int:
    if name == "list":
        write_output(render_lines(fixture_names()))
        return EXIT_OK
    files = fixture_files(name)
    if cfg.output is None:
        write_output(json.dumps(files, indent=2))
        return EXIT_OK
    directory = Path(cfg.output)
    directory.mkdir(parents=True, exist_ok=True)
    for file_name, content in files.items():
        save_json(content, directory / file_name)
    logger.info(f"Wrote {len(files)} files of {name} to {directory}")
    return EXIT_OK


COMMANDS: dict[str, dict[str, Command]] = {
    "construct": {
        "hpr": construct_hpr,
        "lpr": construct_lpr,
        "general": construct_general,
        "theorem": construct_theorem,
    },
    "check": {
        "affine": check_affine,
        "loop": check_loop,
        "heffter": check_heffter,
        "classify": check_classify,
        "classical": check_classical,
        "compatible": check_compatible,
        "dsps": check_dsps,
    },
    "derive": {"forced": derive_forced_block, "ld": derive_ld},
    "enumerate": {"sumpoly": enumerate_sumpoly},
    "evaluate": {"sumpoly": evaluate_sumpoly},
    "complete": {"loop": complete_loop},
    "search": {"classical": search_classical_array},
}


_PLAIN_VALUE = re.compile(r"^(\[.*\]|[\w./:+-]*)$")
_OVERRIDE = re.compile(r"^[\w.]+=")


def _option_value(value: str) -> str:
    """Quote values hydra's override grammar would split or reject."""
    if _PLAIN_VALUE.match(value):
        return value
    if "'" not in value:
        return f"'{value}'"
    if '"' not in value:
        return f'"{value}"'
    raise InputError(f"Option value {value!r} mixes both quote characters")


def _flag_overrides(args: Sequence[str]) -> list[str]:
    """``--key value`` and ``--key=value`` as ``key=value``; a bare flag is true."""
    overrides, rest = [], list(args)
    while rest:
        arg = rest.pop(0)
        if not arg.startswith("--"):
            overrides.append(arg)
            continue
        key, sep, value = arg[2:].partition("=")
        if not key:
            raise InputError(f"Malformed option {arg!r}")
        if not sep:
            if rest and not rest[0].startswith("--") and not _OVERRIDE.match(rest[0]):
                value = rest.pop(0)
            else:
                value = "true"
        overrides.append(f"{key.replace('-', '_')}={_option_value(value)}")
    return overrides


def _compose(group: str, overrides: Sequence[str]) -> DictConfig:
    with initialize_config_module(CONFIG_MODULE, version_base=None):
        return compose(config_name=group, overrides=list(overrides))


def usage() -> str:
    lines = ["usage: heffter <group> <action> [--key value ...]", ""]
    for group, actions in COMMANDS.items():
        lines.append(f"  {group} {'|'.join(actions)}")
    lines += ["  fixtures <name>|list", "", "defaults:"]
    for group in [*COMMANDS, "fixtures"]:
        lines.append(f"[{group}]")
        lines.append(OmegaConf.to_yaml(_compose(group, [])).rstrip())
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    if not args or args[0] in ("-h", "--help"):
        write_output(usage())
        return EXIT_OK if args else EXIT_INPUT_ERROR
    if len(args) < 2:
        logger.error(f"Missing action after {args[0]!r}")
        sys.stderr.write(usage() + "\n")
        return EXIT_INPUT_ERROR
    group, action, overrides = args[0], args[1], args[2:]
    if group != "fixtures" and action not in COMMANDS.get(group, {}):
        sys.stderr.write(f"Unknown command {group} {action}\n{usage()}\n")
        return EXIT_INPUT_ERROR
    try:
        cfg = _compose(group, _flag_overrides(overrides))
    except (HydraException, OmegaConfBaseException, InputError) as e:
        sys.stderr.write(f"Invalid options: {e}\n")
        return EXIT_INPUT_ERROR
    _setup_logging(cfg.log_level)
    try:
        if group == "fixtures":
            return fixtures(cfg, action)
        return COMMANDS[group][action](cfg)
    except BudgetExhaustedError as e:
        logger.error(str(e))
        return EXIT_BUDGET
    except (
        InputError,
        SearchTooLargeError,
        OmegaConfBaseException,
        ValidationError,
        OSError,
    ) as e:
        logger.error(str(e))
        return EXIT_INPUT_ERROR


def run():
    sys.exit(main())
