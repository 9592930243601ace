#
# For licensing see accompanying LICENSE file.
#
"""File formats and report types, all as pydantic models."""

from enum import StrEnum, auto

from pydantic import BaseModel, RootModel, field_validator, model_validator

from heffter_loops.aliases import PolynomialText
from heffter_loops.constants import ORDER_STRING

# undefined cells, empty array cells and undefined values all serialise as null
Cell = int | None


def _check_square(rows: list[list], size: int, what: str):
    if len(rows) != size or any(len(row) != size for row in rows):
        raise ValueError(f"{what} must be a {size}x{size} matrix")


class ArrayFile(BaseModel):
    m: int
    cells: list[list[Cell]]
    source: str | None = None

    @model_validator(mode="after")
    def check_shape(self) -> "ArrayFile":
        _check_square(self.cells, self.m, "cells")
        return self


class DesignFile(BaseModel):
    classes: list[list[list[tuple[int, int]]]] | None = None
    names: list[str] | None = None
    source: str | None = None

    @model_validator(mode="after")
    def check_content(self) -> "DesignFile":
        if self.classes is None and self.names is None:
            raise ValueError("A design needs explicit classes or partition names")
        if (
            self.classes is not None
            and self.names is not None
            and len(self.names) != len(self.classes)
        ):
            raise ValueError("names must label every class")
        return self


class LoopFile(BaseModel):
    n: int
    order: str = ORDER_STRING
    table: list[list[Cell]]
    source: str | None = None

    @field_validator("order")
    @classmethod
    def check_order(cls, value: str) -> str:
        if value != ORDER_STRING:
            raise ValueError(f"Only the canonical order {ORDER_STRING!r} is supported")
        return value

    @model_validator(mode="after")
    def check_shape(self) -> "LoopFile":
        _check_square(self.table, 2 * self.n + 1, "table")
        return self


class PolynomialSetFile(RootModel[list[PolynomialText]]):
    pass


class IdempotentFile(BaseModel):
    k: int
    table: list[list[int]]
    source: str | None = None

    @model_validator(mode="after")
    def check_shape(self) -> "IdempotentFile":
        _check_square(self.table, self.k, "table")
        return self


class HprFile(BaseModel):
    p: int
    r: int
    table: list[list[int]]
    source: str | None = None

    @model_validator(mode="after")
    def check_shape(self) -> "HprFile":
        _check_square(self.table, self.p, "table")
        return self


class ClassicalArrayFile(BaseModel):
    """A rectangular grid of signed residues, null for empty cells."""

    cells: list[list[Cell]]
    source: str | None = None

    @field_validator("cells")
    @classmethod
    def check_rectangular(cls, cells: list[list[Cell]]) -> list[list[Cell]]:
        if not cells or len({len(row) for row in cells}) != 1:
            raise ValueError("cells must be a non-empty rectangular matrix")
        return cells


class BlockRef(BaseModel):
    class_index: int
    class_name: str
    block_index: int
    symbols: list[int]

    def label(self) -> str:
        return f"{self.class_name}[{self.block_index}]"


class BlockPairViolation(BaseModel):
    first: BlockRef
    second: BlockRef
    intersection: int


class BlockWeightViolation(BaseModel):
    block: BlockRef
    weight: int


class AffineReport(BaseModel):
    is_affine_1_design: bool
    in_aff: bool
    mu: int | None
    lam: int
    partition_violations: list[str] = []
    intersection_violations: list[BlockPairViolation] = []
    weight_violations: list[BlockWeightViolation] = []


class LoopViolationKind(StrEnum):
    LATIN_ROW = auto()
    LATIN_COLUMN = auto()
    IDENTITY = auto()
    INVERSE = auto()
    RANGE = auto()


class LoopViolation(BaseModel):
    kind: LoopViolationKind
    row: int
    col: int
    detail: str


class LoopReport(BaseModel):
    valid: bool
    violations: list[LoopViolation] = []
    is_total: bool = False
    is_associative: bool = False
    associativity_counterexample: tuple[int, int, int] | None = None
    is_commutative: bool = False
    commutativity_counterexample: tuple[int, int] | None = None
    weight: int = 0


class Evaluation(BaseModel):
    polynomial: PolynomialText
    value: Cell


class SupportConflict(BaseModel):
    support: list[int]
    evaluations: list[Evaluation]


class CompatibilityReport(BaseModel):
    compatible: bool
    evaluations: list[Evaluation]
    undefined: list[PolynomialText] = []
    conflicts: list[SupportConflict] = []


class CompletionStatus(StrEnum):
    COMPLETED = auto()
    INFEASIBLE = auto()
    BUDGET_EXHAUSTED = auto()


class CompletionReport(BaseModel):
    status: CompletionStatus
    nodes: int
    loop: LoopFile | None = None


class DspsReport(BaseModel):
    valid: bool
    unmatched_polynomials: list[PolynomialText] = []
    uncovered_blocks: list[BlockRef] = []


class HeffterReport(BaseModel):
    holds: bool
    evaluated: int
    failures: list[Evaluation] = []


class Classification(BaseModel):
    d_heffter: bool
    heffter_linear_space: bool
    heffter_array: bool
    uncovered_pairs: list[tuple[int, int]] = []
    repeated_pairs: list[tuple[int, int]] = []
    failures: list[Evaluation] = []


class ClassicalCondition(StrEnum):
    SHAPE = auto()
    FILLED_COUNT = auto()
    ENTRY_RANGE = auto()
    HALF_SET = auto()
    ROW_SUM = auto()
    COLUMN_SUM = auto()


class ClassicalViolation(BaseModel):
    condition: ClassicalCondition
    detail: str


class ClassicalReport(BaseModel):
    valid: bool
    modulus: int
    violations: list[ClassicalViolation] = []

    def conditions(self) -> set[ClassicalCondition]:
        return {v.condition for v in self.violations}


class ForcedCell(BaseModel):
    """A forced sum; undetermined symbols of a four-symbol block appear by name."""

    x: int | str
    y: int | str
    value: int | str


class ForcedBlockReport(BaseModel):
    symbols: list[int]
    forced: list[ForcedCell]
    unknowns: list[str] = []
    pairings: list[tuple[str, str]] = []


class BlockParameters(BaseModel):
    block: BlockRef
    k: int
    p: int
    r: int


class TheoremReport(BaseModel):
    blocks: list[BlockParameters]
    polys: list[PolynomialText]
    p_heffter: bool
    loop: LoopFile
    completion: CompletionReport | None = None
