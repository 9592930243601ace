#
# For licensing see accompanying LICENSE file.
#
"""Partially filled square arrays, their canonical partitions and affine 1-designs."""

import itertools
import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum

from heffter_loops.aliases import ArrayEntry, Cell
from heffter_loops.constants import DEFAULT_ISO_CAP
from heffter_loops.exceptions import InputError, SearchTooLargeError
from heffter_loops.schema import (
    AffineReport,
    BlockPairViolation,
    BlockRef,
    BlockWeightViolation,
)

logger = logging.getLogger(__name__)


class PartitionKind(StrEnum):
    ROW = "row"
    COL = "col"
    DIAG = "diag"
    ADIAG = "adiag"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PartiallyFilledArray:
    """An m x m grid whose cells hold a positive symbol index or ``None``."""

    cells: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        m = len(self.cells)
        if m == 0 or any(len(row) != m for row in self.cells):
            raise InputError("A partially filled array must be a non-empty square grid")
        for row in self.cells:
            for value in row:
                if value is not None and value < 1:
                    raise InputError(f"Array symbols must be positive, got {value}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | None]]) -> "PartiallyFilledArray":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def m(self) -> int:
        return len(self.cells)

    def __getitem__(self, cell: Cell) -> int | None:
        i, j = cell
        return self.cells[i % self.m][j % self.m]

    def entries(self) -> list[ArrayEntry]:
        """Filled cells in row-major order."""
        return [
            (i, j, value)
            for i, row in enumerate(self.cells)
            for j, value in enumerate(row)
            if value is not None
        ]

    @property
    def weight(self) -> int:
        return len(self.entries())

    def symbols(self) -> set[int]:
        return {value for _, _, value in self.entries()}

    def rows(self) -> list[list[int | None]]:
        return [list(row) for row in self.cells]


@dataclass(frozen=True)
class CellBlock:
    cells: tuple[Cell, ...]

    def __post_init__(self):
        if len(set(self.cells)) != len(self.cells):
            raise InputError(f"Block cells must be pairwise distinct: {self.cells}")

    def weight(self, array: PartiallyFilledArray) -> int:
        return sum(array[cell] is not None for cell in self.cells)


@dataclass(frozen=True)
class ParallelClass:
    name: str
    blocks: tuple[CellBlock, ...]


@dataclass(frozen=True)
class AffineDesign:
    classes: tuple[ParallelClass, ...]

    @property
    def lam(self) -> int:
        return len(self.classes)

    def blocks(self) -> list[tuple[int, int, CellBlock]]:
        """(class index, block index, block) for every block."""
        return [
            (c, b, block)
            for c, parallel_class in enumerate(self.classes)
            for b, block in enumerate(parallel_class.blocks)
        ]

    def block_ref(self, array: PartiallyFilledArray, c: int, b: int) -> BlockRef:
        block = self.classes[c].blocks[b]
        return BlockRef(
            class_index=c,
            class_name=self.classes[c].name,
            block_index=b,
            symbols=sorted(symb(array, block)),
        )

    def positive_blocks(
        self, array: PartiallyFilledArray
    ) -> list[tuple[BlockRef, CellBlock]]:
        return [
            (self.block_ref(array, c, b), block)
            for c, b, block in self.blocks()
            if block.weight(array) > 0
        ]


def entries(array: PartiallyFilledArray) -> set[ArrayEntry]:
    return set(array.entries())


def symb(array: PartiallyFilledArray, block: CellBlock) -> set[int]:
    _check_cells(array.m, block.cells)
    return {array[cell] for cell in block.cells if array[cell] is not None}


def in_class(array: PartiallyFilledArray, n: int | None = None) -> bool:
    """Membership in A(m, [n]): every symbol of [n] appears exactly once."""
    values = [value for _, _, value in array.entries()]
    n = len(values) if n is None else n
    return sorted(values) == list(range(1, n + 1))


def contains(array: PartiallyFilledArray, other: PartiallyFilledArray) -> bool:
    """True iff Ent(other) ⊆ Ent(array)."""
    return array.m == other.m and entries(other) <= entries(array)


def _partition_cells(m: int, kind: PartitionKind, j: int) -> tuple[Cell, ...]:
    match kind:
        case PartitionKind.ROW:
            return tuple((j, i) for i in range(m))
        case PartitionKind.COL:
            return tuple((i, j) for i in range(m))
        case PartitionKind.DIAG:
            return tuple((i, (i + j) % m) for i in range(m))
        case PartitionKind.ADIAG:
            return tuple((i, (-i - j - 1) % m) for i in range(m))
    raise InputError(f"{kind} is not a canonical partition")


def partition(array: PartiallyFilledArray, kind: PartitionKind | str) -> ParallelClass:
    kind = PartitionKind(kind)
    blocks = tuple(
        CellBlock(_partition_cells(array.m, kind, j)) for j in range(array.m)
    )
    return ParallelClass(name=kind.value, blocks=blocks)


def design_from_kinds(
    array: PartiallyFilledArray, kinds: Iterable[PartitionKind | str]
) -> AffineDesign:
    return AffineDesign(tuple(partition(array, kind) for kind in kinds))


def _check_cells(m: int, cells: Iterable[Cell]):
    for i, j in cells:
        if not (0 <= i < m and 0 <= j < m):
            raise InputError(f"Cell {(i, j)} lies outside the {m}x{m} grid")


def _intersection_mode(sizes: Counter) -> int | None:
    if not sizes:
        return None
    most = max(sizes.values())
    return min(size for size, count in sizes.items() if count == most)


def validate_affine(array: PartiallyFilledArray, design: AffineDesign) -> AffineReport:
    """Check that `design` is an affine 1-design on the cells of `array`.

    Intersections are counted on cells, weights on filled cells. Membership in
    Aff_λ(A) additionally needs μ = 1 and every block weight in {0} ∪ [3, m].
    """
    m = array.m
    grid = set(itertools.product(range(m), repeat=2))
    partition_violations = []
    for parallel_class in design.classes:
        covered = Counter()
        for block in parallel_class.blocks:
            _check_cells(m, block.cells)
            covered.update(block.cells)
        missing = grid - set(covered)
        repeated = sorted(cell for cell, count in covered.items() if count > 1)
        if missing or repeated:
            partition_violations.append(
                f"class {parallel_class.name!r} misses cells {sorted(missing)} "
                f"and covers {repeated} more than once"
            )

    cell_sets = {(c, b): set(block.cells) for c, b, block in design.blocks()}
    pairs = []
    for (c1, b1), (c2, b2) in itertools.combinations(cell_sets, 2):
        if c1 != c2:
            pairs.append(((c1, b1), (c2, b2), len(cell_sets[c1, b1] & cell_sets[c2, b2])))
    mu = _intersection_mode(Counter(size for _, _, size in pairs))
    intersection_violations = [
        BlockPairViolation(
            first=design.block_ref(array, *first),
            second=design.block_ref(array, *second),
            intersection=size,
        )
        for first, second, size in pairs
        if size != mu
    ]

    weight_violations = []
    for c, b, block in design.blocks():
        weight = block.weight(array)
        if weight != 0 and not 3 <= weight <= m:
            weight_violations.append(
                BlockWeightViolation(block=design.block_ref(array, c, b), weight=weight)
            )

    is_affine = not partition_violations and not intersection_violations
    if intersection_violations:
        logger.debug(
            f"{len(intersection_violations)} block pairs do not meet in {mu} cells"
        )
    return AffineReport(
        is_affine_1_design=is_affine,
        in_aff=is_affine and mu in (1, None) and not weight_violations,
        mu=mu,
        lam=design.lam,
        partition_violations=partition_violations,
        intersection_violations=intersection_violations,
        weight_violations=weight_violations,
    )


def pair_cooccurrence(
    array: PartiallyFilledArray, design: AffineDesign
) -> Counter[tuple[int, int]]:
    """Number of positive-weight blocks containing each unordered symbol pair."""
    counts = Counter()
    for ref, _ in design.positive_blocks(array):
        counts.update(itertools.combinations(ref.symbols, 2))
    return counts


def array_isomorphic(
    first: PartiallyFilledArray,
    second: PartiallyFilledArray,
    cap: int = DEFAULT_ISO_CAP,
) -> tuple[int, ...] | None:
    """Find π in Sym(Z_m) with second[π(i), π(j)] = π(first[i, j]).

    Symbols are read as residues: symbol s in [m] stands for s - 1 in Z_m.
    """
    if first.m != second.m or first.weight != second.weight:
        return None
    m = first.m
    for array in (first, second):
        if any(value > m for value in array.symbols()):
            raise InputError(
                f"Isomorphism needs symbols identified with residues, i.e. within [{m}]"
            )
    if m > cap:
        raise SearchTooLargeError("array isomorphisms", m, cap)
    filled = first.entries()
    for pi in itertools.permutations(range(m)):
        if all(second[pi[i], pi[j]] == pi[value - 1] + 1 for i, j, value in filled):
            return pi
    return None
