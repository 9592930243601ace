#
# For licensing see accompanying LICENSE file.
#
"""Partial loops over S~ stored as Cayley tables.

Tables are numpy arrays indexed by canonical position (the position of ``e`` is
``e mod 2n+1``); each cell holds the position of the sum, or -1 when undefined.
"""

import itertools
import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from heffter_loops.constants import DEFAULT_AUT_CAP, DEFAULT_BUDGET
from heffter_loops.exceptions import InputError, SearchTooLargeError
from heffter_loops.schema import (
    CompletionStatus,
    LoopReport,
    LoopViolation,
    LoopViolationKind,
)
from heffter_loops.symbols import (
    UNDEFINED,
    Element,
    SignedPermutation,
    Undefined,
    canonical_order,
    element_at,
)

logger = logging.getLogger(__name__)

EMPTY = -1

# (x, y, x + y) over signed elements
LoopEntry = tuple[int, int, int]


class PartialLoop:
    """An immutable Cayley table over the signed closure of [n]."""

    __slots__ = ("_n", "_cells")

    def __init__(self, n: int, cells: np.ndarray):
        size = 2 * n + 1
        if n < 1 or cells.shape != (size, size):
            raise InputError(f"Expected a {size}x{size} table for n={n}")
        if cells.min() < EMPTY or cells.max() >= size:
            raise InputError("Table cells must be positions in the canonical order")
        self._n = n
        self._cells = cells.astype(np.int64, copy=True)
        self._cells.setflags(write=False)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int | None]]) -> "PartialLoop":
        """Build from rows of signed values (``None`` for undefined) in canonical order.

        Raises `InputError` when the table violates the partial loop axioms.
        """
        violations = loop_violations(table)
        if violations:
            details = "; ".join(v.detail for v in violations[:5])
            raise InputError(f"Not a partial loop: {details}")
        return cls._from_values(table)

    @classmethod
    def _from_values(cls, table: Sequence[Sequence[int | None]]) -> "PartialLoop":
        size = len(table)
        n = (size - 1) // 2
        cells = np.full((size, size), EMPTY, dtype=np.int64)
        for r, row in enumerate(table):
            for c, value in enumerate(row):
                if value is not None:
                    cells[r, c] = value % size
        return cls(n, cells)

    @classmethod
    def trivial(cls, n: int) -> "PartialLoop":
        """Identity row and column plus the inverse cells; nothing else."""
        return cls.from_entries(n, [])

    @classmethod
    def from_entries(cls, n: int, entries: Iterable[LoopEntry]) -> "PartialLoop":
        """The smallest table holding the loop axioms and the given entries."""
        size = 2 * n + 1
        cells = np.full((size, size), EMPTY, dtype=np.int64)
        positions = np.arange(size)
        cells[0, :] = positions
        cells[:, 0] = positions
        cells[positions, (-positions) % size] = 0
        for x, y, value in entries:
            for e in (x, y, value):
                if abs(e) > n:
                    raise InputError(f"Element {e} is outside the signed closure of [{n}]")
            current = cells[x % size, y % size]
            if current not in (EMPTY, value % size):
                raise InputError(
                    f"Conflicting values for {x}+{y}: "
                    f"{element_at(int(current), n)} and {value}"
                )
            cells[x % size, y % size] = value % size
        violations = loop_violations(cls(n, cells))
        if violations:
            raise InputError(f"Not a partial loop: {violations[0].detail}")
        return cls(n, cells)

    @classmethod
    def from_operation(cls, n: int, operation: Callable[[int, int], int]) -> "PartialLoop":
        """A total table with x + y := operation(x, y) for non-zero x, y."""
        order = canonical_order(n)
        entries = [(x, y, operation(x, y)) for x in order[1:] for y in order[1:]]
        return cls.from_entries(n, entries)

    @property
    def n(self) -> int:
        return self._n

    @property
    def size(self) -> int:
        return 2 * self._n + 1

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    def _value(self, position: int) -> Element:
        return UNDEFINED if position == EMPTY else element_at(position, self._n)

    def add(self, x: Element, y: Element) -> Element:
        if isinstance(x, Undefined) or isinstance(y, Undefined):
            return UNDEFINED
        if abs(x) > self._n or abs(y) > self._n:
            raise InputError(f"{x}+{y} is outside the signed closure of [{self._n}]")
        return self._value(int(self._cells[x % self.size, y % self.size]))

    def table(self) -> list[list[int | None]]:
        """Signed values in canonical order, ``None`` for undefined cells."""
        n = self._n
        return [
            [None if p == EMPTY else element_at(int(p), n) for p in row]
            for row in self._cells
        ]

    def entries(self) -> set[LoopEntry]:
        n = self._n
        rows, cols = np.nonzero(self._cells != EMPTY)
        return {
            (element_at(int(r), n), element_at(int(c), n), element_at(int(self._cells[r, c]), n))
            for r, c in zip(rows, cols)
        }

    def nontrivial_entries(self) -> set[LoopEntry]:
        return {(x, y, v) for x, y, v in self.entries() if x != 0 and y != 0 and x != -y}

    @property
    def weight(self) -> int:
        return len(self.nontrivial_entries())

    @property
    def is_total(self) -> bool:
        return bool((self._cells != EMPTY).all())

    def contains(self, other: "PartialLoop") -> bool:
        return contains(self, other)

    def with_entries(self, new_entries: Iterable[LoopEntry]) -> "PartialLoop":
        return PartialLoop.from_entries(self._n, [*self.entries(), *new_entries])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialLoop):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._cells, other._cells)

    def __hash__(self) -> int:
        return hash((self._n, self._cells.tobytes()))

    def __repr__(self) -> str:
        return f"PartialLoop(n={self._n}, weight={self.weight}, total={self.is_total})"

    def __reduce__(self):
        return (PartialLoop, (self._n, np.array(self._cells)))


def add(loop: PartialLoop, x: Element, y: Element) -> Element:
    return loop.add(x, y)


def contains(loop: PartialLoop, other: PartialLoop) -> bool:
    """True iff Ent(other) ⊆ Ent(loop)."""
    if loop.n != other.n:
        return False
    defined = other.cells != EMPTY
    return bool(np.array_equal(loop.cells[defined], other.cells[defined]))


def _positions(
    table: Sequence[Sequence[int | None]] | PartialLoop,
) -> tuple[int, np.ndarray, list[LoopViolation]]:
    if isinstance(table, PartialLoop):
        return table.n, np.array(table.cells), []
    size = len(table)
    if size % 2 == 0 or any(len(row) != size for row in table):
        raise InputError("A loop table must be a square of odd order 2n+1")
    n = (size - 1) // 2
    cells = np.full((size, size), EMPTY, dtype=np.int64)
    violations = []
    for r, row in enumerate(table):
        for c, value in enumerate(row):
            if value is None:
                continue
            if abs(value) > n:
                violations.append(
                    LoopViolation(
                        kind=LoopViolationKind.RANGE,
                        row=element_at(r, n),
                        col=element_at(c, n),
                        detail=f"value {value} outside the signed closure of [{n}]",
                    )
                )
                continue
            cells[r, c] = value % size
    return n, cells, violations


def _latin_violations(n: int, cells: np.ndarray) -> list[LoopViolation]:
    violations = []
    for axis, kind in ((0, LoopViolationKind.LATIN_ROW), (1, LoopViolationKind.LATIN_COLUMN)):
        lines = cells if axis == 0 else cells.T
        for index, line in enumerate(lines):
            seen: dict[int, int] = {}
            for other, value in enumerate(line):
                if value == EMPTY:
                    continue
                if value in seen:
                    row, col = (index, other) if axis == 0 else (other, index)
                    violations.append(
                        LoopViolation(
                            kind=kind,
                            row=element_at(row, n),
                            col=element_at(col, n),
                            detail=(
                                f"{element_at(int(value), n)} repeated in "
                                f"{'row' if axis == 0 else 'column'} {element_at(index, n)}"
                            ),
                        )
                    )
                seen[int(value)] = other
    return violations


def _axiom_violations(n: int, cells: np.ndarray) -> list[LoopViolation]:
    violations = []
    size = 2 * n + 1
    for p in range(size):
        e = element_at(p, n)
        for row, col in ((0, p), (p, 0)):
            if cells[row, col] != p:
                violations.append(
                    LoopViolation(
                        kind=LoopViolationKind.IDENTITY,
                        row=element_at(row, n),
                        col=element_at(col, n),
                        detail=f"0 is not an identity for {e}",
                    )
                )
        if p and cells[p, (-p) % size] != 0:
            violations.append(
                LoopViolation(
                    kind=LoopViolationKind.INVERSE,
                    row=e,
                    col=-e,
                    detail=f"{e}+({-e}) is not 0",
                )
            )
    return violations


def _padded(cells: np.ndarray) -> np.ndarray:
    """Copy with an extra absorbing index standing for undefined."""
    size = cells.shape[0]
    padded = np.full((size + 1, size + 1), size, dtype=np.int64)
    padded[:size, :size] = np.where(cells == EMPTY, size, cells)
    return padded


def associativity_counterexamples(
    loop: PartialLoop, limit: int | None = 1
) -> list[tuple[int, int, int]]:
    """Triples with (x+y)+z and x+(y+z) both defined and different, canonical order."""
    size, n = loop.size, loop.n
    table = _padded(loop.cells)
    inner = table[:size, :size]
    found = []
    for x in range(size):
        left = table[inner[x]][:, :size]
        right = table[x][inner]
        bad = (left != size) & (right != size) & (left != right)
        for y, z in zip(*np.nonzero(bad)):
            found.append((element_at(x, n), element_at(int(y), n), element_at(int(z), n)))
            if limit is not None and len(found) >= limit:
                return found
    return found


def _commutativity_counterexample(loop: PartialLoop) -> tuple[int, int] | None:
    cells = loop.cells
    bad = (cells != EMPTY) & (cells.T != EMPTY) & (cells != cells.T)
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return None
    x, y = hits[0]
    return element_at(int(x), loop.n), element_at(int(y), loop.n)


def loop_violations(
    table: Sequence[Sequence[int | None]] | PartialLoop,
) -> list[LoopViolation]:
    """Range, Latin, identity and inverse violations, with coordinates."""
    n, cells, violations = _positions(table)
    return violations + _latin_violations(n, cells) + _axiom_violations(n, cells)


def validate_partial_loop(table: Sequence[Sequence[int | None]] | PartialLoop) -> LoopReport:
    """Check the Latin, identity and inverse axioms and classify the table."""
    violations = loop_violations(table)
    if violations:
        return LoopReport(valid=False, violations=violations)
    loop = table if isinstance(table, PartialLoop) else PartialLoop._from_values(table)
    associativity = associativity_counterexamples(loop)
    commutativity = _commutativity_counterexample(loop)
    return LoopReport(
        valid=True,
        is_total=loop.is_total,
        is_associative=not associativity,
        associativity_counterexample=associativity[0] if associativity else None,
        is_commutative=commutativity is None,
        commutativity_counterexample=commutativity,
        weight=loop.weight,
    )


def _position_map(pi: SignedPermutation) -> np.ndarray:
    n = pi.n
    size = 2 * n + 1
    return np.array([pi(element_at(p, n)) % size for p in range(size)], dtype=np.int64)


def relabel(loop: PartialLoop, pi: SignedPermutation) -> PartialLoop:
    """The isomorphic copy with entries (π(x), π(y), π(x+y))."""
    if pi.n != loop.n:
        raise InputError(f"Permutation of degree {pi.n} cannot relabel a loop over [{loop.n}]")
    perm = _position_map(pi)
    cells = np.full_like(loop.cells, EMPTY)
    images = np.where(loop.cells == EMPTY, EMPTY, perm[loop.cells])
    cells[perm[:, None], perm[None, :]] = images
    return PartialLoop(loop.n, cells)


def cyclic_group(n: int) -> PartialLoop:
    """Z_{2n+1} written with signed representatives -n..n."""
    modulus = 2 * n + 1

    def signed(value: int) -> int:
        value %= modulus
        return value if value <= n else value - modulus

    return PartialLoop.from_operation(n, lambda x, y: signed(x + y))


def is_partial_abelian_on(
    loop: PartialLoop, symbols: Iterable[int]
) -> tuple[bool, list[tuple[int, ...]]]:
    """Commutativity and associativity among distinct `symbols` wherever the cells are defined."""
    symbols = list(symbols)
    failures: list[tuple[int, ...]] = []
    for x, y in itertools.permutations(symbols, 2):
        xy, yx = loop.add(x, y), loop.add(y, x)
        if not isinstance(xy, Undefined) and not isinstance(yx, Undefined) and xy != yx:
            failures.append((x, y))
    for x, y, z in itertools.permutations(symbols, 3):
        left = loop.add(loop.add(x, y), z)
        right = loop.add(x, loop.add(y, z))
        if not isinstance(left, Undefined) and not isinstance(right, Undefined) and left != right:
            failures.append((x, y, z))
    return not failures, failures


class _AutomorphismSearch:
    """Depth-first search over sign-respecting maps with image propagation."""

    def __init__(self, loop: PartialLoop, positive_only: bool, limit: int | None):
        self.loop = loop
        self.positive_only = positive_only
        self.limit = limit
        self.found: list[SignedPermutation] = []

    def _consistent(self, fwd: dict[int, int], bwd: dict[int, int], queue: list[int]) -> bool:
        loop = self.loop
        while queue:
            a = queue.pop()
            for b in list(fwd):
                for x, y in ((a, b), (b, a)):
                    value = loop.add(x, y)
                    image = loop.add(fwd[x], fwd[y])
                    if isinstance(value, Undefined) or isinstance(image, Undefined):
                        if isinstance(value, Undefined) != isinstance(image, Undefined):
                            return False
                        continue
                    if value in fwd:
                        if fwd[value] != image:
                            return False
                    elif image in bwd:
                        return False
                    else:
                        self._assign(fwd, bwd, queue, value, image)
        return True

    @staticmethod
    def _assign(fwd: dict[int, int], bwd: dict[int, int], queue: list[int], x: int, y: int):
        fwd[x], fwd[-x] = y, -y
        bwd[y], bwd[-y] = x, -x
        queue.extend((x, -x))

    def run(self, fwd: dict[int, int], bwd: dict[int, int]):
        if self.limit is not None and len(self.found) >= self.limit:
            return
        n = self.loop.n
        free = next((i for i in range(1, n + 1) if i not in fwd), None)
        if free is None:
            if self.positive_only and any(fwd[i] < 0 for i in range(1, n + 1)):
                return
            self.found.append(SignedPermutation(tuple(fwd[i] for i in range(1, n + 1))))
            return
        candidates = [j for j in canonical_order(n)[1:] if j not in bwd]
        if self.positive_only:
            candidates = [j for j in candidates if j > 0]
        for image in candidates:
            fwd_next, bwd_next, queue = dict(fwd), dict(bwd), []
            self._assign(fwd_next, bwd_next, queue, free, image)
            if self._consistent(fwd_next, bwd_next, queue):
                self.run(fwd_next, bwd_next)


def automorphisms(
    loop: PartialLoop,
    cap: int = DEFAULT_AUT_CAP,
    positive_only: bool = False,
    limit: int | None = None,
) -> list[SignedPermutation]:
    """All sign-respecting π with relabel(loop, π) == loop.

    Images are propagated through the table, so loops generated by few elements
    are searched quickly; sparse tables approach the full n!·2^n family.
    """
    if loop.n > cap:
        raise SearchTooLargeError("loop automorphisms", loop.n, cap)
    search = _AutomorphismSearch(loop, positive_only, limit)
    search.run({0: 0}, {0: 0})
    logger.debug(f"Found {len(search.found)} automorphisms of {loop}")
    return search.found


@dataclass(frozen=True)
class CompletionResult:
    status: CompletionStatus
    loop: PartialLoop | None
    nodes: int

    @property
    def completed(self) -> bool:
        return self.status == CompletionStatus.COMPLETED


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _CompletionSearch:
    """Row-major backtracking with forward checking on bitmask availability.

    `row_open[r]` holds the empty columns of row r, `value_rows[v]` the rows
    already holding v; columns mirror both.
    """

    def __init__(self, cells: np.ndarray):
        self.size = cells.shape[0]
        self.full = (1 << self.size) - 1
        self.grid = [[int(v) for v in row] for row in cells]
        self.row_used = [0] * self.size
        self.col_used = [0] * self.size
        self.row_open = [0] * self.size
        self.col_open = [0] * self.size
        self.value_rows = [0] * self.size
        self.value_cols = [0] * self.size
        for r in range(self.size):
            for c in range(self.size):
                value = self.grid[r][c]
                if value == EMPTY:
                    self.row_open[r] |= 1 << c
                    self.col_open[c] |= 1 << r
                else:
                    self._mark(r, c, value)
        self.empties = [
            (r, c) for r in range(self.size) for c in range(self.size) if self.grid[r][c] == EMPTY
        ]

    def _mark(self, r: int, c: int, value: int):
        self.row_used[r] |= 1 << value
        self.col_used[c] |= 1 << value
        self.value_rows[value] |= 1 << r
        self.value_cols[value] |= 1 << c

    def candidates(self, r: int, c: int) -> int:
        return self.full & ~(self.row_used[r] | self.col_used[c])

    def place(self, r: int, c: int, value: int):
        self.grid[r][c] = value
        self._mark(r, c, value)
        self.row_open[r] &= ~(1 << c)
        self.col_open[c] &= ~(1 << r)

    def remove(self, r: int, c: int):
        value = self.grid[r][c]
        self.grid[r][c] = EMPTY
        self.row_used[r] &= ~(1 << value)
        self.col_used[c] &= ~(1 << value)
        self.value_rows[value] &= ~(1 << r)
        self.value_cols[value] &= ~(1 << c)
        self.row_open[r] |= 1 << c
        self.col_open[c] |= 1 << r

    def _row_ok(self, r: int) -> bool:
        reachable = 0
        for c in _bits(self.row_open[r]):
            mask = self.candidates(r, c)
            if not mask:
                return False
            reachable |= mask
        missing = self.full & ~self.row_used[r]
        return (missing & ~reachable) == 0

    def _col_ok(self, c: int) -> bool:
        reachable = 0
        for r in _bits(self.col_open[c]):
            mask = self.candidates(r, c)
            if not mask:
                return False
            reachable |= mask
        missing = self.full & ~self.col_used[c]
        return (missing & ~reachable) == 0

    def _value_ok(self, r: int, c: int, value: int) -> bool:
        """`value` keeps a free cell in every line crossing row r or column c."""
        bit = 1 << value
        for col in _bits(self.row_open[r]):
            if not self.col_used[col] & bit and not self.col_open[col] & ~self.value_rows[value]:
                return False
        for row in _bits(self.col_open[c]):
            if not self.row_used[row] & bit and not self.row_open[row] & ~self.value_cols[value]:
                return False
        return True

    def consistent(self) -> bool:
        return all(self._row_ok(i) and self._col_ok(i) for i in range(self.size))

    def run(self, budget: int) -> tuple[CompletionStatus, int]:
        if not self.consistent():
            return CompletionStatus.INFEASIBLE, 0
        depth, nodes = 0, 0
        total = len(self.empties)
        if total == 0:
            return CompletionStatus.COMPLETED, 0
        masks = [0] * total
        masks[0] = self.candidates(*self.empties[0])
        while True:
            if depth == total:
                return CompletionStatus.COMPLETED, nodes
            if depth < 0:
                return CompletionStatus.INFEASIBLE, nodes
            r, c = self.empties[depth]
            if self.grid[r][c] != EMPTY:
                self.remove(r, c)
            mask = masks[depth]
            if not mask:
                depth -= 1
                continue
            low = mask & -mask
            masks[depth] = mask ^ low
            value = low.bit_length() - 1
            self.place(r, c, value)
            nodes += 1
            if nodes > budget:
                return CompletionStatus.BUDGET_EXHAUSTED, nodes
            if not (self._row_ok(r) and self._col_ok(c) and self._value_ok(r, c, value)):
                continue
            depth += 1
            if depth < total:
                masks[depth] = self.candidates(*self.empties[depth])


def _complete_serial(
    cells: np.ndarray, budget: int
) -> tuple[CompletionStatus, np.ndarray | None, int]:
    search = _CompletionSearch(cells)
    status, nodes = search.run(budget)
    if status != CompletionStatus.COMPLETED:
        return status, None, nodes
    return status, np.array(search.grid, dtype=np.int64), nodes


def complete(
    loop: PartialLoop, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> CompletionResult:
    """Extend `loop` to a total loop by deterministic backtracking.

    Cells are filled row-major in canonical order with candidates in canonical
    element order. With ``workers > 1`` the candidates of the first empty cell are
    searched in separate processes, each with the full budget, and the completion
    of the lowest-ranked successful branch is returned.
    """
    if loop_violations(loop):
        raise InputError("Only valid partial loops can be completed")
    if loop.is_total:
        return CompletionResult(CompletionStatus.COMPLETED, loop, 0)
    if workers <= 1:
        status, cells, nodes = _complete_serial(loop.cells, budget)
    else:
        status, cells, nodes = _complete_parallel(loop, budget, workers)
    logger.info(f"Completion of {loop} finished as {status} after {nodes} nodes")
    completed = PartialLoop(loop.n, cells) if cells is not None else None
    return CompletionResult(status, completed, nodes)


def _complete_parallel(
    loop: PartialLoop, budget: int, workers: int
) -> tuple[CompletionStatus, np.ndarray | None, int]:
    search = _CompletionSearch(loop.cells)
    if not search.consistent():
        return CompletionStatus.INFEASIBLE, None, 0
    r, c = search.empties[0]
    mask = search.candidates(r, c)
    branches = []
    for value in range(search.size):
        if mask >> value & 1:
            cells = np.array(loop.cells)
            cells[r, c] = value
            branches.append(cells)
    nodes = 0
    statuses = []
    pool = ProcessPoolExecutor(max_workers=workers)
    try:
        futures = [pool.submit(_complete_serial, cells, budget) for cells in branches]
        for future in futures:
            status, cells, branch_nodes = future.result()
            nodes += branch_nodes + 1
            if status == CompletionStatus.COMPLETED:
                return status, cells, nodes
            statuses.append(status)
    finally:
        pool.shutdown(wait=False, cancel_futures=True)
    if CompletionStatus.BUDGET_EXHAUSTED in statuses:
        return CompletionStatus.BUDGET_EXHAUSTED, None, nodes
    return CompletionStatus.INFEASIBLE, None, nodes
